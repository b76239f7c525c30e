"""Exact matrix permanents.

Three independent kernels are kept side by side so they can cross-check each
other: the permutation sum (oracle, tiny matrices only), Ryser's
inclusion-exclusion formula, and Glynn's polarization formula.  Both fast
kernels walk their sign/subset space in Gray-code order so each step touches a
single column or row.
"""

from __future__ import annotations

import itertools

import numpy as np

NAIVE_DIM_LIMIT = 10
SUBSET_DIM_LIMIT = 25

METHODS = ("naive", "ryser", "glynn")


class DimensionLimitError(ValueError):
    """Matrix is too large for the requested permanent kernel."""


def _checked(matrix, limit: int) -> np.ndarray:
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n < 1:
        raise ValueError("permanent of an empty matrix is undefined here")
    if not np.isfinite(a).all():
        raise ValueError("matrix entries must be finite")
    if n > limit:
        raise DimensionLimitError(
            f"dimension {n} exceeds the limit {limit} for this method"
        )
    return a


def permanent_naive(matrix) -> complex:
    """Permutation-sum permanent; exponential-factorial cost, dim <= 10."""
    a = _checked(matrix, NAIVE_DIM_LIMIT)
    n = a.shape[0]
    total = 0j
    for sigma in itertools.permutations(range(n)):
        prod = 1 + 0j
        for i, j in enumerate(sigma):
            prod *= a[i, j]
        total += prod
    return total


def permanent_ryser(matrix) -> complex:
    """Ryser's formula over column subsets, visited in Gray-code order.

    Each step flips one subset bit, so the running row-sum vector is updated
    with a single column add or subtract.
    """
    a = _checked(matrix, SUBSET_DIM_LIMIT)
    n = a.shape[0]
    rowsums = np.zeros(n, dtype=complex)
    total = 0j
    prev_gray = 0
    for step in range(1, 1 << n):
        gray = step ^ (step >> 1)
        changed = gray ^ prev_gray  # exactly one bit
        j = changed.bit_length() - 1
        if gray & changed:
            rowsums += a[:, j]
        else:
            rowsums -= a[:, j]
        prev_gray = gray
        # sign (-1)^(n - |S|)
        if (n - gray.bit_count()) & 1:
            total -= np.prod(rowsums)
        else:
            total += np.prod(rowsums)
    return complex(total)


def permanent_glynn(matrix) -> complex:
    """Glynn's polarization formula with Gray-coded +-1 vectors.

    The first sign is pinned to +1; flipping sign i updates the running
    column-sum vector by -+ 2 * row_i.
    """
    a = _checked(matrix, SUBSET_DIM_LIMIT)
    n = a.shape[0]
    if n == 1:
        return complex(a[0, 0])
    colsums = a.sum(axis=0).astype(complex)
    total = np.prod(colsums)
    sign = 1.0
    prev_gray = 0
    for step in range(1, 1 << (n - 1)):
        gray = step ^ (step >> 1)
        changed = gray ^ prev_gray
        i = changed.bit_length()  # rows 1..n-1; row 0 stays pinned
        if gray & changed:
            colsums -= 2.0 * a[i, :]
        else:
            colsums += 2.0 * a[i, :]
        prev_gray = gray
        sign = -sign
        total += sign * np.prod(colsums)
    return complex(total / 2.0 ** (n - 1))


_KERNELS = {
    "naive": permanent_naive,
    "ryser": permanent_ryser,
    "glynn": permanent_glynn,
}


def permanent_exact(matrix, method: str = "ryser") -> complex:
    """Exact permanent via the chosen kernel.

    method: one of "naive" (dim <= 10), "ryser" or "glynn" (dim <= 25).
    """
    try:
        kernel = _KERNELS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}") from None
    return kernel(matrix)
