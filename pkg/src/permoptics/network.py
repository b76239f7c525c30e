"""Beam-splitter chains and their composed interferometer unitaries.

Each stage couples one mode pair.  A lossless splitter imprints the phase
``phi`` on reflection from the first listed mode and ``pi - phi`` from the
other side, so the 2x2 block is

    [[r e^{i phi},  t          ],
     [t,            r e^{i (pi - phi)}]]

which is unitary for any t^2 + r^2 = 1.  By convention all reflection phases
default to pi; the permanent of U diag(mu) U^dag does not depend on them.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .matrices import Unitary

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class BeamSplitterStage:
    """One splitter: 1-based mode pair, amplitude t/r, reflection phase."""

    modes: tuple[int, int]
    transmissivity: float
    reflectivity: float
    phase: float = math.pi

    def __post_init__(self):
        i, j = self.modes
        if i == j or i < 1 or j < 1:
            raise ValueError(f"invalid mode pair {self.modes}")
        if not (0.0 <= self.transmissivity <= 1.0 and 0.0 <= self.reflectivity <= 1.0):
            raise ValueError("t and r must lie in [0, 1]")
        closure = abs(self.transmissivity**2 + self.reflectivity**2 - 1.0)
        if closure > _NORM_TOL:
            raise ValueError(f"t^2 + r^2 deviates from 1 by {closure:.3e}")

    @classmethod
    def from_transmissivity(cls, modes, t: float, phase: float = math.pi):
        r = math.sqrt(max(0.0, 1.0 - t * t))
        return cls(tuple(modes), t, r, phase)

    def block(self) -> np.ndarray:
        t, r, phi = self.transmissivity, self.reflectivity, self.phase
        return np.array(
            [
                [r * cmath.exp(1j * phi), t],
                [t, r * cmath.exp(1j * (math.pi - phi))],
            ],
            dtype=complex,
        )


def stage_embedding(stage: BeamSplitterStage, dim: int) -> np.ndarray:
    i, j = stage.modes
    if i > dim or j > dim:
        raise ValueError(f"mode pair {stage.modes} outside 1..{dim}")
    out = np.eye(dim, dtype=complex)
    block = stage.block()
    a, b = i - 1, j - 1
    out[a, a], out[a, b] = block[0, 0], block[0, 1]
    out[b, a], out[b, b] = block[1, 0], block[1, 1]
    return out


def network_to_unitary(chain: Sequence[BeamSplitterStage], dim: int) -> Unitary:
    """Compose the chain, applying stages in list order (first stage first)."""
    if dim < 2:
        raise ValueError("a beam-splitter network needs at least 2 modes")
    u = np.eye(dim, dtype=complex)
    for stage in chain:
        u = stage_embedding(stage, dim) @ u
    return Unitary.exact(u)


def balanced_two_mode(phase: float = math.pi) -> Unitary:
    """50:50 splitter on a 2-mode network."""
    stage = BeamSplitterStage.from_transmissivity((1, 2), 1.0 / math.sqrt(2.0), phase)
    return network_to_unitary([stage], 2)


def four_mode_cascade(
    transmissivities: Sequence[float],
    phases: Sequence[float] = (math.pi, math.pi, math.pi),
) -> list[BeamSplitterStage]:
    """The 4-mode three-splitter layout: (1,2) and (3,4) first, then (2,3).

    ``transmissivities`` and ``phases`` are given per splitter index 1..3,
    where splitter 2 is the central one coupling modes 2-3.
    """
    t1, t2, t3 = transmissivities
    p1, p2, p3 = phases
    return [
        BeamSplitterStage.from_transmissivity((1, 2), t1, p1),
        BeamSplitterStage.from_transmissivity((3, 4), t3, p3),
        BeamSplitterStage.from_transmissivity((2, 3), t2, p2),
    ]
