"""File formats: matrix JSON, experiment descriptors, run records, CSV.

Matrix exchange format (row-major):
    {"dim": M, "re": [[...]], "im": [[...]]}

Experiment descriptor:
    {"unitary": <matrix>, "mus": [...], "etas": [...],
     "detection": {"kind": "...", "cutoff": n},
     "rep_rate_hz": f, "accum_s": t}

Run configs add {"plan": {"n_samples", "seed", "partitions", "confidence"}}.
Run records are JSON lines appended under an exclusive file lock; the log path
defaults to runs.jsonl in the output directory and can be overridden with the
PERMOPTICS_LOG environment variable.
"""

from __future__ import annotations

import datetime as _dt
import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .fock import DETECTION_KINDS, DetectionModel
from .matrices import (
    EXACT_UNITARY_TOL,
    EXPERIMENTAL_UNITARY_TOL,
    Unitary,
    ensure_complex_matrix,
    unitarity_defect,
)
from .photonics import ThermalBank
from .sampling import SamplingPlan

LOG_ENV_VAR = "PERMOPTICS_LOG"


class ConfigError(ValueError):
    """Malformed or inconsistent input file."""


def matrix_to_json(matrix) -> dict:
    a = ensure_complex_matrix(matrix)
    return {
        "dim": int(a.shape[0]),
        "re": a.real.tolist(),
        "im": a.imag.tolist(),
    }


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise ConfigError("matrix must be an object with dim/re/im")
    missing = {"dim", "re", "im"} - obj.keys()
    if missing:
        raise ConfigError(f"matrix object missing fields: {sorted(missing)}")
    dim = obj["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise ConfigError(f"matrix dim must be a positive integer, got {dim!r}")
    try:
        re = np.array(obj["re"], dtype=float)
        im = np.array(obj["im"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"matrix entries are not numeric: {exc}") from exc
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise ConfigError(
            f"matrix shape mismatch: dim={dim}, re {re.shape}, im {im.shape}"
        )
    a = re + 1j * im
    if not np.isfinite(a).all():
        raise ConfigError("matrix entries must be finite")
    return a


def unitary_from_json(obj) -> Unitary:
    """Load a matrix and certify it at the tightest tier it passes."""
    a = matrix_from_json(obj)
    defect = unitarity_defect(a)
    if defect <= EXACT_UNITARY_TOL:
        return Unitary.exact(a)
    if defect <= EXPERIMENTAL_UNITARY_TOL:
        return Unitary.experimental(a)
    raise ConfigError(
        f"matrix is not unitary even at the relaxed tier "
        f"(defect {defect:.3e} > {EXPERIMENTAL_UNITARY_TOL:g})"
    )


def _float_vector(obj, name: str, length: int | None = None) -> np.ndarray:
    try:
        vec = np.array(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name} must be a numeric array: {exc}") from exc
    if vec.ndim != 1:
        raise ConfigError(f"{name} must be a flat array")
    if length is not None and vec.size != length:
        raise ConfigError(f"{name} must have length {length}, got {vec.size}")
    return vec


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    """Validated experiment descriptor plus an optional sampling plan."""

    unitary: Unitary
    bank: ThermalBank
    detection: DetectionModel
    rep_rate_hz: float
    accum_s: float
    plan: SamplingPlan | None
    raw: dict
    config_hash: str


def parse_experiment_config(obj: dict) -> ExperimentConfig:
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    for field in ("unitary", "mus"):
        if field not in obj:
            raise ConfigError(f"config missing required field {field!r}")
    unitary = unitary_from_json(obj["unitary"])
    mus = _float_vector(obj["mus"], "mus", unitary.dim)
    etas = obj.get("etas")
    if etas is not None:
        etas = _float_vector(etas, "etas", unitary.dim)
    try:
        bank = ThermalBank(mus=mus, etas=etas)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    detection_obj = obj.get("detection", {"kind": "exact_single_photon", "cutoff": 4})
    if not isinstance(detection_obj, dict):
        raise ConfigError("detection must be an object")
    kind = detection_obj.get("kind", "exact_single_photon")
    if kind not in DETECTION_KINDS:
        raise ConfigError(f"unknown detection kind {kind!r}; expected {DETECTION_KINDS}")
    cutoff = detection_obj.get("cutoff", 4)
    if not isinstance(cutoff, int) or cutoff < 1:
        raise ConfigError(f"detection cutoff must be a positive integer, got {cutoff!r}")
    detection = DetectionModel(kind=kind, fock_cutoff=cutoff)

    rep_rate = float(obj.get("rep_rate_hz", 80e6))
    accum = float(obj.get("accum_s", 1.0))
    if rep_rate <= 0 or accum <= 0:
        raise ConfigError("rep_rate_hz and accum_s must be positive")

    plan_obj = obj.get("plan")
    plan = None
    if plan_obj is not None:
        if not isinstance(plan_obj, dict) or "n_samples" not in plan_obj or "seed" not in plan_obj:
            raise ConfigError("plan must be an object with n_samples and seed")
        try:
            plan = SamplingPlan(
                n_samples=int(plan_obj["n_samples"]),
                seed=int(plan_obj["seed"]),
                partitions=int(plan_obj.get("partitions", 1)),
                confidence=float(plan_obj.get("confidence", 0.95)),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid plan: {exc}") from exc

    return ExperimentConfig(
        unitary=unitary,
        bank=bank,
        detection=detection,
        rep_rate_hz=rep_rate,
        accum_s=accum,
        plan=plan,
        raw=obj,
        config_hash=config_hash(obj),
    )


def load_experiment_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_experiment_config(obj)


def config_hash(obj: dict) -> str:
    canon = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def default_log_path(out_dir) -> Path:
    override = os.environ.get(LOG_ENV_VAR)
    if override:
        return Path(override)
    return Path(out_dir) / "runs.jsonl"


def append_run_record(path, record: dict) -> None:
    """Append one JSON line under an exclusive lock."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    line = json.dumps(record, sort_keys=True)
    with open(path, "a") as handle:
        try:
            import fcntl

            fcntl.flock(handle, fcntl.LOCK_EX)
            handle.write(line + "\n")
            fcntl.flock(handle, fcntl.LOCK_UN)
        except ImportError:  # non-POSIX fallback
            handle.write(line + "\n")


def run_record(config_hash_value: str, payload: dict, duration_s: float, version: str) -> dict:
    return {
        "config_hash": config_hash_value,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "version": version,
        "duration_s": duration_s,
        **payload,
    }


def write_csv(path, header: list[str], rows: list[dict]) -> Path:
    """Write rows (dicts keyed by header) with stable float formatting."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    def fmt(value) -> str:
        if isinstance(value, float):
            return f"{value:.12g}"
        return str(value)

    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(row[key]) for key in header))
    path.write_text("\n".join(lines) + "\n")
    return path
