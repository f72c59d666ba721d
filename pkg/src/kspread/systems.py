"""JSON system descriptions: one Hamiltonian source plus a time grid.

A system file is a JSON object with a ``source`` discriminator and exactly one
matching payload:

    {"source": "matrix-file",
     "hamiltonian": [[[re, im], ...], ...],       row-major complex entries
     "initial_state": [[re, im], ...],            optional, default e_0
     "times": {"t_min": 0.0, "t_max": 10.0, "points": 201}}

    {"source": "su2-params",
     "su2": {"alpha": 1.0, "gamma": 1.0, "delta": 0.0, "j": 1.0},
     "times": [0.0, 0.1, ...]}                    explicit grids also accepted

    {"source": "su11-params",
     "su11": {"lam": 1.0, "omega": 1.0, "beta": 0.0, "h": 0.5,
              "case": "I", "cutoff": 256},        cutoff optional (adaptive)
     "times": ...}

    {"source": "gue-sample",
     "gue": {"dim": 64, "seed": 7},               seed may come from --seed
     "times": ...}

Structural problems (bad JSON, unknown source, missing or extra payload keys,
malformed complex pairs) raise SystemFormatError; value problems (bad
parameters, non-Hermitian matrices, unnormalized states, bad grids) raise
ValidationError naming the field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .lie import Su2Params, Su11Params, su2_hamiltonian, su11_cutoff, su11_hamiltonian
from .linalg import HermitianOperator, ValidationError, as_state
from .rmt import sample_gue

SOURCES = ("matrix-file", "su2-params", "su11-params", "gue-sample")
_PAYLOAD_KEY = {
    "matrix-file": "hamiltonian",
    "su2-params": "su2",
    "su11-params": "su11",
    "gue-sample": "gue",
}


class SystemFormatError(Exception):
    """Structurally malformed system description."""


@dataclass(frozen=True)
class System:
    """Resolved inputs of one pipeline run."""

    label: str
    hamiltonian: HermitianOperator
    psi0: np.ndarray
    times: np.ndarray


def _require(data, key, where="system"):
    if key not in data:
        raise SystemFormatError(f"{where} is missing required key {key!r}")
    return data[key]


def _complex_vector(obj, field):
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError):
        raise SystemFormatError(f"{field} must be a list of [re, im] pairs") from None
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] == 0:
        raise SystemFormatError(f"{field} must be a list of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def _complex_matrix(obj, field):
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError):
        raise SystemFormatError(f"{field} must be a square array of [re, im] pairs") from None
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise SystemFormatError(f"{field} must be a square array of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def complex_pairs(values):
    """Complex array -> nested [re, im] lists, the file format's encoding."""
    values = np.asarray(values, dtype=complex)
    return np.stack([values.real, values.imag], axis=-1).tolist()


def _time_grid(obj):
    if isinstance(obj, dict):
        unknown = set(obj) - {"t_min", "t_max", "points"}
        if unknown:
            raise SystemFormatError(f"times has unknown keys {sorted(unknown)}")
        t_min = float(_require(obj, "t_min", "times"))
        t_max = float(_require(obj, "t_max", "times"))
        points = _require(obj, "points", "times")
        if int(points) != points or points < 1:
            raise ValidationError(f"times.points must be a positive integer, got {points!r}")
        if points > 1 and not t_max > t_min:
            raise ValidationError("times.t_max must exceed times.t_min")
        return np.linspace(t_min, t_max, int(points))
    if isinstance(obj, list):
        if not obj:
            raise ValidationError("times must not be empty")
        times = np.asarray(obj, dtype=float)
        if times.ndim != 1 or (times.size > 1 and np.min(np.diff(times)) <= 0.0):
            raise ValidationError("times must be strictly increasing")
        return times
    raise SystemFormatError("times must be a {t_min, t_max, points} object or a list")


def _params_block(data, source, allowed, where):
    block = _require(data, _PAYLOAD_KEY[source], "system")
    if not isinstance(block, dict):
        raise SystemFormatError(f"{where} must be an object")
    unknown = set(block) - set(allowed)
    if unknown:
        raise SystemFormatError(f"{where} has unknown keys {sorted(unknown)}")
    return block


def _basis_state(dim):
    psi0 = np.zeros(dim, dtype=complex)
    psi0[0] = 1.0
    return psi0


def parse_system(data, seed=None):
    """Resolve a parsed JSON object into (H, psi0, times)."""
    if not isinstance(data, dict):
        raise SystemFormatError("system description must be a JSON object")
    source = _require(data, "source")
    if source not in SOURCES:
        raise SystemFormatError(f"unknown source {source!r}; expected one of {list(SOURCES)}")
    foreign = {v for k, v in _PAYLOAD_KEY.items() if k != source} & set(data)
    if foreign:
        raise SystemFormatError(
            f"payload keys {sorted(foreign)} do not belong to source {source!r}"
        )
    known = {"source", "times", "label", "initial_state"} | {_PAYLOAD_KEY[source]}
    unknown = set(data) - known
    if unknown:
        raise SystemFormatError(f"system has unknown keys {sorted(unknown)}")
    times = _time_grid(_require(data, "times"))
    label = data.get("label", source)
    if not isinstance(label, str):
        raise SystemFormatError("label must be a string")

    if source in ("su2-params", "su11-params") and "initial_state" in data:
        raise ValidationError(
            "initial_state cannot be overridden for algebra sources; "
            "the chain starts at the lowest-weight state"
        )

    if source == "matrix-file":
        H = HermitianOperator(_complex_matrix(data["hamiltonian"], "hamiltonian"))
    elif source == "su2-params":
        block = _params_block(data, source, ("alpha", "gamma", "delta", "j"), "su2")
        params = Su2Params(
            alpha=float(_require(block, "alpha", "su2")),
            gamma=float(_require(block, "gamma", "su2")),
            j=float(_require(block, "j", "su2")),
            delta=float(block.get("delta", 0.0)),
        )
        H = su2_hamiltonian(params)
    elif source == "su11-params":
        block = _params_block(data, source, ("lam", "omega", "beta", "h", "case", "cutoff"), "su11")
        params = Su11Params(
            lam=float(_require(block, "lam", "su11")),
            omega=float(_require(block, "omega", "su11")),
            h=float(_require(block, "h", "su11")),
            beta=float(block.get("beta", 0.0)),
        )
        case = block.get("case", "II")
        t_edge = float(np.max(np.abs(times)))
        cutoff = block.get("cutoff")
        if cutoff is None:
            cutoff = su11_cutoff(params, case, t_edge)
        elif int(cutoff) != cutoff or cutoff < 2:
            raise ValidationError(f"su11.cutoff must be an integer >= 2, got {cutoff!r}")
        H = su11_hamiltonian(params, case, int(cutoff))
    else:
        block = _params_block(data, source, ("dim", "seed"), "gue")
        dim = _require(block, "dim", "gue")
        if int(dim) != dim or dim < 2:
            raise ValidationError(f"gue.dim must be an integer >= 2, got {dim!r}")
        use_seed = seed if seed is not None else block.get("seed")
        if use_seed is None:
            raise ValidationError(
                "seed is required for gue-sample systems (gue.seed or --seed); "
                "stochastic inputs are never clock-seeded"
            )
        if int(use_seed) != use_seed or not 0 <= use_seed < 2**64:
            raise ValidationError(f"seed must be a 64-bit nonnegative integer, got {use_seed!r}")
        H = sample_gue(int(dim), np.random.default_rng([int(use_seed), 0]))

    if "initial_state" in data:
        psi0 = as_state(_complex_vector(data["initial_state"], "initial_state"),
                        dim=H.dim, name="initial_state")
    else:
        psi0 = _basis_state(H.dim)
    return System(label=label, hamiltonian=H, psi0=psi0, times=times)


def load_system(path, seed=None):
    """Read and resolve a system description file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SystemFormatError(f"{path} is not valid JSON: {exc}") from None
    return parse_system(data, seed=seed)
