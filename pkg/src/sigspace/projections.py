"""Near-optimal sparse projection onto dictionary atoms.

The exact best-s-sparse projection argmin_{|S|=s} ||z - P_S z|| is NP-hard;
``sd_project`` approximates its support by running a tractable solver with
the dictionary itself playing the sensing-matrix role.
"""

from __future__ import annotations

from dataclasses import replace
from enum import Enum

import numpy as np

from . import solvers
from .model import Dictionary
from .solvers import DEFAULT_CONFIG, SolverConfig

# The pruning projection runs twice per outer signal-space iteration, so its
# inner CoSaMP is capped well below the standalone solver's default.
_COSAMP_PROJECTION_MAX_ITER = 20


class ProjectionKind(str, Enum):
    OMP = "omp"
    COSAMP = "cosamp"
    L1 = "l1"


def _pad_support(support: np.ndarray, s: int, proxy: np.ndarray) -> np.ndarray:
    """Grow an undersized support to exactly s indices using the largest
    remaining proxy magnitudes (ties to the lowest index)."""
    if support.size >= s:
        return support
    mag = np.abs(proxy).copy()
    mag[support] = -1.0
    order = np.argsort(-mag, kind="stable")[: s - support.size]
    return np.sort(np.concatenate((support, order.astype(np.intp))))


def sd_project(
    D: Dictionary,
    z: np.ndarray,
    s: int,
    kind: ProjectionKind,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> np.ndarray:
    """Support of a near-best s-sparse approximation of z over D's columns.

    Always returns exactly s indices; undersized solver outputs are padded
    with the next-largest correlation magnitudes.
    """
    Dm = D.matrix
    n, d = Dm.shape
    z = np.asarray(z)
    if z.shape != (n,):
        raise ValueError("z length must equal the dictionary's signal dimension")
    if s < 1 or s > d:
        raise ValueError(f"projection sparsity {s} out of range [1, {d}]")

    kind = ProjectionKind(kind)
    if kind is ProjectionKind.OMP:
        if s > n:
            raise ValueError(f"omp projection support {s} would exceed {n} rows")
        support = solvers.omp(Dm, z, s, cfg).support
    elif kind is ProjectionKind.COSAMP:
        inner = replace(cfg, max_iterations=min(cfg.max_iterations, _COSAMP_PROJECTION_MAX_ITER))
        support = solvers.cosamp(Dm, z, s, inner).support
    else:
        alpha = solvers.bp_admm(Dm, z, cfg).alpha
        support = solvers.top_magnitude_indices(alpha, s)

    return _pad_support(support, s, Dm.conj().T @ z)
