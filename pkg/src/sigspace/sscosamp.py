"""Signal-space CoSaMP and its unionized variant.

Both algorithms iterate proxy -> identify (2k-sparse projection) -> merge ->
constrained least squares -> prune (k-sparse projection) -> residual update,
returning a signal-domain estimate that lies in the span of the pruned atoms.
The unionized variant prunes with OMP *and* CoSaMP and keeps the union, so
its support may grow to 2k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import linalg
from .model import Dictionary, MeasurementMatrix
from .projections import ProjectionKind, sd_project
from .solvers import _CycleDetector, _proxy, DEFAULT_CONFIG, RecoveryResult, SolverConfig


@dataclass(frozen=True)
class SscosampConfig:
    """Projection choices and outer-loop stopping rules."""

    identify_kind: ProjectionKind = ProjectionKind.COSAMP
    prune_kind: ProjectionKind = ProjectionKind.COSAMP
    max_outer_iterations: int = 50
    residual_tol_rel: float = 1e-7
    inner_cfg: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        if self.max_outer_iterations < 1:
            raise ValueError("max_outer_iterations must be >= 1")


class UsscosampVariant(str, Enum):
    ALT = "alt"
    UNION = "union"


def _range_restricted_lstsq(Am, Dm, support, y):
    """argmin_z ||y - A z|| over z in range(D_support), via A @ D_support."""
    cols = Dm[:, support]
    coef = linalg.lstsq(Am @ cols, y)
    return coef, cols @ coef


def _signal_space_loop(A, D, y, k, cfg: SscosampConfig, identify, prune, identify_period: int = 1) -> RecoveryResult:
    Am = A.matrix if hasattr(A, "matrix") else np.asarray(A)
    Dm = D.matrix
    m = Am.shape[0]
    y = np.asarray(y)
    if y.shape != (m,):
        raise ValueError("y length must match measurement count")
    if Am.shape[1] != Dm.shape[0]:
        raise ValueError("measurement and dictionary dimensions do not match")
    if k < 1:
        raise ValueError("sparsity k must be >= 1")

    d = Dm.shape[1]
    ynorm = float(np.linalg.norm(y))
    r = y
    gamma = np.zeros(0, dtype=np.intp)
    alpha = np.zeros(d, dtype=np.complex128)
    x_cur = np.zeros(Dm.shape[0], dtype=np.complex128)
    resid = ynorm
    iterations = 0
    cycles = _CycleDetector()

    for outer in range(cfg.max_outer_iterations):
        iterations += 1
        proxy = _proxy(Am, r)
        omega = identify(proxy, outer)
        merged = np.union1d(omega, gamma)
        _, w = _range_restricted_lstsq(Am, Dm, merged, y)
        gamma, coef, x_cur = prune(w)
        alpha = np.zeros(d, dtype=np.complex128)
        alpha[gamma] = coef
        r = y - Am @ x_cur
        resid = float(np.linalg.norm(r))
        if resid <= cfg.residual_tol_rel * ynorm:
            break
        # a state repeat only proves a cycle when the identify schedule is
        # in the same phase (the alternating variant has period 2)
        phase = np.intp(outer % identify_period)
        if cycles.repeated(np.append(gamma, phase), r):
            break

    return RecoveryResult(alpha, x_cur, gamma, iterations, resid)


def sscosamp(
    A: MeasurementMatrix,
    D: Dictionary,
    y: np.ndarray,
    k: int,
    cfg: SscosampConfig = SscosampConfig(),
) -> RecoveryResult:
    """Signal-space CoSaMP with configurable identify/prune projections.

    The identify projection proposes a 2k-sparse support for the proxy; after
    the merged least-squares update, the prune projection keeps k atoms and
    the new estimate is the orthogonal projection of the update onto them.
    """
    Dm = D.matrix

    def identify(proxy, _outer):
        return sd_project(D, proxy, 2 * k, cfg.identify_kind, cfg.inner_cfg)

    def prune(w):
        gamma = sd_project(D, w, k, cfg.prune_kind, cfg.inner_cfg)
        coef = linalg.lstsq(Dm[:, gamma], w)
        return gamma, coef, Dm[:, gamma] @ coef

    return _signal_space_loop(A, D, y, k, cfg, identify, prune)


def usscosamp(
    A: MeasurementMatrix,
    D: Dictionary,
    y: np.ndarray,
    k: int,
    variant: UsscosampVariant = UsscosampVariant.ALT,
    cfg: SscosampConfig = SscosampConfig(),
) -> RecoveryResult:
    """Unionized signal-space CoSaMP.

    Identify follows the variant: ``alt`` alternates OMP (even iterations)
    and CoSaMP (odd), keeping |Omega| = 2k; ``union`` joins both projections,
    giving 2k <= |Omega| <= 4k. Pruning always unions the OMP and CoSaMP
    k-sparse supports, and the estimate re-solves least squares against y on
    the unioned atoms.
    """
    Am = A.matrix if hasattr(A, "matrix") else np.asarray(A)
    Dm = D.matrix
    variant = UsscosampVariant(variant)

    def identify(proxy, outer):
        if variant is UsscosampVariant.ALT:
            kind = ProjectionKind.OMP if outer % 2 == 0 else ProjectionKind.COSAMP
            return sd_project(D, proxy, 2 * k, kind, cfg.inner_cfg)
        omega_omp = sd_project(D, proxy, 2 * k, ProjectionKind.OMP, cfg.inner_cfg)
        omega_cos = sd_project(D, proxy, 2 * k, ProjectionKind.COSAMP, cfg.inner_cfg)
        return np.union1d(omega_omp, omega_cos)

    y_arr = np.asarray(y)

    def prune(w):
        gamma_omp = sd_project(D, w, k, ProjectionKind.OMP, cfg.inner_cfg)
        gamma_cos = sd_project(D, w, k, ProjectionKind.COSAMP, cfg.inner_cfg)
        gamma = np.union1d(gamma_omp, gamma_cos)
        coef, x_next = _range_restricted_lstsq(Am, Dm, gamma, y_arr)
        return gamma, coef, x_next

    period = 2 if variant is UsscosampVariant.ALT else 1
    return _signal_space_loop(A, D, y, k, cfg, identify, prune, identify_period=period)
