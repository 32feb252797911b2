"""Synthesis-domain recovery algorithms.

OMP and CoSaMP operate on an explicit sensing matrix (usually Phi = A @ D,
or D itself when used as projection subroutines). NOMP, eps-OMP and the
debiased basis-pursuit baseline take the (A, D) pair and return a full
signal-domain reconstruction.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from . import linalg
from .model import Dictionary, MeasurementMatrix

def _proxy(M: np.ndarray, r: np.ndarray) -> np.ndarray:
    # M.conj().T @ r without materializing the conjugated matrix
    return np.conj(np.conj(r) @ M)


class _CycleDetector:
    """Exact-state cycle detection for deterministic fixed-point loops.

    Once a (support, residual) pair repeats bit-for-bit, the iteration is
    provably periodic and can never improve, so the loop may stop without
    changing its result.
    """

    def __init__(self):
        self._seen = set()

    def repeated(self, support: np.ndarray, residual: np.ndarray) -> bool:
        key = (support.tobytes(), residual.tobytes())
        if key in self._seen:
            return True
        self._seen.add(key)
        return False


@dataclass(frozen=True)
class SolverConfig:
    """Iteration and tolerance knobs shared by the iterative solvers."""

    max_iterations: int = 50
    residual_tol_rel: float = 1e-7
    admm_rho: float = 1.0
    admm_max_iter: int = 3000
    admm_tol: float = 1e-7
    debias_threshold_rel: float = 1e-4

    def __post_init__(self):
        if self.max_iterations < 1 or self.admm_max_iter < 1:
            raise ValueError("iteration counts must be >= 1")
        if min(self.residual_tol_rel, self.admm_tol, self.debias_threshold_rel) < 0:
            raise ValueError("tolerances must be >= 0")
        if self.admm_rho <= 0:
            raise ValueError("admm_rho must be positive")


DEFAULT_CONFIG = SolverConfig()


@dataclass(frozen=True)
class RecoveryResult:
    """Solver output: coefficients, optional signal estimate, and support.

    ``x_hat`` is None for the matrix-level solvers (omp/cosamp) that never
    see the dictionary; callers holding D recover it as D @ alpha_hat.
    """

    alpha_hat: np.ndarray
    x_hat: np.ndarray | None
    support: np.ndarray
    iterations: int
    final_residual_norm: float


@dataclass(frozen=True)
class BasisPursuitResult:
    alpha: np.ndarray
    iterations: int
    converged: bool


def _matrix_of(obj) -> np.ndarray:
    return obj.matrix if hasattr(obj, "matrix") else np.asarray(obj)


def top_magnitude_indices(values: np.ndarray, count: int) -> np.ndarray:
    """Indices of the ``count`` largest magnitudes, ties to the lowest index.

    Returned in ascending index order.
    """
    mag = np.abs(np.asarray(values))
    order = np.argsort(-mag, kind="stable")[:count]
    return np.sort(order.astype(np.intp))


def omp(Phi: np.ndarray, y: np.ndarray, k: int, cfg: SolverConfig = DEFAULT_CONFIG) -> RecoveryResult:
    """Orthogonal matching pursuit: k greedy picks with full re-solve.

    Each iteration correlates the residual against all columns, adds the
    best one (ties to the lowest index, never re-selecting), then updates
    the coefficients by least squares on the chosen support.
    """
    Phi = _matrix_of(Phi)
    y = np.asarray(y)
    m, d = Phi.shape
    if k < 1:
        raise ValueError("sparsity k must be >= 1")
    if k > m:
        raise ValueError(f"support of size {k} would exceed {m} measurements")
    if y.shape != (m,):
        raise ValueError("y length must match Phi rows")

    selected = np.zeros(d, dtype=bool)
    r = y
    coef = np.zeros(0)
    support = np.zeros(0, dtype=np.intp)
    for _ in range(k):
        proxy = _proxy(Phi, r)
        mag = np.abs(proxy)
        mag[selected] = -1.0
        selected[int(np.argmax(mag))] = True
        support = np.flatnonzero(selected)
        coef = linalg.lstsq(Phi[:, support], y)
        r = y - Phi[:, support] @ coef

    alpha = np.zeros(d, dtype=np.promote_types(Phi.dtype, y.dtype))
    alpha[support] = coef
    return RecoveryResult(alpha, None, support, k, float(np.linalg.norm(r)))


def cosamp(Phi: np.ndarray, y: np.ndarray, k: int, cfg: SolverConfig = DEFAULT_CONFIG) -> RecoveryResult:
    """Compressive sampling matching pursuit with 2k-select / k-prune steps.

    Runs until the relative residual drops below tolerance, the iteration
    state repeats exactly (a proven cycle), or max_iterations is reached.
    The restricted estimate's residual may blow up transiently on strongly
    correlated supports and recover several iterations later, so no
    time-based stagnation cutoff is applied. The returned coefficients are
    re-solved (debiased) on the final support.
    """
    Phi = _matrix_of(Phi)
    y = np.asarray(y)
    m, d = Phi.shape
    if k < 1:
        raise ValueError("sparsity k must be >= 1")
    if k > m:
        raise ValueError(f"support of size {k} would exceed {m} measurements")
    if y.shape != (m,):
        raise ValueError("y length must match Phi rows")

    out_dtype = np.promote_types(Phi.dtype, y.dtype)
    ynorm = float(np.linalg.norm(y))
    if ynorm == 0.0:
        return RecoveryResult(
            np.zeros(d, dtype=out_dtype), None, np.zeros(0, dtype=np.intp), 0, 0.0
        )

    support = np.zeros(0, dtype=np.intp)
    r = y
    iterations = 0
    cycles = _CycleDetector()
    for _ in range(cfg.max_iterations):
        iterations += 1
        proxy = _proxy(Phi, r)
        omega = top_magnitude_indices(proxy, 2 * k)
        merged = np.union1d(omega, support)
        b = linalg.lstsq(Phi[:, merged], y)
        keep = top_magnitude_indices(b, k)
        support = merged[keep]
        r = y - Phi[:, support] @ b[keep]
        if float(np.linalg.norm(r)) < cfg.residual_tol_rel * ynorm:
            break
        if cycles.repeated(support, r):
            break

    coef = linalg.lstsq(Phi[:, support], y)
    r = y - Phi[:, support] @ coef
    alpha = np.zeros(d, dtype=out_dtype)
    alpha[support] = coef
    return RecoveryResult(alpha, None, support, iterations, float(np.linalg.norm(r)))


def _nomp_window(proxy_mag: np.ndarray, lam: int, w: int, d: int) -> np.ndarray:
    """The w adjacent (circular) indices centered on lam.

    Odd w takes (w-1)/2 neighbors per side; even w takes (w-2)/2 per side
    plus whichever edge index lam-w/2 / lam+w/2 has the larger proxy
    magnitude (tie goes left).
    """
    if w % 2:
        offsets = np.arange(-(w - 1) // 2, (w - 1) // 2 + 1)
    else:
        inner = np.arange(-(w - 2) // 2, (w - 2) // 2 + 1)
        left, right = (lam - w // 2) % d, (lam + w // 2) % d
        edge = w // 2 if proxy_mag[right] > proxy_mag[left] else -(w // 2)
        offsets = np.concatenate((inner, [edge]))
    return (lam + offsets) % d


def nomp(
    A: MeasurementMatrix,
    D: Dictionary,
    y: np.ndarray,
    k: int,
    w: int,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> RecoveryResult:
    """Neighborly OMP: each greedy pick pulls in a w-window of neighbors.

    The window joins the support before the least-squares update, which is
    what lets a single pick absorb a whole correlated cluster of atoms.
    Requires w <= m/k so the final support cannot exceed m.
    """
    Am, Dm = _matrix_of(A), _matrix_of(D)
    y = np.asarray(y)
    m = Am.shape[0]
    if w < 1:
        raise ValueError("window size w must be >= 1")
    if w * k > m:
        raise ValueError(f"window {w} exceeds m/k = {m}/{k}")
    Phi = Am @ Dm
    d = Phi.shape[1]
    if y.shape != (m,):
        raise ValueError("y length must match measurement count")

    selected = np.zeros(d, dtype=bool)
    r = y
    support = np.zeros(0, dtype=np.intp)
    coef = np.zeros(0)
    for _ in range(k):
        proxy = _proxy(Phi, r)
        mag = np.abs(proxy)
        center_mag = np.where(selected, -1.0, mag)  # same no-reselect rule as omp
        lam = int(np.argmax(center_mag))
        selected[_nomp_window(mag, lam, w, d)] = True
        support = np.flatnonzero(selected)
        coef = linalg.lstsq(Phi[:, support], y)
        r = y - Phi[:, support] @ coef

    alpha = np.zeros(d, dtype=np.complex128)
    alpha[support] = coef
    xhat = Dm @ alpha
    return RecoveryResult(alpha, xhat, support, k, float(np.linalg.norm(r)))


def eps_extension(D: Dictionary, support: np.ndarray, eps: float) -> np.ndarray:
    """All atoms whose squared normalized correlation with some supported
    atom reaches 1 - eps^2 (always a superset of the input support)."""
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie strictly between 0 and 1")
    support = np.asarray(support, dtype=np.intp)
    if support.size == 0:
        raise ValueError("eps_extension requires a nonempty support")
    Dm = _matrix_of(D)
    sq_norms = np.sum(np.abs(Dm) ** 2, axis=0)
    gram = Dm.conj().T @ Dm[:, support]
    corr = np.abs(gram) ** 2 / np.outer(sq_norms, sq_norms[support])
    keep = np.any(corr >= 1.0 - eps * eps, axis=1)
    keep[support] = True
    return np.flatnonzero(keep).astype(np.intp)


def eps_omp(
    A: MeasurementMatrix,
    D: Dictionary,
    y: np.ndarray,
    k: int,
    eps: float,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> RecoveryResult:
    """OMP followed by a one-shot eps-extension of the support.

    The extension feeds only the final least-squares solve; the greedy loop
    itself is plain OMP. If the extended support would exceed m it is
    truncated to the m atoms best correlated with the OMP picks.
    """
    Am, Dm = _matrix_of(A), _matrix_of(D)
    y = np.asarray(y)
    m = Am.shape[0]
    Phi = Am @ Dm
    base = omp(Phi, y, k, cfg)
    ext = eps_extension(D, base.support, eps)
    if ext.size > m:
        sq_norms = np.sum(np.abs(Dm) ** 2, axis=0)
        gram = Dm[:, ext].conj().T @ Dm[:, base.support]
        corr = np.max(np.abs(gram) ** 2 / np.outer(sq_norms[ext], sq_norms[base.support]), axis=1)
        ext = np.sort(ext[np.argsort(-corr, kind="stable")[:m]])
    coef = linalg.lstsq(Phi[:, ext], y)
    alpha = np.zeros(Phi.shape[1], dtype=np.complex128)
    alpha[ext] = coef
    r = y - Phi[:, ext] @ coef
    return RecoveryResult(alpha, Dm @ alpha, ext, k, float(np.linalg.norm(r)))


def _soft_threshold(v: np.ndarray, kappa: float) -> np.ndarray:
    mag = np.abs(v)
    scale = np.maximum(mag - kappa, 0.0)
    out = np.zeros_like(v)
    nz = mag > 0
    out[nz] = v[nz] * (scale[nz] / mag[nz])
    return out


def bp_admm(M: np.ndarray, b: np.ndarray, cfg: SolverConfig = DEFAULT_CONFIG) -> BasisPursuitResult:
    """Basis pursuit min ||alpha||_1 s.t. M @ alpha = b, solved by ADMM.

    Alternates an exact projection onto the affine constraint set with
    complex soft-thresholding, using over-relaxation and residual-balancing
    updates of the penalty parameter. The returned iterate is the projected
    (feasible) variable, so ||M alpha - b|| is solve-precision small.
    """
    M = _matrix_of(M)
    b = np.asarray(b)
    m, d = M.shape
    # square systems are allowed (the feasible set is then a single point,
    # which the projection step lands on immediately)
    if m > d:
        raise ValueError("bp_admm expects an underdetermined system (rows <= cols)")
    if b.shape != (m,):
        raise ValueError("b length must match M rows")

    bnorm = float(np.linalg.norm(b))
    if bnorm == 0.0:
        return BasisPursuitResult(np.zeros(d, dtype=np.complex128), 0, True)
    # basis pursuit is positively homogeneous; normalizing b keeps the
    # soft-threshold level 1/rho meaningful across input scales
    bs = b / bnorm

    gram = M @ M.conj().T
    try:
        cho = scipy.linalg.cho_factor(gram)

        def solve_gram(rhs):
            return scipy.linalg.cho_solve(cho, rhs)

    except scipy.linalg.LinAlgError:  # rank-deficient rows

        def solve_gram(rhs):
            return scipy.linalg.lstsq(gram, rhs, cond=linalg.RANK_RCOND, lapack_driver="gelsy")[0]

    Mh = np.ascontiguousarray(M.conj().T)

    def project(v):
        return v - Mh @ solve_gram(M @ v - bs)

    rho = cfg.admm_rho
    relax = 1.8
    tol = cfg.admm_tol
    sqrt_d = np.sqrt(d)
    x = project(np.zeros(d, dtype=np.complex128))
    z = x.copy()
    u = np.zeros(d, dtype=np.complex128)
    converged = False
    iterations = 0
    for _ in range(cfg.admm_max_iter):
        iterations += 1
        x = project(z - u)
        x_rel = relax * x + (1.0 - relax) * z
        z_new = _soft_threshold(x_rel + u, 1.0 / rho)
        dual = rho * float(np.linalg.norm(z_new - z))
        z = z_new
        u = u + x_rel - z
        primal = float(np.linalg.norm(x - z))
        eps_pri = sqrt_d * tol + tol * max(np.linalg.norm(x), np.linalg.norm(z))
        eps_dual = sqrt_d * tol + tol * rho * float(np.linalg.norm(u))
        if primal <= eps_pri and dual <= eps_dual:
            converged = True
            break
        # residual balancing keeps primal and dual progress comparable
        if primal > 10.0 * dual:
            rho *= 2.0
            u *= 0.5
        elif dual > 10.0 * primal:
            rho *= 0.5
            u *= 2.0

    return BasisPursuitResult(x * bnorm, iterations, converged)


def l1_recover(
    A: MeasurementMatrix,
    D: Dictionary,
    y: np.ndarray,
    k: int,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> RecoveryResult:
    """Basis pursuit on Phi = A @ D followed by support debiasing.

    Coefficients above debias_threshold_rel of the peak magnitude (at most
    the k largest) are re-fit by least squares, which removes the shrinkage
    bias and makes the 100 dB threshold reachable.
    """
    Am, Dm = _matrix_of(A), _matrix_of(D)
    y = np.asarray(y)
    Phi = Am @ Dm
    d = Phi.shape[1]
    bp = bp_admm(Phi, y, cfg)
    mag = np.abs(bp.alpha)
    peak = float(mag.max(initial=0.0))
    alpha = np.zeros(d, dtype=np.complex128)
    if peak == 0.0:
        return RecoveryResult(alpha, Dm @ alpha, np.zeros(0, dtype=np.intp), bp.iterations, float(np.linalg.norm(y)))
    passing = np.flatnonzero(mag > cfg.debias_threshold_rel * peak)
    if passing.size > k:
        passing = passing[top_magnitude_indices(bp.alpha[passing], k)]
    coef = linalg.lstsq(Phi[:, passing], y)
    alpha[passing] = coef
    r = y - Phi[:, passing] @ coef
    return RecoveryResult(alpha, Dm @ alpha, passing, bp.iterations, float(np.linalg.norm(r)))
