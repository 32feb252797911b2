"""Problem construction and the perfect-recovery metric.

A trial couples a unit-norm synthesis dictionary D (n x d), a real Gaussian
measurement matrix A (m x n), a structured sparse coefficient vector alpha,
the signal x = D @ alpha and the measurements y = A @ x + noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg

# Reconstruction SNR above this many dB counts as perfect recovery.
PERFECT_RECOVERY_DB = 100.0

_MAX_DICTIONARY_ENTRIES = 100_000_000


@dataclass(frozen=True)
class SeededRng:
    """Replayable random stream keyed by a master seed and a stream path.

    Identical (master_seed, stream_path) always produce identical draw
    sequences, independent of which worker consumes them.
    """

    master_seed: int
    stream_path: tuple[int, ...] = ()

    def __post_init__(self):
        if self.master_seed < 0:
            raise ValueError("master_seed must be nonnegative")
        object.__setattr__(self, "stream_path", tuple(int(p) for p in self.stream_path))

    def child(self, *path: int) -> "SeededRng":
        return SeededRng(self.master_seed, self.stream_path + path)

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.master_seed, spawn_key=self.stream_path)
        return np.random.default_rng(seq)


def _generator_of(rng) -> np.random.Generator:
    # Accept either a SeededRng stream or a ready-made numpy Generator.
    if isinstance(rng, np.random.Generator):
        return rng
    return rng.generator()


def support_set(indices, d: int) -> np.ndarray:
    """Normalize to a strictly ascending duplicate-free index array in [0, d)."""
    support = np.asarray(indices, dtype=np.intp).ravel()
    support = np.sort(support)
    if support.size:
        if support[0] < 0 or support[-1] >= d:
            raise ValueError(f"support index out of range [0, {d})")
        if np.any(np.diff(support) == 0):
            raise ValueError("support contains duplicate indices")
    return support


@dataclass(frozen=True)
class Dictionary:
    """Synthesis dictionary with unit-norm columns, d = oversampling * n."""

    matrix: np.ndarray
    oversampling: int

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=np.complex128)
        object.__setattr__(self, "matrix", M)
        if M.ndim != 2:
            raise ValueError("dictionary matrix must be 2-d")
        n, d = M.shape
        if d != self.oversampling * n:
            raise ValueError(f"expected d = oversampling * n, got {d} != {self.oversampling} * {n}")
        if not np.all(np.isfinite(M.view(np.float64))):
            raise ValueError("dictionary entries must be finite")
        norms = np.linalg.norm(M, axis=0)
        if np.any(np.abs(norms - 1.0) > 1e-10):
            raise ValueError("dictionary columns must be unit-norm (within 1e-10)")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def d(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class MeasurementMatrix:
    """Real m x n sensing matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.matrix)
        if np.iscomplexobj(M):
            if np.any(M.imag != 0):
                raise ValueError("measurement matrix must have zero imaginary part")
            M = M.real
        M = np.asarray(M, dtype=np.float64)
        object.__setattr__(self, "matrix", M)
        if M.ndim != 2:
            raise ValueError("measurement matrix must be 2-d")
        if not np.all(np.isfinite(M)):
            raise ValueError("measurement matrix entries must be finite")

    @property
    def m(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class ProblemInstance:
    """One trial's (A, D, alpha, x, y, noise) bundle."""

    A: MeasurementMatrix
    D: Dictionary
    alpha: np.ndarray
    x: np.ndarray
    y: np.ndarray
    noise: np.ndarray

    def __post_init__(self):
        if self.alpha.shape != (self.D.d,):
            raise ValueError("alpha length must equal dictionary width d")
        if self.x.shape != (self.D.n,):
            raise ValueError("x length must equal signal dimension n")
        if self.y.shape != (self.A.m,) or self.noise.shape != (self.A.m,):
            raise ValueError("y and noise length must equal measurement count m")
        scale = 1.0 + np.linalg.norm(self.x)
        if np.linalg.norm(self.x - self.D.matrix @ self.alpha) > 1e-12 * scale:
            raise ValueError("x must equal D @ alpha")
        yscale = 1.0 + np.linalg.norm(self.y)
        if np.linalg.norm(self.y - (self.A.matrix @ self.x + self.noise)) > 1e-12 * yscale:
            raise ValueError("y must equal A @ x + noise")


def build_overcomplete_dft(n: int, oversampling: int) -> Dictionary:
    """Overcomplete DFT dictionary: entry (t, j) = exp(2i*pi*t*j/d) / sqrt(n).

    Columns are exactly unit-norm; for d = 4n adjacent columns correlate at
    ~0.90 (the Dirichlet kernel), which is what makes clustered supports hard.
    """
    if n < 1 or oversampling < 1:
        raise ValueError("n and oversampling must be positive")
    d = n * oversampling
    if n * d > _MAX_DICTIONARY_ENTRIES:
        raise ValueError(f"dictionary of {n}x{d} entries exceeds supported size")
    t = np.arange(n)[:, None]
    j = np.arange(d)[None, :]
    M = np.exp(2j * np.pi * (t * j) / d) / np.sqrt(n)
    return Dictionary(matrix=M, oversampling=oversampling)


def dirichlet_correlation(n: int, d: int, offset) -> np.ndarray:
    """Closed-form |<d_j, d_{j+offset}>| for the overcomplete DFT dictionary."""
    delta = np.atleast_1d(np.asarray(offset, dtype=np.float64))
    denom = n * np.abs(np.sin(np.pi * delta / d))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.abs(np.sin(np.pi * n * delta / d)) / denom
    # offsets that are exact multiples of d alias to perfectly aligned columns
    out[denom == 0.0] = 1.0
    if np.isscalar(offset) or np.asarray(offset).ndim == 0:
        return out[0]
    return out


def gaussian_measurement(m: int, n: int, rng) -> MeasurementMatrix:
    """i.i.d. standard normal m x n sensing matrix drawn from ``rng``."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    gen = _generator_of(rng)
    return MeasurementMatrix(matrix=gen.standard_normal((m, n)))


def synthesize(D: Dictionary, alpha: np.ndarray) -> np.ndarray:
    """x = D @ alpha."""
    return linalg.matvec(D.matrix, alpha)


def measure(A: MeasurementMatrix, x: np.ndarray, noise: np.ndarray) -> np.ndarray:
    """y = A @ x + noise."""
    y = linalg.matvec(A.matrix, x)
    noise = np.asarray(noise)
    if noise.shape != y.shape:
        raise ValueError(f"noise length {noise.shape} does not match m = {y.shape}")
    return y + noise


def snr_db(x: np.ndarray, xhat: np.ndarray) -> float:
    """Reconstruction SNR 20*log10(||x|| / ||x - xhat||); +inf on exact match."""
    x, xhat = np.asarray(x), np.asarray(xhat)
    if x.shape != xhat.shape:
        raise ValueError("x and xhat must have the same length")
    xnorm = np.linalg.norm(x)
    if xnorm == 0.0:
        raise ValueError("snr_db is undefined for a zero reference signal")
    err = np.linalg.norm(x - xhat)
    if err == 0.0:
        return float("inf")
    return float(20.0 * np.log10(xnorm / err))


def is_perfect_recovery(x: np.ndarray, xhat: np.ndarray) -> bool:
    """True iff reconstruction SNR strictly exceeds 100 dB."""
    return snr_db(x, xhat) > PERFECT_RECOVERY_DB
