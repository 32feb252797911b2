"""Structured sparse coefficient generators and their validators.

Support classes (stable identifiers used by the CLI and CSV output):

* ``clustered``        one run of k consecutive indices
* ``spread``           consecutive nonzeros separated by >= min_sep zeros
* ``hybrid``           one run of k/2 plus k/2 singletons, each singleton at
                       least 8 indices from every other nonzero
* ``c_clusters``       c runs of k/c with at least one zero between runs
* ``alternating``      nonzero/zero alternation spanning 2k - 1 indices
* ``pair_spread``      k/2 pairs whose two nonzeros span 4 indices
                       (difference 3), pairs mutually at least 8 apart
* ``uniform_sep``      consecutive nonzeros separated by exactly s zeros
* ``two_cluster_sep``  two runs of k/2 separated by exactly s zeros

Placement is uniform over all index placements consistent with the class.
Supports never wrap past index d - 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import _generator_of, support_set

CLUSTERED = "clustered"
SPREAD = "spread"
HYBRID = "hybrid"
C_CLUSTERS = "c_clusters"
ALTERNATING = "alternating"
PAIR_SPREAD = "pair_spread"
UNIFORM_SEP = "uniform_sep"
TWO_CLUSTER_SEP = "two_cluster_sep"

ALL_KINDS = (
    CLUSTERED,
    SPREAD,
    HYBRID,
    C_CLUSTERS,
    ALTERNATING,
    PAIR_SPREAD,
    UNIFORM_SEP,
    TWO_CLUSTER_SEP,
)

# Minimum index distance between a hybrid singleton and any other nonzero,
# also used for the gaps between pair_spread pairs.
ISOLATION_DISTANCE = 8

# Default zeros between consecutive nonzeros of the spread class.
SPREAD_DEFAULT_SEP = 8

# A pair_spread pair occupies a 4-index span: its nonzeros differ by 3.
# (Reading "4 indices apart" as difference 4 makes the two atoms exactly
# orthogonal in the 4x DFT and turns pairs into easy spread-like signals,
# which contradicts the low pair-spread recovery of the l1-family solvers.)
PAIR_SPAN = 4
PAIR_DIFF = PAIR_SPAN - 1

_REJECTION_LIMIT = 10_000


@dataclass(frozen=True)
class StructureSpec:
    """One support class plus its parameter (separation or cluster count)."""

    kind: str
    separation: int | None = None
    clusters: int | None = None

    def __post_init__(self):
        if self.kind not in ALL_KINDS:
            raise ValueError(f"unknown structure kind {self.kind!r}; valid: {ALL_KINDS}")
        # a parameterized kind with its parameter unset is a sweep template;
        # generate_support rejects it, the harness fills it per grid point
        if self.clusters is not None and (self.kind != C_CLUSTERS or self.clusters < 1):
            raise ValueError("clusters applies to c_clusters only and must be >= 1")
        if self.separation is not None and self.separation < 0:
            raise ValueError("separation must be >= 0")

    @classmethod
    def clustered(cls):
        return cls(CLUSTERED)

    @classmethod
    def spread(cls, min_sep: int = SPREAD_DEFAULT_SEP):
        return cls(SPREAD, separation=min_sep)

    @classmethod
    def hybrid(cls):
        return cls(HYBRID)

    @classmethod
    def c_clusters(cls, clusters: int):
        return cls(C_CLUSTERS, clusters=clusters)

    @classmethod
    def alternating(cls):
        return cls(ALTERNATING)

    @classmethod
    def pair_spread(cls):
        return cls(PAIR_SPREAD)

    @classmethod
    def uniform_sep(cls, separation: int | None = None):
        return cls(UNIFORM_SEP, separation=separation)

    @classmethod
    def two_cluster_sep(cls, separation: int | None = None):
        return cls(TWO_CLUSTER_SEP, separation=separation)

    def with_separation(self, separation: int) -> "StructureSpec":
        return StructureSpec(self.kind, separation=separation, clusters=self.clusters)

    def label(self) -> str:
        """Stable identifier, with the parameter appended where one is set."""
        if self.kind == C_CLUSTERS and self.clusters is not None:
            return f"{self.kind}:{self.clusters}"
        if self.kind == SPREAD and self.separation not in (None, SPREAD_DEFAULT_SEP):
            return f"{self.kind}:{self.separation}"
        if self.kind in (UNIFORM_SEP, TWO_CLUSTER_SEP) and self.separation is not None:
            return f"{self.kind}:{self.separation}"
        return self.kind


def parse_structure(text: str) -> StructureSpec:
    """Parse a CLI/CSV identifier such as ``clustered`` or ``c_clusters:4``."""
    kind, _, param = text.partition(":")
    kind = kind.strip()
    value = int(param) if param else None
    if kind == C_CLUSTERS:
        if value is None:
            raise ValueError("c_clusters requires a cluster count, e.g. c_clusters:4")
        return StructureSpec.c_clusters(value)
    if kind == SPREAD:
        return StructureSpec.spread(value if value is not None else SPREAD_DEFAULT_SEP)
    if kind in (UNIFORM_SEP, TWO_CLUSTER_SEP):
        return StructureSpec(kind, separation=value)
    if kind in ALL_KINDS:
        if value is not None:
            raise ValueError(f"structure {kind!r} takes no parameter")
        return StructureSpec(kind)
    raise ValueError(f"unknown structure kind {kind!r}; valid: {ALL_KINDS}")


@dataclass(frozen=True)
class CoefficientDistribution:
    """Distribution of the nonzero coefficient values."""

    kind: str = "complex_gaussian"

    def __post_init__(self):
        if self.kind not in ("complex_gaussian", "unit_modulus"):
            raise ValueError(f"unknown coefficient distribution {self.kind!r}")


COMPLEX_GAUSSIAN = CoefficientDistribution("complex_gaussian")
UNIT_MODULUS = CoefficientDistribution("unit_modulus")


def _runs(support: np.ndarray) -> list[tuple[int, int]]:
    """Maximal consecutive runs as (start, length) pairs."""
    if support.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(support) > 1)
    starts = np.concatenate(([0], breaks + 1))
    ends = np.concatenate((breaks, [support.size - 1]))
    return [(int(support[s]), int(e - s + 1)) for s, e in zip(starts, ends)]


def _choose_sorted(gen: np.random.Generator, count: int, n_slots: int) -> np.ndarray:
    # Uniform over all size-`count` subsets of [0, n_slots).
    return np.sort(gen.choice(n_slots, size=count, replace=False))


def _spaced_starts(gen, count: int, length: int, min_start_delta: int, d: int) -> np.ndarray:
    """Uniform starts for `count` length-`length` blocks whose consecutive
    starts differ by at least `min_start_delta`."""
    # Subtracting (min_start_delta - 1) * i from the i-th start turns the
    # spacing constraint into a plain strictly-ascending subset choice.
    step = min_start_delta - 1
    n_slots = d - length + 1 - step * (count - 1)
    if n_slots < count:
        raise ValueError("structure does not fit: too many blocks for dimension")
    base = _choose_sorted(gen, count, n_slots)
    return base + step * np.arange(count)


def generate_support(spec: StructureSpec, k: int, d: int, rng) -> np.ndarray:
    """Draw a size-k support of class ``spec`` uniformly over valid placements."""
    if k < 1:
        raise ValueError("sparsity k must be >= 1")
    gen = _generator_of(rng)
    kind = spec.kind

    if kind == CLUSTERED:
        if k > d:
            raise ValueError(f"clustered support of size {k} does not fit in d={d}")
        start = int(gen.integers(0, d - k + 1))
        support = start + np.arange(k)

    elif kind == SPREAD:
        sep = spec.separation if spec.separation is not None else SPREAD_DEFAULT_SEP
        if k + (k - 1) * sep > d:
            raise ValueError(f"spread support (k={k}, min_sep={sep}) does not fit in d={d}")
        base = _choose_sorted(gen, k, d - (k - 1) * sep)
        support = base + sep * np.arange(k)

    elif kind == HYBRID:
        if k % 2 or k < 4:
            raise ValueError("hybrid requires even k >= 4")
        half = k // 2
        for _ in range(_REJECTION_LIMIT):
            start = int(gen.integers(0, d - half + 1))
            block = start + np.arange(half)
            singles = gen.choice(d, size=half, replace=False)
            candidate = np.unique(np.concatenate((block, singles)))
            if candidate.size == k and validate_support(spec, candidate, k, d):
                support = candidate
                break
        else:
            raise ValueError(f"could not place a hybrid support with k={k} in d={d}")

    elif kind == C_CLUSTERS:
        c = spec.clusters
        if c is None:
            raise ValueError("c_clusters template needs a cluster count before sampling")
        if k % c:
            raise ValueError(f"cluster count {c} must divide k={k}")
        length = k // c
        # at least one zero between blocks: starts differ by >= length + 1
        starts = _spaced_starts(gen, c, length, length + 1, d)
        support = (starts[:, None] + np.arange(length)[None, :]).ravel()

    elif kind == ALTERNATING:
        span = 2 * k - 1
        if span > d:
            raise ValueError(f"alternating support (span {span}) does not fit in d={d}")
        start = int(gen.integers(0, d - span + 1))
        support = start + 2 * np.arange(k)

    elif kind == PAIR_SPREAD:
        if k % 2:
            raise ValueError("pair_spread requires even k")
        pairs = k // 2
        # a pair spans [p, p+3]; the next pair's left index must sit at least
        # 8 past the previous pair's right index: start delta >= 3 + 8
        starts = _spaced_starts(gen, pairs, PAIR_SPAN, PAIR_DIFF + ISOLATION_DISTANCE, d)
        support = np.concatenate((starts, starts + PAIR_DIFF))

    elif kind == UNIFORM_SEP:
        s = spec.separation
        if s is None:
            raise ValueError("uniform_sep requires a separation value")
        span = (k - 1) * (s + 1) + 1
        if span > d:
            raise ValueError(f"uniform_sep support (span {span}) does not fit in d={d}")
        start = int(gen.integers(0, d - span + 1))
        support = start + (s + 1) * np.arange(k)

    elif kind == TWO_CLUSTER_SEP:
        s = spec.separation
        if s is None:
            raise ValueError("two_cluster_sep requires a separation value")
        if k % 2:
            raise ValueError("two_cluster_sep requires even k")
        half = k // 2
        span = k + s
        if span > d:
            raise ValueError(f"two_cluster_sep support (span {span}) does not fit in d={d}")
        start = int(gen.integers(0, d - span + 1))
        support = np.concatenate(
            (start + np.arange(half), start + half + s + np.arange(half))
        )

    else:  # pragma: no cover - ALL_KINDS is exhaustive
        raise ValueError(f"unknown structure kind {kind!r}")

    return support_set(support, d)


def validate_support(spec: StructureSpec, support: np.ndarray, k: int, d: int) -> bool:
    """Pure predicate: does ``support`` match the class template exactly?"""
    support = np.asarray(support, dtype=np.intp)
    if support.size != k or k < 1:
        return False
    if np.any(support < 0) or np.any(support >= d):
        return False
    if np.any(np.diff(support) <= 0):
        return False
    kind = spec.kind
    diffs = np.diff(support)

    if kind == CLUSTERED:
        return bool(np.all(diffs == 1))

    if kind == SPREAD:
        sep = spec.separation if spec.separation is not None else SPREAD_DEFAULT_SEP
        return bool(np.all(diffs >= sep + 1))

    if kind == HYBRID:
        if k % 2 or k < 4:
            return False
        half = k // 2
        runs = _runs(support)
        blocks = [r for r in runs if r[1] == half]
        singles = [r for r in runs if r[1] == 1]
        if len(blocks) != 1 or len(singles) != half or len(runs) != half + 1:
            return False
        for start, _ in singles:
            others = support[support != start]
            if np.min(np.abs(others - start)) < ISOLATION_DISTANCE:
                return False
        return True

    if kind == C_CLUSTERS:
        c = spec.clusters
        if c is None or k % c:
            return False
        runs = _runs(support)
        return len(runs) == c and all(length == k // c for _, length in runs)

    if kind == ALTERNATING:
        return bool(np.all(diffs == 2))

    if kind == PAIR_SPREAD:
        if k % 2:
            return False
        a = support.reshape(-1, 2)
        if not np.all(a[:, 1] - a[:, 0] == PAIR_DIFF):
            return False
        # nearest indices of adjacent pairs must still be >= 8 apart
        return bool(np.all(a[1:, 0] - a[:-1, 1] >= ISOLATION_DISTANCE))

    if kind == UNIFORM_SEP:
        if spec.separation is None:
            return False
        return bool(np.all(diffs == spec.separation + 1))

    if kind == TWO_CLUSTER_SEP:
        if spec.separation is None or k % 2:
            return False
        half = k // 2
        start = support[0]
        template = np.concatenate(
            (start + np.arange(half), start + half + spec.separation + np.arange(half))
        )
        return bool(np.array_equal(support, template))

    return False


def draw_coefficients(support, dist: CoefficientDistribution, d: int, rng) -> np.ndarray:
    """Length-d coefficient vector, zero off ``support``, i.i.d. draws on it."""
    support = support_set(support, d)
    gen = _generator_of(rng)
    alpha = np.zeros(d, dtype=np.complex128)
    count = support.size
    if count == 0:
        return alpha
    if dist.kind == "complex_gaussian":
        values = gen.standard_normal(count) + 1j * gen.standard_normal(count)
    else:
        values = np.exp(2j * np.pi * gen.random(count))
    # a zero draw would shrink the support; probability-zero but guard anyway
    while np.any(values == 0):  # pragma: no cover
        values[values == 0] = gen.standard_normal() + 1j * gen.standard_normal()
    alpha[support] = values
    return alpha
