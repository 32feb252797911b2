import numpy as np
import pytest

from sigspace.model import SeededRng
from sigspace.signals import (
    COMPLEX_GAUSSIAN,
    UNIT_MODULUS,
    StructureSpec,
    draw_coefficients,
    generate_support,
    parse_structure,
    validate_support,
)

D_DIM = 1024
K = 8

ALL_SPECS = [
    StructureSpec.clustered(),
    StructureSpec.spread(),
    StructureSpec.hybrid(),
    StructureSpec.c_clusters(2),
    StructureSpec.c_clusters(4),
    StructureSpec.alternating(),
    StructureSpec.pair_spread(),
    StructureSpec.uniform_sep(3),
    StructureSpec.two_cluster_sep(5),
]


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.label())
def test_generated_supports_validate(spec):
    for seed in range(150):
        sup = generate_support(spec, K, D_DIM, SeededRng(seed, (1,)))
        assert sup.size == K
        assert validate_support(spec, sup, K, D_DIM), f"{spec.label()} seed {seed}: {sup}"


def test_clustered_is_one_run_with_uniform_start_range():
    starts = set()
    for seed in range(500):
        sup = generate_support(StructureSpec.clustered(), K, D_DIM, SeededRng(seed))
        assert np.array_equal(sup, sup[0] + np.arange(K))
        starts.add(int(sup[0]))
    assert min(starts) < 30
    assert max(starts) > D_DIM - K - 30


def test_alternating_spans_2k_minus_1():
    sup = generate_support(StructureSpec.alternating(), K, D_DIM, SeededRng(3))
    assert sup[-1] - sup[0] == 2 * K - 2
    assert np.all(np.diff(sup) == 2)


def test_hybrid_block_plus_isolated_singletons():
    for seed in range(50):
        sup = generate_support(StructureSpec.hybrid(), K, D_DIM, SeededRng(seed, (2,)))
        diffs = np.diff(sup)
        # exactly one run of k/2 consecutive
        runs = np.split(sup, np.flatnonzero(diffs > 1) + 1)
        lengths = sorted(len(r) for r in runs)
        assert lengths == [1, 1, 1, 1, 4]
        singles = [r[0] for r in runs if len(r) == 1]
        for s in singles:
            others = sup[sup != s]
            assert np.min(np.abs(others - s)) >= 8


def test_validate_clustered_examples():
    spec = StructureSpec.clustered()
    assert validate_support(spec, np.arange(10, 18), K, D_DIM)
    bad = np.array([10, 11, 12, 13, 14, 15, 16, 20])
    assert not validate_support(spec, bad, K, D_DIM)


def test_validate_c_clusters_examples():
    spec = StructureSpec.c_clusters(2)
    two_runs = np.array([5, 6, 7, 8, 10, 11, 12, 13])  # gap of one zero
    assert validate_support(spec, two_runs, K, D_DIM)
    uneven = np.array([5, 6, 7, 10, 11, 12, 13, 14])  # runs of 3 and 5
    assert not validate_support(spec, uneven, K, D_DIM)


def test_validate_pair_spread_examples():
    spec = StructureSpec.pair_spread()
    pairs = np.array([5, 8, 100, 103, 300, 303, 700, 703])
    assert validate_support(spec, pairs, K, D_DIM)
    # wrong intra-pair distance
    assert not validate_support(spec, np.array([5, 9, 100, 104, 300, 304, 700, 704]), K, D_DIM)
    # pairs too close together
    crowded = np.array([5, 8, 12, 15, 300, 303, 700, 703])
    assert not validate_support(spec, crowded, K, D_DIM)


def test_validate_uniform_and_two_cluster_separation():
    assert validate_support(StructureSpec.uniform_sep(0), np.arange(40, 48), K, D_DIM)
    assert validate_support(
        StructureSpec.uniform_sep(3), 40 + 4 * np.arange(8), K, D_DIM
    )
    two = np.concatenate((np.arange(40, 44), np.arange(49, 53)))
    assert validate_support(StructureSpec.two_cluster_sep(5), two, K, D_DIM)
    assert not validate_support(StructureSpec.two_cluster_sep(4), two, K, D_DIM)
    merged = np.arange(40, 48)
    assert validate_support(StructureSpec.two_cluster_sep(0), merged, K, D_DIM)


def test_generate_infeasible_raises():
    with pytest.raises(ValueError):
        generate_support(StructureSpec.spread(), 8, 40, SeededRng(0))
    with pytest.raises(ValueError):
        generate_support(StructureSpec.c_clusters(3), 8, D_DIM, SeededRng(0))
    with pytest.raises(ValueError):
        generate_support(StructureSpec.uniform_sep(), 8, D_DIM, SeededRng(0))


def test_spread_minimum_gaps():
    for seed in range(100):
        sup = generate_support(StructureSpec.spread(), K, D_DIM, SeededRng(seed, (3,)))
        assert np.min(np.diff(sup)) >= 9  # 8 zeros between nonzeros


def test_draw_coefficients_support_and_zeros():
    sup = np.array([3, 77, 500])
    alpha = draw_coefficients(sup, COMPLEX_GAUSSIAN, D_DIM, SeededRng(5))
    assert np.array_equal(np.flatnonzero(alpha), sup)
    empty = draw_coefficients(np.array([], dtype=int), COMPLEX_GAUSSIAN, D_DIM, SeededRng(5))
    assert not empty.any()


def test_draw_coefficients_gaussian_second_moment():
    rng = SeededRng(1234)
    sup = np.arange(100)
    total = []
    for i in range(100):
        alpha = draw_coefficients(sup, COMPLEX_GAUSSIAN, 128, rng.child(i))
        total.append(np.abs(alpha[sup]) ** 2)
    mean_sq = float(np.mean(total))
    assert 1.8 < mean_sq < 2.2


def test_draw_coefficients_unit_modulus():
    alpha = draw_coefficients(np.arange(50), UNIT_MODULUS, 128, SeededRng(8))
    assert np.allclose(np.abs(alpha[:50]), 1.0)


def test_determinism_per_stream():
    spec = StructureSpec.pair_spread()
    a = generate_support(spec, K, D_DIM, SeededRng(42, (7,)))
    b = generate_support(spec, K, D_DIM, SeededRng(42, (7,)))
    assert np.array_equal(a, b)


def test_parse_structure_round_trip():
    assert parse_structure("clustered") == StructureSpec.clustered()
    assert parse_structure("c_clusters:4") == StructureSpec.c_clusters(4)
    assert parse_structure("uniform_sep:3") == StructureSpec.uniform_sep(3)
    assert parse_structure("spread") == StructureSpec.spread()
    with pytest.raises(ValueError):
        parse_structure("c_clusters")
    with pytest.raises(ValueError):
        parse_structure("banded")
    for spec in ALL_SPECS:
        assert parse_structure(spec.label()) == spec
