import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acutesets import kernels
from acutesets.exact import DegenerateInputError, DimensionError, QVector
from acutesets.verifier import (
    NotAcuteError,
    UpperBoundViolation,
    assert_upper_bound,
    check_triple,
    acute_size_bound,
    robustness_radius,
    upper_bound_check,
    verify_acute,
    verify_naive,
)

from conftest import qv


def random_set(rng, n, d, num=9, den=5):
    pts = set()
    while len(pts) < n:
        pts.add(QVector(Fraction(rng.randint(-num, num), rng.randint(1, den)) for _ in range(d)))
    return sorted(pts, key=lambda p: p.coords)


def test_check_triple_examples():
    assert check_triple(*qv((0, 0), (2, 0), (1, 2))) == (1, 1, 1)
    assert check_triple(*qv((0, 0), (1, 0), (0, 1)))[0] == 0
    assert check_triple(*qv((1, 0), (0, 0), (3, 1)))[0] == -1


def test_check_triple_coincident():
    with pytest.raises(DegenerateInputError):
        check_triple(*qv((0, 0), (0, 0), (1, 1)))


def test_two_points(triangle):
    rep = verify_acute(qv((0,), (1,)))
    assert rep.is_acute
    assert rep.s_value == 1
    assert rep.min_vertex_dot is None
    assert rep.triples_checked == 0


def test_triangle(triangle):
    rep = verify_acute(triangle)
    assert rep.is_acute
    assert rep.min_vertex_dot == 2
    assert rep.s_value == 2
    assert rep.triples_checked == 3
    assert rep.max_dist_sq == 5


def test_square(square):
    rep = verify_acute(square)
    assert not rep.is_acute
    assert len(rep.violations) == 4
    assert {v.apex for v in rep.violations} == {0, 1, 2, 3}
    assert all(v.dot == 0 for v in rep.violations)


def test_single_point():
    rep = verify_acute(qv((1, 2, 3)))
    assert rep.is_acute and rep.s_value is None and rep.min_vertex_dot is None


def test_errors():
    with pytest.raises(DegenerateInputError):
        verify_acute(qv((0, 0), (1, 1), (0, 0)))
    with pytest.raises(DimensionError):
        verify_acute(qv((0, 0), (1, 1, 1)))
    with pytest.raises(ValueError):
        verify_acute([])


def test_report_invariants():
    rng = random.Random(3)
    for _ in range(30):
        rep = verify_acute(random_set(rng, rng.randint(3, 12), rng.randint(1, 4)))
        assert rep.is_acute == (rep.min_vertex_dot > 0) == (not rep.violations)
        assert rep.s_value <= rep.min_vertex_dot


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 14), st.integers(1, 5))
def test_matches_naive(seed, n, d):
    pts = random_set(random.Random(seed), n, d)
    ref = verify_naive(pts)
    assert verify_acute(pts) == ref
    assert verify_acute(pts, force_bigint=True) == ref


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_permutation_invariance(seed):
    rng = random.Random(seed)
    pts = random_set(rng, rng.randint(3, 10), rng.randint(1, 4))
    a = verify_acute(pts)
    perm = pts[:]
    rng.shuffle(perm)
    b = verify_acute(perm)
    assert (a.is_acute, a.min_vertex_dot, a.s_value) == (b.is_acute, b.min_vertex_dot, b.s_value)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_translation_and_scaling(seed):
    rng = random.Random(seed)
    d = rng.randint(1, 4)
    pts = random_set(rng, rng.randint(3, 10), d)
    a = verify_acute(pts)
    t = QVector(Fraction(rng.randint(-20, 20), rng.randint(1, 7)) for _ in range(d))
    assert verify_acute([p + t for p in pts]) == a
    c = Fraction(rng.randint(1, 9), rng.randint(1, 9))
    b = verify_acute([p * c for p in pts])
    assert b.min_vertex_dot == a.min_vertex_dot * c * c
    assert b.s_value == a.s_value * c * c


def test_worker_counts_agree(fib_chain):
    pts = list(fib_chain[7].points)
    ref = verify_acute(pts, workers=1)
    assert verify_acute(pts, workers=2) == ref
    assert verify_acute(pts, workers=3) == ref


def test_bigint_path_on_tiny_margins(fib_chain):
    pts = list(fib_chain[6].points)
    assert verify_acute(pts) == verify_naive(pts)


def test_bigint_detects_violation(fib_chain):
    # nudge one point of a verified set onto a right angle's far side
    cfg = fib_chain[5]
    pts = list(cfg.points)
    rep = verify_acute(pts)
    assert rep.is_acute
    bad = pts + [pts[0] + (pts[0] - pts[1]) * Fraction(1, 10**30)]
    out = verify_acute(bad)
    assert not out.is_acute
    assert out == verify_naive(bad)


def test_kernels_agree():
    if kernels.sweep_int64_numba is None:
        pytest.skip("numba unavailable")
    rng = np.random.default_rng(0)
    for n, d in [(3, 1), (9, 2), (40, 5)]:
        P = rng.integers(-50, 50, size=(n, d))
        G = kernels.gram_int64(P)
        a = kernels.sweep_int64_numba(G, 0, n)
        b = kernels.sweep_int64_numpy(G, 0, n)
        for u, v in zip(a, b):
            assert np.array_equal(u, v)


def test_robustness_radius_triangle(triangle):
    assert robustness_radius(triangle) == Fraction(1, 12)


def test_robustness_radius_scaling():
    # scaling commutes with the integer diameter bound when diameters are integers
    X = qv((0, 0), (4, 0), (2, 3))
    assert robustness_radius([p * 2 for p in X]) == 2 * robustness_radius(X)


def test_robustness_radius_needs_acute(square):
    with pytest.raises(NotAcuteError):
        robustness_radius(square)


def test_robustness_radius_small_sets():
    assert robustness_radius(qv((5, 5))) == 1
    assert robustness_radius(qv((0,), (1,))) == Fraction(1, 8)


def perturb(points, eps, rng):
    from acutesets.exact import ceil_sqrt

    out = []
    for p in points:
        u = [rng.randint(-8, 8) for _ in range(p.dim)]
        B = ceil_sqrt(sum(a * a for a in u)) or 1
        t = Fraction(rng.randint(0, 999), 1000)
        out.append(QVector(x + a * eps * t / B for x, a in zip(p, u)))
    return out


def test_perturbation_below_radius(triangle):
    eps = robustness_radius(triangle)
    rng = random.Random(11)
    for _ in range(300):
        assert verify_acute(perturb(triangle, eps, rng)).is_acute


def test_upper_bound():
    assert acute_size_bound(1) == 2
    assert acute_size_bound(2) == 3
    assert upper_bound_check(qv((0, 0), (2, 0), (1, 2)))
    assert upper_bound_check(qv((0,), (1,)))
    four = qv((0, 0), (1, 0), (0, 1), (1, 1))
    assert not upper_bound_check(four)
    with pytest.raises(UpperBoundViolation):
        assert_upper_bound(four)
    assert not upper_bound_check(qv((0,), (1,), (2,)))
