import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hgc_verify import local_series as L
from hgc_verify.coefficient_tower import FiniteFieldSpec, FiniteFieldTower, SymbolicTower
from hgc_verify.errors import UnsupportedError
from hgc_verify.function_field import Automorphism, HypergeometricCurve, apply_automorphism
from hgc_verify.local_series import LaurentSeries, Point

CURVES = {}


def curve(kind, N):
    if (kind, N) not in CURVES:
        K = SymbolicTower(N) if kind == "sym" else FiniteFieldTower(FiniteFieldSpec.from_seed(N, 5))
        CURVES[kind, N] = HypergeometricCurve(K)
    return CURVES[kind, N]


def points(X):
    pts = L.all_cusps(X)
    if X.N % 2:
        pts += [L.fixed_P(X), L.fixed_Q(X)]
    return pts


def test_cusp_count_and_coordinates(X3, X4, X5f):
    for X in (X3, X4, X5f):
        cusps = L.all_cusps(X)
        assert len(cusps) == 4 * X.N and len(set(cusps)) == 4 * X.N
        for pt in cusps:
            x0, y0 = L.coordinates(X, pt)
            if x0 is not None and y0 is not None:
                assert not X.defining_polynomial_value(x0, y0)


def test_fixed_points_on_curve(X3):
    for pt in (L.fixed_P(X3), L.fixed_Q(X3)):
        x0, y0 = L.coordinates(X3, pt)
        assert not X3.defining_polynomial_value(x0, y0)
        assert x0 * y0 * X3.K.rho == -X3.K.one


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([("sym", 3), ("ff", 3), ("ff", 4), ("ff", 5)]), st.integers(0, 10 ** 9))
def test_valuation_axioms(curve_key, seed):
    X = curve(*curve_key)
    rng = random.Random(seed)
    f, g = X.random_element(rng, degree=1), X.random_element(rng, degree=1)
    pt = rng.choice(points(X))
    if not f or not g:
        return
    a, b = L.ord_at(f, pt), L.ord_at(g, pt)
    assert L.ord_at(f * g, pt) == a + b
    assert L.ord_at(f.inverse(), pt) == -a
    if f + g:
        c = L.ord_at(f + g, pt)
        assert c >= min(a, b)
        if a != b:
            assert c == min(a, b)
    assert L.ord_at(X.const(X.K.from_int(7)), pt) == 0


def test_ord_of_coordinates(X3):
    N = X3.N
    for i in range(N):
        assert L.ord_at(X3.x, Point("a", i)) == 1
        assert L.ord_at(X3.y, Point("b", i)) == 1
        assert L.ord_at(X3.x, Point("c2", i)) == 0
        assert L.ord_at(X3.x - X3.const(X3.K.zeta_power(i)), Point("b", i)) == N
    # x has simple poles along c1 (x is a local parameter there up to units)
    assert L.ord_at(X3.x, Point("c1", 0)) == -1


def test_degree_zero(X3, X5f):
    for X in (X3, X5f):
        N = X.N
        # every zero and pole of these functions is a cusp
        f = X.x ** 2 * (1 - X.x ** N) / (X.y ** 3 * (X.x - X.const(X.K.zeta_power(1))))
        assert sum(L.ord_at(f, pt) for pt in L.all_cusps(X)) == 0
        assert sum(L.ord_at(X.y, pt) for pt in L.all_cusps(X)) == 0


def test_act_on_point_compatibility(X3, X4):
    for X in (X3, X4):
        f = X.x + 2 * X.y + X.x * X.y ** 2
        sigmas = [Automorphism.group(1, 0), Automorphism.group(0, 1), Automorphism.swap()]
        if X.N % 2:
            sigmas.append(Automorphism.alpha())
        for sigma in sigmas:
            g = apply_automorphism(sigma, f)
            for pt in points(X):
                assert L.ord_at(g, pt) == L.ord_at(f, L.act_on_point(sigma, pt, X))


def test_residues(X3):
    # dx/x has residue 1 at every a-cusp (x is a local parameter there)
    for i in range(3):
        assert L.residue_at(1 / X3.x, Point("a", i)) == X3.K.one
    # residue of an exact form vanishes
    f = X3.y / X3.x ** 2
    assert not L.residue_at(f.derivative(), Point("a", 0))


def test_series_arithmetic():
    K = SymbolicTower(3)
    zero, one = K.zero, K.one
    s = LaurentSeries(0, [one, one], 6, zero)  # 1 + t
    inv = s.inverse()
    prod = s * inv
    assert prod.valuation() == 0 and prod.coefficient(0) == one
    assert all(not prod.coefficient(e) for e in range(1, prod.prec))
    # square root of 1 + t to 8 terms
    r, history = L.newton_nth_root([one, one], 2, 8, one, zero)
    sq = LaurentSeries(0, r, 8, zero) * LaurentSeries(0, r, 8, zero)
    assert sq.coefficient(0) == one and sq.coefficient(1) == one
    assert all(not sq.coefficient(e) for e in range(2, 8))
    assert history[-1] >= 8


def test_expand_at_precision(X3):
    s = L.expand_at(X3.y / (1 + X3.x), Point("b", 0), precision=5)
    assert s.valuation() == 1
    assert s.relative_precision() is None or s.relative_precision() >= 5


def test_precision_ceiling_is_enforced():
    X = HypergeometricCurve(SymbolicTower(3))
    L.set_precision_ceiling(X, 2)
    from hgc_verify.errors import PrecisionExhausted
    with pytest.raises(PrecisionExhausted):
        # cancellation to high order needs more precision than allowed
        L.ord_at((X.x - X.const(X.K.zeta_power(0))) ** 3, Point("b", 0))


def test_partial_group_action_on_mixed_curve():
    X = HypergeometricCurve(SymbolicTower(6), A=2, B=3)
    with pytest.raises(UnsupportedError):
        L.act_on_point(Automorphism.group(0, 1), Point("a", 0), X)
    assert L.act_on_point(Automorphism.group(0, 2), Point("a", 0), X) == Point("a", 1)
