import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hgc_verify.coefficient_tower import FiniteFieldSpec, FiniteFieldTower, SymbolicTower
from hgc_verify.function_field import (Automorphism, HypergeometricCurve, apply_automorphism,
                                       automorphism_order, format_function, galois_trace, group_elements,
                                       group_order, parse_expression)

CURVES = {}


def curve(kind, N):
    if (kind, N) not in CURVES:
        K = SymbolicTower(N) if kind == "sym" else FiniteFieldTower(FiniteFieldSpec.from_seed(N, 4))
        CURVES[kind, N] = HypergeometricCurve(K)
    return CURVES[kind, N]


def test_relation_holds(X3, X5f):
    for X in (X3, X5f):
        assert not X.encode_relation()
        y = X.y
        assert y ** X.N == (1 - X.x ** X.N) / (1 - X.const(1 - X.K.lam) * X.x ** X.N)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["sym", "ff"]), st.sampled_from([2, 3, 4]), st.integers(0, 10 ** 9))
def test_function_field_axioms(kind, N, seed):
    X = curve(kind, N)
    rng = random.Random(seed)
    f, g, h = (X.random_element(rng) for _ in range(3))
    assert f * (g + h) == f * g + f * h
    assert (f * g) * h == f * (g * h)
    if f:
        assert f * f.inverse() == X.one
        assert (g / f) * f == g


def test_norm_is_rational(X3):
    rng = random.Random(5)
    f = X3.random_element(rng)
    G, full = X3.norm(f)
    assert full.is_rational()


def test_group_action_and_orders(X3, X4):
    for X in (X3, X4):
        N = X.N
        assert apply_automorphism(Automorphism.group(1, 0), X.x) == X.const(X.K.zeta) * X.x
        assert apply_automorphism(Automorphism.group(0, 1), X.y) == X.const(X.K.zeta) * X.y
        assert automorphism_order(Automorphism.alpha(), X) == 2
        assert automorphism_order(Automorphism.swap(), X) == 2
        for r, s in [(1, 0), (1, 1), (2, N - 2), (0, 0)]:
            assert automorphism_order(Automorphism.group(r, s), X) == group_order(N, r, s)


def test_alpha_inverts_coordinates(X3):
    rho = X3.const(X3.K.rho)
    assert apply_automorphism(Automorphism.alpha(), X3.x) * rho * X3.x == X3.one
    assert apply_automorphism(Automorphism.alpha(), X3.y) * rho * X3.y == X3.one


def test_word_pullback_is_contravariant(X3):
    # (s o t)^* f = t^*(s^* f): the word applies its first part first
    s, t = Automorphism.alpha(), Automorphism.group(1, 2)
    f = X3.x + 2 * X3.y ** 2
    word = Automorphism.word(s, t)
    assert apply_automorphism(word, f) == apply_automorphism(t, apply_automorphism(s, f))
    # alpha g^{r,s} alpha = g^{-r,-s}
    conj = Automorphism.word(Automorphism.alpha(), Automorphism.group(1, 2), Automorphism.alpha())
    for h in (X3.x, X3.y, f):
        assert apply_automorphism(conj, h) == apply_automorphism(Automorphism.group(-1, -2), h)


def test_swap_commutes_with_equation(X3):
    sw = Automorphism.swap()
    assert apply_automorphism(sw, X3.x) == X3.y
    assert apply_automorphism(sw, X3.y) == X3.x


def test_galois_trace_is_invariant(X3):
    f = X3.x + X3.y ** 2 + X3.x ** 3 * X3.y ** 3
    T = galois_trace(f)
    for r, s in group_elements(3):
        assert apply_automorphism(Automorphism.group(r, s), T) == T
    with pytest.raises(ValueError):
        galois_trace(f, [(0, 0), (1, 0)])


def test_subgroup_generation():
    assert len(group_elements(6, [(2, 0)])) == 3
    assert len(group_elements(6, [(1, 5)])) == 6
    assert len(group_elements(4)) == 16


def test_text_roundtrip(X3, X5f):
    rng = random.Random(11)
    for X in (X3, X5f):
        for _ in range(10):
            f = X.random_element(rng)
            assert parse_expression(X, format_function(f)) == f
    assert X3.parse("x^3 + y^3 - zeta*xi") == X3.x ** 3 + X3.y ** 3 - X3.const(X3.K.zeta * X3.K.xi)


def test_derivative_of_relation(X3):
    # d/dx of the defining relation vanishes
    assert not X3.encode_relation().derivative()
    x = X3.x
    assert (x ** 4).derivative() == 4 * x ** 3


def test_mixed_curve(K3=None):
    K = SymbolicTower(6)
    X = HypergeometricCurve(K, A=2, B=3)
    assert not X.encode_relation()
    assert X.genus_formula() == 2
    assert X.family_size("a") == 3 and X.family_size("b") == 2
    with pytest.raises(ValueError):
        HypergeometricCurve(K, A=4, B=6)
