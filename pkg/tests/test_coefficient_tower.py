import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hgc_verify.coefficient_tower import (FiniteFieldSpec, FiniteFieldTower, LayeredScalar, SymbolicTower,
                                          cyclotomic_polynomial, euler_phi, make_tower, rational_root,
                                          specialize)
from hgc_verify.errors import BackendMismatchError, ConfigurationError, UndecidedRootError

_TOWERS = {}


def tower(kind, N):
    key = (kind, N)
    if key not in _TOWERS:
        _TOWERS[key] = SymbolicTower(N) if kind == "sym" else FiniteFieldTower(FiniteFieldSpec.from_seed(N, 3))
    return _TOWERS[key]


@pytest.mark.parametrize("n", range(1, 31))
def test_cyclotomic_matches_sympy(n):
    x = sympy.Symbol("x")
    expected = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_polynomial(n)) == [int(c) for c in expected]
    assert euler_phi(n) == sympy.totient(n)


def test_rational_root():
    assert rational_root(Fraction(-8, 27), 3) == Fraction(-2, 3)
    assert rational_root(Fraction(16, 81), 4) == Fraction(2, 3)
    assert rational_root(Fraction(2), 2) is None
    assert rational_root(Fraction(-4), 2) is None


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["sym", "ff"]), st.sampled_from([2, 3, 4, 5, 6]), st.integers(0, 10 ** 9))
def test_field_axioms(kind, N, seed):
    K = tower(kind, N)
    rng = random.Random(seed)
    a, b, c = (K.random_element(rng) for _ in range(3))
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + K.zero == a and a * K.one == a
    assert a - a == K.zero
    if a:
        assert a * a.inverse() == K.one
        assert (b / a) * a == b


def test_zeta_and_xi_relations():
    for N in (2, 3, 4, 5, 6):
        K = SymbolicTower(N)
        assert K.zeta ** N == K.one
        for d in range(1, N):
            if N % d == 0:
                assert K.zeta ** d != K.one
        assert K.xi ** (2 * N) * (K.one - K.lam) == K.one
        assert K.rho * K.rho_inv == K.one


def test_conjugate_xi_fixes_lambda(K3):
    assert K3.lam.conjugate_xi() == K3.lam
    assert K3.xi.conjugate_xi() == -K3.xi


def test_nth_root(K3):
    a = (K3.xi + 3) ** 3 * (-8)
    r = K3.nth_root(a, 3)
    assert r is not None and r ** 3 == a
    assert K3.nth_root(K3.xi, 2) is None
    # only roots of the form (root of unity) * rational are decided
    with pytest.raises(UndecidedRootError):
        K3.nth_root(K3.from_int(2), 2)


def test_specialize_is_a_ring_map():
    K = SymbolicTower(5)
    F = FiniteFieldTower(FiniteFieldSpec.from_seed(5, 1))
    rng = random.Random(1)
    for _ in range(50):
        a, b = K.random_element(rng), K.random_element(rng)
        assert specialize(a * b, F) == specialize(a, F) * specialize(b, F)
        assert specialize(a + b, F) == specialize(a, F) + specialize(b, F)
    assert specialize(K.zeta, F) ** 5 == 1
    assert specialize(K.lam, F) == F.lam


def test_layered_roundtrip():
    K = SymbolicTower(3)
    rng = random.Random(2)
    for _ in range(20):
        a = K.random_element(rng)
        assert LayeredScalar.from_tower(a).to_tower(K) == a


def test_finite_spec_validation():
    spec = FiniteFieldSpec.from_seed(3, 1)
    assert (spec.q - 1) % 6 == 0
    assert pow(spec.xi0, 6, spec.q) * (1 - spec.lam0) % spec.q == 1
    with pytest.raises(ConfigurationError):
        FiniteFieldSpec(3, 15, xi0=2)
    with pytest.raises(ConfigurationError):
        FiniteFieldSpec(3, 11, xi0=2)
    with pytest.raises(ConfigurationError):
        FiniteFieldSpec(3, 13)
    assert FiniteFieldSpec.from_seed(4, 9).as_dict() == FiniteFieldSpec.from_seed(4, 9).as_dict()


def test_backend_mixing_is_rejected():
    F1 = FiniteFieldTower(FiniteFieldSpec.from_seed(3, 1))
    F2 = FiniteFieldTower(FiniteFieldSpec.from_seed(3, 2))
    with pytest.raises(BackendMismatchError):
        F1.one + F2.one
    K, K2 = SymbolicTower(3), SymbolicTower(3)
    with pytest.raises(BackendMismatchError):
        K.coerce(K2.one)


def test_make_tower():
    assert isinstance(make_tower(4), SymbolicTower)
    with pytest.raises(ConfigurationError):
        make_tower(4, "finite")
    with pytest.raises(ConfigurationError):
        make_tower(4, "ff")
