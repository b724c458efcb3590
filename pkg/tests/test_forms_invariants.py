import itertools
import math

import pytest

from hgc_verify import forms_invariants as FI
from hgc_verify import local_series as L
from hgc_verify.function_field import Automorphism


def test_character_arithmetic():
    chi = FI.Character(1, 2, 5)
    assert chi.exponent(1, 1) == 3
    assert (chi * FI.Character(4, 3, 5)).is_trivial_on([(1, 0), (0, 1)])
    assert FI.Character(2, 2, 4).is_trivial_on([(1, 3)])
    assert not FI.Character(1, 0, 4).is_trivial_on([(1, 0)])


def test_eigen_basis_size():
    for N in (2, 3, 5):
        assert len(FI.eigen_basis(N)) == 2 * (N - 1) ** 2


def test_dx_dy_roundtrip(X3):
    w = FI.DifferentialForm(X3.x * X3.y)
    assert FI.DifferentialForm.from_dy(w.to_dy()).f == w.f


@pytest.mark.parametrize("a,b", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_omega_eta_structure(X3, a, b):
    assert FI.form_identity_certificate(X3, a, b, "omega").passed
    assert FI.form_identity_certificate(X3, a, b, "eta").passed
    assert FI.eigen_certificate(X3, a, b, "omega").passed
    assert FI.eigen_certificate(X3, a, b, "eta").passed
    assert FI.holomorphy_check(FI.build_omega(X3, a, b), "omega").passed
    assert FI.holomorphy_check(FI.build_eta(X3, a, b), "eta", mode="second-kind").passed


def test_holomorphy_negative_control(X3):
    # dx itself has poles of order 2 at the c1 cusps
    cert = FI.holomorphy_check(FI.DifferentialForm(X3.one), "dx")
    assert cert.verdict == "FAIL"
    assert cert.details["pole_orders"] == {"c1_0": -2, "c1_1": -2, "c1_2": -2}


def test_pullback_of_forms(X3):
    w = FI.build_omega(X3, 1, 2)
    pulled = FI.pullback_form(Automorphism.group(1, 1), w)
    # g^{r,s} acts on omega^{a,b} by zeta^(a r + b s)
    assert pulled.f == w.f * X3.const(X3.K.zeta_power(1 * 1 + 2 * 1))
    pulled = FI.pullback_form(Automorphism.group(1, 0), w)
    assert pulled.f == w.f * X3.const(X3.K.zeta_power(1 * 1 + 2 * 0))
    assert pulled.f != w.f
    twice = FI.pullback_form(Automorphism.alpha(), FI.pullback_form(Automorphism.alpha(), w))
    assert twice.f == w.f


def test_holomorphic_count(X3, X4):
    for X in (X3, X4):
        assert FI.holomorphic_count_certificate(X).passed
        assert FI.canonical_degree(X) == 2 * (X.N - 1) ** 2 - 2


def _brute_force_wedge(N):
    # characters chi^{a,b}, each 2-dimensional; count invariant 3-subsets of a basis of eigenvectors
    basis = [(a, b, k) for a in range(1, N) for b in range(1, N) for k in range(2)]
    count = 0
    for trip in itertools.combinations(basis, 3):
        if sum(t[0] for t in trip) % N == 0 and sum(t[1] for t in trip) % N == 0:
            count += 1
    return count


@pytest.mark.parametrize("N,expected", [(2, 0), (3, 0), (4, 40), (5, 160), (6, 504)])
def test_wedge_dimensions(N, expected):
    res = FI.wedge_invariant_dim(N)
    assert res.dimension == expected
    assert len(set(res.routes.values())) == 1
    assert _brute_force_wedge(N) == expected
    assert FI.wedge_certificate(N).passed


def test_wedge_subgroup():
    # invariants under the trivial subgroup are the whole exterior power
    res = FI.wedge_invariant_dim(3, subgroup=[(0, 0)])
    assert res.dimension == math.comb(8, 3)


def test_residues_of_eta_vanish(X3):
    eta = FI.build_eta(X3, 1, 2)
    for pt in L.all_cusps(X3):
        assert not eta.residue_at(pt)
