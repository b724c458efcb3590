import pytest

from hgc_verify import cycle_calculus as CC
from hgc_verify import divisors as Dv
from hgc_verify import local_series as L
from hgc_verify.errors import NonProperIntersectionError, UnsupportedError
from hgc_verify.local_series import Point


def test_gks_terms_signs():
    terms = CC.gks_terms(Point("c1", 0))
    assert [t.name for t in terms] == ["D123", "D12", "D23", "D13", "D1", "D2", "D3"]
    assert [t.sign for t in terms] == [1, -1, -1, -1, 1, 1, 1]


def test_alpha_fixed_points(X3, X4):
    assert set(CC.alpha_fixed_points(X3)) == {L.fixed_P(X3), L.fixed_Q(X3)}
    assert CC.alpha_fixed_points(X4) == []


@pytest.mark.parametrize("fixture", ["X3", "X5f"])
def test_pi_z_all_cusps(fixture, request):
    X = request.getfixturevalue(fixture)
    for e in L.all_cusps(X):
        total, breakdown, nonproper = CC.pi_z(X, e)
        alpha_e = L.act_on_point(CC.Automorphism.alpha(), e, X)
        expected = Dv.Divisor.sum_of([L.fixed_P(X), L.fixed_Q(X)]) - Dv.Divisor.point(alpha_e, 2)
        assert total == expected and not nonproper
        assert len(breakdown) == 7


def test_pi_z_even_n(X4):
    for e in (Point("c1", 0), Point("b", 2)):
        cert = CC.pi_z_certificate(X4, e)
        assert cert.passed
        assert cert.details["two_fixed_points"] is False


def test_pi_z_fixed_base_point(X3):
    cert = CC.pi_z_certificate(X3, L.fixed_P(X3))
    assert cert.verdict == "UNSUPPORTED"
    with pytest.raises(NonProperIntersectionError):
        CC.intersect_and_push(CC.gks_terms(L.fixed_P(X3))[-1], X3)


def test_phi_pull_push(X3):
    base = Dv.Divisor.sum_of(CC.alpha_fixed_points(X3)) - Dv.Divisor.point(Point("c1", 0), 2)
    for a, b in [(1, 1), (1, 2), (2, 1)]:
        result, cert = CC.phi_pull_push(base, X3, a, b)
        assert cert.passed
        assert result.degree() == 3 * base.degree()


def test_phi_push_needs_a_unit():
    from hgc_verify.coefficient_tower import SymbolicTower
    from hgc_verify.function_field import HypergeometricCurve
    X = HypergeometricCurve(SymbolicTower(4))
    with pytest.raises(UnsupportedError):
        CC.phi_push(Dv.Divisor.point(Point("a", 0)), X, 2, 2)


def test_galois_subgroup():
    G = CC.galois_subgroup(5, 1, 2)
    assert len(G) == 5 and all((r + 2 * s) % 5 == 0 for r, s in G)


def test_covering_map(X4):
    cert = CC.covering_map_check(X4, 2)
    assert cert.passed
    bad = CC.covering_map_check(X4, 2, exponent=1)
    assert bad.verdict == "FAIL"
