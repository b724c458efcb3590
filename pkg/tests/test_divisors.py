import pytest

from hgc_verify import divisors as Dv
from hgc_verify import local_series as L
from hgc_verify.errors import UnsupportedError
from hgc_verify.local_series import Point


def pt(kind, i=None):
    return Point(kind, i)


def test_divisor_arithmetic():
    D = Dv.Divisor.point(pt("a", 0), 2) - Dv.Divisor.point(pt("b", 1))
    assert D.degree() == 1
    assert (D - D) == Dv.Divisor() and not (D - D)
    assert (D * 3)[pt("a", 0)] == 6
    assert D.positive_part() - D.negative_part() == D
    assert not D.is_effective() and D.positive_part().is_effective()
    assert str(Dv.Divisor()) == "0"


def test_basic_divisors(X3):
    K = X3.K
    D = Dv.div_factored(X3, Dv.x_minus(K, K.one))
    assert D == Dv.Divisor.point(pt("b", 0), 3) - Dv.cusp_family(X3, "c1")
    D = Dv.div_factored(X3, Dv.y_minus(K, K.rho_inv))
    assert D == Dv.Divisor.point(pt("c1", 0), 3) - Dv.cusp_family(X3, "c2")
    assert Dv.div_factored(X3, Dv.x_minus(K, K.from_int(5))).degree() == 0


def test_identity_negative_control(X3):
    K = X3.K
    f = Dv.x_minus(K, K.one)
    wrong = Dv.Divisor.point(pt("b", 0), 2) - Dv.cusp_family(X3, "c1")
    cert = Dv.verify_divisor_identity(X3, f, wrong)
    assert cert.verdict == "FAIL"
    assert cert.details["difference"] == {"b_0": 1}


@pytest.mark.parametrize("fixture", ["X3", "X5f"])
def test_cusp_identities(fixture, request):
    X = request.getfixturevalue(fixture)
    claims = Dv.cusp_identity_claims(X)
    assert len(claims) == 4 * X.N + 3 * X.N ** 2
    for cid, f, D in claims[:: max(1, len(claims) // 12)]:
        assert Dv.verify_divisor_identity(X, f, D, cert_id=cid).passed, cid


def test_x2_minus_rho_inv(X3):
    f, D = Dv.x2_minus_rho_inv_claim(X3)
    assert Dv.verify_divisor_identity(X3, f, D).passed


@pytest.mark.parametrize("fixture", ["X3", "X4"])
def test_canonical_divisor(fixture, request):
    X = request.getfixturevalue(fixture)
    D, cert = Dv.canonical_divisor(X)
    assert cert.passed
    assert D.degree() == 2 * (X.N - 1) ** 2 - 2


def test_lspace(X3):
    for family in L.CUSP_FAMILIES:
        res = Dv.lspace_basis(X3, 2, family)
        assert res.certificate.passed and res.dimension == 3


def test_witness_search_positive_and_negative(X3):
    D = (Dv.Divisor.point(pt("b", 0)) - Dv.Divisor.point(pt("c2", 0))) * 3
    res = Dv.witness_search(X3, D)
    assert res.complete and res.function is not None
    assert Dv.Divisor({p: L.ord_at(res.function, p) for p in L.all_cusps(X3)}) == D
    # [b_0] - [c2_0] itself is not principal on a curve of positive genus
    res1 = Dv.witness_search(X3, D * 0 + Dv.Divisor.point(pt("b", 0)) - Dv.Divisor.point(pt("c2", 0)))
    assert res1.complete and res1.function is None
    with pytest.raises(ValueError):
        Dv.witness_search(X3, Dv.Divisor.point(pt("b", 0)))


def test_torsion_orders(X3):
    certs = Dv.torsion_order_table(X3, [(pt("b", 0), pt("c2", 0)), (pt("b", 0), pt("b", 1)),
                                        (pt("a", 0), pt("b", 0))])
    assert all(c.passed for c in certs)
    assert certs[0].details["order"] == 3


def test_nontriviality_small(X3):
    for a in (1, 2):
        for b in (1, 2):
            c = Dv.nontriviality_certificate(X3, a, b, 1)
            assert c.passed, c.details


def test_torsion_witness_variants(X3):
    target = Dv.torsion_target(X3, 1, 1)
    assert target.degree() == 0
    displayed = Dv.displayed_torsion_witnesses(X3)
    corrected = Dv.corrected_torsion_witnesses(X3)
    for key in displayed:
        D = Dv.torsion_target(X3, *key)
        assert not Dv.verify_divisor_identity(X3, displayed[key], D).passed
        assert Dv.verify_divisor_identity(X3, corrected[key], D).passed


def test_unresolved_cluster_is_unsupported(X3):
    cluster = Point("cluster", label="x^2-2", degree=6)
    with pytest.raises(UnsupportedError):
        Dv.witness_search(X3, Dv.Divisor.point(cluster) - Dv.Divisor.point(pt("a", 0), 6))
