import math

import pytest

from hgc_verify import quotients_genus as QG
from hgc_verify.coefficient_tower import SymbolicTower
from hgc_verify.errors import UnsupportedError


def _genus_via_cover(N, a, b):
    """Genus of X_N / G^{a,b} by Riemann-Hurwitz for the degree-N cover X_N -> C^{a,b}.

    Only cusps have nontrivial stabilizers: g^{r,0} fixes the a- and c1-cusps,
    g^{0,s} the b- and c2-cusps, so the stabilizers in G^{a,b} have orders
    gcd(a, N) and gcd(b, N).
    """
    G = [(r, s) for r in range(N) for s in range(N) if (a * r + b * s) % N == 0]
    stab_ac = sum(1 for r, s in G if s == 0)
    stab_bc = sum(1 for r, s in G if r == 0)
    ramification = 2 * N * (stab_ac - 1) + 2 * N * (stab_bc - 1)
    chi = 2 * (N - 1) ** 2 - 2 - ramification
    assert chi % len(G) == 0
    return chi // len(G) // 2 + 1


@pytest.mark.parametrize("N", range(2, 8))
def test_genus_matches_cover_oracle(N):
    for a in range(1, N):
        for b in range(1, N):
            if math.gcd(N, math.gcd(a, b)) != 1:
                continue
            g = QG.cyclic_cover_genus(QG.SuperellipticModel.quotient(N, a, b))
            assert g == _genus_via_cover(N, a, b), (N, a, b)


def test_riemann_hurwitz_examples():
    # y^2 = x(x-1)(x-lambda): genus 1
    assert QG.cyclic_cover_genus(QG.SuperellipticModel(2, 1, 1, 1)) == 1
    assert QG.cyclic_cover_genus(QG.SuperellipticModel(3, 1, 1, 1)) == 1
    assert QG.cyclic_cover_genus(QG.SuperellipticModel(1, 0, 0, 0)) == 0
    with pytest.raises(ValueError):
        QG.cyclic_cover_genus(QG.SuperellipticModel(4, 2, 2, 2))


@pytest.mark.parametrize("N", range(2, 8))
def test_invariance(N):
    assert QG.invariance_certificate(N).passed


def test_hyperelliptic_classification():
    for N in (3, 5, 7):
        assert QG.hyperelliptic_classification(N, 1, 1)
        assert QG.hyperelliptic_classification(N, 1, N - 1)
    with pytest.raises(UnsupportedError):
        QG.hyperelliptic_classification(6, 2, 1)
    rows = QG.genus_table(5)
    assert len(rows) == 16 and all(g == 4 for _, _, g, _ in rows)


@pytest.mark.parametrize("N", [4, 6])
def test_involution_quotients(N):
    for which in ("i", "ii"):
        cert = QG.involution_quotient_genus(N, which)
        assert cert.passed
        assert cert.details["riemann-hurwitz"] == cert.details["model-route"] == (N // 2 - 1) * (N - 1)
    assert QG.involution_quotient_genus(N, "iii").passed


def test_second_quotient():
    assert QG.second_quotient_certificate(4, 1).passed


def test_quotient_maps_and_negative_control(X3):
    for a in (1, 2):
        for b in (1, 2):
            assert QG.verify_quotient_map(X3, a, b).passed
    assert QG.verify_quotient_map(X3, 1, 1, v_exponents=(1, 1, 1)).verdict == "FAIL"


def test_hyperelliptic_models():
    K = SymbolicTower(3)
    for case in ("1,1", "1,N-1"):
        assert QG.verify_hyperelliptic_isomorphism(K, case).passed
        assert QG.verify_hyperelliptic_isomorphism(K, case, perturb=1).verdict == "FAIL"


def test_moebius_algebra():
    K = SymbolicTower(2)
    one, zero = K.one, K.zero
    T = QG.MoebiusMap(one, one, zero, one)  # u -> u + 1
    S = QG.MoebiusMap(zero, one, one, zero)  # u -> 1/u
    assert T.compose(T.inverse()).is_identity()
    assert S.compose(S).is_identity()
    assert T.compose(S) != S.compose(T)
    assert QG.MoebiusMap(one * 2, one * 2, zero, one * 2) == T


@pytest.mark.parametrize("mode", QG.LAMBDA_MODES)
def test_branch_permutations(mode):
    cert = QG.branch_permutation_certificate(mode)
    assert cert.passed, cert.details
    expected = {"generic": 4, "-1": 8, "1/2": 8, "2": 8, "zeta6": 12, "zeta6^-1": 12}[mode]
    assert cert.details["stabilizer_order"] == expected
