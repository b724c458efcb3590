"""Verification suites, certificate bundles and their JSON / markdown forms."""

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from . import __version__
from . import cycle_calculus as CC
from . import divisors as Dv
from . import forms_invariants as FI
from . import local_series as L
from . import quotients_genus as QG
from .certificate import FAIL, PASS, Certificate
from .coefficient_tower import FiniteFieldSpec, FiniteFieldTower, SymbolicTower
from .errors import ConfigurationError, InvariantViolation
from .function_field import HypergeometricCurve
from .local_series import Point

SUITES = ("cusps", "lemma", "canonical", "pi-z", "nontrivial", "invariants", "genus",
          "quotient-maps", "torsion-witnesses")

# records of this category report a disagreement with a published claim and do not gate the exit code
DISCREPANCY = "claim-discrepancy"


@dataclass
class SuiteConfig:
    N: int = 3
    backend: str = "symbolic"
    q: int = None
    lam: int = None
    xi: int = None
    seed: int = None
    suites: tuple = ("all",)
    d: int = None
    n_max: int = None
    precision_ceiling: int = None
    xi_sign: int = 1
    workers: int = 1

    def validate(self):
        if self.N < 2:
            raise ConfigurationError("N must be at least 2")
        if self.backend not in ("symbolic", "finite"):
            raise ConfigurationError(f"unknown backend {self.backend!r}")
        if self.backend == "symbolic" and any(v is not None for v in (self.q, self.lam, self.xi, self.seed)):
            raise ConfigurationError("--q, --lambda, --xi and --seed need the finite backend")
        if self.backend == "finite" and self.q is None and (self.lam is not None or self.xi is not None):
            raise ConfigurationError("--lambda and --xi need --q")
        if self.backend == "finite" and self.q is not None and self.lam is None and self.xi is None:
            raise ConfigurationError("--q needs --lambda or --xi")
        unknown = [s for s in self.suites if s != "all" and s not in SUITES]
        if unknown:
            raise ConfigurationError(f"unknown suites {unknown}; choose from {', '.join(SUITES)} or all")
        if self.d is not None and not 0 <= self.d <= self.N - 1:
            raise ConfigurationError(f"--d must lie in 0..{self.N - 1}")
        if self.xi_sign not in (1, -1):
            raise ConfigurationError("xi sign must be 1 or -1")
        self.spec()
        return self

    def spec(self):
        if self.backend != "finite":
            return None
        if self.q is not None:
            return FiniteFieldSpec(self.N, self.q, xi0=self.xi, lam0=self.lam)
        return FiniteFieldSpec.from_seed(self.N, 1 if self.seed is None else self.seed)

    def tower(self):
        return SymbolicTower(self.N) if self.backend == "symbolic" else FiniteFieldTower(self.spec())

    def curve(self):
        X = HypergeometricCurve(self.tower(), xi_sign=self.xi_sign)
        if self.precision_ceiling:
            L.set_precision_ceiling(X, self.precision_ceiling)
        return X

    def selected(self):
        """(suites to run, skipped suites with the reason)."""
        explicit = "all" not in self.suites
        wanted = [s for s in SUITES if s in self.suites] if explicit else list(SUITES)
        run, skipped = [], {}
        for s in wanted:
            why = _not_applicable(s, self.N)
            if why and explicit:
                raise ConfigurationError(f"suite {s}: {why}")
            if why:
                skipped[s] = why
            else:
                run.append(s)
        return run, skipped

    def echo(self):
        d = asdict(self)
        d["suites"] = list(self.suites)
        del d["workers"]
        spec = self.spec()
        if spec is not None:
            d["finite_field"] = spec.as_dict()
        return d


def _not_applicable(suite, N):
    if suite in ("nontrivial", "torsion-witnesses") and N % 2 == 0:
        return "needs odd N (alpha has the two fixed points P, Q only then)"
    return None


# ---------------------------------------------------------------------------
# suites


def suite_cusps(X, config):
    certs = []
    for cid, f, D in Dv.cusp_identity_claims(X):
        certs.append(Dv.verify_divisor_identity(X, f, D, cert_id=f"cusps/N{X.N}/{cid}"))
    if X.N % 2:
        f, D = Dv.x2_minus_rho_inv_claim(X)
        certs.append(Dv.verify_divisor_identity(X, f, D, cert_id=f"cusps/N{X.N}/x^2-rho^-1"))
    return certs


def suite_lemma(X, config):
    """One record per cusp family covering d = 0..D (D = N-1 unless --d is given)."""
    top = X.N - 1 if config.d is None else config.d
    certs = []
    for family in L.CUSP_FAMILIES:
        t0 = time.perf_counter()
        dims, failed, bases = [], [], {}
        for d in range(top + 1):
            res = Dv.lspace_basis(X, d, family)
            dims.append(res.dimension)
            bases[str(d)] = res.certificate.witness
            if not res.certificate.passed:
                failed.append(d)
        cert = Certificate(
            id=f"lemma/N{X.N}/{family}",
            statement=f"L(d * sum of the {family} cusps) has the monomial basis of dimension d + 1, d <= {top}",
            verdict=PASS if not failed else FAIL,
            inputs={"N": X.N, "family": family, "d_max": top},
            details={"dimensions": dims, "bases": bases, "failed_d": failed},
        )
        cert.timing_ms = (time.perf_counter() - t0) * 1000
        certs.append(cert)
    return certs


def suite_canonical(X, config):
    return [Dv.canonical_divisor(X)[1]]


def suite_pi_z(X, config):
    certs = [CC.pi_z_certificate(X, e) for e in L.all_cusps(X)]
    fixed = CC.alpha_fixed_points(X)
    base = Dv.Divisor.sum_of(fixed) - Dv.Divisor.point(Point("c1", 0), 2)
    for a, b in sorted({(1, 1), (1, X.N - 1)}):
        certs.append(CC.phi_pull_push(base, X, a, b)[1])
    for p in range(2, X.N + 1):
        if X.N % p == 0 and all(p % k for k in range(2, p)):
            certs.append(CC.covering_map_check(X, p))
    return certs


def suite_nontrivial(X, config):
    p = X.N
    return [Dv.nontriviality_certificate(X, a, b, l)
            for a in range(1, p) for b in range(1, p) for l in range(1, (p - 1) // 2 + 1)]


def suite_invariants(X, config):
    certs = []
    N = X.N
    for a in range(1, N):
        for b in range(1, N):
            for flavor in ("omega", "eta"):
                certs.append(FI.form_identity_certificate(X, a, b, flavor))
                certs.append(FI.eigen_certificate(X, a, b, flavor))
            certs.append(FI.holomorphy_check(FI.build_omega(X, a, b), f"omega^{{{a},{b}}}"))
            certs.append(FI.holomorphy_check(FI.build_eta(X, a, b), f"eta^{{{a},{b}}}", mode="second-kind"))
    certs.append(FI.holomorphic_count_certificate(X))
    for n in range(2, (config.n_max or N) + 1):
        certs.append(FI.wedge_certificate(n))
    return certs


def suite_genus(X, config):
    N = X.N
    certs = []
    for a in range(1, N):
        for b in range(1, N):
            if math.gcd(N, math.gcd(a, b)) == 1:
                certs.append(QG.quotient_genus_certificate(N, a, b))
    certs.append(QG.invariance_certificate(N))
    if N % 2 == 0:
        for which in QG.INVOLUTIONS:
            certs.append(QG.involution_quotient_genus(N, which, X.K))
        for a in range(1, N):
            if math.gcd(N, a) == 1:
                certs.append(QG.second_quotient_certificate(N, a))
    return certs


def suite_quotient_maps(X, config):
    N = X.N
    certs = [QG.verify_quotient_map(X, a, b) for a in range(1, N) for b in range(1, N)]
    for case in ("1,1", "1,N-1"):
        certs.append(QG.verify_hyperelliptic_isomorphism(X.K, case))
    certs.extend(QG.branch_permutation_certificate(m) for m in QG.LAMBDA_MODES)
    return certs


def suite_torsion_witnesses(X, config):
    """Displayed witnesses (reported), corrected witnesses and a complete search for (1, 1)."""
    p = X.N
    certs = []
    displayed = Dv.displayed_torsion_witnesses(X)
    corrected = Dv.corrected_torsion_witnesses(X)
    fixed = CC.alpha_fixed_points(X)
    base = Dv.Divisor.sum_of(fixed) - Dv.Divisor.point(Point("c1", 0), 2)
    for (a, b), f in sorted(displayed.items()):
        D = Dv.torsion_target(X, a, b)
        pulled, _ = CC.phi_pull_push(base, X, a, b)
        if pulled * p != D:
            raise InvariantViolation("orbit sum and phi^* phi_* disagree")
        c = Dv.verify_divisor_identity(
            X, f, D, cert_id=f"torsion-witnesses/p{p}/{a},{b}/displayed",
            statement=f"div({f}) = p * phi^* phi_* ([P]+[Q]-2[c1_0]) for (a,b)=({a},{b})")
        if not c.passed:
            c.category = DISCREPANCY
        certs.append(c)
        g = corrected[(a, b)]
        certs.append(Dv.verify_divisor_identity(
            X, g, D, cert_id=f"torsion-witnesses/p{p}/{a},{b}/corrected",
            statement=f"div({g}) = p * phi^* phi_* ([P]+[Q]-2[c1_0]) for (a,b)=({a},{b})"))
    D = Dv.torsion_target(X, 1, 1)
    res = Dv.witness_search(X, D)
    c = Dv.witness_certificate(X, D, cert_id=f"torsion-witnesses/p{p}/1,1/search", expect=True, result=res)
    if c.details["found"]:
        c.details["ratio_to_corrected_is_constant"] = (res.function / corrected[(1, 1)].expand(X)).is_constant()
        if not c.details["ratio_to_corrected_is_constant"] or not c.details["complete"]:
            c.verdict = FAIL
    certs.append(c)
    return certs


SUITE_FUNCTIONS = {
    "cusps": suite_cusps, "lemma": suite_lemma, "canonical": suite_canonical, "pi-z": suite_pi_z,
    "nontrivial": suite_nontrivial, "invariants": suite_invariants, "genus": suite_genus,
    "quotient-maps": suite_quotient_maps, "torsion-witnesses": suite_torsion_witnesses,
}


# ---------------------------------------------------------------------------
# bundles


@dataclass
class CertificateBundle:
    config: dict
    suites: dict  # suite name -> sorted list of Certificate
    skipped: dict = field(default_factory=dict)
    wall_time_s: float = 0.0
    tool_version: str = __version__

    def certificates(self):
        return [c for name in self.suites for c in self.suites[name]]

    def summary(self):
        out = {"pass": 0, "fail": 0, "unsupported": 0, DISCREPANCY: 0}
        for c in self.certificates():
            if c.category == DISCREPANCY and c.verdict == FAIL:
                out[DISCREPANCY] += 1
            elif c.verdict == PASS:
                out["pass"] += 1
            elif c.verdict == FAIL:
                out["fail"] += 1
            else:
                out["unsupported"] += 1
        return out

    def ok(self):
        s = self.summary()
        return s["fail"] == 0 and s["unsupported"] == 0

    def verdicts(self):
        return {c.id: c.verdict for c in self.certificates()}

    def to_dict(self, timing=True):
        d = {
            "tool": "hgc-verify",
            "tool_version": self.tool_version,
            "config": self.config,
            "summary": self.summary(),
            "skipped": self.skipped,
            "suites": {name: [c.to_dict() for c in certs] for name, certs in self.suites.items()},
        }
        if timing:
            d["wall_time_s"] = round(self.wall_time_s, 3)
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(
            config=d["config"],
            suites={k: [Certificate.from_dict(c) for c in v] for k, v in d["suites"].items()},
            skipped=d.get("skipped", {}),
            wall_time_s=d.get("wall_time_s", 0.0),
            tool_version=d.get("tool_version", __version__),
        )


def _run_one(config, name):
    X = config.curve()
    certs = SUITE_FUNCTIONS[name](X, config)
    return name, sorted(certs, key=lambda c: c.id)


def run_suite(config: SuiteConfig) -> CertificateBundle:
    """Run the selected suites; the result does not depend on the worker count."""
    config.validate()
    t0 = time.perf_counter()
    run, skipped = config.selected()
    if config.workers > 1 and len(run) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = dict(pool.map(_run_one, [config] * len(run), run))
    else:
        results = dict(_run_one(config, name) for name in run)
    bundle = CertificateBundle(config.echo(), {name: results[name] for name in run}, skipped)
    bundle.wall_time_s = time.perf_counter() - t0
    return bundle


def cross_check(config: SuiteConfig, seeds=(1,)) -> CertificateBundle:
    """Run the symbolic backend and finite specializations; add one record per verdict comparison."""
    sym = SuiteConfig(**{**asdict(config), "backend": "symbolic", "q": None, "lam": None, "xi": None,
                         "seed": None})
    bundle = run_suite(sym)
    reference = bundle.verdicts()
    checks = []
    for seed in seeds:
        fin = SuiteConfig(**{**asdict(config), "backend": "finite", "q": None, "lam": None, "xi": None,
                             "seed": seed})
        other = run_suite(fin).verdicts()
        diff = sorted(k for k in set(reference) | set(other) if reference.get(k) != other.get(k))
        checks.append(Certificate(
            id=f"cross-check/N{config.N}/seed{seed}",
            statement="symbolic and finite-field verdicts agree",
            verdict=PASS if not diff else FAIL,
            inputs={"N": config.N, "seed": seed, "finite_field": fin.spec().as_dict()},
            details={"compared": len(reference), "differences": diff},
        ))
    bundle.suites["cross-check"] = checks
    return bundle


# ---------------------------------------------------------------------------
# output


def emit_json(bundle: CertificateBundle, timing=True) -> str:
    return json.dumps(bundle.to_dict(timing), indent=2, sort_keys=True) + "\n"


def _cell(text):
    return str(text).replace("|", "\\|").replace("\n", " ")


def emit_markdown(bundle: CertificateBundle, timing=True) -> str:
    s = bundle.summary()
    lines = ["# hgc-verify certificate bundle", ""]
    lines.append(f"tool version {bundle.tool_version}")
    cfg = bundle.config
    lines.append(f"N = {cfg.get('N')}, backend {cfg.get('backend')}")
    if timing:
        lines.append(f"wall time {bundle.wall_time_s:.3f} s")
    lines += ["", "| pass | fail | unsupported | claim-discrepancy |", "|---|---|---|---|",
              f"| {s['pass']} | {s['fail']} | {s['unsupported']} | {s[DISCREPANCY]} |", ""]
    for name, why in sorted(bundle.skipped.items()):
        lines.append(f"skipped {name}: {why}")
    for name, certs in bundle.suites.items():
        lines += ["", f"## {name}", "", "| id | verdict | statement |", "|---|---|---|"]
        for c in certs:
            tag = c.verdict if c.category != DISCREPANCY else f"{c.verdict} ({DISCREPANCY})"
            lines.append(f"| {_cell(c.id)} | {tag} | {_cell(c.statement)} |")
        for c in certs:
            if c.verdict != PASS:
                lines += ["", f"### {c.id}", "", "```",
                          json.dumps(c.to_dict(), indent=2, sort_keys=True), "```"]
    return "\n".join(lines) + "\n"


def emit(bundle: CertificateBundle, fmt: str, path=None, timing=True) -> str:
    text = emit_json(bundle, timing) if fmt == "json" else emit_markdown(bundle, timing)
    if path and path != "-":
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
