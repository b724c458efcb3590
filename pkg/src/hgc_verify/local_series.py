"""Points of X_{N,lambda}, local parameters and truncated Laurent expansions.

At every point one coordinate (or its reciprocal, or its offset) is a local
parameter ``t`` and the other coordinate ``D`` satisfies ``D^N = A(t)/B(t)``
with ``A(0)/B(0) = D0^N != 0``.  ``D`` is lifted from ``D0`` by Newton
iteration on ``R^N = S`` where ``S = A/(B D0^N)``; each step doubles the
number of correct terms.
"""

from dataclasses import dataclass

from . import polynomials as P
from .errors import InvariantViolation, PrecisionExhausted, UnsupportedError
from .function_field import Automorphism, CurveFunction, HypergeometricCurve

CUSP_FAMILIES = ("a", "b", "c1", "c2")


@dataclass(frozen=True)
class Point:
    """A point of the curve: cusp, fixed point of alpha, affine point or a labelled cluster.

    A cluster stands for all geometric points of a closed point whose
    coordinates do not lie in the scalar tower; ``degree`` counts them.
    """

    kind: str
    index: int = None
    x: object = None
    y: object = None
    label: str = None
    degree: int = 1

    def __str__(self):
        if self.kind in CUSP_FAMILIES:
            return f"{self.kind}_{self.index}"
        if self.kind in ("P", "Q"):
            return self.kind
        if self.kind == "cluster":
            return f"[{self.label}]"
        return f"({self.x}, {self.y})"

    def sort_key(self):
        order = {"a": 0, "b": 1, "c1": 2, "c2": 3, "P": 4, "Q": 5, "affine": 6, "cluster": 7}
        return (order[self.kind], self.index if self.index is not None else -1, str(self))

    @property
    def is_cusp(self):
        return self.kind in CUSP_FAMILIES


def _size(X, family):
    return X.family_size(family) if hasattr(X, "family_size") else X.N


def cusp(X: HypergeometricCurve, family: str, i: int) -> Point:
    if family not in CUSP_FAMILIES:
        raise ValueError(f"unknown cusp family {family!r}")
    return Point(family, i % _size(X, family))


def all_cusps(X: HypergeometricCurve):
    return [Point(f, i) for f in CUSP_FAMILIES for i in range(_size(X, f))]


def fixed_P(X):
    return Point("P")


def fixed_Q(X):
    return Point("Q")


def coordinates(X: HypergeometricCurve, pt: Point):
    """Affine coordinates ``(x0, y0)``; ``None`` marks a coordinate at infinity."""
    K = X.K
    A, B = X.A, X.B
    if pt.kind == "a":
        return K.zero, X.zeta_k(B, pt.index)
    if pt.kind == "b":
        return X.zeta_k(A, pt.index), K.zero
    if pt.kind == "c1":
        return None, X.rho_inv_k(B) * X.zeta_k(B, pt.index)
    if pt.kind == "c2":
        return X.rho_inv_k(A) * X.zeta_k(A, pt.index), None
    if pt.kind == "P":
        return X.xi_P, -X.xi_P
    if pt.kind == "Q":
        return -X.xi_P, X.xi_P
    if pt.kind == "affine":
        return pt.x, pt.y
    raise UnsupportedError(f"no coordinates for {pt}")


def _root_index(X, value, scale, k=None):
    """i with value == scale * zeta_k^i, or None."""
    k = k or X.N
    for i in range(k):
        if value == scale * X.zeta_k(k, i):
            return i
    return None


def affine_point(X: HypergeometricCurve, x0, y0) -> Point:
    """Validated, canonical point with finite coordinates."""
    if X.defining_polynomial_value(x0, y0):
        raise ValueError(f"({x0}, {y0}) is not on the curve")
    K = X.K
    if not x0:
        return Point("a", _root_index(X, y0, K.one, X.B))
    if not y0:
        return Point("b", _root_index(X, x0, K.one, X.A))
    if X.xi_P is None:
        return Point("affine", None, x0, y0)
    if x0 == X.xi_P and y0 == -X.xi_P:
        return Point("P")
    if x0 == -X.xi_P and y0 == X.xi_P:
        return Point("Q")
    return Point("affine", None, x0, y0)


def point_at(X, x0, y0) -> Point:
    """Like :func:`affine_point` but ``None`` coordinates name the c-cusps."""
    if x0 is None:
        return Point("c1", _root_index(X, y0, X.rho_inv_k(X.B), X.B))
    if y0 is None:
        return Point("c2", _root_index(X, x0, X.rho_inv_k(X.A), X.A))
    return affine_point(X, x0, y0)


def act_on_point(sigma: Automorphism, pt: Point, X: HypergeometricCurve) -> Point:
    """Image of a point under an automorphism (words act right to left)."""
    N, K = X.N, X.K
    if sigma.kind == "word":
        for part in reversed(sigma.params):
            pt = act_on_point(part, pt, X)
        return pt
    if pt.kind == "cluster":
        raise UnsupportedError("automorphisms do not act on unresolved clusters")
    if sigma.kind == "group":
        r, s = sigma.params
        if pt.kind in CUSP_FAMILIES:
            k = _size(X, pt.kind)
            shift = s if pt.kind in ("a", "c1") else r
            if (shift * k) % N:
                raise UnsupportedError(f"{sigma} is not an automorphism of {X}")
            return Point(pt.kind, (pt.index + shift * k // N) % k)
        x0, y0 = coordinates(X, pt)
        return affine_point(X, K.zeta_power(r) * x0, K.zeta_power(s) * y0)
    if sigma.kind == "alpha":
        swap = {"a": "c1", "c1": "a", "b": "c2", "c2": "b"}
        if pt.kind in swap:
            return Point(swap[pt.kind], (-pt.index) % _size(X, pt.kind))
        x0, y0 = coordinates(X, pt)
        return affine_point(X, 1 / (K.rho * x0), 1 / (K.rho * y0))
    if sigma.kind == "swap":
        swap = {"a": "b", "b": "a", "c1": "c2", "c2": "c1"}
        if pt.kind in swap:
            return Point(swap[pt.kind], pt.index)
        x0, y0 = coordinates(X, pt)
        return affine_point(X, y0, x0)
    raise ValueError(f"unknown automorphism {sigma.kind}")


def conjugate_point(pt: Point, X_target: HypergeometricCurve) -> Point:
    """Image under the field automorphism xi -> -xi (P and Q trade places)."""
    if pt.kind == "P":
        return Point("Q")
    if pt.kind == "Q":
        return Point("P")
    if pt.kind == "affine":
        return affine_point(X_target, pt.x.conjugate_xi(), pt.y.conjugate_xi())
    if pt.kind == "cluster":
        raise UnsupportedError("cannot conjugate a cluster")
    return pt


# ---------------------------------------------------------------------------
# Laurent series


class LaurentSeries:
    """``sum_i coeffs[i] t^(val+i) + O(t^prec)``; ``prec=None`` marks an exact series.

    The leading coefficient is nonzero unless the series has no known nonzero
    term, in which case ``coeffs`` is empty and ``val`` equals ``prec``.
    """

    __slots__ = ("val", "coeffs", "prec", "zero")

    def __init__(self, val, coeffs, prec, zero):
        self.zero = zero
        coeffs = list(coeffs)
        k = 0
        while k < len(coeffs) and not coeffs[k]:
            k += 1
        val += k
        coeffs = coeffs[k:]
        if prec is not None:
            if len(coeffs) > prec - val:
                coeffs = coeffs[:max(0, prec - val)]
            while coeffs and not coeffs[-1]:
                coeffs.pop()
            if not coeffs:
                val = prec
        else:
            while coeffs and not coeffs[-1]:
                coeffs.pop()
            if not coeffs:
                val = None
        self.val = val
        self.coeffs = coeffs
        self.prec = prec

    @classmethod
    def monomial(cls, c, e, zero, prec=None):
        return cls(e, [c], prec, zero)

    def is_resolved(self):
        """True if the leading term is known (the series is not O(t^prec))."""
        return bool(self.coeffs)

    def valuation(self):
        if not self.coeffs:
            raise PrecisionExhausted("leading term not resolved")
        return self.val

    def coefficient(self, e):
        if self.prec is not None and e >= self.prec:
            raise PrecisionExhausted(f"coefficient of t^{e} beyond precision {self.prec}")
        if not self.coeffs or e < self.val or e - self.val >= len(self.coeffs):
            return self.zero
        return self.coeffs[e - self.val]

    def relative_precision(self):
        return None if self.prec is None else self.prec - self.val

    def with_precision(self, prec):
        if self.prec is not None and self.prec <= prec:
            return self
        if not self.coeffs:
            return LaurentSeries(prec, [], prec, self.zero)
        return LaurentSeries(self.val, self.coeffs, prec, self.zero)

    def _v(self):
        # valuation lower bound usable in precision bookkeeping
        if self.coeffs:
            return self.val
        return self.prec

    def __add__(self, o):
        if not isinstance(o, LaurentSeries):
            return self + LaurentSeries(0, [o], None, self.zero)
        if o.val is None and o.prec is None:
            return self
        if self.val is None and self.prec is None:
            return o
        precs = [p for p in (self.prec, o.prec) if p is not None]
        prec = min(precs) if precs else None
        if not self.coeffs:
            lo = o.val if o.coeffs else prec
        elif not o.coeffs:
            lo = self.val
        else:
            lo = min(self.val, o.val)
        hi = max(self.val + len(self.coeffs) if self.coeffs else lo,
                 o.val + len(o.coeffs) if o.coeffs else lo)
        if prec is not None:
            hi = min(hi, prec)
        if lo is None or hi <= lo:
            return LaurentSeries(prec if prec is not None else 0, [], prec, self.zero)
        out = [self.zero] * (hi - lo)
        for s in (self, o):
            for i, c in enumerate(s.coeffs):
                j = s.val + i - lo
                if 0 <= j < len(out):
                    out[j] = out[j] + c
        return LaurentSeries(lo, out, prec, self.zero)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.val, [-c for c in self.coeffs], self.prec, self.zero) \
            if self.val is not None else self

    def __sub__(self, o):
        return self + (-o)

    def scale(self, c):
        if not c:
            return LaurentSeries(0, [], None, self.zero)
        return LaurentSeries(self.val, [a * c for a in self.coeffs], self.prec, self.zero) \
            if self.val is not None else self

    def shift(self, k):
        if self.val is None:
            return self
        return LaurentSeries(self.val + k, self.coeffs, None if self.prec is None else self.prec + k, self.zero)

    def __mul__(self, o):
        if not isinstance(o, LaurentSeries):
            return self.scale(o)
        if (self.val is None and self.prec is None) or (o.val is None and o.prec is None):
            return LaurentSeries(0, [], None, self.zero)
        va, vb = self._v(), o._v()
        if self.prec is None and o.prec is None:
            prec = None
        elif self.prec is None:
            prec = o.prec + va
        elif o.prec is None:
            prec = self.prec + vb
        else:
            prec = min(self.prec + vb, o.prec + va)
        if not self.coeffs or not o.coeffs:
            return LaurentSeries(prec, [], prec, self.zero)
        lo = self.val + o.val
        n = len(self.coeffs) + len(o.coeffs) - 1
        if prec is not None:
            n = min(n, prec - lo)
        if n <= 0:
            return LaurentSeries(prec, [], prec, self.zero)
        out = [None] * n
        a, b = self.coeffs, o.coeffs
        for i in range(min(len(a), n)):
            ai = a[i]
            if not ai:
                continue
            for j in range(min(len(b), n - i)):
                bj = b[j]
                if bj:
                    t = ai * bj
                    out[i + j] = t if out[i + j] is None else out[i + j] + t
        return LaurentSeries(lo, [self.zero if c is None else c for c in out], prec, self.zero)

    __rmul__ = __mul__

    def inverse(self, prec=None):
        """Multiplicative inverse; an exact non-monomial series needs a target ``prec``."""
        if not self.coeffs:
            raise PrecisionExhausted("cannot invert a series with unresolved leading term")
        v = self.val
        if self.prec is None:
            if len(self.coeffs) == 1:
                return LaurentSeries(-v, [1 / self.coeffs[0]], None, self.zero)
            if prec is None:
                raise ValueError("inverse of an exact series needs a target precision")
            rel = prec + v
            src = self
        else:
            rel = self.prec - v
            src = self
        n = rel if self.prec is not None else max(rel, 1)
        a = src.coeffs
        inv0 = 1 / a[0]
        b = [inv0]
        for k in range(1, n):
            acc = None
            for j in range(1, min(k, len(a) - 1) + 1):
                if a[j]:
                    t = a[j] * b[k - j]
                    acc = t if acc is None else acc + t
            b.append(self.zero if acc is None else -acc * inv0)
        out_prec = (self.prec - 2 * v) if self.prec is not None else (-v + n)
        return LaurentSeries(-v, b, out_prec, self.zero)

    def __truediv__(self, o):
        if not isinstance(o, LaurentSeries):
            return self.scale(1 / o)
        return self * o.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = LaurentSeries(0, [self._one()], None, self.zero)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def _one(self):
        c = self.coeffs[0] if self.coeffs else None
        if c is not None and hasattr(c, "F"):
            return c.F.one
        return 1

    def derivative(self):
        if self.val is None:
            return self
        out = [c * (self.val + i) for i, c in enumerate(self.coeffs)]
        prec = None if self.prec is None else self.prec - 1
        return LaurentSeries(self.val - 1, out, prec, self.zero)

    def __repr__(self):
        terms = [f"({c})*t^{self.val + i}" for i, c in enumerate(self.coeffs) if c]
        tail = "" if self.prec is None else f" + O(t^{self.prec})"
        return (" + ".join(terms) or "0") + tail


# ---------------------------------------------------------------------------
# truncated power series helpers (lists, constant term first)


def _ps_mul(a, b, n, zero):
    out = [zero] * n
    for i in range(min(len(a), n)):
        if not a[i]:
            continue
        ai = a[i]
        for j in range(min(len(b), n - i)):
            if b[j]:
                out[i + j] = out[i + j] + ai * b[j]
    return out


def _ps_inv(a, n, zero):
    inv0 = 1 / a[0]
    b = [inv0]
    for k in range(1, n):
        acc = zero
        for j in range(1, min(k, len(a) - 1) + 1):
            if a[j]:
                acc = acc + a[j] * b[k - j]
        b.append(-acc * inv0)
    return b


def _ps_pow(a, e, n, one, zero):
    result, base = [one], a
    while e:
        if e & 1:
            result = _ps_mul(result, base, n, zero)
        e >>= 1
        if e:
            base = _ps_mul(base, base, n, zero)
    return result


def newton_nth_root(S, N, n, one, zero):
    """R with R^N = S mod t^n, R(0) = 1, by Newton iteration.

    Returns ``(R, residual_valuations)`` where entry k is the valuation of
    ``R_k^N - S`` after step k (at least ``2^k``).
    """
    R = [one]
    prec = 1
    history = []
    invN = one / N
    while prec < n:
        prec = min(2 * prec, n)
        RN1 = _ps_pow(R, N - 1, prec, one, zero)
        RN = _ps_mul(RN1, R, prec, zero)
        resid = [RN[i] - (S[i] if i < len(S) else zero) for i in range(prec)]
        corr = _ps_mul(resid, _ps_inv(RN1, prec, zero), prec, zero)
        R = [(R[i] if i < len(R) else zero) - corr[i] * invN for i in range(prec)]
        check = _ps_pow(R, N, prec, one, zero)
        v = next((i for i in range(prec) if check[i] != (S[i] if i < len(S) else zero)), prec)
        history.append(v)
    return R[:n], history


@dataclass
class Chart:
    """Local parametrization: ``x(t)``, ``y(t)`` at a point, to absolute precision ``prec``."""

    point: Point
    descriptor: str
    x: LaurentSeries
    y: LaurentSeries
    prec: int
    residuals: list


def _chart_data(X: HypergeometricCurve, pt: Point):
    """(descriptor, dependent coordinate, its exponent e, A(t), B(t), D0, parameter kind).

    The dependent coordinate D satisfies ``D^e = A(t)/B(t)`` with ``D(0) = D0``.
    """
    K = X.K
    one, zero = K.one, K.zero
    Ax, Bx = X.A, X.B

    def shifted(poly_top, e):
        # t^e - c as coefficient list
        return [-poly_top] + [zero] * (e - 1) + [one]

    if pt.kind == "a":
        return "x", "y", Bx, X.U, X.W, X.zeta_k(Bx, pt.index), ("t", None)
    if pt.kind == "b":
        return "y", "x", Ax, X.Uy, X.Wy, X.zeta_k(Ax, pt.index), ("t", None)
    if pt.kind == "c1":
        D0 = X.rho_inv_k(Bx) * X.zeta_k(Bx, pt.index)
        return "1/x", "y", Bx, shifted(one, Ax), shifted(one - K.lam, Ax), D0, ("1/t", None)
    if pt.kind == "c2":
        D0 = X.rho_inv_k(Ax) * X.zeta_k(Ax, pt.index)
        return "1/y", "x", Ax, shifted(one, Bx), shifted(one - K.lam, Bx), D0, ("1/t", None)
    if pt.kind == "cluster":
        raise UnsupportedError(f"no local parameter at unresolved cluster {pt}")
    x0, y0 = coordinates(X, pt)
    # F = U(x)(1 - y^B) - lambda x^A y^B: dF/dy = -B y^(B-1) W(x), dF/dx = -A x^(A-1) W_y(y)
    if y0 and P.evaluate(X.W, x0):
        A = P.compose_linear(X.U, x0, one, one)
        B = P.compose_linear(X.W, x0, one, one)
        return "x - x0", "y", Bx, A, B, y0, ("t+c", x0)
    if x0 and P.evaluate(X.Wy, y0):
        A = P.compose_linear(X.Uy, y0, one, one)
        B = P.compose_linear(X.Wy, y0, one, one)
        return "y - y0", "x", Ax, A, B, x0, ("t+c", y0)
    raise InvariantViolation(f"singular point {pt}")


def local_parameter(X: HypergeometricCurve, pt: Point, prec: int) -> Chart:
    """Chart at ``pt`` with both coordinates known to absolute precision ``prec`` (memoized)."""
    key = ("chart", pt, prec)
    cache = X._cache
    if key in cache:
        return cache[key]
    K = X.K
    one, zero = K.one, K.zero
    descriptor, dep, e, A, B, D0, (pkind, c) = _chart_data(X, pt)
    n = prec + 1
    # S = A / (B D0^e), a power series with S(0) = 1
    binv = _ps_inv(B, n, zero)
    S = _ps_mul(A, binv, n, zero)
    s0 = 1 / D0 ** e
    S = [v * s0 for v in S]
    if S[0] != one:
        raise InvariantViolation(f"chart at {pt} has inconsistent base value")
    R, history = newton_nth_root(S, e, n, one, zero)
    D = LaurentSeries(0, [r * D0 for r in R], n, zero)
    if pkind == "t":
        param = LaurentSeries(1, [one], None, zero)
    elif pkind == "1/t":
        param = LaurentSeries(-1, [one], None, zero)
    else:
        param = LaurentSeries(0, [c, one], None, zero)
    xs, ys = (param, D) if dep == "y" else (D, param)
    chart = Chart(pt, descriptor, xs, ys, n, history)
    cache[key] = chart
    return chart


def _powers(X, chart, which, upto):
    key = ("pow", chart.point, chart.prec, which)
    cache = X._cache
    lst = cache.get(key)
    base = chart.x if which == "x" else chart.y
    if lst is None:
        lst = [LaurentSeries(0, [X.K.one], None, X.K.zero)]
        cache[key] = lst
    while len(lst) <= upto:
        lst.append(lst[-1] * base)
    return lst


def _poly_series(X, chart, poly):
    """poly(x(t)) as a series, using cached powers of x(t)."""
    zero = X.K.zero
    if not poly:
        return LaurentSeries(0, [], None, zero)
    pw = _powers(X, chart, "x", len(poly) - 1)
    acc = None
    for e, c in enumerate(poly):
        if c:
            term = pw[e].scale(c)
            acc = term if acc is None else acc + term
    return acc


def numerator_series(f: CurveFunction, chart: Chart):
    X = f.FF
    ypw = _powers(X, chart, "y", X.n - 1)
    acc = None
    for k, a in enumerate(f.nums):
        if a:
            term = _poly_series(X, chart, list(a)) * ypw[k]
            acc = term if acc is None else acc + term
    return acc


def default_ceiling(X):
    return X._cache.get("ceiling", 8 * X.N)


def set_precision_ceiling(X, ceiling: int):
    X._cache["ceiling"] = ceiling


def _escalate(X, build, ceiling=None, need=0):
    """Run ``build(prec)`` from 2N terms, doubling until the result is resolved."""
    ceiling = ceiling or default_ceiling(X)
    prec = 2 * X.N
    while True:
        s = build(prec)
        if s.is_resolved() and (s.prec is None or s.prec - s.val >= need):
            return s
        if prec >= ceiling:
            raise PrecisionExhausted(f"leading term unresolved at precision ceiling {ceiling}")
        prec = min(2 * prec, ceiling)


def expand_at(f: CurveFunction, pt: Point, precision: int = 1, ceiling: int = None) -> LaurentSeries:
    """Laurent expansion of f at pt with at least ``precision`` terms after the leading one."""
    if not f:
        raise ValueError("expansion of the zero function")
    X = f.FF

    def build(prec):
        chart = local_parameter(X, pt, prec)
        num = numerator_series(f, chart)
        den = _poly_series(X, chart, list(f.den))
        if not num.is_resolved() or not den.is_resolved():
            return LaurentSeries(0, [], 0, X.K.zero)
        if den.prec is None and len(den.coeffs) > 1:
            den = den.with_precision(den.val + prec)
        return num * den.inverse()

    return _escalate(X, build, ceiling, need=precision)


def ord_at(f, pt: Point, ceiling: int = None) -> int:
    """Valuation of a CurveFunction (or anything with ``ord_at``) at a point."""
    if hasattr(f, "ord_at"):
        return f.ord_at(pt)
    if not f:
        raise ValueError("ord of the zero function")
    X = f.FF
    key = ("ord", f, pt) if f.is_reduced else None
    if key is not None and key in X._cache:
        return X._cache[key]

    def build_num(prec):
        return numerator_series(f, local_parameter(X, pt, prec))

    def build_den(prec):
        return _poly_series(X, local_parameter(X, pt, prec), list(f.den))

    v = _escalate(X, build_num, ceiling).val - _escalate(X, build_den, ceiling).val
    if key is not None:
        X._cache[key] = v
    return v


def dx_series(X, chart: Chart) -> LaurentSeries:
    return chart.x.derivative()


def ord_dx(X: HypergeometricCurve, pt: Point) -> int:
    """Valuation of the differential dx at a point."""
    return _escalate(X, lambda prec: dx_series(X, local_parameter(X, pt, prec))).val


def residue_at(f: CurveFunction, pt: Point, ceiling: int = None):
    """Residue of ``f dx`` at ``pt``: the t^(-1) coefficient of f(t) x'(t)."""
    X = f.FF
    if not f:
        return X.K.zero

    def build(prec):
        chart = local_parameter(X, pt, prec)
        num = numerator_series(f, chart)
        den = _poly_series(X, chart, list(f.den))
        if not num.is_resolved() or not den.is_resolved():
            return LaurentSeries(0, [], 0, X.K.zero)
        if den.prec is None and len(den.coeffs) > 1:
            den = den.with_precision(den.val + prec)
        prod = num * den.inverse() * dx_series(X, chart)
        if prod.prec is not None and prod.prec <= -1:
            return LaurentSeries(0, [], 0, X.K.zero)
        return prod

    s = _escalate(X, build, ceiling)
    return s.coefficient(-1)


def form_ord_at(f: CurveFunction, pt: Point) -> int:
    """Valuation of the differential ``f dx``."""
    return ord_at(f, pt) + ord_dx(f.FF, pt)
