"""Exact scalar fields for the curve family.

Two interchangeable backends share one small interface (``zero``, ``one``,
``zeta``, ``xi``, ``rho``, ``lam``, ``from_int``, ``nth_root`` ...):

* :class:`SymbolicTower` -- the field ``Q(zeta_N)(lambda)(xi)`` with
  ``xi^(2N) = 1/(1 - lambda)``.  Because ``lambda = 1 - xi^(-2N)``, this field is
  the rational function field ``Q(zeta_N)(xi)``; elements are stored as
  ``(sum_k A_k(xi) zeta^k) / b(xi)`` with ``A_k, b`` in ``Q[xi]``, ``b`` monic and
  coprime to all ``A_k``.  That form is canonical, so equality and hashing are
  structural.
* :class:`FiniteFieldTower` -- the prime field ``GF(q)`` with concrete values
  for ``zeta_N``, ``xi`` and ``lambda`` satisfying the same relations.

:class:`LayeredScalar` gives the presentation over ``Q(zeta_N)(lambda)`` with
basis ``1, xi, ..., xi^(2N-1)``; its arithmetic is implemented independently
(inverse by the extended Euclidean algorithm) and serves as a cross-check.
"""

import math
import random
from fractions import Fraction
from functools import lru_cache

from flint import fmpq, fmpq_poly
from sympy import isprime, primitive_root
from sympy.ntheory import nthroot_mod

from . import polynomials as P
from .errors import (BackendMismatchError, ConfigurationError, InvariantViolation, SpecializationPoleError,
                     UndecidedRootError)

_ZERO_POLY = fmpq_poly([])
_ONE_POLY = fmpq_poly([1])


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Integer coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _int_exact_div(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _int_exact_div(p, q):
    p = list(p)
    out = [0] * (len(p) - len(q) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = p[k + len(q) - 1] // q[-1]
        out[k] = c
        for j, b in enumerate(q):
            p[k + j] -= c * b
    if any(p):
        raise InvariantViolation("cyclotomic division left a remainder")
    return out


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _int_root(a: int, n: int):
    """Exact integer n-th root of a >= 0, or None."""
    if a < 0:
        return None
    r = round(a ** (1.0 / n)) if a < 2 ** 1000 else _newton_root(a, n)
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** n == a:
            return c
    r = _newton_root(a, n)
    return r if r ** n == a else None


def _newton_root(a, n):
    if a < 2:
        return a
    x = 1 << ((a.bit_length() + n - 1) // n)
    while True:
        y = ((n - 1) * x + a // x ** (n - 1)) // n
        if y >= x:
            return x
        x = y


def rational_root(q: Fraction, n: int):
    """Exact n-th root of a rational number, or None."""
    q = Fraction(q)
    sign = 1
    if q < 0:
        if n % 2 == 0:
            return None
        sign, q = -1, -q
    a, b = _int_root(q.numerator, n), _int_root(q.denominator, n)
    if a is None or b is None:
        return None
    return sign * Fraction(a, b)


# ---------------------------------------------------------------------------
# Q(zeta_N)(t): rational functions in one variable over a cyclotomic field


class CyclotomicFunctionField:
    """The field ``Q(zeta_N)(t)`` for a named transcendental ``t``."""

    is_symbolic = True

    def __init__(self, N: int, var: str = "t"):
        if N < 1:
            raise ConfigurationError("N must be positive")
        self.N = N
        self.var = var
        self.phi = euler_phi(N)
        self.cyclo = cyclotomic_polynomial(N)
        self.units = [j for j in range(1, N) if math.gcd(j, N) == 1] or [1]
        self.zero = TowerScalar(self, (_ZERO_POLY,) * self.phi, _ONE_POLY)
        self.one = self.from_int(1)
        self.zeta = self.zeta_power(1)
        self.t = self._make_unreduced([fmpq_poly([0, 1])] + [_ZERO_POLY] * (self.phi - 1), _ONE_POLY)

    def __repr__(self):
        return f"{type(self).__name__}({self.N})"

    @property
    def probe(self):
        """A fixed large-prime specialization used for fast nonzero and coprimality tests."""
        if getattr(self, "_probe", None) is None:
            self._probe = FiniteFieldTower(FiniteFieldSpec.from_seed(self.N, 7919, bits=61))
        return self._probe

    def probe_value(self, a: "TowerScalar"):
        """Image of ``a`` in the probe field as an int, or None at a pole."""
        if a._mod is None:
            try:
                a._mod = specialize(a, self.probe).v
            except SpecializationPoleError:
                a._mod = -1
        return None if a._mod < 0 else a._mod

    # -- construction -------------------------------------------------------
    def from_int(self, n) -> "TowerScalar":
        c = fmpq(n) if not isinstance(n, Fraction) else fmpq(n.numerator, n.denominator)
        if c == 0:
            return self.zero
        return TowerScalar(self, (fmpq_poly([c]),) + (_ZERO_POLY,) * (self.phi - 1), _ONE_POLY)

    from_fraction = from_int

    def coerce(self, v) -> "TowerScalar":
        if isinstance(v, TowerScalar):
            if v.F is not self:
                raise BackendMismatchError("scalars from different towers")
            return v
        if isinstance(v, (int, Fraction)):
            return self.from_int(v)
        raise TypeError(f"cannot coerce {type(v).__name__} into {self!r}")

    def zeta_power(self, k: int) -> "TowerScalar":
        vec = [0] * self.N
        vec[k % self.N] = 1
        vec = self._reduce_int(vec)
        return TowerScalar(self, tuple(fmpq_poly([c]) if c else _ZERO_POLY for c in vec), _ONE_POLY)

    def from_polys(self, nums, den=_ONE_POLY) -> "TowerScalar":
        """Element ``(sum_k nums[k] zeta^k) / den`` with ``nums[k], den`` in ``Q[t]``."""
        nums = [fmpq_poly(n) if not isinstance(n, fmpq_poly) else n for n in nums]
        nums = self._reduce(nums)
        return self._make_unreduced(nums, fmpq_poly(den) if not isinstance(den, fmpq_poly) else den)

    def root_of_unity_group(self):
        """All roots of unity of ``Q(zeta_N)``: the 2N-th ones for N odd, N-th for N even."""
        if self.N % 2:
            return [s * self.zeta_power(k) for s in (1, -1) for k in range(self.N)]
        return [self.zeta_power(k) for k in range(self.N)]

    # -- internal helpers ---------------------------------------------------
    def _reduce_int(self, vec):
        vec = list(vec)
        phi, cyc = self.phi, self.cyclo
        for k in range(len(vec) - 1, phi - 1, -1):
            c = vec[k]
            if c:
                vec[k] = 0
                for j in range(phi):
                    if cyc[j]:
                        vec[k - phi + j] -= c * cyc[j]
        vec = vec[:phi]
        return vec + [0] * (phi - len(vec))

    def _reduce(self, vec):
        vec = list(vec)
        phi, cyc = self.phi, self.cyclo
        for k in range(len(vec) - 1, phi - 1, -1):
            c = vec[k]
            if not c.is_zero():
                for j in range(phi):
                    if cyc[j]:
                        vec[k - phi + j] = vec[k - phi + j] - c * cyc[j]
        vec = vec[:phi]
        return vec + [_ZERO_POLY] * (phi - len(vec))

    def _make_unreduced(self, nums, den):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if all(n.is_zero() for n in nums):
            return self.zero
        if den.degree() > 0:
            g = den
            for n in nums:
                if not n.is_zero():
                    g = g.gcd(n)
                    if g.degree() == 0:
                        break
            if g.degree() > 0:
                den = divmod(den, g)[0]
                nums = [divmod(n, g)[0] for n in nums]
        lc = den.leading_coefficient()
        if lc != 1:
            inv = 1 / lc
            den = den * inv
            nums = [n * inv for n in nums]
        return TowerScalar(self, tuple(nums), den)

    def _conjugate_vec(self, vec, j):
        out = [_ZERO_POLY] * self.N
        for k, c in enumerate(vec):
            if not c.is_zero():
                out[(j * k) % self.N] = out[(j * k) % self.N] + c
        return self._reduce(out)

    def _mul_vec(self, u, v):
        phi = self.phi
        out = [_ZERO_POLY] * (2 * phi - 1)
        for i, a in enumerate(u):
            if a.is_zero():
                continue
            for j, b in enumerate(v):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return self._reduce(out)

    # -- root extraction ----------------------------------------------------
    def constant_root(self, c: "TowerScalar", n: int):
        """An n-th root of a constant (element of ``Q(zeta_N)``) or None.

        Decides only the case root = (root of unity) * (rational); otherwise
        raises :class:`UndecidedRootError`.
        """
        group = self.root_of_unity_group()
        for u in group:
            q = c * u
            r = q.rational_value()
            if r is None:
                continue
            # c = u^{-1} * r
            s = rational_root(r, n)
            if s is None:
                if n % 2 == 0 and r < 0:
                    s = rational_root(-r, n)
                    if s is not None:
                        target = -(u ** -1)
                        for w in group:
                            if w ** n == target:
                                return w * self.from_int(s)
                continue
            target = u ** -1
            for w in group:
                if w ** n == target:
                    return w * self.from_int(s)
        raise UndecidedRootError(f"cannot decide whether {c} is an {n}-th power in Q(zeta_{self.N})")

    def nth_root(self, a: "TowerScalar", n: int):
        """Some n-th root of ``a`` in this field, or None if none exists."""
        a = self.coerce(a)
        if not a:
            return self.zero
        if n == 1:
            return a
        b = a.den
        bpow = b ** (n - 1)
        nums = [c * bpow for c in a.nums]
        # C = sum nums[k] zeta^k is a polynomial in t over Q(zeta); root of C over b
        deg = max(c.degree() for c in nums)
        low = min(next(e for e in range(c.degree() + 1) if c[e] != 0) for c in nums if not c.is_zero())
        if low % n or (deg - low) % n:
            return None
        coeff = [self.from_polys([fmpq_poly([c[e]]) if e <= c.degree() else _ZERO_POLY for c in nums])
                 for e in range(low, deg + 1)]
        lead = coeff[-1]
        inv_lead = 1 / lead
        # reversed monic polynomial in s = 1/t, constant term 1
        rev = [c * inv_lead for c in reversed(coeff)]
        r = (deg - low) // n
        root = _series_power(rev, Fraction(1, n), r + 1, self.one)
        root = P.trim(root)
        if P.power(root, n, self.one) != P.trim(list(rev)):
            return None
        c = self.constant_root(lead, n)
        # root(s) reversed back: sum root[i] t^(r - i), times t^(low/n)
        poly_vec = [_ZERO_POLY] * self.phi
        for i, ci in enumerate(root):
            e = r - i + low // n
            for k, comp in enumerate(ci.nums):
                if not comp.is_zero():
                    # constants have den 1
                    poly_vec[k] = poly_vec[k] + comp * fmpq_poly([0] * e + [1])
        R = self._make_unreduced(poly_vec, b)
        out = c * R
        if out ** n != a:
            raise InvariantViolation("root extraction produced an incorrect root")
        return out

    def sqrt(self, a):
        return self.nth_root(a, 2)

    def random_element(self, rng: random.Random, degree: int = 2, height: int = 5, with_den=True):
        def rpoly(d):
            return fmpq_poly([rng.randint(-height, height) for _ in range(d + 1)])
        nums = [rpoly(rng.randint(0, degree)) for _ in range(self.phi)]
        den = _ONE_POLY
        if with_den and rng.random() < 0.6:
            den = rpoly(rng.randint(0, degree))
            if den.is_zero():
                den = _ONE_POLY
        return self._make_unreduced(nums, den)


def _series_power(a, alpha: Fraction, terms: int, one):
    """First ``terms`` coefficients of ``a^alpha`` for a power series with ``a[0] = 1``."""
    b = [one]
    for k in range(1, terms):
        acc = None
        for j in range(1, min(k, len(a) - 1) + 1):
            if not a[j]:
                continue
            w = (alpha + 1) * j - k
            if w == 0:
                continue
            term = a[j] * b[k - j] * one.F.from_int(w)
            acc = term if acc is None else acc + term
        b.append(one.F.zero if acc is None else acc * one.F.from_int(Fraction(1, k)))
    return b


class TowerScalar:
    """Immutable element of a :class:`CyclotomicFunctionField`."""

    __slots__ = ("F", "nums", "den", "_hash", "_mod")

    def __init__(self, F, nums, den):
        self.F = F
        self.nums = nums
        self.den = den
        self._hash = None
        self._mod = None

    # -- structural ---------------------------------------------------------
    def __bool__(self):
        return any(not n.is_zero() for n in self.nums)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.F.from_int(other)
        if not isinstance(other, TowerScalar):
            return NotImplemented
        return self.F is other.F and self.den == other.den and self.nums == other.nums

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(tuple(n.coeffs()) for n in self.nums), tuple(self.den.coeffs())))
        return self._hash

    def is_constant(self):
        return self.den.degree() == 0 and all(n.degree() <= 0 for n in self.nums)

    def rational_value(self):
        """The value as a Fraction if this is a rational constant, else None."""
        if not self.is_constant() or any(not n.is_zero() for n in self.nums[1:]):
            return None
        c = self.nums[0]
        if c.is_zero():
            return Fraction(0)
        v = c[0]
        return Fraction(int(v.p), int(v.q))

    # -- arithmetic ---------------------------------------------------------
    def _other(self, o):
        if isinstance(o, TowerScalar):
            if o.F is not self.F:
                raise BackendMismatchError("scalars from different towers")
            return o
        if isinstance(o, (int, Fraction)):
            return self.F.from_int(o)
        raise BackendMismatchError(f"cannot combine TowerScalar with {type(o).__name__}")

    def __add__(self, o):
        if isinstance(o, (int, Fraction)) and o == 0:
            return self
        o = self._other(o)
        if not o:
            return self
        if not self:
            return o
        if self.den == o.den:
            return self.F._make_unreduced([a + b for a, b in zip(self.nums, o.nums)], self.den)
        g = self.den.gcd(o.den)
        if g.degree() == 0:
            return self.F._make_unreduced(
                [a * o.den + b * self.den for a, b in zip(self.nums, o.nums)], self.den * o.den)
        da, db = divmod(self.den, g)[0], divmod(o.den, g)[0]
        return self.F._make_unreduced([a * db + b * da for a, b in zip(self.nums, o.nums)], da * o.den)

    __radd__ = __add__

    def __neg__(self):
        return TowerScalar(self.F, tuple(-n for n in self.nums), self.den)

    def __sub__(self, o):
        return self + (-self._other(o))

    def __rsub__(self, o):
        return self._other(o) + (-self)

    def __mul__(self, o):
        if isinstance(o, int) and not isinstance(o, bool):
            if o == 0:
                return self.F.zero
            return self.F._make_unreduced([n * o for n in self.nums], self.den)
        o = self._other(o)
        if not self or not o:
            return self.F.zero
        vec = self.F._mul_vec(self.nums, o.nums)
        return self.F._make_unreduced(vec, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero scalar")
        F = self.F
        prod = None
        for j in F.units:
            if j == 1:
                continue
            c = F._conjugate_vec(self.nums, j)
            prod = c if prod is None else F._mul_vec(prod, c)
        if prod is None:
            prod = [_ONE_POLY] + [_ZERO_POLY] * (F.phi - 1)
        full = F._mul_vec(self.nums, prod)
        if any(not c.is_zero() for c in full[1:]) or full[0].is_zero():
            from .errors import InvariantViolation
            raise InvariantViolation("Galois norm is not a nonzero rational function")
        return F._make_unreduced([c * self.den for c in prod], full[0])

    def __truediv__(self, o):
        return self * self._other(o).inverse()

    def __rtruediv__(self, o):
        return self._other(o) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.F.one, self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- views --------------------------------------------------------------
    def conjugate_xi(self):
        """Image under the field automorphism t -> -t."""
        def flip(p):
            return fmpq_poly([c if i % 2 == 0 else -c for i, c in enumerate(p.coeffs())])
        return self.F._make_unreduced([flip(n) for n in self.nums], flip(self.den))

    def layers(self):
        """Coefficients over Q(zeta_N)(lambda) in the basis 1, xi, ..., xi^(2N-1)."""
        return LayeredScalar.from_tower(self).coeffs

    def __repr__(self):
        return f"TowerScalar({format_scalar(self)})"

    def __str__(self):
        return format_scalar(self)


def _format_qpoly(p: fmpq_poly, var: str) -> str:
    terms = []
    for e, c in enumerate(p.coeffs()):
        if c == 0:
            continue
        c = Fraction(int(c.p), int(c.q))
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        if not mono:
            terms.append(f"{c}")
        elif c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append(f"-{mono}")
        else:
            terms.append(f"{c}*{mono}")
    if not terms:
        return "0"
    return " + ".join(terms).replace("+ -", "- ")


def format_scalar(a: TowerScalar) -> str:
    """Parseable text form using the names ``zeta`` and the tower variable."""
    F = a.F
    parts = []
    for k, n in enumerate(a.nums):
        if n.is_zero():
            continue
        body = _format_qpoly(n, F.var)
        zk = "" if k == 0 else ("zeta" if k == 1 else f"zeta^{k}")
        if zk:
            parts.append(f"({body})*{zk}")
        else:
            parts.append(f"({body})")
    num = " + ".join(parts) if parts else "0"
    if a.den == _ONE_POLY:
        return num
    return f"({num})/({_format_qpoly(a.den, F.var)})"


class SymbolicTower(CyclotomicFunctionField):
    """``K0 = Q(zeta_N)(lambda)(xi)``, realized as ``Q(zeta_N)(xi)``."""

    def __init__(self, N: int):
        super().__init__(N, "xi")
        self.xi = self.t
        self.rho = self.xi ** -2
        self.rho_inv = self.xi * self.xi
        self.lam = self.one - self.xi ** (-2 * N)
        self.name = "symbolic"

    def describe(self):
        return {"backend": "symbolic", "N": self.N}


# ---------------------------------------------------------------------------
# Layered presentation over Q(zeta_N)(lambda)


class LayeredScalar:
    """``sum_{k<2N} c_k xi^k`` with ``c_k`` in ``Q(zeta_N)(lambda)`` and ``xi^(2N) = 1/(1-lambda)``."""

    __slots__ = ("L", "N", "coeffs")

    _fields = {}

    def __init__(self, L, N, coeffs):
        self.L = L
        self.N = N
        self.coeffs = tuple(coeffs)

    @classmethod
    def layer_field(cls, N):
        if N not in cls._fields:
            cls._fields[N] = CyclotomicFunctionField(N, "lambda")
        return cls._fields[N]

    @classmethod
    def mu(cls, N):
        L = cls.layer_field(N)
        return 1 / (L.one - L.t)

    def _modulus(self):
        # xi^(2N) - mu as a polynomial in xi over L
        return [-self.mu(self.N)] + [self.L.zero] * (2 * self.N - 1) + [self.L.one]

    @classmethod
    def from_tower(cls, a: TowerScalar):
        N = a.F.N
        L = cls.layer_field(N)
        mu = cls.mu(N)

        def lift(polys):
            vec = [L.zero] * (2 * N)
            for k, p in enumerate(polys):
                if p.is_zero():
                    continue
                zk = L.zeta_power(k)
                for e, c in enumerate(p.coeffs()):
                    if c == 0:
                        continue
                    m, r = divmod(e, 2 * N)
                    vec[r] = vec[r] + zk * (mu ** m) * L.from_int(Fraction(int(c.p), int(c.q)))
            return cls(L, N, vec)

        num = lift(a.nums)
        den = lift([a.den] + [_ZERO_POLY] * (a.F.phi - 1))
        return num * den.inverse()

    def to_tower(self, K: SymbolicTower) -> TowerScalar:
        lam = K.lam
        out = K.zero
        xi_pow = K.one
        for c in self.coeffs:
            if c:
                num = K.zero
                for k, p in enumerate(c.nums):
                    if not p.is_zero():
                        coeffs = [K.from_int(Fraction(int(v.p), int(v.q))) for v in p.coeffs()]
                        num = num + P.evaluate(coeffs, lam) * K.zeta_power(k)
                den = P.evaluate([K.from_int(Fraction(int(v.p), int(v.q))) for v in c.den.coeffs()], lam)
                out = out + num / den * xi_pow
            xi_pow = xi_pow * K.xi
        return out

    def _poly(self):
        return P.trim(list(self.coeffs))

    def _from_poly(self, p):
        p = list(p) + [self.L.zero] * (2 * self.N - len(p))
        return LayeredScalar(self.L, self.N, p)

    def __add__(self, o):
        return LayeredScalar(self.L, self.N, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    def __sub__(self, o):
        return LayeredScalar(self.L, self.N, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __mul__(self, o):
        prod = P.mul(self._poly(), o._poly())
        return self._from_poly(P.divmod_(prod, self._modulus())[1])

    def inverse(self):
        """Extended Euclid against the defining polynomial of xi."""
        g, s, _ = P.xgcd(self._poly(), self._modulus(), self.L.one)
        if not g:
            raise ZeroDivisionError("inverse of zero layered scalar")
        if len(g) != 1:
            from .errors import InvariantViolation
            raise InvariantViolation("defining polynomial of xi is reducible")
        return self._from_poly(P.divmod_(s, self._modulus())[1])

    def __eq__(self, o):
        return isinstance(o, LayeredScalar) and self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)


# ---------------------------------------------------------------------------
# finite-field backend


class FiniteFieldSpec:
    """Validated specialization data: prime q, primitive N-th root zeta0, xi0 and lambda0."""

    def __init__(self, N: int, q: int, zeta0: int = None, xi0: int = None, lam0: int = None):
        if not isprime(q):
            raise ConfigurationError(f"q={q} is not prime")
        if (q - 1) % (2 * N):
            raise ConfigurationError(f"q={q} is not 1 mod 2N={2 * N}")
        self.N, self.q = N, q
        if zeta0 is None:
            zeta0 = pow(primitive_root(q), (q - 1) // N, q)
        zeta0 %= q
        if pow(zeta0, N, q) != 1 or any(pow(zeta0, N // l, q) == 1 for l in _prime_factors(N)):
            raise ConfigurationError(f"zeta0={zeta0} is not a primitive {N}-th root of unity mod {q}")
        if xi0 is None:
            if lam0 is None:
                raise ConfigurationError("need xi0 or lambda0")
            target = pow((1 - lam0) % q, -1, q) if (1 - lam0) % q else None
            if target is None:
                raise ConfigurationError("lambda0 = 1 is degenerate")
            xi0 = nthroot_mod(target, 2 * N, q)
            if xi0 is None:
                raise ConfigurationError(f"1/(1-lambda0) has no {2 * N}-th root mod {q}")
        xi0 %= q
        if xi0 == 0:
            raise ConfigurationError("xi0 must be nonzero")
        derived = (1 - pow(xi0, -2 * N, q)) % q
        if lam0 is not None and lam0 % q != derived:
            raise ConfigurationError("xi0^(2N) (1 - lambda0) != 1")
        if derived in (0, 1):
            raise ConfigurationError("lambda0 must avoid 0 and 1")
        self.zeta0, self.xi0, self.lam0 = zeta0, xi0, derived

    @classmethod
    def from_seed(cls, N: int, seed: int, bits: int = 26):
        rng = random.Random(f"hgc-{N}-{seed}")
        step = 2 * N
        while True:
            q = rng.randrange(2 ** (bits - 1), 2 ** bits) // step * step + 1
            if isprime(q):
                break
        while True:
            xi0 = rng.randrange(2, q - 1)
            lam0 = (1 - pow(xi0, -2 * N, q)) % q
            if lam0 not in (0, 1):
                return cls(N, q, xi0=xi0)

    def as_dict(self):
        return {"N": self.N, "q": self.q, "zeta": self.zeta0, "xi": self.xi0, "lambda": self.lam0}

    def conjugate(self):
        return FiniteFieldSpec(self.N, self.q, self.zeta0, (-self.xi0) % self.q)


class FiniteFieldTower:
    is_symbolic = False

    def __init__(self, spec: FiniteFieldSpec):
        self.spec = spec
        self.N = spec.N
        self.q = spec.q
        self.zero = FiniteFieldScalar(self, 0)
        self.one = FiniteFieldScalar(self, 1)
        self.zeta = FiniteFieldScalar(self, spec.zeta0)
        self.xi = FiniteFieldScalar(self, spec.xi0)
        self.rho = self.xi ** -2
        self.rho_inv = self.xi * self.xi
        self.lam = FiniteFieldScalar(self, spec.lam0)
        self.var = "xi"
        self.name = "finite"

    def __repr__(self):
        return f"FiniteFieldTower(N={self.N}, q={self.q})"

    def describe(self):
        d = {"backend": "finite"}
        d.update(self.spec.as_dict())
        return d

    def from_int(self, n):
        if isinstance(n, Fraction):
            if n.denominator % self.q == 0:
                raise SpecializationPoleError("denominator divisible by q")
            return FiniteFieldScalar(self, n.numerator * pow(n.denominator, -1, self.q))
        return FiniteFieldScalar(self, n)

    from_fraction = from_int

    def coerce(self, v):
        if isinstance(v, FiniteFieldScalar):
            if v.F is not self:
                raise BackendMismatchError("scalars from different finite fields")
            return v
        if isinstance(v, (int, Fraction)):
            return self.from_int(v)
        raise BackendMismatchError(f"cannot coerce {type(v).__name__} into {self!r}")

    def zeta_power(self, k):
        return FiniteFieldScalar(self, pow(self.spec.zeta0, k % self.N, self.q))

    def nth_root(self, a, n):
        a = self.coerce(a)
        if not a:
            return self.zero
        r = nthroot_mod(a.v, n, self.q)
        return None if r is None else FiniteFieldScalar(self, r)

    def sqrt(self, a):
        return self.nth_root(a, 2)

    def constant_root(self, c, n):
        return self.nth_root(c, n)

    def root_of_unity_group(self):
        return [self.zeta_power(k) for k in range(self.N)]

    def random_element(self, rng: random.Random, **_):
        return FiniteFieldScalar(self, rng.randrange(self.q))


class FiniteFieldScalar:
    __slots__ = ("F", "v")

    def __init__(self, F, v):
        self.F = F
        self.v = v % F.q

    def _o(self, o):
        if isinstance(o, FiniteFieldScalar):
            if o.F is not self.F:
                raise BackendMismatchError("scalars from different finite fields")
            return o.v
        if isinstance(o, int):
            return o
        if isinstance(o, Fraction):
            return self.F.from_int(o).v
        raise BackendMismatchError(f"cannot combine FiniteFieldScalar with {type(o).__name__}")

    def __bool__(self):
        return self.v != 0

    def __eq__(self, o):
        if isinstance(o, FiniteFieldScalar):
            return self.F is o.F and self.v == o.v
        if isinstance(o, int):
            return self.v == o % self.F.q
        return NotImplemented

    def __hash__(self):
        return hash(self.v)

    def __add__(self, o):
        return FiniteFieldScalar(self.F, self.v + self._o(o))

    __radd__ = __add__

    def __sub__(self, o):
        return FiniteFieldScalar(self.F, self.v - self._o(o))

    def __rsub__(self, o):
        return FiniteFieldScalar(self.F, self._o(o) - self.v)

    def __neg__(self):
        return FiniteFieldScalar(self.F, -self.v)

    def __mul__(self, o):
        return FiniteFieldScalar(self.F, self.v * self._o(o))

    __rmul__ = __mul__

    def inverse(self):
        if not self.v:
            raise ZeroDivisionError("inverse of zero in GF(q)")
        return FiniteFieldScalar(self.F, pow(self.v, -1, self.F.q))

    def __truediv__(self, o):
        o = self._o(o) % self.F.q
        if not o:
            raise ZeroDivisionError("division by zero in GF(q)")
        return FiniteFieldScalar(self.F, self.v * pow(o, -1, self.F.q))

    def __rtruediv__(self, o):
        return FiniteFieldScalar(self.F, self._o(o)) * self.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        return FiniteFieldScalar(self.F, pow(self.v, e, self.F.q))

    def is_constant(self):
        return True

    def conjugate_xi(self):
        raise TypeError("finite-field scalars carry no xi; conjugate the specialization instead")

    def __repr__(self):
        return f"FiniteFieldScalar({self.v} mod {self.F.q})"

    def __str__(self):
        return str(self.v)


# ---------------------------------------------------------------------------


def _poly_mod(p: fmpq_poly, xi0: int, q: int):
    num = p.numer()
    den = int(p.denom())
    if den % q == 0:
        raise SpecializationPoleError("rational coefficient has denominator divisible by q")
    acc = 0
    for c in reversed(num.coeffs()):
        acc = (acc * xi0 + int(c)) % q
    return acc * pow(den, -1, q) % q


def specialize(a: TowerScalar, target: FiniteFieldTower) -> FiniteFieldScalar:
    """Ring homomorphism K0 -> GF(q) sending zeta, xi to the specialization's values."""
    spec = target.spec
    if a.F.N != spec.N:
        raise BackendMismatchError("tower and specialization disagree on N")
    q = spec.q
    d = _poly_mod(a.den, spec.xi0, q)
    if d == 0:
        raise SpecializationPoleError(f"denominator of {a} vanishes at xi0={spec.xi0}")
    acc, zk = 0, 1
    for n in a.nums:
        if not n.is_zero():
            acc += _poly_mod(n, spec.xi0, q) * zk
        zk = zk * spec.zeta0 % q
    return FiniteFieldScalar(target, acc * pow(d, -1, q))


def make_tower(N: int, backend: str = "symbolic", spec: FiniteFieldSpec = None):
    if backend == "symbolic":
        return SymbolicTower(N)
    if backend == "finite":
        if spec is None:
            raise ConfigurationError("finite backend needs a FiniteFieldSpec")
        return FiniteFieldTower(spec)
    raise ConfigurationError(f"unknown backend {backend!r}")
