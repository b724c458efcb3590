"""Function fields of cyclic covers ``y^n = R(x)`` and of the curve X_{N,lambda}.

A :class:`CurveFunction` is ``(sum_{k<n} A_k(x) y^k) / B(x)`` with ``A_k, B`` in
``K0[x]``, ``B`` monic and ``gcd(B, A_0, ..., A_{n-1}) = 1``.  This is a
coordinate form over ``K0(x)`` in the basis ``1, y, ..., y^{n-1}``, so equality
is representation equality.

Inversion uses the norm for the cyclic Galois group ``y -> zeta^j y`` (the
constant field contains ``zeta_n``), which avoids a Euclidean algorithm over
the function field.
"""

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction

from . import polynomials as P
from .coefficient_tower import format_scalar
from .errors import InvariantViolation


class CyclicFunctionField:
    """``K0(x)[y] / (y^n - rnum(x)/rden(x))`` for polynomials ``rnum, rden`` over ``K0``."""

    def __init__(self, K, n: int, rnum, rden, names=("x", "y")):
        self.K = K
        self.n = n
        self.rnum = P.trim(list(rnum))
        self.rden = P.trim(list(rden))
        self.names = names
        if K.N % n and n != 1:
            # the Galois norm needs n-th roots of unity in K0
            raise ValueError("cover degree must divide N")
        self._zeta_n = K.zeta_power(K.N // n)
        self.zero = CurveFunction(self, ((),) * n, (K.one,), True)
        self.one = self.const(K.one)
        self.x = self._make([[K.zero, K.one]] + [[]] * (n - 1), [K.one])
        self.y = self._make([[]] + [[K.one]] + [[]] * (n - 2), [K.one]) if n > 1 else self.rational([K.zero], [K.one])

    # -- constructors -------------------------------------------------------
    def const(self, c) -> "CurveFunction":
        c = self.K.coerce(c) if not isinstance(c, (int, Fraction)) else self.K.from_int(c)
        if not c:
            return self.zero
        return CurveFunction(self, ((c,),) + ((),) * (self.n - 1), (self.K.one,), True)

    def rational(self, num, den=None) -> "CurveFunction":
        """The element ``num(x)/den(x)`` of ``K0(x)``."""
        den = [self.K.one] if den is None else den
        return self._make([list(num)] + [[]] * (self.n - 1), list(den))

    def from_coordinates(self, coords) -> "CurveFunction":
        """Build ``sum_k (num_k/den_k) y^k`` from pairs ``(num_k, den_k)`` of x-polynomials."""
        dens = []
        index = []
        for num_k, den_k in coords:
            den_k = P.trim(list(den_k))
            if not P.trim(list(num_k)):
                index.append(None)
                continue
            for j, d in enumerate(dens):
                if d == den_k:
                    index.append(j)
                    break
            else:
                dens.append(den_k)
                index.append(len(dens) - 1)
        den = [self.K.one]
        for d in dens:
            den = P.mul(den, d)
        nums = []
        for (num_k, _), j in zip(coords, index):
            if j is None:
                nums.append([])
                continue
            acc = P.trim(list(num_k))
            for i, d in enumerate(dens):
                if i != j:
                    acc = P.mul(acc, d)
            nums.append(acc)
        return self._make(nums + [[]] * (self.n - len(nums)), den)

    def monomial(self, m: int, k: int) -> "CurveFunction":
        """``x^m y^k`` for arbitrary integers ``m, k``."""
        K = self.K
        q, r = divmod(k, self.n)
        num, den = [K.one], [K.one]
        if q > 0:
            num, den = P.power(self.rnum, q, K.one), P.power(self.rden, q, K.one)
        elif q < 0:
            num, den = P.power(self.rden, -q, K.one), P.power(self.rnum, -q, K.one)
        if m >= 0:
            num = P.shift(num, m)
        else:
            den = P.shift(den, -m)
        nums = [[] for _ in range(self.n)]
        nums[r] = num
        return self._make(nums, den)

    def _make(self, nums, den, full=False) -> "CurveFunction":
        K = self.K
        nums = [P.trim(list(a)) for a in nums]
        den = P.trim(list(den))
        if not den:
            raise ZeroDivisionError("zero denominator in function field element")
        if not any(nums):
            return self.zero
        # strip a common power of x
        low = min(_low_degree(a) for a in nums + [den] if a)
        if low:
            den = den[low:]
            nums = [a[low:] if a else [] for a in nums]
        reduced = len(den) == 1
        if not reduced and K.is_symbolic and not full:
            nums, den = self._strip_known_factors(nums, den)
            reduced = len(den) == 1
        if not reduced and (full or not K.is_symbolic or self._probe_coprime(nums, den) is False):
            g = den
            for a in nums:
                if a:
                    g = P.gcd(g, a)
                    if len(g) == 1:
                        break
            if len(g) > 1:
                den = P.exact_div(den, g)
                nums = [P.exact_div(a, g) if a else [] for a in nums]
            reduced = True
        elif not reduced:
            reduced = self._probe_coprime(nums, den)
        lc = den[-1]
        if lc != K.one:
            inv = 1 / lc
            den = [c * inv for c in den]
            nums = [[c * inv for c in a] for a in nums]
        return CurveFunction(self, tuple(tuple(a) for a in nums), tuple(den), bool(reduced))

    def _strip_known_factors(self, nums, den):
        """Cancel powers of the relation polynomials, which is where most common factors arise."""
        K = self.K
        T = K.probe
        for fac in (self.rden, self.rnum):
            if len(fac) < 2:
                continue
            fac_img = P.trim([T.from_int(K.probe_value(c) or 0) for c in fac])
            while len(den) >= len(fac):
                imgs = []
                for poly in [den] + [a for a in nums if a]:
                    vals = [K.probe_value(c) for c in poly]
                    if None in vals:
                        return nums, den
                    imgs.append(P.trim([T.from_int(v) for v in vals]))
                if any(P.divmod_(a, fac_img)[1] for a in imgs):
                    break
                qd, rd = P.divmod_(den, fac)
                if rd:
                    break
                new_nums = []
                for a in nums:
                    if a:
                        qa, ra = P.divmod_(a, fac)
                        if ra:
                            return nums, den
                        new_nums.append(qa)
                    else:
                        new_nums.append([])
                nums, den = new_nums, qd
        return nums, den

    def _probe_coprime(self, nums, den):
        """True if gcd(den, nums) = 1 is certified in the probe field, None if undecided.

        ``den`` is monic up to a nonzero constant, so a nontrivial common factor
        over K0 stays a common factor of the specializations.
        """
        K = self.K
        T = K.probe
        img = []
        for poly in [den] + [a for a in nums if a]:
            vals = []
            for c in poly:
                v = K.probe_value(c)
                if v is None:
                    return None
                vals.append(T.from_int(v))
            img.append(P.trim(vals))
        if len(img[0]) != len(den):
            return None
        g = img[0]
        for a in img[1:]:
            g = P.gcd(g, a)
            if len(g) == 1:
                return True
        return len(g) == 1

    # -- structure ----------------------------------------------------------
    def conjugate(self, f: "CurveFunction", j: int) -> "CurveFunction":
        """Image of f under y -> zeta_n^j y."""
        z = self._zeta_n
        nums = [[c * z ** (j * k) for c in a] for k, a in enumerate(f.nums)]
        return CurveFunction(self, tuple(tuple(a) for a in nums), f.den, f.is_reduced)

    def norm(self, f: "CurveFunction"):
        """Return (conjugate product G, norm as (num, den)) with f*G = norm in K0(x)."""
        G = self.one
        for j in range(1, self.n):
            G = G * self.conjugate(f, j)
        full = f * G
        if any(full.nums[1:]):
            raise InvariantViolation("norm of a function field element is not in K0(x)")
        return G, full

    def random_element(self, rng: random.Random, degree=2, height=3, with_den=True):
        K = self.K

        def rc():
            if K.is_symbolic:
                return K.from_int(rng.randint(-height, height)) + K.from_int(rng.randint(-1, 1)) * K.xi \
                    + K.from_int(rng.randint(-1, 1)) * K.zeta
            return K.random_element(rng)

        nums = [[rc() for _ in range(rng.randint(0, degree) + 1)] for _ in range(self.n)]
        den = [rc() for _ in range(rng.randint(0, degree if with_den else 0) + 1)]
        if not P.trim(list(den)):
            den = [K.one]
        return self._make(nums, den)


def _low_degree(poly):
    for i, c in enumerate(poly):
        if c:
            return i
    return len(poly)


class CurveFunction:
    """Immutable function-field element; see the module docstring for the form.

    Over the symbolic tower the gcd normalization is lazy: ``is_reduced`` is
    True when coprimality was certified, and :meth:`reduced` forces the full
    Euclidean reduction.  Equality never depends on it.
    """

    __slots__ = ("FF", "nums", "den", "is_reduced", "_hash")

    def __init__(self, FF, nums, den, reduced=False):
        self.FF = FF
        self.nums = nums
        self.den = den
        self.is_reduced = reduced
        self._hash = None

    @property
    def curve(self):
        return self.FF

    def reduced(self) -> "CurveFunction":
        if self.is_reduced:
            return self
        return self.FF._make([list(a) for a in self.nums], list(self.den), full=True)

    def __bool__(self):
        return any(self.nums)

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            o = self.FF.const(o)
        if not isinstance(o, CurveFunction):
            return NotImplemented
        if self.FF is not o.FF:
            return False
        if self.is_reduced and o.is_reduced:
            return self.den == o.den and self.nums == o.nums
        if self.den == o.den:
            return self.nums == o.nums
        d1, d2 = list(self.den), list(o.den)
        return all(P.mul(list(a), d2) == P.mul(list(b), d1) for a, b in zip(self.nums, o.nums))

    def __hash__(self):
        if self._hash is None:
            r = self.reduced()
            self._hash = hash((r.nums, r.den))
        return self._hash

    def _coerce(self, o):
        if isinstance(o, CurveFunction):
            if o.FF is not self.FF:
                raise ValueError("functions on different curves")
            return o
        return self.FF.const(o)

    def is_rational(self):
        """True if f lies in K0(x)."""
        return not any(self.nums[1:])

    def is_constant(self):
        if not self.is_rational():
            return False
        a = self.nums[0]
        if not a:
            return True
        if len(a) != len(self.den):
            return False
        c = a[-1]
        return all(u == c * v for u, v in zip(a, self.den))

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant function")
        return self.nums[0][-1] if self.nums[0] else self.FF.K.zero

    def __add__(self, o):
        o = self._coerce(o)
        FF = self.FF
        if not o:
            return self
        if not self:
            return o
        if self.den == o.den:
            return FF._make([P.add(a, b) for a, b in zip(self.nums, o.nums)], self.den)
        da, db = list(self.den), list(o.den)
        # over the symbolic tower the probe field decides cheaply whether a shared factor exists
        if not FF.K.is_symbolic or FF._probe_coprime([db], da) is not True:
            g = P.gcd(da, db)
            if len(g) > 1:
                da, db = P.exact_div(da, g), P.exact_div(db, g)
                nums = [P.add(P.mul(list(a), db), P.mul(list(b), da)) for a, b in zip(self.nums, o.nums)]
                return FF._make(nums, P.mul(da, list(o.den)))
        nums = [P.add(P.mul(list(a), db), P.mul(list(b), da)) for a, b in zip(self.nums, o.nums)]
        return FF._make(nums, P.mul(da, db))

    __radd__ = __add__

    def __neg__(self):
        return CurveFunction(self.FF, tuple(tuple(-c for c in a) for a in self.nums), self.den, self.is_reduced)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) + (-self)

    def __mul__(self, o):
        o = self._coerce(o)
        FF = self.FF
        if not self or not o:
            return FF.zero
        n = FF.n
        if o.is_rational():
            a = o.nums[0]
            return FF._make([P.mul(list(c), list(a)) for c in self.nums], P.mul(list(self.den), list(o.den)))
        if self.is_rational():
            return o * self
        slots = [[] for _ in range(2 * n - 1)]
        for i, a in enumerate(self.nums):
            if not a:
                continue
            for j, b in enumerate(o.nums):
                if b:
                    slots[i + j] = P.add(slots[i + j], P.mul(list(a), list(b)))
        den = P.mul(list(self.den), list(o.den))
        if any(slots[n:]):
            nums = []
            for k in range(n):
                hi = slots[k + n] if k + n < 2 * n - 1 else []
                nums.append(P.add(P.mul(slots[k], FF.rden), P.mul(hi, FF.rnum)))
            den = P.mul(den, FF.rden)
        else:
            nums = slots[:n]
        return FF._make(nums, den)

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of the zero function")
        FF = self.FF
        if self.is_rational():
            return FF._make([list(self.den)] + [[]] * (FF.n - 1), list(self.nums[0]))
        # for f = F/D take the norm of F alone, so D^(n-1) never has to be cancelled by a gcd
        F = FF._make(self.nums, [FF.K.one])
        G, full = FF.norm(F)
        num = list(full.nums[0])
        scale = P.mul(list(full.den), list(self.den))
        return FF._make([P.mul(list(a), scale) for a in G.nums], P.mul(list(G.den), num))

    def __truediv__(self, o):
        return self * self._coerce(o).inverse()

    def __rtruediv__(self, o):
        return self._coerce(o) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.FF.one, self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def map_scalars(self, fn, FF=None):
        """Apply a field map to every coefficient (e.g. specialization or xi -> -xi)."""
        FF = FF or self.FF
        return FF._make([[fn(c) for c in a] for a in self.nums], [fn(c) for c in self.den])

    def evaluate(self, x0, y0):
        """Value at an affine point where the representation is defined."""
        d = P.evaluate(list(self.den), x0)
        if not d:
            raise ZeroDivisionError("denominator vanishes at the point")
        acc = self.FF.K.zero
        yk = self.FF.K.one
        for a in self.nums:
            if a:
                acc = acc + P.evaluate(list(a), x0) * yk
            yk = yk * y0
        return acc / d

    def compose(self, X: "CurveFunction", Y: "CurveFunction") -> "CurveFunction":
        """f(X, Y) for functions X, Y on a (possibly different) cyclic cover."""
        T = X.FF

        def horner(poly):
            acc = T.zero
            for c in reversed(poly):
                acc = acc * X + T.const(c)
            return acc

        acc = T.zero
        for a in reversed(self.nums):
            acc = acc * Y + horner(a)
        return acc / horner(self.den)

    def derivative(self) -> "CurveFunction":
        """d/dx, using dy/dx = R' y / (n R) for y^n = R."""
        FF = self.FF
        K = FF.K
        rn, rd = FF.rnum, FF.rden
        # R'/R = rn'/rn - rd'/rd = (rn' rd - rn rd') / (rn rd)
        lnum = P.sub(P.mul(P.derivative(rn), rd), P.mul(rn, P.derivative(rd)))
        lden = P.scale(P.mul(rn, rd), K.from_int(FF.n))
        B = list(self.den)
        dB = P.derivative(B)
        B2 = P.mul(B, B)
        coords = []
        for k, a in enumerate(self.nums):
            a = list(a)
            # (a/B)' = (a' B - a B') / B^2 ; plus (a/B) * k * lnum/lden
            t1n = P.sub(P.mul(P.derivative(a), B), P.mul(a, dB)) if a else []
            if k and a:
                num = P.add(P.mul(t1n, lden), P.scale(P.mul(P.mul(a, B), lnum), K.from_int(k)))
                coords.append((num, P.mul(B2, lden)))
            else:
                coords.append((t1n, B2))
        return FF.from_coordinates(coords)

    def __repr__(self):
        return f"CurveFunction({format_function(self)})"

    def __str__(self):
        return format_function(self)


# ---------------------------------------------------------------------------
# the curve X_{N, lambda}


class HypergeometricCurve(CyclicFunctionField):
    """Function field of ``(1 - x^A)(1 - y^B) = lambda x^A y^B`` over a scalar tower.

    The main case is ``A = B = N``, the curve X_{N,lambda}; other exponents
    (dividing N) give the mixed-degree models used for quotient curves.
    Solved for y: ``y^B = U(x)/W(x)`` with ``U = 1 - x^A`` and
    ``W = 1 - (1 - lambda) x^A``.  ``xi_sign = -1`` swaps the roles of the two
    square roots of ``1/rho`` used for the fixed points of alpha.
    """

    def __init__(self, K, xi_sign: int = 1, A: int = None, B: int = None):
        N = K.N
        A, B = A or N, B or N
        if N % A or N % B:
            raise ValueError("exponents must divide N")
        one, zero = K.one, K.zero
        U = [one] + [zero] * (A - 1) + [-one]
        W = [one] + [zero] * (A - 1) + [-(one - K.lam)]
        super().__init__(K, B, U, W)
        self.N, self.A, self.B = N, A, B
        self.U, self.W = U, W
        self.Uy = [one] + [zero] * (B - 1) + [-one]
        self.Wy = [one] + [zero] * (B - 1) + [-(one - K.lam)]
        self.is_mixed = (A, B) != (N, N)
        self.xi_sign = xi_sign
        self.xi_P = None if self.is_mixed else (K.xi if xi_sign == 1 else -K.xi)
        self._cache = {}

    def __repr__(self):
        if self.is_mixed:
            return f"HypergeometricCurve(A={self.A}, B={self.B}, {self.K!r})"
        return f"HypergeometricCurve(N={self.N}, {self.K!r})"

    def family_size(self, family: str) -> int:
        """Number of cusps in a family: a and c1 lie over y^B = const, b and c2 over x^A = const."""
        return self.B if family in ("a", "c1") else self.A

    def zeta_k(self, k: int, i: int):
        """``zeta_k^i`` with ``zeta_k = zeta_N^(N/k)``."""
        return self.K.zeta_power(i * (self.N // k))

    def rho_inv_k(self, k: int):
        """Inverse of ``rho_k = rho^(N/k)``, a k-th root of 1 - lambda."""
        return self.K.rho_inv ** (self.N // k)

    def genus_formula(self) -> int:
        return (self.A - 1) * (self.B - 1)

    def defining_polynomial_value(self, x0, y0):
        K = self.K
        xn, yn = x0 ** self.A, y0 ** self.B
        return (K.one - xn) * (K.one - yn) - K.lam * xn * yn

    def encode_relation(self) -> CurveFunction:
        x, y, lam = self.x, self.y, self.K.lam
        return (1 - x ** self.A) * (1 - y ** self.B) - self.const(lam) * x ** self.A * y ** self.B

    def parse(self, text: str) -> CurveFunction:
        return parse_expression(self, text)


# ---------------------------------------------------------------------------
# automorphisms


@dataclass(frozen=True)
class Automorphism:
    """``group(r,s)``, ``alpha``, ``swap`` or a word ``s1 o s2 o ... o sk``."""

    kind: str
    params: tuple = ()

    @staticmethod
    def group(r: int, s: int) -> "Automorphism":
        return Automorphism("group", (r, s))

    @staticmethod
    def alpha() -> "Automorphism":
        return Automorphism("alpha")

    @staticmethod
    def swap() -> "Automorphism":
        return Automorphism("swap")

    @staticmethod
    def identity() -> "Automorphism":
        return Automorphism("group", (0, 0))

    @staticmethod
    def word(*parts) -> "Automorphism":
        flat = []
        for p in parts:
            flat.extend(p.params if p.kind == "word" else (p,))
        return Automorphism("word", tuple(flat))

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self o other (other acts first on points)."""
        if self.kind == "group" and other.kind == "group":
            return Automorphism.group(self.params[0] + other.params[0], self.params[1] + other.params[1])
        return Automorphism.word(self, other)

    def normalized(self, N: int) -> "Automorphism":
        if self.kind == "group":
            return Automorphism.group(self.params[0] % N, self.params[1] % N)
        return self

    def __str__(self):
        if self.kind == "group":
            return f"g^{{{self.params[0]},{self.params[1]}}}"
        if self.kind == "word":
            return " o ".join(str(p) for p in self.params)
        return self.kind


def apply_automorphism(sigma: Automorphism, f: CurveFunction) -> CurveFunction:
    """Pullback ``f o sigma``; contravariant: (s o t)^* = t^* after s^*."""
    X = f.FF
    K = X.K
    if sigma.kind == "group":
        r, s = sigma.params
        zr = K.zeta_power(r)

        def scale_x(poly):
            out, p = [], K.one
            for c in poly:
                out.append(c * p)
                p = p * zr
            return out

        nums = [P.scale(scale_x(a), K.zeta_power(s * k)) if a else [] for k, a in enumerate(f.nums)]
        return X._make(nums, scale_x(f.den))
    if sigma.kind == "alpha":
        return _apply_alpha(f)
    if sigma.kind == "swap":
        return f.compose(X.y, X.x)
    if sigma.kind == "word":
        for part in sigma.params:
            f = apply_automorphism(part, f)
        return f
    raise ValueError(f"unknown automorphism {sigma.kind}")


def _apply_alpha(f: CurveFunction) -> CurveFunction:
    """x -> 1/(rho x), y -> 1/(rho y), kept inside K0(x) coordinates."""
    X = f.FF
    K = X.K
    N = X.n
    rho_inv = 1 / K.rho

    def recip(poly, deg):
        # x^deg * poly(1/(rho x)) as a polynomial
        out = [K.zero] * (deg + 1)
        for e, c in enumerate(poly):
            out[deg - e] = c * rho_inv ** e
        return P.trim(out)

    D = max([len(a) - 1 for a in f.nums if a] + [len(f.den) - 1])
    coords = []
    for k, a in enumerate(f.nums):
        if not a:
            coords.append(([], [K.one]))
            continue
        # A(1/(rho x)) / B(1/(rho x)) = recip(A, D) / recip(B, D)
        num, den = recip(list(a), D), recip(list(f.den), D)
        if k == 0:
            coords.append((num, den))
            continue
        # (rho y)^(-k) = rho^(-k) y^(N-k) W/U
        num = P.scale(P.mul(num, X.W), rho_inv ** k)
        den = P.mul(den, X.U)
        coords.append((num, den))
    # coordinate k maps to y^(N-k)
    reordered = [coords[0]] + [coords[N - j] for j in range(1, N)]
    return X.from_coordinates(reordered)


def group_elements(N: int, generators=None):
    """Elements of the subgroup of (Z/N)^2 generated by ``generators`` (all of it by default)."""
    if generators is None:
        return [(r, s) for r in range(N) for s in range(N)]
    seen = {(0, 0)}
    frontier = [(0, 0)]
    gens = [(r % N, s % N) for r, s in generators]
    while frontier:
        r, s = frontier.pop()
        for gr, gs in gens:
            e = ((r + gr) % N, (s + gs) % N)
            if e not in seen:
                seen.add(e)
                frontier.append(e)
    return sorted(seen)


def galois_trace(f: CurveFunction, subgroup=None) -> CurveFunction:
    """Sum of the pullbacks of f over a subgroup of G_N (the whole group by default)."""
    N = f.FF.n
    elements = group_elements(N) if subgroup is None else sorted({(r % N, s % N) for r, s in subgroup})
    es = set(elements)
    for a in elements:
        for b in elements:
            if ((a[0] + b[0]) % N, (a[1] + b[1]) % N) not in es:
                raise ValueError("trace over a subset that is not a subgroup")
    acc = f.FF.zero
    for r, s in elements:
        acc = acc + apply_automorphism(Automorphism.group(r, s), f)
    return acc


def automorphism_order(sigma: Automorphism, X: HypergeometricCurve, bound: int = 64) -> int:
    """Order of sigma detected by repeated action on the generators x and y."""
    fx, fy = X.x, X.y
    for k in range(1, bound + 1):
        fx, fy = apply_automorphism(sigma, fx), apply_automorphism(sigma, fy)
        if fx == X.x and fy == X.y:
            return k
    raise InvariantViolation(f"automorphism {sigma} has order > {bound}")


def group_order(N: int, r: int, s: int) -> int:
    return N // math.gcd(N, math.gcd(r, s))


# ---------------------------------------------------------------------------
# text form


def _format_xpoly(poly, var="x"):
    terms = []
    for e, c in enumerate(poly):
        if not c:
            continue
        mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
        cs = format_scalar(c) if hasattr(c, "nums") else str(c)
        if not mono:
            terms.append(f"({cs})")
        elif cs == "(1)" or cs == "1":
            terms.append(mono)
        else:
            terms.append(f"({cs})*{mono}")
    return " + ".join(terms) if terms else "0"


def format_function(f: CurveFunction) -> str:
    """Parseable text form in the symbols x, y, zeta, xi (integers for finite fields)."""
    xn, yn = f.FF.names
    parts = []
    for k, a in enumerate(f.nums):
        if not a:
            continue
        body = _format_xpoly(a, xn)
        if k == 0:
            parts.append(f"({body})")
        else:
            parts.append(f"({body})*{yn}" + (f"^{k}" if k > 1 else ""))
    num = " + ".join(parts) if parts else "0"
    if len(f.den) == 1 and f.den[0] == f.FF.K.one:
        return num
    return f"({num})/({_format_xpoly(f.den, xn)})"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_ζξρλ][A-Za-z0-9_]*)|(\*\*|[-+*/^()·]))")

_SYMBOLS = {
    "zeta": "zeta", "ζ": "zeta", "xi": "xi", "ξ": "xi", "rho": "rho", "ρ": "rho",
    "lambda": "lam", "lam": "lam", "λ": "lam",
}


def _tokenize(text):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise SyntaxError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        pos = m.end()
        if m.group(1):
            out.append(("num", int(m.group(1))))
        elif m.group(2):
            out.append(("name", m.group(2)))
        else:
            op = m.group(3)
            out.append(("op", {"**": "^", "·": "*"}.get(op, op)))
    return out


def parse_expression(X: CyclicFunctionField, text: str) -> CurveFunction:
    """Parse ``+ - * / ^`` expressions in x, y, zeta, rho, xi, lambda and integers."""
    tokens = _tokenize(text)
    pos = [0]
    K = X.K
    xname, yname = X.names

    def peek():
        return tokens[pos[0]] if pos[0] < len(tokens) else (None, None)

    def take():
        t = peek()
        pos[0] += 1
        return t

    def atom():
        kind, val = take()
        if kind == "num":
            return X.const(val)
        if kind == "name":
            if val == xname:
                return X.x
            if val == yname:
                return X.y
            sym = _SYMBOLS.get(val)
            if sym is None:
                raise SyntaxError(f"unknown symbol {val!r}")
            return X.const(getattr(K, sym))
        if (kind, val) == ("op", "("):
            v = expr()
            if take() != ("op", ")"):
                raise SyntaxError("missing ')'")
            return v
        raise SyntaxError(f"unexpected token {val!r}")

    def exponent():
        sign = 1
        while peek() in (("op", "-"), ("op", "+")):
            if take()[1] == "-":
                sign = -sign
        kind, val = take()
        if kind == "num":
            return sign * val
        if (kind, val) == ("op", "("):
            e = exponent()
            if take() != ("op", ")"):
                raise SyntaxError("missing ')' in exponent")
            return sign * e
        raise SyntaxError("exponent must be an integer")

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            return base ** exponent()
        return base

    def unary():
        if peek() == ("op", "-"):
            take()
            return -unary()
        if peek() == ("op", "+"):
            take()
            return unary()
        return power()

    def term():
        v = unary()
        while peek() in (("op", "*"), ("op", "/")):
            op = take()[1]
            w = unary()
            v = v * w if op == "*" else v / w
        return v

    def expr():
        v = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            w = term()
            v = v + w if op == "+" else v - w
        return v

    value = expr()
    if pos[0] != len(tokens):
        raise SyntaxError(f"trailing input at token {pos[0]}")
    return value
