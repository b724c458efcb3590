"""Dense univariate polynomials over an arbitrary exact field.

A polynomial is a list of field elements, lowest degree first, with no
trailing zeros.  The empty list is the zero polynomial.  Elements only need
``+ - * /``, ``bool`` (nonzero test) and equality, so the same routines serve
the symbolic tower, the finite-field backend and the layered view.
"""


def trim(p):
    n = len(p)
    while n and not p[n - 1]:
        n -= 1
    if n != len(p):
        del p[n:]
    return p


def degree(p):
    return len(p) - 1


def add(p, q):
    if len(p) < len(q):
        p, q = q, p
    r = list(p)
    for i, c in enumerate(q):
        r[i] = r[i] + c
    return trim(r)


def sub(p, q):
    r = list(p) + [None] * max(0, len(q) - len(p))
    for i, c in enumerate(q):
        r[i] = -c if r[i] is None else r[i] - c
    return trim(r)


def neg(p):
    return [-c for c in p]


def scale(p, c):
    if not c:
        return []
    return trim([a * c for a in p])


def mul(p, q):
    if not p or not q:
        return []
    r = [None] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if not b:
                continue
            t = a * b
            r[i + j] = t if r[i + j] is None else r[i + j] + t
    zero = p[0] - p[0]
    return trim([zero if c is None else c for c in r])


def shift(p, k):
    """Multiply by the k-th power of the variable (k >= 0)."""
    if not p:
        return []
    zero = p[0] - p[0]
    return [zero] * k + list(p)


def power(p, e, one):
    result = [one]
    base = p
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


def divmod_(p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    dq = len(q) - 1
    if len(r) - 1 < dq:
        return [], r
    inv_lead = 1 / q[-1]
    quot = [None] * (len(r) - dq)
    for k in range(len(r) - 1 - dq, -1, -1):
        c = r[k + dq] * inv_lead
        quot[k] = c
        if c:
            for j in range(dq + 1):
                r[k + j] = r[k + j] - c * q[j]
    return trim(quot), trim(r[:dq])


def exact_div(p, q):
    quot, rem = divmod_(p, q)
    if rem:
        raise ArithmeticError("inexact polynomial division")
    return quot


def monic(p):
    if not p or p[-1] == 1:
        return list(p)
    inv = 1 / p[-1]
    return [c * inv for c in p]


def gcd(p, q):
    """Monic gcd by the Euclidean algorithm."""
    while q:
        p, q = q, divmod_(p, q)[1]
    return monic(p)


def xgcd(p, q, one):
    """Return (g, s, t) with s*p + t*q = g, g monic."""
    r0, r1 = p, q
    s0, s1 = [one], []
    t0, t1 = [], [one]
    while r1:
        quot, rem = divmod_(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, sub(s0, mul(quot, s1))
        t0, t1 = t1, sub(t0, mul(quot, t1))
    if not r0:
        return [], s0, t0
    inv = 1 / r0[-1]
    return scale(r0, inv), scale(s0, inv), scale(t0, inv)


def evaluate(p, x):
    """Horner evaluation; ``x`` may live in any ring the coefficients map into."""
    if not p:
        return x - x
    acc = p[-1] + (x - x)
    for c in reversed(p[:-1]):
        acc = acc * x + c
    return acc


def derivative(p):
    return trim([p[i] * i for i in range(1, len(p))])


def compose_linear(p, a, b, one):
    """p(a + b*t) as a polynomial in t."""
    result = []
    lin = trim([a, b]) if a or b else []
    for c in reversed(p):
        result = add(mul(result, lin), [c] if c else [])
    return result
