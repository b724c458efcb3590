"""Exact Gaussian elimination over any field of scalars (tower or finite field)."""


def rref(rows, ncols, zero, one):
    """Reduced row echelon form.  Returns ``(reduced_rows, pivot_columns)``."""
    m = [list(r) for r in rows if any(r)]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = one / m[r][c]
        m[r] = [v * inv if v else zero for v in m[r]]
        row_r = m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b if b else a for a, b in zip(m[i], row_r)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows, ncols, zero, one):
    return len(rref(rows, ncols, zero, one)[1])


def kernel(rows, ncols, zero, one):
    """Basis of ``{v : M v = 0}`` as a list of column vectors."""
    red, pivots = rref(rows, ncols, zero, one)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fcol in free:
        v = [zero] * ncols
        v[fcol] = one
        for row, pc in zip(red, pivots):
            if row[fcol]:
                v[pc] = -row[fcol]
        basis.append(v)
    return basis


def mat_vec(rows, v, zero):
    out = []
    for row in rows:
        acc = zero
        for a, b in zip(row, v):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return out


def span_contains(basis, v, ncols, zero, one):
    """Whether ``v`` lies in the span of ``basis`` (lists of length ncols)."""
    r0 = rank(basis, ncols, zero, one)
    return rank(list(basis) + [v], ncols, zero, one) == r0
