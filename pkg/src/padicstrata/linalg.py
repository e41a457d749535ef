"""Matrix utilities over a truncated Witt ring.

Matrices are tuples of tuples of WittElement, always square unless noted.
The characteristic polynomial uses the division-free Berkowitz recursion, so
everything stays exact modulo p^N.
"""

from __future__ import annotations

from .exceptions import InvalidInputError


def identity(ctx, n):
    return tuple(tuple(ctx.one if i == j else ctx.zero for j in range(n))
                 for i in range(n))


def zeros(ctx, n, m=None):
    m = n if m is None else m
    return tuple(tuple(ctx.zero for _ in range(m)) for _ in range(n))


def mat_from_rows(rows):
    return tuple(tuple(r) for r in rows)


def transpose(a):
    return tuple(zip(*a))


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scal(c, a):
    return tuple(tuple(c * x for x in row) for row in a)


def mat_mul(a, b):
    bt = transpose(b)
    return tuple(tuple(_dot(row, col) for col in bt) for row in a)


def _dot(u, v):
    it = iter(zip(u, v))
    x, y = next(it)
    acc = x * y
    for x, y in it:
        acc = acc + x * y
    return acc


def mat_vec(a, v):
    return tuple(_dot(row, v) for row in a)


def vec_add(u, v):
    return tuple(x + y for x, y in zip(u, v))


def vec_sub(u, v):
    return tuple(x - y for x, y in zip(u, v))


def vec_scal(c, v):
    return tuple(c * x for x in v)


def sigma_mat(a, k=1):
    return tuple(tuple(x.frobenius(k) for x in row) for row in a)


def sigma_vec(v, k=1):
    return tuple(x.frobenius(k) for x in v)


def mat_eq_mod(a, b, k):
    return all(x.eq_mod(y, k) for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def mat_convert(ctx, a):
    return tuple(tuple(ctx.convert(x) for x in row) for row in a)


def charpoly(ctx, a):
    """Coefficients c[0..n] of det(X*I - A), c[n] = 1, by Berkowitz."""
    n = len(a)
    if n == 0:
        return [ctx.one]
    poly = [-a[0][0], ctx.one]  # ascending
    for i in range(1, n):
        # principal (i+1)x(i+1) leading submatrix
        row = a[i][:i]
        col = [a[k][i] for k in range(i)]
        sub = [r[:i] for r in a[:i]]
        # Toeplitz column: [1, -a_ii, -row*col, -row*sub*col, ...]
        tcol = [ctx.one, -a[i][i]]
        vec = col
        for _ in range(i - 1):
            tcol.append(-_dot(row, vec))
            vec = mat_vec(sub, vec)
        tcol.append(-_dot(row, vec))
        old = poly[::-1]  # descending, length i+1
        new = []
        for j in range(i + 2):
            acc = ctx.zero
            for k in range(max(0, j - i - 1), min(j, i) + 1):
                acc = acc + tcol[j - k] * old[k]
            new.append(acc)
        poly = new[::-1]
    return poly


def det(ctx, a):
    n = len(a)
    c0 = charpoly(ctx, a)[0]
    return c0 if n % 2 == 0 else -c0


def mat_inv(ctx, a):
    """Inverse of a matrix that is invertible mod p (Gauss-Jordan, unit pivots)."""
    n = len(a)
    aug = [list(row) + list(idr) for row, idr in zip(a, identity(ctx, n))]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if aug[r][col].is_unit():
                pivot = r
                break
        if pivot is None:
            raise InvalidInputError("matrix is not invertible mod p")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [inv * x for x in aug[col]]
        for r in range(n):
            if r != col:
                c = aug[r][col]
                if not c.is_zero():
                    aug[r] = [x - c * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def adjugate_times_inv_unit(ctx, a, g):
    """p * a^{-1} for a matrix whose determinant has valuation exactly g.

    Computed division-free via the characteristic polynomial: with
    chi(X) = X^n + c_{n-1} X^{n-1} + ... + c_0 and q(X) = (chi(X) - c_0)/X,
    A * q(A) = -c_0 * I, so p * A^{-1} = -p * q(A) / c_0.  The caller must
    supply enough precision headroom: the result is exact only modulo
    p^(N - g + 1) relative to the context precision.
    """
    n = len(a)
    cp = charpoly(ctx, a)
    c0 = cp[0]
    v = c0.valuation()
    if v != g:
        raise InvalidInputError(
            f"determinant valuation {v} != expected {g}")
    uinv = c0.divide_exact_p(g).inverse()
    # Horner: q(A) = ((A + c_{n-1} I) A + ... ) A + c_1 I
    q = identity(ctx, n)
    for k in range(n - 1, 0, -1):
        q = mat_mul(a, q)
        q = mat_add(q, mat_scal(cp[k], identity(ctx, n)))
    # A q(A) = -c0 I  =>  p A^{-1} = -(q(A) u^{-1}) / p^{g-1}
    scaled = mat_scal(-uinv, q)
    if g > 1:
        scaled = tuple(tuple(x.divide_exact_p(g - 1) for x in row)
                       for row in scaled)
    return scaled
