"""Seeded random inputs: normal-form coefficients and symplectic base changes.

Base changes are built per graded piece as a product of elementary symplectic
blocks (two symmetric shears and a GL factor), so they are exactly symplectic
and exactly grading-preserving by construction.
"""

from __future__ import annotations

import random

from . import linalg
from .module import NormalFormCoeffs


def random_teichmuller_unit(ctx, rng):
    return ctx.teichmuller(ctx.residue_field.random_nonzero(rng))


def random_witt(ctx, rng):
    return ctx.element([rng.randrange(ctx.pN) for _ in range(ctx.m)])


def random_coeffs(ctx, f, r, seed=0, unit_probability=0.5):
    """Unit-or-zero coefficients on the allowed index pairs."""
    g = f * r
    rng = random.Random(seed)
    a = {}
    for i in range(2, g + 1):
        for j in range(2, i + 1):
            if (i - j) % f:
                continue
            if rng.random() < unit_probability:
                v = random_teichmuller_unit(ctx, rng)
                a[(i, j)] = v
                a[(j, i)] = v
    return NormalFormCoeffs(ctx, f, r, a)


def _random_gl(ctx, n, rng):
    """Invertible-mod-p n x n matrix (rejection sampling on the pivot test)."""
    while True:
        q = tuple(tuple(random_witt(ctx, rng) for _ in range(n))
                  for _ in range(n))
        try:
            qinv = linalg.mat_inv(ctx, q)
        except Exception:
            continue
        return q, qinv


def _random_symmetric(ctx, n, rng):
    m = [[ctx.zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            v = random_witt(ctx, rng)
            m[i][j] = v
            m[j][i] = v
    return tuple(tuple(row) for row in m)


def _symplectic_block(ctx, r, rng):
    """Random element of Sp(2r) over the Witt ring, for one graded piece."""
    ident = linalg.identity(ctx, r)
    zero = linalg.zeros(ctx, r)
    b = _random_symmetric(ctx, r, rng)
    c = _random_symmetric(ctx, r, rng)
    q, qinv = _random_gl(ctx, r, rng)
    qti = linalg.transpose(qinv)

    def assemble(tl, tr, bl, br):
        rows = []
        for i in range(r):
            rows.append(tuple(tl[i]) + tuple(tr[i]))
        for i in range(r):
            rows.append(tuple(bl[i]) + tuple(br[i]))
        return tuple(rows)

    shear_u = assemble(ident, b, zero, ident)
    diag = assemble(q, zero, zero, qti)
    shear_l = assemble(ident, zero, c, ident)
    return linalg.mat_mul(linalg.mat_mul(shear_u, diag), shear_l)


def random_symplectic(ctx, f, r, seed=0):
    """Grading-preserving symplectic 2g x 2g base change, exactly symplectic."""
    g = f * r
    rng = random.Random(seed)
    rows = [[ctx.zero] * (2 * g) for _ in range(2 * g)]
    for ell in range(f):
        block = _symplectic_block(ctx, r, rng)
        # local basis: X_ell, X_{ell+f}, ..., then Y_ell, Y_{ell+f}, ...
        idx = [ell + i * f for i in range(r)] + [g + ell + i * f for i in range(r)]
        for a, ga in enumerate(idx):
            for b, gb in enumerate(idx):
                rows[ga][gb] = block[a][b]
    return tuple(tuple(row) for row in rows)
