"""Constructive symplectic normal form for local-local modules of a-type (1,0,...,0).

The algorithm follows an induction on precision: pick a generator X of the
degree-0 part of M/(F,V)M with <X, F^g X> a unit, normalize that pairing to 1
one p-digit at a time, and let the rest of the basis be derived from X
(X_i = F^i X, Y_0 = F^g X, Y_{g-1} = -V X) with the middle Y_i corrected by
symplectic Gram-Schmidt at each stage.

Two residue-field equations drive the induction; when either has no solution
the coefficient field is doubled (up to a cap) and the whole run restarts on
the extended module.

Precision ledger: the input context must satisfy N >= N_target + g + 2.  The
V-matrix costs one digit (see DieudonneModule.v_matrix), every other step is
exact, and the g + 1 remaining digits of headroom absorb the final coefficient
read-off (one division by p) with room to spare.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from . import linalg
from .exceptions import (FieldTooSmallError, HypothesisViolationError,
                         InvalidInputError, PrecisionError)
from .module import DieudonneModule, NormalFormCoeffs
from .residue import unit_power_solve
from .witt import make_context


class _NoSolution(Exception):
    """Internal: a residue-field equation needs a bigger field."""


def solve_norm_like(field, u, g):
    """c with c^(1 + p^g) = u^{-1} in F_{p^m}, or None."""
    e = 1 + pow(field.p, g % field.m)
    return unit_power_solve(field, field.inv(u), e)


def _fp_basis(field):
    return [tuple(1 if t == s else 0 for t in range(field.m))
            for s in range(field.m)]


def solve_additive(field, a, g):
    """b with b + b^(sigma^g) = -a in F_{p^m}, or None."""
    k = g % field.m
    images = [field.add(e, field.frobenius(e, k)) for e in _fp_basis(field)]
    return field.solve_fp_linear(images, field.neg(a))


def solve_twisted_difference(field, a):
    """b with b - b^(sigma^2) = -a in F_{p^m}, or None (rank-2 case)."""
    images = [field.sub(e, field.frobenius(e, 2)) for e in _fp_basis(field)]
    return field.solve_fp_linear(images, field.neg(a))


# -- coefficient-field extension ------------------------------------------

@lru_cache(maxsize=None)
def _embedding_powers(p, m_small, m_big, N):
    """Powers of the image of the small generator inside the big context."""
    small = make_context(p, m_small, N)
    big = make_context(p, m_big, N)
    root = big.residue_field.find_root(small.residue_field.modulus, seed=0)
    tau = big.teichmuller(root)
    # tau is an exact root of the small Teichmueller modulus, which makes the
    # coordinate-wise map below a sigma-commuting ring embedding
    acc = big.zero
    for c in reversed(small.modulus):
        acc = acc * tau + big.from_int(c)
    assert acc.is_zero(), "embedding root is not exact"
    powers = [big.one]
    for _ in range(m_small - 1):
        powers.append(powers[-1] * tau)
    return tuple(powers)


def embed_witt(x, big):
    powers = _embedding_powers(x.ctx.p, x.ctx.m, big.m, big.N)
    acc = big.zero
    for c, t in zip(x.coeffs, powers):
        if c:
            acc = acc + c * t
    return acc


def embed_module(mod, big):
    emb = lambda row: tuple(embed_witt(x, big) for x in row)
    return DieudonneModule(big, mod.f, mod.r,
                           tuple(emb(row) for row in mod.frob_matrix),
                           tuple(emb(row) for row in mod.gram))


# -- the algorithm ---------------------------------------------------------

@dataclass(frozen=True)
class NormalFormResult:
    coeffs: NormalFormCoeffs
    change_of_basis: tuple
    field_extension_used: int
    source: DieudonneModule  # the (possibly field-extended) input module


def normalize(mod, N_target, extension_cap=None, seed=0):
    ctx = mod.ctx
    f, r, g = mod.f, mod.r, mod.g
    if N_target < 2:
        raise InvalidInputError("N_target must be at least 2")
    if ctx.N < N_target + g + 2:
        raise PrecisionError(
            f"need ctx.N >= N_target + g + 2 = {N_target + g + 2}, have {ctx.N}")
    expected = (1,) + (0,) * (f - 1)
    if mod.a_type() != expected:
        raise HypothesisViolationError(
            f"a-type is {mod.a_type()}, normal form needs {expected}")
    if not mod.is_local_local():
        raise HypothesisViolationError("module is not local-local")

    fast = _fast_path(mod, N_target)
    if fast is not None:
        return fast

    if extension_cap is None:
        extension_cap = 4 * f * g
    ladder = [ctx.m]
    cur = mod
    while True:
        try:
            return _normalize_attempt(cur, N_target, seed)
        except _NoSolution:
            new_m = 2 * cur.ctx.m
            if new_m > extension_cap:
                raise FieldTooSmallError(
                    f"no solution within the field tower (cap m <= "
                    f"{extension_cap})", ladder + [new_m]) from None
            ladder.append(new_m)
            big = make_context(ctx.p, new_m, cur.ctx.N)
            cur = embed_module(cur, big)


def _fast_path(mod, N_target):
    """Identity basis for an input that is already in normal form."""
    from .cayley import MainPart
    try:
        MainPart.from_module(mod)
        coeffs = mod.read_normal_form_coeffs()
    except InvalidInputError:
        return None
    return NormalFormResult(coeffs, linalg.identity(mod.ctx, 2 * mod.g),
                            mod.ctx.m, mod)


def _normalize_attempt(mod, N_target, seed):
    ctx = mod.ctx
    f, r, g = mod.f, mod.r, mod.g
    p = ctx.p
    k = ctx.residue_field
    A = mod.frob_matrix
    J = mod.gram
    Vmat = mod.v_matrix()

    def F(v):
        return linalg.mat_vec(A, linalg.sigma_vec(v))

    def V(v):
        return linalg.mat_vec(Vmat, linalg.sigma_vec(v, ctx.m - 1))

    def pair(u, v):
        return linalg._dot(u, linalg.mat_vec(J, v))

    def Fpow(v, e):
        for _ in range(e):
            v = F(v)
        return v

    # -- choose X in the degree-0 piece with <X, F^g X> a unit -------------
    piece0 = [n for n in range(2 * g) if mod.grading(n) == 0]
    rng = random.Random(seed)

    def basis_vec(n):
        return tuple(ctx.one if t == n else ctx.zero for t in range(2 * g))

    X = None
    for attempt in range(2 * r + 200):
        if attempt < 2 * r:
            cand = basis_vec(piece0[attempt])
        else:
            cand = tuple(ctx.zero for _ in range(2 * g))
            for n in piece0:
                c = ctx.teichmuller(k.from_int(rng.randrange(k.q)))
                cand = linalg.vec_add(cand, linalg.vec_scal(c, basis_vec(n)))
        if pair(cand, Fpow(cand, g)).is_unit():
            X = cand
            break
    if X is None:
        raise HypothesisViolationError(
            "found no degree-0 vector with unit pairing against F^g of itself")

    # -- step 0: unit normalization and isotropy mod p ---------------------
    u = k.element(pair(X, Fpow(X, g)).reduce_mod_p())
    c = solve_norm_like(k, u, g)
    if c is None:
        raise _NoSolution
    X = linalg.vec_scal(ctx.teichmuller(c), X)

    # run one digit past the target so the coefficient read-off is clean at it
    N_internal = N_target + 1

    if g == 1:
        return _rank2_finish(mod, X, F, pair, N_internal)

    def derived(X, Ymid):
        xs = [X]
        for _ in range(g - 1):
            xs.append(F(xs[-1]))
        y0 = F(xs[-1])
        ys = [y0] + list(Ymid)
        if g >= 2:
            ys.append(linalg.vec_scal(-ctx.one, V(X)))
        return xs, ys

    def fresh_ymid(X):
        out = []
        for i in range(1, g - 1):
            v = X
            for _ in range(g - i):
                v = V(v)
            out.append(linalg.vec_scal(-ctx.one, v))
        return out

    def correct_X(X, xs, ys, n):
        """Make <X, X_{jf}> = 0 mod p^{n+1} by adding p^n-multiples of Y_{if}."""
        if r < 2:
            return X
        pn = ctx.from_int(p**n)
        rows = [[k.element(pair(ys[i * f], xs[j * f]).reduce_mod_p())
                 for i in range(1, r)] for j in range(1, r)]
        rhs = []
        for j in range(1, r):
            d = pair(X, xs[j * f])
            dn = d.divide_exact_p(n) if n else d
            rhs.append(k.neg(k.element(dn.reduce_mod_p())))
        sol = k.solve(rows, rhs)
        if sol is None:
            raise HypothesisViolationError(
                "the pairing system for the generator correction is singular")
        for i, a in enumerate(sol, start=1):
            if not k.is_zero(a):
                X = linalg.vec_add(
                    X, linalg.vec_scal(pn * ctx.teichmuller(a), ys[i * f]))
        return X

    def gram_defect_ok(xs, ys, prec):
        basis = xs + ys
        for a in range(2 * g):
            for b in range(2 * g):
                want = ctx.zero
                if b == a + g:
                    want = ctx.one
                elif a == b + g:
                    want = -ctx.one
                if not pair(basis[a], basis[b]).eq_mod(want, prec):
                    return (a, b)
        return None

    # initial derived basis, isotropy correction at n = 0
    xs, ys = derived(X, fresh_ymid(X))
    X = correct_X(X, xs, ys, 0)
    Ymid = fresh_ymid(X)
    xs, ys = derived(X, Ymid)
    bad = gram_defect_ok(xs, ys, 1)
    assert bad is None, f"basis not symplectic mod p after step 0 at {bad}"

    # -- induction on precision --------------------------------------------
    for n in range(1, N_internal):
        pn = ctx.from_int(p**n)
        X = correct_X(X, xs, ys, n)
        xs, ys = derived(X, Ymid)
        d = pair(X, ys[0]) - ctx.one
        if not d.eq_mod(ctx.zero, n + 1):
            a = k.element(d.divide_exact_p(n).reduce_mod_p())
            b = solve_additive(k, a, g)
            if b is None:
                raise _NoSolution
            X = linalg.vec_add(X, linalg.vec_scal(pn * ctx.teichmuller(b), X))
            xs, ys = derived(X, Ymid)
        # symplectic Gram-Schmidt on the adjustable middle Y_i
        new_mid = []
        for i in range(1, g - 1):
            y = ys[i]
            for l in range(g):
                dx = pair(xs[l], ys[i])
                if l == i:
                    dx = dx - ctx.one
                if not dx.is_zero():
                    y = linalg.vec_sub(y, linalg.vec_scal(dx, ys[l]))
                dy = pair(ys[l], ys[i])
                if not dy.is_zero():
                    y = linalg.vec_add(y, linalg.vec_scal(dy, xs[l]))
            new_mid.append(y)
        Ymid = new_mid
        xs, ys = derived(X, Ymid)
        bad = gram_defect_ok(xs, ys, n + 1)
        assert bad is None, f"basis not symplectic mod p^{n + 1} at {bad}"

    # -- read off the coefficients -----------------------------------------
    U = linalg.transpose(tuple(xs + ys))  # basis vectors as columns
    Uinv = linalg.mat_inv(ctx, U)
    Anew = linalg.mat_mul(linalg.mat_mul(Uinv, A), linalg.sigma_mat(U))
    a = {}
    for j in range(g - 1):
        for i in range(1, g):
            if (i - j - 1) % f:
                continue
            entry = Anew[i][g + j]
            val = entry.divide_exact_p()
            if not val.is_zero():
                a[(i + 1, j + 2)] = val
    # enforce the symmetry a_{i,j} = a_{j,i} from the lower triangle
    sym = {}
    for (i, j), v in a.items():
        if i >= j:
            sym[(i, j)] = v
            sym[(j, i)] = v
    coeffs = NormalFormCoeffs(ctx, f, r, sym)
    return NormalFormResult(coeffs, U, ctx.m, mod)


def _rank2_finish(mod, X, F, pair, N_internal):
    """g = 1: besides <X, FX> = 1 the basis must satisfy FY = -pX, i.e. the
    Y-component of F^2 X must vanish; each digit is killed by the twisted
    equation b - b^(sigma^2) = -defect."""
    ctx = mod.ctx
    p, k = ctx.p, ctx.residue_field
    for n in range(N_internal):
        pn = ctx.from_int(p**n)
        Y = F(X)
        if n >= 1:
            d = pair(X, Y) - ctx.one
            if not d.eq_mod(ctx.zero, n + 1):
                a = k.element(d.divide_exact_p(n).reduce_mod_p())
                b = solve_additive(k, a, 1)
                if b is None:
                    raise _NoSolution
                X = linalg.vec_add(X, linalg.vec_scal(pn * ctx.teichmuller(b), X))
                Y = F(X)
        U = linalg.transpose((X, Y))
        c = linalg.mat_vec(linalg.mat_inv(ctx, U), F(Y))
        gamma = c[1].divide_exact_p()
        if not gamma.eq_mod(ctx.zero, n + 1):
            gbar = k.element(gamma.divide_exact_p(n).reduce_mod_p())
            b = solve_twisted_difference(k, gbar)
            if b is None:
                raise _NoSolution
            X = linalg.vec_add(X, linalg.vec_scal(pn * ctx.teichmuller(b), Y))
    Y = F(X)
    assert pair(X, Y).eq_mod(ctx.one, N_internal)
    U = linalg.transpose((X, Y))
    coeffs = NormalFormCoeffs(ctx, mod.f, mod.r, {})
    return NormalFormResult(coeffs, U, ctx.m, mod)
