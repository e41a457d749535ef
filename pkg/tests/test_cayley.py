import itertools
import random

import pytest

from padicstrata import (DieudonneModule, MainPart, NormalFormCoeffs,
                         ch_newton_polygon, ch_polynomial, diagram_render,
                         make_context)
from padicstrata import cayley, linalg
from padicstrata.exceptions import InvalidInputError, ValidityError
from padicstrata.generate import random_coeffs


def charpoly_oracle(ctx, a):
    """Permutation expansion of det(x I - A), ascending coefficients.

    Independent of the production implementation; fine for n <= 4.
    """
    n = len(a)

    def poly_mul(u, v):
        out = [ctx.zero] * (len(u) + len(v) - 1)
        for i, x in enumerate(u):
            for j, y in enumerate(v):
                out[i + j] = out[i + j] + x * y
        return out

    total = [ctx.zero] * (n + 1)
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = [False] * n
        for i in range(n):
            if not seen[i]:
                j, length = i, 0
                while not seen[j]:
                    seen[j] = True
                    j = perm[j]
                    length += 1
                if length % 2 == 0:
                    sign = -sign
        term = [ctx.one]
        for i in range(n):
            entry = -a[i][perm[i]]
            if i == perm[i]:
                term = poly_mul(term, [entry, ctx.one])
            else:
                term = poly_mul(term, [entry])
        term += [ctx.zero] * (n + 1 - len(term))
        for d in range(n + 1):
            if sign > 0:
                total[d] = total[d] + term[d]
            else:
                total[d] = total[d] - term[d]
    return total


def test_charpoly_against_permutation_oracle():
    rng = random.Random(9)
    for p, m in [(2, 1), (3, 2)]:
        ctx = make_context(p, m, 6)
        for n in (2, 3, 4):
            for _ in range(5):
                a = tuple(tuple(ctx.element(
                    [rng.randrange(ctx.pN) for _ in range(m)])
                    for _ in range(n)) for _ in range(n))
                assert linalg.charpoly(ctx, a) == charpoly_oracle(ctx, a)


def test_main_part_extraction():
    ctx = make_context(2, 3, 10)
    coeffs = random_coeffs(ctx, 3, 1, seed=1)
    mod = DieudonneModule.from_normal_form(coeffs)
    mp = MainPart.from_module(mod)
    for (i, j), v in coeffs.a.items():
        # p-scaled slots determine the coefficient one digit short of N
        assert mp.entry(i, j).eq_mod(v, ctx.N - 1)
    assert mp.entries_unit_or_zero()


def test_main_part_rejects_non_normal_form():
    ctx = make_context(2, 3, 10)
    mod = DieudonneModule.from_normal_form(NormalFormCoeffs(ctx, 3, 1, {}))
    from padicstrata.generate import random_symplectic
    moved = mod.apply_base_change(random_symplectic(ctx, 3, 1, seed=3))
    with pytest.raises(InvalidInputError):
        MainPart.from_module(moved)


def test_ch_polynomial_g1():
    ctx = make_context(2, 1, 6)
    mod = DieudonneModule.from_normal_form(NormalFormCoeffs(ctx, 1, 1, {}))
    cp = ch_polynomial(MainPart.from_module(mod))
    assert cp == [-ctx.from_int(2), ctx.zero, ctx.one]


def test_ch_polynomial_coefficient_formula():
    # single diagonal coefficient a_{2,2} at f=1, r=2:
    # X^4 + p sigma(a_{2,2}) X^2 - p^2
    ctx = make_context(3, 1, 8)
    u = ctx.from_int(2)
    mod = DieudonneModule.from_normal_form(
        NormalFormCoeffs(ctx, 1, 2, {(2, 2): u}))
    cp = ch_polynomial(MainPart.from_module(mod))
    p = ctx.from_int(3)
    assert cp[4] == ctx.one
    assert cp[3] == ctx.zero
    assert cp[2].eq_mod(p * u.frobenius(1), ctx.N - 1)
    assert cp[1] == ctx.zero
    assert cp[0] == -p * p


def test_ch_equals_oracle_samples():
    rng = random.Random(17)
    for p, f, r in [(2, 1, 2), (2, 3, 1), (3, 2, 1), (5, 1, 1)]:
        m = f
        g = f * r
        ctx = make_context(p, m, 2 * m * g + 4)
        for seed in range(5):
            coeffs = random_coeffs(ctx, f, r, seed=seed)
            mod = DieudonneModule.from_normal_form(coeffs)
            assert (ch_newton_polygon(MainPart.from_module(mod))
                    == mod.slopes_oracle())


def test_ch_refuses_non_unit_entry():
    ctx = make_context(2, 3, 10)
    coeffs = NormalFormCoeffs(ctx, 3, 1, {(3, 3): ctx.from_int(2)})
    mod = DieudonneModule.from_normal_form(coeffs)
    with pytest.raises(ValidityError):
        ch_newton_polygon(MainPart.from_module(mod))


def test_slot_maps_round_trip():
    f, r = 3, 2
    for ell in range(f):
        for i in range(1, r + 1):
            for j in range(1, r + 1):
                I, J = cayley.slot_for_t(f, ell, i, j)
                assert cayley.t_for_slot(f, I, J) == (ell, i, j)


def test_t_positions_formula():
    f, r = 3, 2
    for ell in range(f):
        for i in range(1, r + 1):
            for j in range(1, r + 1):
                x, y = cayley.t_position(f, r, ell, i, j)
                assert (x, y) == ((r - (i - j)) * f, (j - 1) * f + ell)
                I, J = cayley.slot_for_t(f, ell, i, j)
                assert (x, y) == cayley.slot_position(f * r, I, J)


def test_diagram_render_marks():
    ctx = make_context(2, 3, 10)
    mod = DieudonneModule.from_normal_form(NormalFormCoeffs(ctx, 3, 2, {}))
    mp = MainPart.from_module(mod)
    from padicstrata import AdmissibleParams, supersingular
    beta = supersingular(AdmissibleParams(3, 2))
    out = diagram_render(mp, beta)
    assert "t2,21*" in out
    assert "t0,22*" in out
    assert "t0,11" in out and "t0,11*" not in out
    assert out.splitlines()[0].startswith("y=6")
    assert "-1" in out
