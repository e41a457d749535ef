import pytest

from padicstrata import (DieudonneModule, NormalFormCoeffs, make_context,
                         normal_form_matrix)
from padicstrata import linalg
from padicstrata.exceptions import InvalidInputError
from padicstrata.generate import random_coeffs, random_symplectic
from padicstrata.module import standard_gram


def ctx232():
    return make_context(2, 3, 10)


def test_normal_form_matrix_shape_g1():
    ctx = make_context(2, 1, 6)
    A = normal_form_matrix(ctx, 1, 1, None)
    p = ctx.from_int(2)
    assert A == ((ctx.zero, -p), (ctx.one, ctx.zero))


def test_normal_form_matrix_shape():
    ctx = ctx232()
    A = normal_form_matrix(ctx, 3, 1, None)
    g = 3
    p = ctx.from_int(2)
    for j in range(g - 1):
        for i in range(2 * g):
            assert A[i][j] == (ctx.one if i == j + 1 else ctx.zero)
    assert A[0][2 * g - 1] == -p
    assert A[g][g - 1] == ctx.one
    assert A[g + 2][g + 1] == p


def test_coeff_validation():
    ctx = ctx232()
    with pytest.raises(InvalidInputError):
        NormalFormCoeffs(ctx, 3, 1, {(2, 3): ctx.one})  # 2 != 3 mod 3
    with pytest.raises(InvalidInputError):
        NormalFormCoeffs(ctx, 3, 1, {(3, 3): ctx.one, (3, 6): ctx.one})
    c = NormalFormCoeffs(ctx, 3, 2, {(4, 4): 1})
    assert c.get(4, 4) == ctx.one
    assert c.get(2, 2).is_zero()


def test_module_validation_rejects_bad_pairing():
    ctx = ctx232()
    mod = DieudonneModule.from_normal_form(NormalFormCoeffs(ctx, 3, 1, {}))
    rows = [list(r) for r in mod.frob_matrix]
    rows[0][5] = ctx.from_int(2)  # breaks <Fx,y> = sigma<x,Vy>
    with pytest.raises(InvalidInputError):
        DieudonneModule(ctx, 3, 1, rows)


def test_grading():
    ctx = ctx232()
    mod = DieudonneModule.from_normal_form(NormalFormCoeffs(ctx, 3, 2, {}))
    assert [mod.grading(i) for i in range(12)] == [0, 1, 2, 0, 1, 2] * 2


def test_fv_is_p():
    ctx = ctx232()
    coeffs = random_coeffs(ctx, 3, 1, seed=2)
    mod = DieudonneModule.from_normal_form(coeffs)
    FV = linalg.mat_mul(mod.frob_matrix,
                        linalg.sigma_mat(mod.v_matrix(), 1))
    p_id = linalg.mat_scal(ctx.from_int(2), linalg.identity(ctx, 6))
    assert linalg.mat_eq_mod(FV, p_id, ctx.N - 1)


def test_slopes_oracle_supersingular():
    ctx = ctx232()
    mod = DieudonneModule.from_normal_form(NormalFormCoeffs(ctx, 3, 1, {}))
    assert mod.slopes_oracle().to_string() == "1/2 x6"


def test_slopes_oracle_ordinary_direction():
    ctx = make_context(2, 1, 8)
    coeffs = NormalFormCoeffs(ctx, 1, 2, {(2, 2): ctx.one})
    mod = DieudonneModule.from_normal_form(coeffs)
    np = mod.slopes_oracle()
    assert np.is_symmetric()
    assert np.height == 4


def test_a_type_base():
    ctx = ctx232()
    mod = DieudonneModule.from_normal_form(NormalFormCoeffs(ctx, 3, 2, {}))
    assert mod.a_type() == (1, 0, 0)
    assert mod.a_number() == 1


def test_local_local():
    ctx = ctx232()
    mod = DieudonneModule.from_normal_form(NormalFormCoeffs(ctx, 3, 1, {}))
    assert mod.is_local_local()
    ctx1 = make_context(2, 1, 8)
    ordc = NormalFormCoeffs(ctx1, 1, 1, {})
    m2 = DieudonneModule.from_normal_form(ordc)
    rows = [list(r) for r in m2.frob_matrix]
    rows[0][0] = rows[0][0] + ctx1.one  # unit on the unscaled slot: ordinary
    m3 = DieudonneModule(ctx1, 1, 1, rows)
    assert not m3.is_local_local()


def test_apply_base_change_invariants():
    ctx = ctx232()
    coeffs = random_coeffs(ctx, 3, 1, seed=4)
    mod = DieudonneModule.from_normal_form(coeffs)
    U = random_symplectic(ctx, 3, 1, seed=8)
    moved = mod.apply_base_change(U)
    assert moved.slopes_oracle() == mod.slopes_oracle()
    assert moved.a_type() == mod.a_type()
    with pytest.raises(InvalidInputError):
        bad = [list(r) for r in U]
        bad[0][1] = ctx.one  # grading-breaking entry
        mod.apply_base_change(bad)


def test_gram_is_standard():
    ctx = ctx232()
    mod = DieudonneModule.from_normal_form(NormalFormCoeffs(ctx, 3, 1, {}))
    assert mod.gram == standard_gram(ctx, 3)


def test_json_round_trip():
    ctx = ctx232()
    coeffs = random_coeffs(ctx, 3, 1, seed=6)
    mod = DieudonneModule.from_normal_form(coeffs)
    again = DieudonneModule.from_json(mod.to_json())
    assert again.frob_matrix == mod.frob_matrix
    assert again.read_normal_form_coeffs().a == coeffs.a


def test_from_json_coeff_form():
    payload = {"p": 2, "f": 3, "r": 1, "m": 3, "N": 10,
               "a": [[3, 3, ["1", "0", "0"]]]}
    mod = DieudonneModule.from_json(payload)
    assert mod.read_normal_form_coeffs().get(3, 3) == mod.ctx.one
