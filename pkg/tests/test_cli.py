import json

import pytest

from padicstrata import DieudonneModule, NormalFormCoeffs, make_context
from padicstrata.cli import main
from padicstrata.generate import random_coeffs, random_symplectic


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def module_file(tmp_path, mod, name="mod.json"):
    path = tmp_path / name
    path.write_text(json.dumps(mod.to_json()))
    return str(path)


def test_admissible_f3_r2(capsys):
    code, out, _ = run(capsys, "admissible", "--f", "3", "--r", "2")
    assert code == 0
    data = json.loads(out)
    assert data["count"] == 7
    strings = [p["string"] for p in data["polygons"]]
    assert strings[0] == "1/2 x12"
    assert strings[-1] == "0,1 x6"
    assert [3, 4, "incomparable"] in data["relations"]


def test_admissible_f1_r1(capsys):
    code, out, _ = run(capsys, "admissible", "--f", "1", "--r", "1")
    assert code == 0
    assert json.loads(out)["count"] == 2


def test_admissible_below(capsys):
    code, out, _ = run(capsys, "admissible", "--f", "3", "--r", "2",
                       "--below", "1/6,1/6,5/6,5/6")
    assert code == 0
    data = json.loads(out)
    strings = [p["string"] for p in data["polygons"]]
    assert "1/6,5/6 x6" in strings
    assert "0,1/2,1/2,1 x3" not in strings  # incomparable with the top


def test_admissible_invalid(capsys):
    code, _, err = run(capsys, "admissible", "--f", "3", "--r", "2",
                       "--below", "0,0,1")
    assert code == 2
    assert "error" in err


def test_np_both(capsys, tmp_path):
    ctx = make_context(2, 3, 14)
    mod = DieudonneModule.from_normal_form(NormalFormCoeffs(ctx, 3, 1, {}))
    code, out, _ = run(capsys, "np", module_file(tmp_path, mod))
    assert code == 0
    data = json.loads(out)
    assert data["equal"] is True
    assert data["ch"]["string"] == "1/2 x6"


def test_np_method_ch_refusal(capsys, tmp_path):
    ctx = make_context(2, 3, 14)
    coeffs = NormalFormCoeffs(ctx, 3, 1, {(3, 3): ctx.from_int(2)})
    mod = DieudonneModule.from_normal_form(coeffs)
    code, _, err = run(capsys, "np", module_file(tmp_path, mod),
                       "--method", "ch")
    assert code == 3
    assert "oracle" in err


def test_np_bad_file(capsys, tmp_path):
    path = tmp_path / "nope.json"
    code, _, err = run(capsys, "np", str(path))
    assert code == 2


def test_strata_ss(capsys):
    code, out, _ = run(capsys, "strata", "--f", "3", "--r", "2",
                       "--beta", "1/2 x12")
    assert code == 0
    data = json.loads(out)
    assert data["dim"] == 4
    assert sorted(data["S"]) == ["t0,22", "t1,22", "t2,21", "t2,22"]
    assert len(data["positions"]) == 9
    assert data["positions"]["t2,21"] == [3, 2]
    assert "t2,21*" in data["diagram"]


def test_strata_inadmissible(capsys):
    code, _, err = run(capsys, "strata", "--f", "3", "--r", "2",
                       "--beta", "0,1/4,3/4,1")
    assert code == 2


def test_normal_form_roundtrip(capsys, tmp_path):
    ctx = make_context(2, 1, 8)
    coeffs = random_coeffs(ctx, 1, 2, seed=1)
    mod = DieudonneModule.from_normal_form(coeffs)
    moved = mod.apply_base_change(random_symplectic(ctx, 1, 2, seed=2))
    code, out, _ = run(capsys, "normal-form", module_file(tmp_path, moved),
                       "--target", "4")
    assert code == 0
    data = json.loads(out)
    assert data["N_target"] == 4
    assert len(data["change_of_basis"]) == 4


def test_normal_form_bad_a_type(capsys, tmp_path):
    ctx = make_context(2, 1, 8)
    mod = DieudonneModule.from_normal_form(NormalFormCoeffs(ctx, 1, 1, {}))
    rows = [list(r) for r in mod.frob_matrix]
    rows[0][0] = rows[0][0] + ctx.one
    bad = DieudonneModule(ctx, 1, 1, rows)
    code, _, err = run(capsys, "normal-form", module_file(tmp_path, bad),
                       "--target", "4")
    assert code == 2


def test_deform_report(capsys):
    code, out, _ = run(capsys, "deform", "--f", "3", "--r", "2",
                       "--beta", "0,1/3,2/3,1", "--trials", "10",
                       "--seed", "7")
    assert code == 0
    data = json.loads(out)
    assert data["trials"] == 10
    assert data["violations"] == 0
    assert data["seed"] == 7


def test_deform_zero_trials(capsys):
    code, out, _ = run(capsys, "deform", "--f", "1", "--r", "1",
                       "--beta", "0,1", "--trials", "0")
    assert code == 0
    data = json.loads(out)
    assert data["trials"] == 0 and data["polygons_observed"] == []


def test_deform_chain(capsys, tmp_path):
    chain = tmp_path / "chain.json"
    chain.write_text(json.dumps(["1/2 x12", "1/3,2/3 x6", "0,1 x6"]))
    code, out, _ = run(capsys, "deform", "--f", "3", "--r", "2",
                       "--chain", str(chain))
    assert code == 0
    dims = [c["dim"] for c in json.loads(out)["chain"]]
    assert dims == [4, 6, 9]


def test_deform_needs_beta_or_chain(capsys):
    code, _, err = run(capsys, "deform", "--f", "1", "--r", "1")
    assert code == 2


def test_determinism(capsys):
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "deform", "--f", "3", "--r", "2",
                           "--beta", "1/2 x12", "--trials", "5", "--seed", "3")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_invalid_m(capsys):
    code, _, err = run(capsys, "admissible", "--f", "3", "--r", "2",
                       "--m", "4")
    assert code == 2
