"""Command-line front end: admissible polygons, Newton polygons, strata,
normal forms, and deformation sampling, with JSON or text output.

Exit codes: 0 success, 1 invariant/sentinel breach, 2 invalid input,
3 method refusal (characteristic-polynomial shortcut not applicable),
4 coefficient field too small within the extension cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import cayley, deform, polygon as pg
from .exceptions import (FieldTooSmallError, InvalidInputError,
                         PadicStrataError, ValidityError)
from .module import DieudonneModule, NormalFormCoeffs
from .normal_form import normalize
from .polygon import AdmissibleParams, NewtonPolygon
from .witt import make_context

EXIT_OK = 0
EXIT_SENTINEL = 1
EXIT_INVALID = 2
EXIT_REFUSED = 3
EXIT_FIELD = 4


@dataclass
class RunConfig:
    p: int = 2
    f: int = 1
    r: int = 1
    m: int = 0          # 0 means "default to f"
    N: int = 0          # 0 means "policy default"
    seed: int = 0
    method: str = "both"
    as_text: bool = False

    def __post_init__(self):
        if self.m == 0:
            self.m = self.f
        if self.p < 2 or self.f < 1 or self.r < 1:
            raise InvalidInputError("p >= 2, f >= 1, r >= 1 required")
        if self.m % self.f:
            raise InvalidInputError("m must be a multiple of f")

    @property
    def params(self):
        return AdmissibleParams(self.f, self.r)

    def context(self, default_N):
        return make_context(self.p, self.m, self.N or default_N)


def _emit(payload, text_lines, as_text):
    if as_text:
        print("\n".join(text_lines))
    else:
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def _poly_json(np):
    return {"string": np.to_string(), "segments": np.to_json()["segments"]}


def _parse_beta(text, params):
    """Polygon from a string, scaling the multiplicities up to height 2g so a
    bare slope tuple like "1/3,1/3,2/3,2/3" names its f-fold repetition."""
    np = NewtonPolygon.from_string(text)
    height = np.height
    want = 2 * params.g
    if height != want:
        if want % height:
            raise InvalidInputError(
                f"polygon height {height} does not divide 2g = {want}")
        k = want // height
        np = NewtonPolygon([(s, k * m) for s, m in np.segments])
    return np


def cmd_admissible(cfg, below=None):
    params = cfg.params
    polys = pg.enumerate_admissible(params)
    if below is not None:
        top = _parse_beta(below, params)
        if not pg.is_admissible(top, params):
            raise InvalidInputError(f"--below polygon is not admissible: {below}")
        polys = pg.admissible_below(top, params)
    relations = []
    for i, a in enumerate(polys):
        for j in range(i + 1, len(polys)):
            relations.append([i, j, pg.compare(a, polys[j])])
    payload = {
        "params": {"f": params.f, "r": params.r},
        "count": len(polys),
        "polygons": [_poly_json(np) for np in polys],
        "relations": relations,
    }
    lines = [np.to_string() for np in polys]
    lines += [f"{i} {rel} {j}" for i, j, rel in relations]
    _emit(payload, lines, cfg.as_text)
    return EXIT_OK


def _load_module(path):
    with open(path) as fh:
        return DieudonneModule.from_json(json.load(fh))


def cmd_np(cfg, module_path, method):
    mod = _load_module(module_path)
    payload = {"method": method}
    ch_np = oracle_np = None
    if method in ("ch", "both"):
        ch_np = cayley.ch_newton_polygon(cayley.MainPart.from_module(mod))
        payload["ch"] = _poly_json(ch_np)
    if method in ("oracle", "both"):
        oracle_np = mod.slopes_oracle()
        payload["oracle"] = _poly_json(oracle_np)
    status = EXIT_OK
    lines = []
    if ch_np is not None:
        lines.append(f"ch:     {ch_np.to_string()}")
    if oracle_np is not None:
        lines.append(f"oracle: {oracle_np.to_string()}")
    if method == "both":
        equal = ch_np == oracle_np
        payload["equal"] = equal
        lines.append(f"equal:  {equal}")
        if not equal:
            status = EXIT_SENTINEL
    _emit(payload, lines, cfg.as_text)
    return status


def cmd_strata(cfg, beta_str):
    params = cfg.params
    beta = _parse_beta(beta_str, params)
    spec = deform.stratum_spec(beta, params)
    ctx = cfg.context(4)
    g = params.g
    mp = cayley.MainPart(
        ctx, params.f, params.r,
        tuple(tuple(ctx.zero for _ in range(g)) for _ in range(g)))
    diagram = cayley.diagram_render(mp, beta)
    payload = {
        "beta": _poly_json(beta),
        "S": [f"t{ell},{i}{j}" for ell, i, j in spec.S],
        "dim": spec.dim,
        "positions": {f"t{ell},{i}{j}": list(pos)
                      for (ell, i, j), pos in spec.positions.items()},
        "diagram": diagram,
    }
    lines = [f"beta: {beta.to_string()}",
             f"dim:  {spec.dim}",
             "S:    " + " ".join(payload["S"]),
             diagram]
    _emit(payload, lines, cfg.as_text)
    return EXIT_OK


def _matrix_json(mat):
    return [[x.to_json()["coeffs"] for x in row] for row in mat]


def cmd_normal_form(cfg, module_path, target):
    mod = _load_module(module_path)
    if target == 0:
        target = mod.ctx.N - mod.g - 2
    res = normalize(mod, target, seed=cfg.seed)
    coeffs = {f"{i},{j}": v.to_json()["coeffs"]
              for (i, j), v in sorted(res.coeffs.a.items())}
    payload = {
        "N_target": target,
        "field_extension_used": res.field_extension_used,
        "coeffs": coeffs,
        "change_of_basis": _matrix_json(res.change_of_basis),
    }
    lines = [f"field extension m = {res.field_extension_used}",
             f"coefficients at precision {target}:"]
    lines += [f"  a[{key}] = {val}" for key, val in coeffs.items()]
    _emit(payload, lines, cfg.as_text)
    return EXIT_OK


def _supersingular_display(cfg, ctx):
    params = cfg.params
    base = NormalFormCoeffs(ctx, params.f, params.r, {})
    return deform.UniversalDisplay(base, params)


def cmd_deform(cfg, beta_str, trials, chain_path):
    params = cfg.params
    g = params.g
    ctx = cfg.context(2 * cfg.m * g + 4)
    if chain_path is not None:
        with open(chain_path) as fh:
            chain = [_parse_beta(s, params) for s in json.load(fh)]
        specs = deform.chain_strata(chain, params)
        payload = {"chain": [{"beta": _poly_json(s.beta),
                              "S": [f"t{ell},{i}{j}" for ell, i, j in s.S],
                              "dim": s.dim} for s in specs]}
        lines = [f"{s.beta.to_string()}  dim={s.dim}  "
                 + " ".join(f"t{ell},{i}{j}" for ell, i, j in s.S)
                 for s in specs]
        _emit(payload, lines, cfg.as_text)
        return EXIT_OK
    beta = _parse_beta(beta_str, params)
    spec = deform.stratum_spec(beta, params)
    ud = _supersingular_display(cfg, ctx)
    if trials == 0:
        report = {"beta": beta.to_json(), "trials": 0, "hits": 0,
                  "violations": 0, "seed": cfg.seed, "polygons_observed": []}
    else:
        report = deform.sample_generic(spec, ud, seed=cfg.seed, trials=trials)
    lines = [f"beta:   {beta.to_string()}",
             f"trials: {report['trials']}  hits: {report['hits']}  "
             f"violations: {report['violations']}"]
    _emit(report, lines, cfg.as_text)
    return EXIT_SENTINEL if report["violations"] else EXIT_OK


def build_parser():
    top = argparse.ArgumentParser(
        prog="padicstrata",
        description="Newton polygons, normal forms, and strata for "
                    "quasi-polarized graded modules with Frobenius.")
    sub = top.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--p", type=int, default=2)
        sp.add_argument("--f", type=int, default=1)
        sp.add_argument("--r", type=int, default=1)
        sp.add_argument("--m", type=int, default=0)
        sp.add_argument("--N", type=int, default=0)
        sp.add_argument("--seed", type=int, default=0)
        fmt = sp.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="as_text", action="store_false",
                         default=False)
        fmt.add_argument("--text", dest="as_text", action="store_true")

    sp = sub.add_parser("admissible", help="enumerate admissible polygons")
    common(sp)
    sp.add_argument("--below", default=None,
                    help="restrict to polygons lying on or above this one")

    sp = sub.add_parser("np", help="Newton polygon of a module file")
    common(sp)
    sp.add_argument("module", help="JSON module file")
    sp.add_argument("--method", choices=["ch", "oracle", "both"],
                    default="both")

    sp = sub.add_parser("strata", help="stratum index set and diagram")
    common(sp)
    sp.add_argument("--beta", required=True, help="polygon string")

    sp = sub.add_parser("normal-form", help="symplectic normal form")
    common(sp)
    sp.add_argument("module", help="JSON module file")
    sp.add_argument("--target", type=int, default=0,
                    help="output precision (default: module precision - g - 2)")

    sp = sub.add_parser("deform", help="generic sampling over a stratum")
    common(sp)
    sp.add_argument("--beta", default=None, help="polygon string")
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--chain", default=None,
                    help="JSON file with a list of polygon strings")
    return top


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(p=args.p, f=args.f, r=args.r, m=args.m, N=args.N,
                        seed=args.seed, as_text=args.as_text)
        if args.command == "admissible":
            return cmd_admissible(cfg, args.below)
        if args.command == "np":
            return cmd_np(cfg, args.module, args.method)
        if args.command == "strata":
            return cmd_strata(cfg, args.beta)
        if args.command == "normal-form":
            return cmd_normal_form(cfg, args.module, args.target)
        if args.command == "deform":
            if args.chain is None and args.beta is None:
                raise InvalidInputError("deform needs --beta or --chain")
            return cmd_deform(cfg, args.beta, args.trials, args.chain)
        raise InvalidInputError(f"unknown command {args.command}")
    except ValidityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except FieldTooSmallError as exc:
        print(f"error: {exc} (ladder: {list(exc.ladder)})", file=sys.stderr)
        return EXIT_FIELD
    except (InvalidInputError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PadicStrataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SENTINEL


if __name__ == "__main__":
    sys.exit(main())
