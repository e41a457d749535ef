"""Universal deformation display, stratum index sets, and genericity sampling.

Deformation variables t^ell_{i,j} (0 <= ell < f, 1 <= j <= i <= r) enter the
Frobenius matrix at the slots of the corresponding abstract coefficients:
symmetric pairs share one variable, and the ell = 0, j = 1 family lands in the
unscaled first coefficient column.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import cayley, polygon as pg
from .exceptions import InvalidInputError, ValidityError
from .module import DieudonneModule, NormalFormCoeffs, normal_form_matrix
from .polygon import AdmissibleParams, NewtonPolygon


def t_variables(params):
    """Canonical index set {(ell, i, j): 0 <= ell < f, 1 <= j <= i <= r}."""
    return [(ell, i, j)
            for ell in range(params.f)
            for i in range(1, params.r + 1)
            for j in range(1, i + 1)]


@dataclass(frozen=True)
class UniversalDisplay:
    base: NormalFormCoeffs
    params: AdmissibleParams

    def __post_init__(self):
        if (self.base.f, self.base.r) != (self.params.f, self.params.r):
            raise InvalidInputError("base coefficients do not match params")

    @property
    def ctx(self):
        return self.base.ctx

    @property
    def tvars(self):
        return t_variables(self.params)


@dataclass(frozen=True)
class Specialization:
    values: dict  # (ell, i, j) -> WittElement

    def value(self, ell, i, j):
        if j > i:
            i, j = j, i
        return self.values[(ell, i, j)]


def specialize(ud, s):
    """Concrete module with every t replaced by its assigned value.

    The matrix is the normal-form matrix of the base with each variable's
    value added at its two symmetric slots; the (ell=0, j=1) family enters
    the unscaled column g-1, everything else scaled by p.
    """
    params = ud.params
    f, r, g = params.f, params.r, params.g
    ctx = ud.ctx
    for key in t_variables(params):
        if key not in s.values:
            raise InvalidInputError(f"specialization misses t{key}")
        v = s.values[key]
        if v.ctx is not ctx:
            raise InvalidInputError("specialization context mismatch")
        if not (v.is_zero() or (v.is_unit() and ctx.teichmuller(
                v.reduce_mod_p()) == v)):
            raise InvalidInputError(
                f"t{key} must be a Teichmueller element or zero")
    rows = [list(row) for row in normal_form_matrix(ctx, f, r, ud.base)]
    p = ctx.from_int(ctx.p)
    for ell in range(f):
        for i in range(1, r + 1):
            for j in range(1, r + 1):
                v = s.value(ell, i, j)
                if v.is_zero():
                    continue
                I, J = cayley.slot_for_t(f, ell, i, j)
                if J == 1:
                    # unscaled column: F X_{g-1} picks up t^0_{i,1} X_{I-1}
                    rows[I - 1][g - 1] = rows[I - 1][g - 1] + v
                else:
                    col = g + J - 2
                    rows[I - 1][col] = rows[I - 1][col] + p * v
    return DieudonneModule(ctx, f, r, rows)


@dataclass(frozen=True)
class StratumSpec:
    beta: NewtonPolygon
    params: AdmissibleParams
    S: tuple = field(default=())
    positions: dict = field(default_factory=dict)

    @property
    def dim(self):
        return len(self.S)


def stratum_spec(beta, params):
    """Variables whose diagram position lies on or above beta (ties survive)."""
    if not pg.is_admissible(beta, params):
        raise InvalidInputError("beta is not admissible for these parameters")
    members = []
    positions = {}
    for key in t_variables(params):
        ell, i, j = key
        pos = cayley.t_position(params.f, params.r, ell, i, j)
        positions[key] = pos
        x, y = pos
        if y >= beta.value_at(x):
            members.append(key)
    return StratumSpec(beta, params, tuple(members), positions)


def ss_dimension(params):
    """Supersingular stratum dimension, by sum and by closed form (asserted equal)."""
    f, r = params.f, params.r
    by_sum = sum(i * f // 2 for i in range(1, r + 1))
    k = f // 2
    closed = k * r * (r + 1) // 2 + (r * r // 4 if f % 2 else 0)
    assert by_sum == closed, (f, r, by_sum, closed)
    return by_sum


def chain_strata(betas, params):
    """StratumSpecs along a strictly decreasing chain; S sets must nest upward."""
    specs = []
    for prev, cur in zip(betas, betas[1:]):
        if pg.compare(prev, cur) != pg.ABOVE:
            raise InvalidInputError("chain is not strictly decreasing")
    for beta in betas:
        specs.append(stratum_spec(beta, params))
    for a, b in zip(specs, specs[1:]):
        if not set(a.S) <= set(b.S):
            raise InvalidInputError("stratum index sets fail to nest")
    return specs


def sample_generic(spec, ud, seed=0, trials=200):
    """Random unit draws on S, zero off S; tally how often the polygon is beta.

    Each observed polygon must lie on or above beta; a violation is reported
    in the result rather than raised, so callers can treat it as a sentinel.
    """
    params = spec.params
    ctx = ud.ctx
    rng = random.Random(seed)
    k = ctx.residue_field
    hits = 0
    observed = {}
    violations = 0
    sset = set(spec.S)
    for _ in range(trials):
        values = {}
        for key in t_variables(params):
            if key in sset:
                values[key] = ctx.teichmuller(k.random_nonzero(rng))
            else:
                values[key] = ctx.zero
        mod = specialize(ud, Specialization(values))
        try:
            np = cayley.ch_newton_polygon(cayley.MainPart.from_module(mod))
        except ValidityError:
            np = mod.slopes_oracle()
        if np == spec.beta:
            hits += 1
        if pg.compare(np, spec.beta) not in (pg.ABOVE, pg.EQUAL):
            violations += 1
        observed[np] = observed.get(np, 0) + 1
    return {
        "beta": spec.beta.to_json(),
        "S": [list(key) for key in spec.S],
        "dim": spec.dim,
        "trials": trials,
        "hits": hits,
        "violations": violations,
        "seed": seed,
        "polygons_observed": [
            {"polygon": np.to_json(), "string": np.to_string(), "count": c}
            for np, c in sorted(observed.items(),
                                key=lambda kv: (-kv[1], kv[0].segments))],
    }
