"""Quasi-polarized graded modules presented by a semilinear Frobenius matrix.

The fixed ordered basis is (X_0,...,X_{g-1}, Y_0,...,Y_{g-1}); basis index n
(or g+n) sits in graded piece n mod f.  Frobenius acts on coordinate vectors
as v -> A * sigma(v); the pairing is the standard symplectic form with
<X_i, Y_i> = 1 unless a different gram matrix is supplied.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import linalg
from .exceptions import InvalidInputError, PrecisionError
from .polygon import AdmissibleParams, NewtonPolygon, polygon_from_valuation_points
from .witt import VAL_INF, WittElement, make_context


def standard_gram(ctx, g):
    """Symplectic J: <X_i, Y_i> = 1, <Y_i, X_i> = -1, everything else 0."""
    rows = []
    for i in range(2 * g):
        row = []
        for j in range(2 * g):
            if j == i + g:
                row.append(ctx.one)
            elif i == j + g:
                row.append(-ctx.one)
            else:
                row.append(ctx.zero)
        rows.append(tuple(row))
    return tuple(rows)


@dataclass(frozen=True)
class NormalFormCoeffs:
    """The free coefficients a_{i,j}, 2 <= i,j <= g, of the normal form.

    Entries must vanish off the congruence i = j mod f and be symmetric.
    """

    ctx: object
    f: int
    r: int
    a: dict = field(default_factory=dict)

    def __post_init__(self):
        g = self.f * self.r
        clean = {}
        for (i, j), v in self.a.items():
            if not (2 <= i <= g and 2 <= j <= g):
                raise InvalidInputError(f"index ({i},{j}) outside [2,{g}]^2")
            if isinstance(v, int):
                v = self.ctx.from_int(v)
            if v.is_zero():
                continue
            if (i - j) % self.f:
                raise InvalidInputError(
                    f"a_[{i},{j}] must vanish: {i} != {j} mod {self.f}")
            clean[(i, j)] = v
        for (i, j), v in clean.items():
            w = clean.get((j, i))
            if w is None or w != v:
                raise InvalidInputError(f"a_[{i},{j}] != a_[{j},{i}]")
        object.__setattr__(self, "a", clean)

    @property
    def g(self):
        return self.f * self.r

    def get(self, i, j):
        return self.a.get((i, j), self.ctx.zero)

    def eq_mod(self, other, k):
        keys = set(self.a) | set(other.a)
        return all(self.get(i, j).eq_mod(other.get(i, j), k) for i, j in keys)


def normal_form_matrix(ctx, f, r, coeffs=None):
    """The block Frobenius matrix of the normal form, 0-indexed.

    Columns 0..g-2 carry F X_j = X_{j+1}; column g-1 carries F X_{g-1} = Y_0;
    column g+j carries F Y_j = p Y_{j+1} + sum_i p a_{i+1, j+2} X_i; the last
    column carries F Y_{g-1} = -p X_0.
    """
    g = f * r
    p = ctx.p
    pw = ctx.from_int(p)
    rows = [[ctx.zero for _ in range(2 * g)] for _ in range(2 * g)]
    if g == 1:
        rows[0][1] = -pw
        rows[1][0] = ctx.one
        return tuple(tuple(row) for row in rows)
    for j in range(g - 1):
        rows[j + 1][j] = ctx.one
    rows[g][g - 1] = ctx.one
    rows[0][2 * g - 1] = -pw
    for j in range(g - 1):
        rows[g + j + 1][g + j] = pw
        if coeffs is not None:
            for i in range(1, g):
                v = coeffs.get(i + 1, j + 2)
                if not v.is_zero():
                    rows[i][g + j] = pw * v
    return tuple(tuple(row) for row in rows)


class DieudonneModule:
    """Immutable wrapper around (ctx, f, r, frob_matrix, gram)."""

    def __init__(self, ctx, f, r, frob_matrix, gram=None, validate=True):
        if ctx.m % f:
            raise InvalidInputError(f"m = {ctx.m} is not a multiple of f = {f}")
        self.ctx = ctx
        self.f = f
        self.r = r
        self.g = f * r
        self.frob_matrix = tuple(tuple(row) for row in frob_matrix)
        self.gram = standard_gram(ctx, self.g) if gram is None else tuple(
            tuple(row) for row in gram)
        if len(self.frob_matrix) != 2 * self.g or any(
                len(row) != 2 * self.g for row in self.frob_matrix):
            raise InvalidInputError("frob_matrix must be 2g x 2g")
        self._v_cache = None
        if validate:
            self.validate()

    # -- structure ---------------------------------------------------------

    def grading(self, idx):
        """Graded piece of basis vector idx (X's first, then Y's)."""
        return idx % self.f if idx < self.g else (idx - self.g) % self.f

    def validate(self):
        ctx, g, f = self.ctx, self.g, self.f
        A = self.frob_matrix
        for j in range(2 * g):
            tgt = (self.grading(j) + 1) % f
            for i in range(2 * g):
                if self.grading(i) != tgt and not A[i][j].is_zero():
                    raise InvalidInputError(
                        f"F breaks the grading at entry ({i},{j})")
        for i in range(2 * g):
            for j in range(2 * g):
                if self.grading(i) != self.grading(j) and not self.gram[i][j].is_zero():
                    raise InvalidInputError(
                        "pairing does not keep graded pieces orthogonal")
        if not linalg.det(ctx, self.gram).is_unit():
            raise InvalidInputError("pairing is degenerate mod p")
        c0 = linalg.charpoly(ctx, A)[0]
        if c0.valuation() != g:
            raise InvalidInputError(
                f"det(F) has valuation {c0.valuation()}, expected {g}")
        # <Fx, Fy> = sigma(p <x, y>)  <=>  A^t J A = p sigma(J)
        lhs = linalg.mat_mul(linalg.mat_mul(linalg.transpose(A), self.gram), A)
        rhs = linalg.mat_scal(ctx.from_int(ctx.p), linalg.sigma_mat(self.gram))
        if not linalg.mat_eq_mod(lhs, rhs, ctx.N):
            raise InvalidInputError("pairing contract A^t J A = p sigma(J) fails")

    # -- derived operators -------------------------------------------------

    def v_matrix(self):
        """Matrix of V, acting as v -> V_mat * sigma^{-1}(v).

        From F V = p: V_mat = sigma^{-1}(p A^{-1}).  Computed at inflated
        precision and truncated; correct modulo p^(N-1).
        """
        if self._v_cache is not None:
            return self._v_cache
        ctx, g = self.ctx, self.g
        big = make_context(ctx.p, ctx.m, ctx.N + g + 2)
        A = linalg.mat_convert(big, self.frob_matrix)
        p_inv = linalg.adjugate_times_inv_unit(big, A, g)
        v = linalg.sigma_mat(p_inv, big.m - 1)
        self._v_cache = linalg.mat_convert(ctx, v)
        return self._v_cache

    def _residue_matrix(self, mat):
        k = self.ctx.residue_field
        return [[k.element(x.reduce_mod_p()) for x in row] for row in mat]

    def a_type(self):
        """Per-piece codimension of the image of (F, V) mod p.

        a_i = 2r - rank of the columns of F landing in piece i (from piece
        i-1) together with the columns of V landing in piece i (from piece
        i+1); semilinear twists do not change ranks over a perfect field.
        """
        k = self.ctx.residue_field
        f, g, r = self.f, self.g, self.r
        Abar = self._residue_matrix(self.frob_matrix)
        Vbar = self._residue_matrix(self.v_matrix())
        out = []
        for piece in range(f):
            rows_i = [n for n in range(2 * g) if self.grading(n) == piece]
            cols_f = [n for n in range(2 * g) if self.grading(n) == (piece - 1) % f]
            cols_v = [n for n in range(2 * g) if self.grading(n) == (piece + 1) % f]
            vecs = [[Abar[i][j] for i in rows_i] for j in cols_f]
            vecs += [[Vbar[i][j] for i in rows_i] for j in cols_v]
            out.append(2 * r - k.rank(vecs))
        return tuple(out)

    def a_number(self):
        return sum(self.a_type())

    def is_local_local(self):
        """F and V both nilpotent on the reduction mod p."""
        k = self.ctx.residue_field
        g = self.g

        def semilinear_power_vanishes(mat, twist):
            acc = mat
            power = twist
            for _ in range(2 * g - 1):
                twisted = [[k.frobenius(x, power) for x in row] for row in mat]
                acc = _res_mat_mul(k, acc, twisted)
                power = (power + twist) % self.ctx.m
            return all(k.is_zero(x) for row in acc for x in row)

        Abar = self._residue_matrix(self.frob_matrix)
        Vbar = self._residue_matrix(self.v_matrix())
        return (semilinear_power_vanishes(Abar, 1)
                and semilinear_power_vanishes(Vbar, self.ctx.m - 1))

    def slopes_oracle(self):
        """Newton polygon by linearization, independent of any closed formula.

        F^m is W-linear with matrix B = A sigma(A) ... sigma^{m-1}(A); the
        polygon of F is the lower hull of the valuations of charpoly(B),
        slopes divided by m.
        """
        ctx, g, m = self.ctx, self.g, self.ctx.m
        B = self.frob_matrix
        for k in range(1, m):
            B = linalg.mat_mul(B, linalg.sigma_mat(self.frob_matrix, k))
        cp = linalg.charpoly(ctx, B)
        points = [(2 * g - k, cp[k].valuation()) for k in range(2 * g + 1)]
        np = polygon_from_valuation_points(points, 2 * g, scale=m)
        # a coefficient that vanished at working precision may hide a true
        # valuation below the hull; refuse to guess
        for x, v in points:
            if v == VAL_INF and 0 < x < 2 * g:
                hull_y = np.value_at(x) * m
                if ctx.N < hull_y:
                    raise PrecisionError(
                        f"coefficient at x={x} vanishes mod p^{ctx.N} but the "
                        f"hull needs valuations up to {hull_y}; raise N")
        return np

    def apply_base_change(self, U, check=True, precision=None):
        """Module in the new basis U: frob' = U^{-1} A sigma(U), gram fixed.

        `precision` bounds the symplecticity check (mod p^precision); the
        default demands it at full working precision.
        """
        ctx, g = self.ctx, self.g
        if precision is None:
            precision = ctx.N
        U = tuple(tuple(row) for row in U)
        if check:
            for i in range(2 * g):
                for j in range(2 * g):
                    if self.grading(i) != self.grading(j) and not U[i][j].is_zero():
                        raise InvalidInputError("base change breaks the grading")
            lhs = linalg.mat_mul(linalg.mat_mul(linalg.transpose(U), self.gram), U)
            if not linalg.mat_eq_mod(lhs, self.gram, precision):
                raise InvalidInputError("base change is not symplectic")
        Uinv = linalg.mat_inv(ctx, U)
        newA = linalg.mat_mul(linalg.mat_mul(Uinv, self.frob_matrix),
                              linalg.sigma_mat(U))
        return DieudonneModule(ctx, self.f, self.r, newA, self.gram,
                               validate=check and precision >= ctx.N)

    # -- constructors and serialization ------------------------------------

    @classmethod
    def from_normal_form(cls, coeffs):
        ctx, f, r = coeffs.ctx, coeffs.f, coeffs.r
        return cls(ctx, f, r, normal_form_matrix(ctx, f, r, coeffs))

    def read_normal_form_coeffs(self):
        """Recover a_{i,j} from a matrix in normal-form shape (round-trip)."""
        ctx, g, f, r = self.ctx, self.g, self.f, self.r
        a = {}
        for j in range(g - 1):
            for i in range(1, g):
                v = self.frob_matrix[i][g + j]
                if not v.is_zero():
                    a[(i + 1, j + 2)] = v.divide_exact_p()
        return NormalFormCoeffs(ctx, f, r, a)

    def to_json(self):
        return {
            "p": self.ctx.p, "f": self.f, "r": self.r,
            "m": self.ctx.m, "N": self.ctx.N,
            "frob": [[x.to_json()["coeffs"] for x in row]
                     for row in self.frob_matrix],
        }

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        try:
            p, f, r = int(data["p"]), int(data["f"]), int(data["r"])
            m = int(data.get("m", f))
            g = f * r
            N = int(data.get("N", 2 * m * g + 4))
        except (KeyError, ValueError) as e:
            raise InvalidInputError(f"bad module JSON: {e}") from None
        ctx = make_context(p, m, N)
        if "frob" in data:
            mat = [[ctx.element([int(c) for c in entry])
                    for entry in row] for row in data["frob"]]
            return cls(ctx, f, r, mat)
        if "a" in data:
            a = {}
            for i, j, entry in data["a"]:
                if isinstance(entry, dict):
                    entry = entry["coeffs"]
                if isinstance(entry, int):
                    val = ctx.from_int(entry)
                else:
                    val = ctx.element([int(c) for c in entry])
                a[(int(i), int(j))] = val
            return cls.from_normal_form(NormalFormCoeffs(ctx, f, r, a))
        raise InvalidInputError("module JSON needs a 'frob' or 'a' field")


def _res_mat_mul(field, a, b):
    n, mid, cols = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(cols):
            acc = field.zero
            for k in range(mid):
                acc = field.add(acc, field.mul(a[i][k], b[k][j]))
            row.append(acc)
        out.append(row)
    return out
