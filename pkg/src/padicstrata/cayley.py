"""Newton polygons from the main part of a normal-form Frobenius matrix.

The main part is the g x g block of abstract coefficients a_{I,J} (1-based):
column 1 read off unscaled, columns >= 2 with the p-factor removed.  The
characteristic-polynomial shortcut places each coefficient on a 2g x g lattice
box and takes the lower hull; it is guaranteed only when every entry is a unit
or exactly zero, and refuses otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exceptions import InvalidInputError, PrecisionError, ValidityError
from .polygon import NewtonPolygon, polygon_from_valuation_points
from .witt import VAL_INF


@dataclass(frozen=True)
class MainPart:
    ctx: object
    f: int
    r: int
    entries: tuple  # g x g, entries[I-1][J-1] = a_{I,J}

    @property
    def g(self):
        return self.f * self.r

    @classmethod
    def from_module(cls, mod):
        """Extract the coefficient block, checking the structural shape."""
        ctx, g = mod.ctx, mod.g
        A = mod.frob_matrix
        p = ctx.from_int(ctx.p)
        for j in range(g - 1):
            for i in range(2 * g):
                want = ctx.one if i == j + 1 else ctx.zero
                if A[i][j] != want:
                    raise InvalidInputError(
                        f"column {j} is not the expected shift column")
        for i in range(2 * g):
            want = -p if i == 0 else ctx.zero
            if A[i][2 * g - 1] != want:
                raise InvalidInputError("last column is not (-p, 0, ..., 0)")
        for j in range(g - 1, 2 * g - 1):
            for i in range(g, 2 * g):
                if j == g - 1:
                    want = ctx.one if i == g else ctx.zero
                else:
                    want = p if i == j + 1 else ctx.zero
                if A[i][j] != want:
                    raise InvalidInputError(
                        "lower-right block is not diag(1, p, ..., p)")
        rows = []
        for i in range(g):
            row = [A[i][g - 1]]
            for j in range(g, 2 * g - 1):
                row.append(A[i][j].divide_exact_p())
            rows.append(tuple(row))
        return cls(ctx, mod.f, mod.r, tuple(rows))

    def entry(self, i, j):
        """a_{i,j}, 1-based."""
        return self.entries[i - 1][j - 1]

    def entries_unit_or_zero(self):
        return all(x.is_unit() or x.is_zero()
                   for row in self.entries for x in row)


def ch_polynomial(mp):
    """The degree-2g characteristic-type polynomial, ascending coefficients.

    X^{2g}
      + sum_{k=g-1..0} sum_{i=1..g-k} p^{i-1} sigma^{g-i+1}(a_{i+k,i}) X^{g+k}
      + sum_{k=1..g-1} sum_{i=1..g-k} p^{i+k-1} sigma^{g-i-k+1}(a_{i,i+k}) X^{g-k}
      - p^g.
    """
    ctx, g = mp.ctx, mp.g
    coeffs = [ctx.zero] * (2 * g + 1)
    coeffs[2 * g] = ctx.one
    coeffs[0] = -ctx.from_int(ctx.p**g)
    for k in range(g):
        acc = ctx.zero
        for i in range(1, g - k + 1):
            a = mp.entry(i + k, i)
            if not a.is_zero():
                acc = acc + ctx.from_int(ctx.p**(i - 1)) * a.frobenius(g - i + 1)
        coeffs[g + k] = acc
    for k in range(1, g):
        acc = ctx.zero
        for i in range(1, g - k + 1):
            a = mp.entry(i, i + k)
            if not a.is_zero():
                acc = acc + ctx.from_int(ctx.p**(i + k - 1)) * a.frobenius(g - i - k + 1)
        coeffs[g - k] = acc
    return coeffs


def _expected_valuation(mp, k, upper):
    """Smallest p-power among unit contributions to one coefficient."""
    best = VAL_INF
    for i in range(1, mp.g - abs(k) + 1):
        a = mp.entry(i + k, i) if upper else mp.entry(i, i + k)
        if a.is_unit():
            v = i - 1 if upper else i + k - 1
            best = min(best, v)
    return best


def ch_newton_polygon(mp):
    """Lower hull of the coefficient valuations, slopes in [0,1].

    Guaranteed only on the unit-or-zero domain; other inputs are refused so
    the caller falls back to the linearization oracle.
    """
    ctx, g = mp.ctx, mp.g
    if not mp.entries_unit_or_zero():
        raise ValidityError(
            "main part has an entry that is neither a unit nor zero; "
            "use the linearization oracle instead")
    cp = ch_polynomial(mp)
    points = []
    for deg, c in enumerate(cp):
        v = c.valuation()
        # the shortcut relies on no cancellation between the p-power terms;
        # the powers are pairwise distinct, so any mismatch is a real bug
        if 0 < deg < 2 * g:
            k = deg - g
            exp = _expected_valuation(mp, abs(k), upper=k >= 0)
            if v != exp and not (v == VAL_INF and exp == VAL_INF):
                raise PrecisionError(
                    f"coefficient of X^{deg} has valuation {v}, expected {exp}")
        points.append((2 * g - deg, v))
    return polygon_from_valuation_points(points, 2 * g)


# -- diagram bookkeeping ---------------------------------------------------

def slot_for_t(f, ell, i, j):
    """Abstract matrix slot (I, J) of the variable t^ell_{i,j}."""
    return ((i - 1) * f + ell + 1, (j - 1) * f + ell + 1)


def t_for_slot(f, I, J):
    """Inverse of slot_for_t on slots with I = J mod f."""
    if (I - J) % f:
        raise InvalidInputError(f"slot ({I},{J}) carries no variable")
    ell = (J - 1) % f
    j = (J - 1) // f + 1
    i = j + (I - J) // f
    return (ell, i, j)


def slot_position(g, I, J):
    """Diagram position of a_{I,J} in the 2g x g box."""
    return (g - (I - J), J - 1) if I >= J else (g + (J - I), J - 1)


def t_position(f, r, ell, i, j):
    """Diagram position of t^ell_{i,j}: ((r-k)f, (j-1)f + ell), k = i - j.

    Works for the mirrored occurrence too (i < j gives k < 0).
    """
    return ((r - (i - j)) * f, (j - 1) * f + ell)


def all_t_labels(f, r):
    """Every label occurrence (ell, i, j) on the diagram, mirrors included."""
    out = []
    for ell in range(f):
        for i in range(1, r + 1):
            for j in range(1, r + 1):
                out.append((ell, i, j))
    return out


def diagram_render(mp, beta=None):
    """ASCII box, rows y = g..0 top to bottom; '*' marks labels on/above beta."""
    f, r, g = mp.f, mp.r, mp.g
    cells = {}
    cells[(0, 0)] = "1"
    cells[(2 * g, g)] = "-1"
    for ell, i, j in all_t_labels(f, r):
        x, y = t_position(f, r, ell, i, j)
        label = f"t{ell},{i}{j}"
        if beta is not None and y >= beta.value_at(x):
            label += "*"
        cells[(x, y)] = label
    width = max(len(v) for v in cells.values()) + 1
    lines = []
    for y in range(g, -1, -1):
        row = "".join(cells.get((x, y), ".").ljust(width)
                      for x in range(2 * g + 1))
        lines.append(f"y={y:<2} " + row.rstrip())
    footer = "     " + "".join(f"x={x}".ljust(width) for x in range(2 * g + 1))
    lines.append(footer.rstrip())
    return "\n".join(lines)
