"""Newton polygons with exact rational slopes.

A polygon is stored as a sorted run-length encoding of its slope multiset.
All comparisons are exact; no floats are involved anywhere.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .exceptions import InvalidInputError, ResourceLimitError
from .witt import VAL_INF

ABOVE = "above"
BELOW = "below"
EQUAL = "equal"
INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class AdmissibleParams:
    f: int
    r: int

    def __post_init__(self):
        if self.f < 1 or self.r < 1:
            raise InvalidInputError("f and r must be positive")

    @property
    def g(self):
        return self.f * self.r


class NewtonPolygon:
    """Run-length slope sequence (slope, multiplicity), slopes strictly increasing.

    Immutable; equality and hashing are structural, so two polygons with the
    same slope multiset always compare equal.
    """

    __slots__ = ("segments",)

    def __init__(self, segments):
        merged = []
        for s, m in segments:
            s = Fraction(s)
            m = int(m)
            if m <= 0:
                raise InvalidInputError("multiplicities must be positive")
            if s < 0 or s > 1:
                raise InvalidInputError(f"slope {s} outside [0,1]")
            if merged and merged[-1][0] == s:
                merged[-1][1] += m
            elif merged and merged[-1][0] > s:
                raise InvalidInputError("slopes must be sorted increasingly")
            else:
                merged.append([s, m])
        if not merged:
            raise InvalidInputError("polygon needs at least one slope")
        object.__setattr__(self, "segments", tuple((s, m) for s, m in merged))

    @classmethod
    def from_slopes(cls, slopes, multiplicity=1):
        """Build from an explicit slope list, each repeated `multiplicity` times."""
        return cls([(s, multiplicity) for s in sorted(Fraction(s) for s in slopes)])

    def __setattr__(self, *_):
        raise AttributeError("NewtonPolygon is immutable")

    def __eq__(self, other):
        return isinstance(other, NewtonPolygon) and self.segments == other.segments

    def __hash__(self):
        return hash(self.segments)

    def __repr__(self):
        return f"NewtonPolygon({self.to_string()!r})"

    @property
    def height(self):
        return sum(m for _, m in self.segments)

    @property
    def rise(self):
        return sum(s * m for s, m in self.segments)

    def slope_list(self):
        out = []
        for s, m in self.segments:
            out.extend([s] * m)
        return out

    def multiplicity(self, slope):
        slope = Fraction(slope)
        for s, m in self.segments:
            if s == slope:
                return m
        return 0

    def is_symmetric(self):
        return all(self.multiplicity(1 - s) == m for s, m in self.segments)

    def breakpoints(self):
        """Vertices (x, y) of the polygon graph, endpoints included."""
        pts = [(0, Fraction(0))]
        x, y = 0, Fraction(0)
        for s, m in self.segments:
            x += m
            y += s * m
            pts.append((x, y))
        return pts

    def value_at(self, x):
        """Height of the polygon above abscissa x (0 <= x <= height)."""
        x = Fraction(x)
        if x < 0 or x > self.height:
            raise InvalidInputError(f"x={x} outside [0, {self.height}]")
        pts = self.breakpoints()
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x <= x1:
                return y0 + (x - x0) * (y1 - y0) / (x1 - x0)
        return pts[-1][1]

    def to_json(self):
        return {"segments": [[s.numerator, s.denominator, m]
                             for s, m in self.segments]}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        try:
            segs = [(Fraction(int(n), int(d)), int(m))
                    for n, d, m in data["segments"]]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            raise InvalidInputError(f"bad polygon JSON: {e}") from None
        return cls(segs)

    def to_string(self):
        """Compact form like "0,1/2,1/2,1 x3": slope list, uniform multiplicity."""
        u = math.gcd(*(m for _, m in self.segments))
        parts = []
        for s, m in self.segments:
            txt = str(s.numerator) if s.denominator == 1 else f"{s.numerator}/{s.denominator}"
            parts.extend([txt] * (m // u))
        body = ",".join(parts)
        return body if u == 1 else f"{body} x{u}"

    @classmethod
    def from_string(cls, text):
        text = text.strip()
        mult = 1
        if " x" in text:
            body, _, tail = text.rpartition(" x")
            try:
                mult = int(tail)
            except ValueError:
                raise InvalidInputError(f"bad multiplicity suffix in {text!r}") from None
        else:
            body = text
        try:
            slopes = [Fraction(tok) for tok in body.split(",") if tok.strip()]
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidInputError(f"bad slope list {text!r}: {e}") from None
        if not slopes:
            raise InvalidInputError("empty slope list")
        return cls.from_slopes(slopes, mult)


def ordinary(params):
    g = params.g
    return NewtonPolygon([(Fraction(0), g), (Fraction(1), g)])


def supersingular(params):
    return NewtonPolygon([(Fraction(1, 2), 2 * params.g)])


def is_admissible(np, params):
    """Slopes in [0,1], multiplicities divisible by f, symmetric, breakpoints
    at x = 0 mod f with integer y, height 2g."""
    f, g = params.f, params.g
    if np.height != 2 * g:
        return False
    if not np.is_symmetric():
        return False
    if any(m % f for _, m in np.segments):
        return False
    for x, y in np.breakpoints():
        if x % f or y.denominator != 1:
            return False
    return True


def compare(a, b):
    """Partial order by pointwise comparison at integer abscissae."""
    if a.height != b.height or a.rise != b.rise:
        raise InvalidInputError("polygons have mismatched endpoints")
    has_above = has_below = False
    for x in range(a.height + 1):
        va, vb = a.value_at(x), b.value_at(x)
        if va > vb:
            has_above = True
        elif va < vb:
            has_below = True
    if has_above and has_below:
        return INCOMPARABLE
    if has_above:
        return ABOVE
    if has_below:
        return BELOW
    return EQUAL


def _area2(np):
    """Twice the area under the polygon graph (an integer-free exact rational)."""
    pts = np.breakpoints()
    return sum((x1 - x0) * (y0 + y1) for (x0, y0), (x1, y1) in zip(pts, pts[1:]))


def enumerate_admissible(params, size_bound=64):
    """All admissible polygons for (f, r), sorted maximal-first.

    Enumerates convex breakpoint chains from (0,0) to (2g,g) with x = 0 mod f,
    integer y, and slopes strictly increasing within [0,1], then keeps the
    symmetric ones.  Sorting by descending area under the graph is a linear
    extension of the partial order (above => strictly larger area).
    """
    f, g = params.f, params.g
    if g > size_bound:
        raise ResourceLimitError(f"g = {g} exceeds size bound {size_bound}")
    results = []

    def extend(x0, y0, last_slope, chain):
        if x0 == 2 * g:
            if y0 == g:
                segs = []
                px, py = 0, 0
                for x, y in chain[1:]:
                    segs.append((Fraction(y - py, x - px), x - px))
                    px, py = x, y
                np = NewtonPolygon(segs)
                if np.is_symmetric():
                    results.append(np)
            return
        for x in range(x0 + f, 2 * g + 1, f):
            dx = x - x0
            for y in range(y0, y0 + dx + 1):
                s = Fraction(y - y0, dx)
                if last_slope is not None and s <= last_slope:
                    continue
                if s > 1:
                    break
                extend(x, y, s, chain + [(x, y)])

    extend(0, 0, None, [(0, 0)])
    results.sort(key=lambda np: (-_area2(np), np.segments))
    return results


def admissible_below(np, params):
    """np itself plus every admissible polygon lying on or below it."""
    if not is_admissible(np, params):
        raise InvalidInputError("polygon is not admissible for these parameters")
    out = []
    for cand in enumerate_admissible(params):
        if compare(np, cand) in (ABOVE, EQUAL):
            out.append(cand)
    return out


def lower_hull(points):
    """Lower convex hull vertices of (x, y) points, collinear points dropped."""
    best = {}
    for x, y in points:
        if x not in best or y < best[x]:
            best[x] = y
    pts = sorted(best.items())
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # keep strictly convex turns only
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def polygon_from_valuation_points(points, width, scale=1):
    """Lower hull of finite-valuation points as a polygon; infinite ones dropped.

    The hull must run from (0,0) to (width, scale*width/2); slopes are divided
    by `scale`, which lets callers feed in valuations of a `scale`-fold
    linearized operator and still read off slopes in [0,1].
    """
    finite = [(int(x), Fraction(v)) for x, v in points if v != VAL_INF]
    rise = Fraction(scale * width, 2)
    # the endpoints are structurally known (leading coefficient a unit, the
    # constant term an exact power of p) even when precision hides the latter
    finite += [(0, Fraction(0)), (width, rise)]
    hull = lower_hull(finite)
    if not hull or hull[0] != (0, Fraction(0)):
        raise InvalidInputError("hull does not start at (0,0)")
    if hull[-1] != (width, rise):
        raise InvalidInputError(
            f"hull ends at {hull[-1]}, expected ({width}, {rise})")
    segs = []
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        segs.append((Fraction(y1 - y0, 1) / (x1 - x0) / scale, x1 - x0))
    return NewtonPolygon(segs)
