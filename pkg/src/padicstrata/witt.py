"""Exact arithmetic in W(F_{p^m})/p^N with a cheap lifted Frobenius.

The ring is realized as (Z/p^N)[x]/(G) where G is the "Teichmueller modulus":
the monic degree-m lift of the canonical irreducible over F_p whose root is a
Teichmueller element (G divides x^(p^m) - x).  The Frobenius lift sigma is
then the substitution x -> x^p, a linear map on coordinates.

Everything is immutable; contexts are cached and shareable.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .exceptions import InvalidInputError
from .residue import ResidueField, minimal_irreducible

#: valuation marker for "zero at this precision" (true valuation >= N)
VAL_INF = math.inf


class WittContext:
    """W(F_{p^m}) truncated at p^N, in the power basis of a Teichmueller root."""

    def __init__(self, p, m, N, modulus):
        self.p = p
        self.m = m
        self.N = N
        self.pN = p**N
        self.modulus = tuple(modulus)  # monic, length m+1, low-to-high, mod p^N
        self.zero = WittElement(self, (0,) * m)
        self.one = WittElement(self, tuple([1] + [0] * (m - 1)))
        self.generator = WittElement(self, self._gen_tuple())
        self._residue = ResidueField(p, tuple(c % p for c in modulus[:m]))
        # reduction rows x^(m+k) mod G, k = 0..m-2
        self._red = []
        row = tuple((-c) % self.pN for c in modulus[:m])
        self._red.append(row)
        for _ in range(m - 2):
            row = self._shift_row(row)
            self._red.append(row)
        # sigma as a matrix: rows are zeta^(p*k) for k = 0..m-1
        self._sigma_rows = {}

    def __repr__(self):
        return f"WittContext(p={self.p}, m={self.m}, N={self.N})"

    # -- setup helpers ----------------------------------------------------

    def _shift_row(self, row):
        m, pN = self.m, self.pN
        shifted = [0] + list(row[: m - 1])
        top = row[m - 1]
        if top:
            r0 = self._red[0]
            for j in range(m):
                shifted[j] = (shifted[j] + top * r0[j]) % pN
        return tuple(shifted)

    @property
    def residue_field(self):
        return self._residue

    def sigma_rows(self, k=1):
        """Coordinate matrix of sigma^k, rows indexed by power-basis exponents."""
        k %= self.m
        if k not in self._sigma_rows:
            if k == 0:
                rows = tuple(tuple(1 if i == j else 0 for j in range(self.m))
                             for i in range(self.m))
            elif k == 1:
                zp = self._pow_tuple(self._gen_tuple(), self.p)
                rows = [self._one_tuple()]
                cur = self._one_tuple()
                for _ in range(self.m - 1):
                    cur = self._mul_tuple(cur, zp)
                    rows.append(cur)
                rows = tuple(rows)
            else:
                prev = self.sigma_rows(k - 1)
                rows = tuple(self._apply_rows(self.sigma_rows(1), r) for r in prev)
            self._sigma_rows[k] = rows
        return self._sigma_rows[k]

    # -- raw tuple arithmetic ---------------------------------------------

    def _one_tuple(self):
        return tuple([1] + [0] * (self.m - 1))

    def _gen_tuple(self):
        if self.m >= 2:
            return tuple([0, 1] + [0] * (self.m - 2))
        return ((-self.modulus[0]) % self.pN,)

    def _add_tuple(self, a, b):
        pN = self.pN
        return tuple((x + y) % pN for x, y in zip(a, b))

    def _sub_tuple(self, a, b):
        pN = self.pN
        return tuple((x - y) % pN for x, y in zip(a, b))

    def _neg_tuple(self, a):
        pN = self.pN
        return tuple((-x) % pN for x in a)

    def _mul_tuple(self, a, b):
        m, pN = self.m, self.pN
        if m == 1:
            return ((a[0] * b[0]) % pN,)
        prod = [0] * (2 * m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        out = [c % pN for c in prod[:m]]
        for k in range(m, 2 * m - 1):
            c = prod[k] % pN
            if c:
                row = self._red[k - m]
                for j in range(m):
                    out[j] = (out[j] + c * row[j]) % pN
        return tuple(out)

    def _scal_tuple(self, c, a):
        pN = self.pN
        return tuple((c * x) % pN for x in a)

    def _pow_tuple(self, a, e):
        result = self._one_tuple()
        base = a
        while e:
            if e & 1:
                result = self._mul_tuple(result, base)
            base = self._mul_tuple(base, base)
            e >>= 1
        return result

    def _apply_rows(self, rows, a):
        m, pN = self.m, self.pN
        out = [0] * m
        for k, ck in enumerate(a):
            if ck:
                row = rows[k]
                for j in range(m):
                    out[j] = (out[j] + ck * row[j]) % pN
        return tuple(out)

    # -- element construction ---------------------------------------------

    def element(self, coeffs):
        c = list(coeffs)[: self.m]
        c += [0] * (self.m - len(c))
        return WittElement(self, tuple(x % self.pN for x in c))

    def from_int(self, n):
        return WittElement(self, tuple([n % self.pN] + [0] * (self.m - 1)))

    def teichmuller(self, a):
        """The unique lift t of a in F_{p^m} with t^(p^m) = t."""
        if hasattr(a, "coeffs"):
            a = a.coeffs
        t = tuple(int(c) % self.pN for c in a)
        q = self.p**self.m
        for _ in range(self.N + 1):
            nxt = self._pow_tuple(t, q)
            if nxt == t:
                break
            t = nxt
        return WittElement(self, t)

    def convert(self, x):
        """Reinterpret an element of a (p, m)-compatible context at this precision.

        Truncates when moving down in precision; lifts by the identity on
        coordinate representatives when moving up (correct modulo the source
        precision, which is all the caller may rely on).
        """
        if x.ctx is self:
            return x
        if (x.ctx.p, x.ctx.m) != (self.p, self.m):
            raise InvalidInputError("contexts are not (p, m)-compatible")
        return WittElement(self, tuple(c % self.pN for c in x.coeffs))


class WittElement:
    """An element of W(F_{p^m})/p^N in the power basis of the context root."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx, coeffs):
        self.ctx = ctx
        self.coeffs = coeffs

    def __add__(self, other):
        return WittElement(self.ctx, self.ctx._add_tuple(self.coeffs, other.coeffs))

    def __sub__(self, other):
        return WittElement(self.ctx, self.ctx._sub_tuple(self.coeffs, other.coeffs))

    def __neg__(self):
        return WittElement(self.ctx, self.ctx._neg_tuple(self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return WittElement(self.ctx, self.ctx._scal_tuple(other, self.coeffs))
        return WittElement(self.ctx, self.ctx._mul_tuple(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e):
        return WittElement(self.ctx, self.ctx._pow_tuple(self.coeffs, e))

    def __eq__(self, other):
        return (isinstance(other, WittElement) and self.ctx is other.ctx
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((id(self.ctx), self.coeffs))

    def __repr__(self):
        return f"Witt{list(self.coeffs)}"

    def is_zero(self):
        return not any(self.coeffs)

    def is_unit(self):
        p = self.ctx.p
        return any(c % p for c in self.coeffs)

    def valuation(self):
        """Largest v < N with self in p^v * W, or VAL_INF if zero mod p^N."""
        if self.is_zero():
            return VAL_INF
        p, v = self.ctx.p, None
        for c in self.coeffs:
            if c:
                vc = 0
                while c % p == 0:
                    c //= p
                    vc += 1
                v = vc if v is None else min(v, vc)
                if v == 0:
                    return 0
        return v

    def frobenius(self, k=1):
        return WittElement(self.ctx, self.ctx._apply_rows(self.ctx.sigma_rows(k), self.coeffs))

    def inverse(self):
        """Unit inverse by Hensel iteration from the residue-field inverse."""
        ctx = self.ctx
        if not self.is_unit():
            raise ZeroDivisionError("not a unit in W/p^N")
        k = ctx.residue_field
        x = ctx.element(k.inv(self.reduce_mod_p()))
        prec = 1
        two = ctx.from_int(2)
        while prec < ctx.N:
            x = x * (two - self * x)
            prec *= 2
        return x

    def divide_exact_p(self, k=1):
        """Exact division by p^k on coordinates.

        Requires every coordinate divisible by p^k (p is unramified, so this
        is the ideal-theoretic condition).  The result is well-defined only
        modulo p^(N-k); the high coordinates are set from the canonical
        representatives.
        """
        pk = self.ctx.p**k
        if any(c % pk for c in self.coeffs):
            raise InvalidInputError(f"element not divisible by p^{k}")
        return WittElement(self.ctx, tuple(c // pk for c in self.coeffs))

    def reduce_mod_p(self):
        p = self.ctx.p
        return tuple(c % p for c in self.coeffs)

    def eq_mod(self, other, k):
        pk = self.ctx.p**k
        return all((a - b) % pk == 0 for a, b in zip(self.coeffs, other.coeffs))

    def to_json(self):
        return {
            "coeffs": [str(c) for c in self.coeffs],
            "p": self.ctx.p,
            "m": self.ctx.m,
            "N": self.ctx.N,
        }

    @staticmethod
    def from_json(data, ctx=None):
        if ctx is None:
            ctx = make_context(int(data["p"]), int(data["m"]), int(data["N"]))
        return ctx.element([int(c) for c in data["coeffs"]])


@lru_cache(maxsize=None)
def make_context(p, m, N):
    """Build the canonical W(F_{p^m})/p^N context.

    The mod-p modulus is the canonical irreducible from
    :func:`residue.minimal_irreducible`; its Teichmueller lift is computed by
    iterating the q-power map inside a provisional (arbitrarily lifted) copy
    of the ring, then taking the product of the conjugate linear factors.
    """
    if not _is_prime(p):
        raise InvalidInputError(f"p = {p} is not prime")
    if m < 1 or N < 1:
        raise InvalidInputError("m and N must be positive")
    g0 = minimal_irreducible(p, m)
    pN = p**N
    if m == 1:
        # root of x + c0 is -c0 mod p; Teichmueller lift in Z/p^N
        t = (-g0[0]) % p
        for _ in range(N + 1):
            nt = pow(t, p, pN)
            if nt == t:
                break
            t = nt
        modulus = ((-t) % pN, 1)
        ctx = WittContext(p, m, N, modulus)
    else:
        modulus = _teichmuller_modulus(p, m, N, g0)
        ctx = WittContext(p, m, N, modulus)
    _verify_context(ctx)
    return ctx


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _teichmuller_modulus(p, m, N, g0):
    """Monic degree-m factor of x^(p^m) - x over Z/p^N lifting g0."""
    # provisional ring with the naive lift of g0
    prov = WittContext(p, m, N, tuple(list(g0) + [1]))
    q = p**m
    z = prov._gen_tuple()
    for _ in range(N + 1):
        nz = prov._pow_tuple(z, q)
        if nz == z:
            break
        z = nz
    # conjugates z^(p^i)
    conj = [z]
    for _ in range(m - 1):
        conj.append(prov._pow_tuple(conj[-1], p))
    # G = prod (x - conj_i), coefficients computed in the provisional ring
    pN = p**N
    poly = [prov._one_tuple()]  # ascending coefficients, values are ring tuples
    zero = (0,) * m
    for c in conj:
        nc = prov._neg_tuple(c)
        new = [zero] * (len(poly) + 1)
        for i, coef in enumerate(poly):
            new[i] = prov._add_tuple(new[i], prov._mul_tuple(coef, nc))
            new[i + 1] = prov._add_tuple(new[i + 1], coef)
        poly = new
    coeffs = []
    for coef in poly[:m]:
        if any(coef[1:]):
            raise InvalidInputError("Teichmueller modulus has non-scalar coefficient")
        coeffs.append(coef[0] % pN)
    return tuple(coeffs + [1])


def _verify_context(ctx):
    p, m = ctx.p, ctx.m
    # modulus reduces to the canonical irreducible mod p
    assert tuple(c % p for c in ctx.modulus[:m]) == minimal_irreducible(p, m)
    # generator is a Teichmueller element: zeta^(p^m) = zeta,
    # equivalently the modulus divides x^(p^m - 1) - 1 when the root is a unit
    z = ctx.generator
    assert (z ** (p**m)).coeffs == z.coeffs
    assert (z ** (p**m - 1)).coeffs == ctx.one.coeffs
