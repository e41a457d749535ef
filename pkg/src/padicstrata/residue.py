"""Finite fields F_{p^m} and the small amount of linear algebra we need over them.

Elements are coefficient tuples (c_0, ..., c_{m-1}) in the power basis of a
root of a fixed monic irreducible modulus over F_p.  The same coefficient
tuples appear as the mod-p reductions of Witt-vector coordinates, so no
conversion is ever needed between the two layers.
"""

from __future__ import annotations

import math
import random
from functools import lru_cache


# ---------------------------------------------------------------------------
# polynomials over F_p as low-to-high coefficient lists


def poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return poly_trim(out)

def poly_mod(a, mod, p):
    # mod is monic
    a = list(a)
    dm = len(mod) - 1
    inv_lead = 1  # monic
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            a[i] = 0
            for j in range(dm):
                a[i - dm + j] = (a[i - dm + j] - c * mod[j]) % p
        else:
            a[i] = 0
    del inv_lead
    return poly_trim(a[:dm])


def poly_mulmod(a, b, mod, p):
    return poly_mod(poly_mul(a, b, p), mod, p)


def poly_powmod(a, e, mod, p):
    result = [1]
    base = poly_mod(list(a), mod, p)
    while e:
        if e & 1:
            result = poly_mulmod(result, base, mod, p)
        base = poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def poly_gcd(a, b, p):
    a, b = poly_trim(list(a)), poly_trim(list(b))
    while b:
        inv = pow(b[-1], p - 2, p)
        b_monic = [(c * inv) % p for c in b]
        r = poly_mod(a, b_monic, p)
        a, b = b, r
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [(c * inv) % p for c in a]
    return a


def _prime_factors(n):
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return sorted(out)


def poly_is_irreducible(f, p):
    """Rabin test for a monic polynomial over F_p given low-to-high."""
    m = len(f) - 1
    if m < 1:
        return False
    x = poly_mod([0, 1], f, p)

    def minus_x(g):
        diff = [0] * max(len(g), len(x))
        for i, c in enumerate(g):
            diff[i] = c
        for i, c in enumerate(x):
            diff[i] = (diff[i] - c) % p
        return poly_trim(diff)

    if minus_x(poly_powmod(x, p**m, f, p)):
        return False
    for q in _prime_factors(m):
        diff = minus_x(poly_powmod(x, p ** (m // q), f, p))
        if not diff:
            return False
        if len(poly_gcd(diff, list(f), p)) - 1 != 0:
            return False
    return True


@lru_cache(maxsize=None)
def minimal_irreducible(p, m, scan_bound=200000):
    """Canonical monic irreducible of degree m over F_p with nonzero constant term.

    Candidates are ordered by the integer encoding sum(c_i * p^i) of their
    non-leading coefficients, so the choice is deterministic.  The constant
    term is required nonzero so that the root is a root of unity.
    """
    from .exceptions import ResourceLimitError

    scanned = 0
    for t in range(p**m):
        coeffs = []
        tt = t
        for _ in range(m):
            coeffs.append(tt % p)
            tt //= p
        if coeffs[0] == 0:
            continue
        scanned += 1
        if scanned > scan_bound:
            raise ResourceLimitError(
                f"no irreducible of degree {m} over F_{p} found within "
                f"scan bound {scan_bound}")
        f = coeffs + [1]
        if poly_is_irreducible(f, p):
            return tuple(coeffs)
    raise ResourceLimitError(f"exhausted all polynomials of degree {m} over F_{p}")


# ---------------------------------------------------------------------------
# the field itself


class ResidueField:
    """F_{p^m} = F_p[x]/(modulus), elements as coefficient tuples."""

    def __init__(self, p, modulus):
        self.p = p
        self.m = len(modulus)
        self.modulus = tuple(modulus)  # non-leading coefficients, low-to-high
        self.q = p**self.m
        self.zero = (0,) * self.m
        self.one = tuple([1] + [0] * (self.m - 1)) if self.m else ()
        self.gen = tuple([0, 1] + [0] * (self.m - 2)) if self.m >= 2 else self.one
        # reduction rows: x^(m+j) mod modulus for j = 0..m-2
        self._red = []
        row = tuple((-c) % p for c in modulus)  # x^m
        self._red.append(row)
        for _ in range(self.m - 2):
            row = self._shift_reduce(row)
            self._red.append(row)

    def _shift_reduce(self, row):
        p, m = self.p, self.m
        shifted = [0] + list(row[: m - 1])
        top = row[m - 1]
        if top:
            for j in range(m):
                shifted[j] = (shifted[j] + top * self._red[0][j]) % p
        return tuple(c % p for c in shifted)

    def element(self, coeffs):
        c = list(coeffs)[: self.m] + [0] * max(0, self.m - len(coeffs))
        return tuple(x % self.p for x in c)

    def from_int(self, n):
        """Decode 0 <= n < q base p, low digit first."""
        c = []
        for _ in range(self.m):
            c.append(n % self.p)
            n //= self.p
        return tuple(c)

    def to_int(self, a):
        n = 0
        for c in reversed(a):
            n = n * self.p + c
        return n

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        p, m = self.p, self.m
        prod = [0] * (2 * m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        out = list(prod[:m])
        for k in range(m, 2 * m - 1):
            c = prod[k]
            if c:
                row = self._red[k - m]
                for j in range(m):
                    out[j] = (out[j] + c * row[j]) % p
        return tuple(out)

    def pow(self, a, e):
        e %= self.q - 1 if any(a) else 1
        if not any(a):
            return self.zero if e != 0 else self.one
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of 0 in residue field")
        return self.pow(a, self.q - 2)

    def frobenius(self, a, k=1):
        k %= self.m
        if k == 0 or not any(a):
            return a
        return self.pow(a, pow(self.p, k))

    def is_zero(self, a):
        return not any(a)

    def elements(self):
        for n in range(self.q):
            yield self.from_int(n)

    def random_nonzero(self, rng):
        return self.from_int(rng.randrange(1, self.q))

    # -- linear algebra over the field ------------------------------------

    def rank(self, rows):
        """Row rank of a matrix given as list of lists of field elements."""
        rows = [list(r) for r in rows]
        rank = 0
        ncols = len(rows[0]) if rows else 0
        col = 0
        for col in range(ncols):
            pivot = None
            for i in range(rank, len(rows)):
                if not self.is_zero(rows[i][col]):
                    pivot = i
                    break
            if pivot is None:
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            inv = self.inv(rows[rank][col])
            rows[rank] = [self.mul(inv, x) for x in rows[rank]]
            for i in range(len(rows)):
                if i != rank and not self.is_zero(rows[i][col]):
                    c = rows[i][col]
                    rows[i] = [self.sub(x, self.mul(c, y))
                               for x, y in zip(rows[i], rows[rank])]
            rank += 1
        return rank

    def solve(self, a_rows, b):
        """One solution of A x = b, or None if inconsistent."""
        n = len(a_rows)
        ncols = len(a_rows[0]) if n else 0
        aug = [list(r) + [bv] for r, bv in zip(a_rows, b)]
        pivots = []
        rank = 0
        for col in range(ncols):
            pivot = None
            for i in range(rank, n):
                if not self.is_zero(aug[i][col]):
                    pivot = i
                    break
            if pivot is None:
                continue
            aug[rank], aug[pivot] = aug[pivot], aug[rank]
            inv = self.inv(aug[rank][col])
            aug[rank] = [self.mul(inv, x) for x in aug[rank]]
            for i in range(n):
                if i != rank and not self.is_zero(aug[i][col]):
                    c = aug[i][col]
                    aug[i] = [self.sub(x, self.mul(c, y))
                              for x, y in zip(aug[i], aug[rank])]
            pivots.append(col)
            rank += 1
        for i in range(rank, n):
            if not self.is_zero(aug[i][ncols]):
                return None
        x = [self.zero] * ncols
        for r, col in enumerate(pivots):
            x[col] = aug[r][ncols]
        return x

    def solve_fp_linear(self, images, b):
        """Solve sum_i x_i * images[i] = b with x_i in F_p.

        images are field elements giving the action of an F_p-linear map on
        the power-basis vectors; returns a field element (the preimage as a
        coefficient tuple) or None.
        """
        p, m = self.p, self.m
        # columns = images of basis vectors, over F_p
        aug = [[images[j][i] for j in range(m)] + [b[i]] for i in range(m)]
        pivots = []
        rank = 0
        for col in range(m):
            pivot = None
            for i in range(rank, m):
                if aug[i][col] % p:
                    pivot = i
                    break
            if pivot is None:
                continue
            aug[rank], aug[pivot] = aug[pivot], aug[rank]
            inv = pow(aug[rank][col], p - 2, p)
            aug[rank] = [(inv * x) % p for x in aug[rank]]
            for i in range(m):
                if i != rank and aug[i][col] % p:
                    c = aug[i][col]
                    aug[i] = [(x - c * y) % p for x, y in zip(aug[i], aug[rank])]
            pivots.append(col)
            rank += 1
        for i in range(rank, m):
            if aug[i][m] % p:
                return None
        x = [0] * m
        for r, col in enumerate(pivots):
            x[col] = aug[r][m]
        return tuple(x)

    # -- root finding for subfield embeddings -----------------------------

    def find_root(self, f_coeffs, seed=0):
        """A root in this field of a monic polynomial over F_p that splits here.

        f_coeffs: non-leading coefficients over F_p, low-to-high.  Used to
        embed W(F_{p^d}) into W(F_{p^m}) when d | m.  Cantor-Zassenhaus with a
        fixed seed, so the chosen root is deterministic.
        """
        rng = random.Random(seed)
        f = [self.element([c]) for c in f_coeffs] + [self.one]
        root = self._find_root_rec(f, rng)
        if root is None:
            raise ValueError("polynomial has no root in this field")
        return root

    def _fpoly_mod(self, a, mod):
        a = list(a)
        dm = len(mod) - 1
        for i in range(len(a) - 1, dm - 1, -1):
            c = a[i]
            if not self.is_zero(c):
                a[i] = self.zero
                for j in range(dm):
                    a[i - dm + j] = self.sub(a[i - dm + j], self.mul(c, mod[j]))
            else:
                a[i] = self.zero
        out = a[:dm]
        while out and self.is_zero(out[-1]):
            out.pop()
        return out

    def _fpoly_mul(self, a, b):
        if not a or not b:
            return []
        out = [self.zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not self.is_zero(ai):
                for j, bj in enumerate(b):
                    out[i + j] = self.add(out[i + j], self.mul(ai, bj))
        while out and self.is_zero(out[-1]):
            out.pop()
        return out

    def _fpoly_gcd(self, a, b):
        a, b = list(a), list(b)
        while b:
            inv = self.inv(b[-1])
            bm = [self.mul(inv, c) for c in b]
            a = self._fpoly_mod(a, bm)
            a, b = b, a
        if a:
            inv = self.inv(a[-1])
            a = [self.mul(inv, c) for c in a]
        return a

    def _fpoly_powmod(self, a, e, mod):
        result = [self.one]
        base = self._fpoly_mod(list(a), mod)
        while e:
            if e & 1:
                result = self._fpoly_mod(self._fpoly_mul(result, base), mod)
            base = self._fpoly_mod(self._fpoly_mul(base, base), mod)
            e >>= 1
        return result

    def _find_root_rec(self, f, rng):
        # f monic, splits into distinct linear factors over this field
        deg = len(f) - 1
        if deg == 0:
            return None
        if deg == 1:
            return self.neg(f[0])
        for _ in range(64):
            u = [self.from_int(rng.randrange(self.q)) for _ in range(deg)]
            while u and self.is_zero(u[-1]):
                u.pop()
            if not u:
                continue
            if self.p == 2:
                # trace map u + u^2 + ... + u^(2^(m-1)) splits the factor set
                w = list(u)
                acc = list(u)
                for _ in range(self.m - 1):
                    acc = self._fpoly_mod(self._fpoly_mul(acc, acc), f)
                    w = [self.add(a, b) for a, b in
                         zip(w + [self.zero] * (len(acc) - len(w)),
                             acc + [self.zero] * (len(w) - len(acc)))]
                while w and self.is_zero(w[-1]):
                    w.pop()
                h = self._fpoly_gcd(f, w)
            else:
                w = self._fpoly_powmod(u, (self.q - 1) // 2, f)
                w = list(w)
                if not w:
                    w = [self.zero]
                w[0] = self.sub(w[0] if w else self.zero, self.one)
                while w and self.is_zero(w[-1]):
                    w.pop()
                h = self._fpoly_gcd(f, w)
            if 0 < len(h) - 1 < deg:
                other = self._fpoly_divide_exact(f, h)
                g = h if len(h) <= len(other) else other
                r = self._find_root_rec(g, rng)
                if r is not None:
                    return r
        raise RuntimeError("root finding did not converge")

    def _fpoly_divide_exact(self, f, h):
        # f = h * q with h monic; returns q
        f = list(f)
        q_out = [self.zero] * (len(f) - len(h) + 1)
        for i in range(len(f) - 1, len(h) - 2, -1):
            c = f[i]
            q_out[i - (len(h) - 1)] = c
            if not self.is_zero(c):
                for j in range(len(h)):
                    f[i - (len(h) - 1) + j] = self.sub(
                        f[i - (len(h) - 1) + j], self.mul(c, h[j]))
        return q_out


# ---------------------------------------------------------------------------
# discrete logs in F_q^* (for the norm-like equation in larger fields)


def _factorize(n):
    """Prime factorization as a dict, trial division plus Pollard rho."""
    out = {}

    def add(p):
        out[p] = out.get(p, 0) + 1

    def is_prime(k):
        if k < 2:
            return False
        for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
            if k % a == 0:
                return k == a
        d = k - 1
        s = 0
        while d % 2 == 0:
            d //= 2
            s += 1
        for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
            x = pow(a, d, k)
            if x in (1, k - 1):
                continue
            for _ in range(s - 1):
                x = x * x % k
                if x == k - 1:
                    break
            else:
                return False
        return True

    def rho(k):
        if k % 2 == 0:
            return 2
        rng = random.Random(k)
        while True:
            c = rng.randrange(1, k)
            x = y = rng.randrange(2, k)
            d = 1
            while d == 1:
                x = (x * x + c) % k
                y = (y * y + c) % k
                y = (y * y + c) % k
                d = math.gcd(abs(x - y), k)
            if d != k:
                return d

    def rec(k):
        if k == 1:
            return
        if is_prime(k):
            add(k)
            return
        d = rho(k)
        rec(d)
        rec(k // d)

    small = n
    for d in range(2, 10000):
        while small % d == 0:
            add(d)
            small //= d
        if d * d > small:
            break
    if small > 1:
        if is_prime(small):
            add(small)
        else:
            rec(small)
    return out


class UnitGroup:
    """Cyclic group F_q^* with a fixed generator and Pohlig-Hellman logs."""

    def __init__(self, field):
        self.field = field
        self.n = field.q - 1
        self.factors = _factorize(self.n) if self.n > 1 else {}
        self.gen = self._find_generator()

    def _find_generator(self):
        k = self.field
        if self.n <= 1:
            return k.one
        for idx in range(1, k.q):
            g = k.from_int(idx)
            if all(k.pow(g, self.n // q) != k.one for q in self.factors):
                return g
        raise RuntimeError("no generator found")

    def dlog(self, v):
        """x with gen^x = v, via Pohlig-Hellman + baby-step giant-step."""
        k, n = self.field, self.n
        residues, moduli = [], []
        for q, e in self.factors.items():
            pe = q**e
            g_i = k.pow(self.gen, n // pe)
            v_i = k.pow(v, n // pe)
            x = 0
            gamma = k.pow(g_i, q ** (e - 1))  # order q
            for j in range(e):
                h = k.pow(self.field.mul(v_i, k.inv(k.pow(g_i, x))), q ** (e - 1 - j))
                d = self._bsgs(gamma, h, q)
                if d is None:
                    return None
                x += d * q**j
            residues.append(x)
            moduli.append(pe)
        # CRT
        x, mod = 0, 1
        for r, mm in zip(residues, moduli):
            g, s, _ = _egcd(mod, mm)
            assert (r - x) % g == 0
            x = x + mod * (((r - x) // g * s) % (mm // g))
            mod = mod * mm // g
            x %= mod
        return x % self.n if self.n > 1 else 0

    def _bsgs(self, base, target, order):
        k = self.field
        m = math.isqrt(order) + 1
        table = {}
        e = k.one
        for j in range(m):
            table.setdefault(e, j)
            e = k.mul(e, base)
        factor = k.inv(k.pow(base, m))
        gamma = target
        for i in range(m):
            if gamma in table:
                return (i * m + table[gamma]) % order
            gamma = k.mul(gamma, factor)
        return None


def _egcd(a, b):
    if b == 0:
        return a, 1, 0
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


@lru_cache(maxsize=None)
def _unit_group(field_key):
    p, modulus = field_key
    return UnitGroup(ResidueField(p, modulus))


def unit_power_solve(field, v, e):
    """Some c in F_q^* with c^e = v, or None if there is none."""
    if field.is_zero(v):
        return None
    n = field.q - 1
    if n == 0:
        return field.one
    d = math.gcd(e, n)
    if field.pow(v, n // d) != field.one:
        return None
    if field.q <= 2048:
        for idx in range(1, field.q):
            c = field.from_int(idx)
            if field.pow(c, e) == v:
                return c
        return None
    group = _unit_group((field.p, field.modulus))
    x = group.dlog(v)
    if x is None or x % d != 0:
        return None
    nd = n // d
    c = field.pow(group.gen, (x // d) * pow(e // d, -1, nd) % nd)
    assert field.pow(c, e) == v
    return c
