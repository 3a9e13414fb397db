"""Slow, independent reference implementations used only by the tests.

Nothing here imports curvelift: elements are coefficient lists over F_p and
every operation is schoolbook.
"""

from __future__ import annotations

import itertools


def digits(v: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        out.append(v % p)
        v //= p
    return out


def undigits(ds, p: int) -> int:
    v = 0
    for d in reversed(ds):
        v = v * p + d
    return v


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_rem(a, f, p):
    a = _trim(a)
    f = _trim(f)
    inv = pow(f[-1], p - 2, p)
    while len(a) >= len(f):
        c = a[-1] * inv % p
        s = len(a) - len(f)
        for i, fi in enumerate(f):
            a[s + i] = (a[s + i] - c * fi) % p
        a = _trim(a)
    return a


def poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def is_irreducible_bruteforce(f, p) -> bool:
    """Trial division by every monic polynomial of degree 1..deg(f)//2."""
    m = len(f) - 1
    for d in range(1, m // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            g = list(low) + [1]
            if not poly_rem(list(f), g, p):
                return False
    return True


class RefField:
    """F_{p^m} = F_p[x]/(f), elements encoded as base-p ints like the package."""

    def __init__(self, p: int, modulus):
        self.p = p
        self.f = list(modulus)
        self.m = len(self.f) - 1
        self.order = p ** self.m

    def add(self, a, b):
        p, m = self.p, self.m
        return undigits([(x + y) % p for x, y in zip(digits(a, p, m), digits(b, p, m))], p)

    def neg(self, a):
        p, m = self.p, self.m
        return undigits([(-x) % p for x in digits(a, p, m)], p)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        p, m = self.p, self.m
        r = poly_rem(poly_mul(digits(a, p, m), digits(b, p, m), p), self.f, p)
        return undigits(r + [0] * (m - len(r)), p)

    def pow(self, a, e):
        out = 1
        for _ in range(e):
            out = self.mul(out, a)
        return out

    def inv(self, a):
        for b in range(1, self.order):
            if self.mul(a, b) == 1:
                return b
        raise ZeroDivisionError

    def trace(self, a, q, r):
        acc, x = 0, a
        for _ in range(r):
            acc = self.add(acc, x)
            x = self.pow(x, q)
        return acc

    def norm(self, a, q, r):
        acc, x = 1, a
        for _ in range(r):
            acc = self.mul(acc, x)
            x = self.pow(x, q)
        return acc


def eval_bivariate(F: RefField, terms: dict, x: int, y: int) -> int:
    acc = 0
    for (a, b), c in terms.items():
        acc = F.add(acc, F.mul(c, F.mul(F.pow(x, a), F.pow(y, b))))
    return acc


def norm_trace_points(F: RefField, q: int, r: int) -> list[tuple[int, int]]:
    """Points of Norm(x) = Tr(y), by tabulating both maps once."""
    tr = [F.trace(v, q, r) for v in range(F.order)]
    nm = [F.norm(v, q, r) for v in range(F.order)]
    return [(x, y) for x in range(F.order) for y in range(F.order) if nm[x] == tr[y]]


def line_count(points_set, F: RefField, alpha: int, beta: int) -> int:
    """#{x : (x, alpha x + beta) on the curve}, by substitution."""
    return sum((x, F.add(F.mul(alpha, x), beta)) in points_set for x in range(F.order))


def rank(F: RefField, rows) -> int:
    """Gaussian elimination with RefField arithmetic."""
    M = [list(r) for r in rows]
    rk, ncols = 0, len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rk], M[piv] = M[piv], M[rk]
        inv = F.inv(M[rk][c])
        M[rk] = [F.mul(inv, v) for v in M[rk]]
        for i in range(len(M)):
            if i != rk and M[i][c]:
                f = M[i][c]
                M[i] = [F.sub(v, F.mul(f, w)) for v, w in zip(M[i], M[rk])]
        rk += 1
    return rk
