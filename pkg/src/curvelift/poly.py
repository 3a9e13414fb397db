"""Univariate and bivariate polynomials over a FieldCtx.

Coefficients are stored as encoded ints; ``UniPoly.coeffs`` hands back FElem
objects for callers that want them.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from .errors import ContextMismatch, DivisionByZeroPoly
from .field import FElem, FieldCtx


def _ints(ctx: FieldCtx, cs: Iterable) -> list[int]:
    out = []
    for c in cs:
        if isinstance(c, FElem):
            ctx.check(c)
            out.append(c.value)
        else:
            out.append(int(c))
    return out


class UniPoly:
    """Dense univariate polynomial, ascending coefficients, trailing zeros stripped."""

    __slots__ = ("ctx", "c")

    def __init__(self, ctx: FieldCtx, coeffs: Iterable = ()):
        c = _ints(ctx, coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.ctx = ctx
        self.c = tuple(c)

    @classmethod
    def x(cls, ctx: FieldCtx) -> "UniPoly":
        return cls(ctx, [0, 1])

    @classmethod
    def monomial(cls, ctx: FieldCtx, e: int, coeff: int = 1) -> "UniPoly":
        return cls(ctx, [0] * e + [int(coeff)])

    @property
    def coeffs(self) -> tuple[FElem, ...]:
        return tuple(FElem(self.ctx, v) for v in self.c)

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def lc(self) -> int:
        return self.c[-1] if self.c else 0

    def is_zero(self) -> bool:
        return not self.c

    def __len__(self):
        return len(self.c)

    def __getitem__(self, i: int) -> int:
        return self.c[i] if 0 <= i < len(self.c) else 0

    def __eq__(self, o):
        return isinstance(o, UniPoly) and self.c == o.c and self.ctx == o.ctx

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        if not self.c:
            return "UniPoly(0)"
        terms = [f"{v}*x^{i}" if i else str(v) for i, v in enumerate(self.c) if v]
        return "UniPoly(" + " + ".join(reversed(terms)) + ")"

    def _check(self, o: "UniPoly"):
        if o.ctx is not self.ctx and o.ctx != self.ctx:
            raise ContextMismatch("polynomials over different fields")

    def array(self, length: int | None = None) -> np.ndarray:
        n = len(self.c) if length is None else length
        a = np.zeros(max(n, 1), dtype=np.int64)
        a[: len(self.c)] = self.c
        return a

    # -- ring operations ----------------------------------------------------
    def __add__(self, o: "UniPoly") -> "UniPoly":
        self._check(o)
        add = self.ctx.add
        n = max(len(self.c), len(o.c))
        return UniPoly(self.ctx, [add(self[i], o[i]) for i in range(n)])

    def __neg__(self) -> "UniPoly":
        return UniPoly(self.ctx, [self.ctx.neg(v) for v in self.c])

    def __sub__(self, o: "UniPoly") -> "UniPoly":
        return self + (-o)

    def __mul__(self, o) -> "UniPoly":
        if isinstance(o, (int, FElem)):
            s = int(o) if isinstance(o, FElem) else o % self.ctx.p
            return UniPoly(self.ctx, [self.ctx.mul(v, s) for v in self.c])
        self._check(o)
        if not self.c or not o.c:
            return UniPoly(self.ctx)
        add, mul = self.ctx.add, self.ctx.mul
        out = [0] * (len(self.c) + len(o.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    if b:
                        out[i + j] = add(out[i + j], mul(a, b))
        return UniPoly(self.ctx, out)

    __rmul__ = __mul__

    def monic(self) -> "UniPoly":
        if not self.c:
            return self
        return self * self.ctx.inv(self.lc())

    def divmod(self, g: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        self._check(g)
        if g.is_zero():
            raise DivisionByZeroPoly("division by the zero polynomial")
        ctx = self.ctx
        r = list(self.c)
        dg = g.degree
        inv = ctx.inv(g.lc())
        quo = [0] * max(len(r) - dg, 0)
        for k in range(len(r) - 1, dg - 1, -1):
            c = r[k]
            if c:
                c = ctx.mul(c, inv)
                quo[k - dg] = c
                for j, gj in enumerate(g.c):
                    if gj:
                        r[k - dg + j] = ctx.sub(r[k - dg + j], ctx.mul(c, gj))
        return UniPoly(ctx, quo), UniPoly(ctx, r[:dg])

    def __mod__(self, g: "UniPoly") -> "UniPoly":
        return self.divmod(g)[1]

    def __floordiv__(self, g: "UniPoly") -> "UniPoly":
        return self.divmod(g)[0]

    def gcd(self, g: "UniPoly") -> "UniPoly":
        """Monic gcd; gcd(0, 0) = 0."""
        self._check(g)
        a, b = self, g
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def powmod(self, e: int, mod: "UniPoly") -> "UniPoly":
        """self^e mod `mod` by square-and-multiply."""
        self._check(mod)
        if mod.is_zero():
            raise DivisionByZeroPoly("modulus is the zero polynomial")
        acc = UniPoly(self.ctx, [1]) % mod
        base = self % mod
        while e:
            if e & 1:
                acc = (acc * base) % mod
            base = (base * base) % mod
            e >>= 1
        return acc

    def __call__(self, x) -> FElem:
        v = x.value if isinstance(x, FElem) else int(x)
        ctx = self.ctx
        acc = 0
        for c in reversed(self.c):
            acc = ctx.add(ctx.mul(acc, v), c)
        return FElem(ctx, acc)

    def roots(self) -> list[int]:
        """Encodings of all roots in the field, by enumeration."""
        return [v for v in range(self.ctx.order) if self(v).value == 0]

    def count_roots(self) -> int:
        """Number of distinct roots in the field: deg gcd(self, x^Q - x).

        x^Q is reduced modulo self throughout, via repeated Frobenius powering
        in the compiled kernel when tables exist.
        """
        ctx = self.ctx
        if self.is_zero():
            return ctx.order
        if self.degree == 0:
            return 0
        if ctx.has_tables:
            from . import _kernels
            return int(_kernels.count_roots_gcd(self.array(), ctx.ktab, ctx.m))
        h = UniPoly.x(ctx).powmod(ctx.order, self)
        return (h - UniPoly.x(ctx)).gcd(self).degree


class BiPoly:
    """Sparse bivariate polynomial {(a, b): coefficient}, zero coefficients dropped."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: FieldCtx, terms: Mapping[tuple[int, int], object] | None = None):
        self.ctx = ctx
        clean: dict[tuple[int, int], int] = {}
        for (a, b), c in (terms or {}).items():
            if isinstance(c, FElem):
                ctx.check(c)
                v = c.value
            else:
                v = int(c)
                if not 0 <= v < ctx.order:
                    raise ValueError(f"coefficient encoding {v} out of range")
            if v:
                clean[(int(a), int(b))] = v
        self.terms = dict(sorted(clean.items()))

    @property
    def total_degree(self) -> int:
        return max((a + b for a, b in self.terms), default=-1)

    @property
    def second_degree(self) -> int:
        """Largest total degree among terms below the top total degree (-1 if none)."""
        top = self.total_degree
        return max((a + b for a, b in self.terms if a + b < top), default=-1)

    def __eq__(self, o):
        return isinstance(o, BiPoly) and self.terms == o.terms and self.ctx == o.ctx

    def __repr__(self):
        return f"BiPoly({self.terms})"

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        ks = list(self.terms)
        return (np.array([k[0] for k in ks], dtype=np.int64),
                np.array([k[1] for k in ks], dtype=np.int64),
                np.array([self.terms[k] for k in ks], dtype=np.int64))

    def __call__(self, x0, y0) -> FElem:
        ctx = self.ctx
        for v in (x0, y0):
            if isinstance(v, FElem):
                ctx.check(v)
        x = int(x0)
        y = int(y0)
        acc = 0
        for (a, b), c in self.terms.items():
            acc = ctx.add(acc, ctx.mul(c, ctx.mul(ctx.pow(x, a), ctx.pow(y, b))))
        return FElem(ctx, acc)

    def eval_arr(self, xs, ys) -> np.ndarray:
        ctx = self.ctx
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        acc = np.zeros(np.broadcast(xs, ys).shape, dtype=np.int64)
        for (a, b), c in self.terms.items():
            t = ctx.mul_arr(ctx.pow_arr(xs, a), ctx.pow_arr(ys, b))
            acc = ctx.add_arr(acc, ctx.mul_arr(t, c))
        return acc

    def on_line(self, alpha, beta) -> UniPoly:
        """Substitute y = alpha*x + beta (pure-Python path)."""
        ctx = self.ctx
        al, be = int(alpha), int(beta)
        y = UniPoly(ctx, [be, al])
        x = UniPoly.x(ctx)
        out = UniPoly(ctx)
        ypows: dict[int, UniPoly] = {}
        for (a, b), c in self.terms.items():
            if b not in ypows:
                ypows[b] = _upow(y, b)
            term = _upow(x, a) * ypows[b] * c
            out = out + term
        return out


def _upow(f: UniPoly, e: int) -> UniPoly:
    acc = UniPoly(f.ctx, [1])
    while e:
        if e & 1:
            acc = acc * f
        f = f * f
        e >>= 1
    return acc
