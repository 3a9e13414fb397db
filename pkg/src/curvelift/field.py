"""Finite fields F_{p^m} in polynomial basis, with an optional tower F_q < F_{q^r}.

Elements are encoded as the base-p integer of their coefficient vector
(constant coefficient is the least significant digit).  That encoding is
also the canonical element order used everywhere else in the package.

For fields up to ``TABLE_LIMIT`` elements, exp/log/Zech tables are built so
that bulk work can run in the compiled kernels; larger fields fall back to
schoolbook polynomial-basis arithmetic for scalar operations.
"""

from __future__ import annotations

import functools
import json
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    ArgNotInSubfield,
    ContextMismatch,
    DivisionByZero,
    NonPrimeCharacteristic,
    NoTowerDeclared,
    TowerMismatch,
)

TABLE_LIMIT = 1 << 22


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, s) with q = p**s, or raise NonPrimeCharacteristic."""
    if q < 2:
        raise NonPrimeCharacteristic(f"{q} is not a prime power")
    fs = prime_factors(q)
    if len(fs) != 1:
        raise NonPrimeCharacteristic(f"{q} is not a prime power")
    p, s = fs[0], 0
    while q > 1:
        q //= p
        s += 1
    return p, s


def to_digits(v: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        v, d = divmod(v, p)
        out.append(d)
    return out


def from_digits(ds: Sequence[int], p: int) -> int:
    v = 0
    for d in reversed(ds):
        v = v * p + int(d)
    return v


# --- F_p[x] helpers (ascending coefficient lists), used for the modulus ----

def _fp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_rem(a: list[int], f: list[int], p: int) -> list[int]:
    a = _fp_trim(list(a))
    df = len(f) - 1
    inv = pow(f[-1], p - 2, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv % p
        shift = len(a) - 1 - df
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fi) % p
        _fp_trim(a)
    return a


def _fp_mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _fp_rem(out, f, p)


def _fp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        a, b = b, _fp_rem(a, b, p)
    return a


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Ben-Or test: f has no factor of degree <= m/2, via gcd with x^{p^i} - x."""
    f = _fp_trim([int(c) % p for c in f])
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    h = [0, 1]
    for _ in range(1, m // 2 + 1):
        # h <- h^p mod f
        acc, base, e = [1], h, p
        while e:
            if e & 1:
                acc = _fp_mulmod(acc, base, f, p)
            base = _fp_mulmod(base, base, f, p)
            e >>= 1
        h = acc
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        g = _fp_gcd(f, diff, p)
        if len(g) - 1 > 0:
            return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Monic irreducible of degree m whose lower coefficients have the least base-p value."""
    for v in range(p ** m):
        f = to_digits(v, p, m) + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("unreachable: irreducibles exist in every degree")


class FieldCtx:
    """The field F_{p^m}; ``tower=(s, r)`` marks the subfield F_q with q = p^s."""

    def __init__(self, p: int, m: int, modulus: Sequence[int] | None = None,
                 tower: tuple[int, int] | None = None):
        if not is_prime(p):
            raise NonPrimeCharacteristic(f"characteristic {p} is not prime")
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        if tower is not None:
            s, r = (int(t) for t in tower)
            if s < 1 or r < 1 or s * r != m:
                raise TowerMismatch(f"tower {tower} does not satisfy s*r = m = {m}")
            tower = (s, r)
        if modulus is None:
            modulus = smallest_irreducible(p, m)
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1 or any(not 0 <= c < p for c in modulus):
            raise ValueError(f"modulus {modulus} is not monic of degree {m} over F_{p}")
        if not is_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.m = m
        self.modulus = modulus
        self.tower = tower
        self.order = p ** m
        self._tables = None
        self._ktab = None
        self._trace = None
        self._norm = None

    # -- identity -----------------------------------------------------------
    def _key(self):
        return (self.p, self.m, self.modulus, self.tower)

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        t = f", tower={self.tower}" if self.tower else ""
        return f"FieldCtx(p={self.p}, m={self.m}{t})"

    @property
    def q(self) -> int:
        if self.tower is None:
            raise NoTowerDeclared("field has no tower (s, r)")
        return self.p ** self.tower[0]

    @property
    def r(self) -> int:
        if self.tower is None:
            raise NoTowerDeclared("field has no tower (s, r)")
        return self.tower[1]

    @property
    def ktab(self):
        """(p, Q-1, tab) for the compiled kernels; tab packs exp | log | zech | neg."""
        if self._ktab is None:
            p, qm1, exp, log, zech, neg = self.tables
            if len(zech) < qm1:
                zech = np.zeros(qm1, dtype=np.int64)
            tab = np.concatenate([exp, log, zech, neg]).astype(np.int64)
            tab.setflags(write=False)
            self._ktab = (p, qm1, tab)
        return self._ktab

    @property
    def has_tables(self) -> bool:
        return self.order <= TABLE_LIMIT

    # -- elements -----------------------------------------------------------
    def __call__(self, value) -> "FElem":
        if isinstance(value, FElem):
            self.check(value)
            return value
        if isinstance(value, (list, tuple)):
            if len(value) != self.m or any(not 0 <= int(c) < self.p for c in value):
                raise ValueError(f"bad coefficient vector {value}")
            return FElem(self, from_digits(value, self.p))
        v = int(value)
        if not 0 <= v < self.order:
            raise ValueError(f"element encoding {v} outside [0, {self.order})")
        return FElem(self, v)

    def check(self, *elems: "FElem") -> None:
        for e in elems:
            if e.ctx is not self and e.ctx != self:
                raise ContextMismatch(f"element from {e.ctx!r} used in {self!r}")

    def elements(self) -> Iterator["FElem"]:
        for v in range(self.order):
            yield FElem(self, v)

    @property
    def zero(self) -> "FElem":
        return FElem(self, 0)

    @property
    def one(self) -> "FElem":
        return FElem(self, 1)

    # -- tables -------------------------------------------------------------
    @property
    def tables(self):
        """(p, Q-1, exp, log, zech, neg) for the compiled kernels."""
        if self._tables is None:
            if not self.has_tables:
                raise MemoryError(f"field of order {self.order} exceeds TABLE_LIMIT")
            self._tables = _build_tables(self)
        return self._tables

    def primitive_element(self) -> int:
        qm1 = self.order - 1
        if qm1 == 1:
            return 1
        fs = prime_factors(qm1)
        for g in range(2, self.order):
            if all(self._pb_pow(g, qm1 // f) != 1 for f in fs):
                return g
        raise AssertionError("multiplicative group is cyclic")

    # -- schoolbook polynomial-basis arithmetic -----------------------------
    def _pb_mul(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        da, db = to_digits(a, p, m), to_digits(b, p, m)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        mod = self.modulus
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(m + 1):
                    prod[k - m + i] -= c * mod[i]
        return from_digits([c % p for c in prod[:m]], p)

    def _pb_pow(self, a: int, e: int) -> int:
        acc = 1
        while e:
            if e & 1:
                acc = self._pb_mul(acc, a)
            a = self._pb_mul(a, a)
            e >>= 1
        return acc

    # -- scalar arithmetic on encoded ints ----------------------------------
    def add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % p
        out, mul = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * mul
            a //= p
            b //= p
            mul *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        if p == 2:
            return a
        out, mul = 0, 1
        while a:
            out += ((-(a % p)) % p) * mul
            a //= p
            mul *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.m == 1:
            return a * b % self.p
        if self.has_tables:
            _, qm1, exp, log, _, _ = self.tables
            return int(exp[log[a] + log[b]])
        return self._pb_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        if self.has_tables:
            _, qm1, exp, log, _, _ = self.tables
            return int(exp[(qm1 - log[a]) % qm1])
        return self._pb_pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if e == 0:
            return 1
        if a == 0:
            return 0
        qm1 = self.order - 1
        if self.has_tables and self.m > 1:
            _, _, exp, log, _, _ = self.tables
            return int(exp[(int(log[a]) * (e % qm1)) % qm1])
        if self.m == 1:
            return pow(a, e, self.p)
        return self._pb_pow(a, e % qm1 if e % qm1 else qm1)

    # -- vectorized arithmetic on int arrays --------------------------------
    def add_arr(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        p = self.p
        if p == 2:
            return a ^ b
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        mul = 1
        for _ in range(self.m):
            out += ((a % p + b % p) % p) * mul
            a = a // p
            b = b // p
            mul *= p
        return out

    def neg_arr(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a.copy()
        return self.tables[5][a]

    def sub_arr(self, a, b) -> np.ndarray:
        return self.add_arr(a, self.neg_arr(b))

    def mul_arr(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        _, qm1, exp, log, _, _ = self.tables
        out = exp[np.where(a == 0, 0, log[a]) + np.where(b == 0, 0, log[b])]
        return np.where((a == 0) | (b == 0), 0, out)

    def pow_arr(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        _, qm1, exp, log, _, _ = self.tables
        if e == 0:
            return np.ones_like(a)
        la = np.where(a == 0, 0, log[a])
        out = exp[(la * (e % qm1)) % qm1]
        return np.where(a == 0, 0, out)

    # -- relative trace and norm --------------------------------------------
    def _require_tower(self):
        if self.tower is None:
            raise NoTowerDeclared("relative trace/norm need a tower (s, r)")

    @property
    def norm_exponent(self) -> int:
        self._require_tower()
        return (self.order - 1) // (self.q - 1)

    def rel_trace(self, a: int) -> int:
        self._require_tower()
        q, acc, x = self.q, 0, a
        for _ in range(self.r):
            acc = self.add(acc, x)
            x = self.pow(x, q)
        return acc

    def rel_norm(self, a: int) -> int:
        self._require_tower()
        return self.pow(a, self.norm_exponent)

    def in_subfield(self, a: int) -> bool:
        self._require_tower()
        return self.pow(a, self.q) == a

    def trace_table(self) -> np.ndarray:
        """Tr(a) for every element a, indexed by encoding."""
        self._require_tower()
        if self._trace is None:
            allv = np.arange(self.order, dtype=np.int64)
            acc = np.zeros(self.order, dtype=np.int64)
            x = allv
            for _ in range(self.r):
                acc = self.add_arr(acc, x)
                x = self.pow_arr(x, self.q)
            acc.setflags(write=False)
            self._trace = acc
        return self._trace

    def norm_table(self) -> np.ndarray:
        self._require_tower()
        if self._norm is None:
            nt = self.pow_arr(np.arange(self.order, dtype=np.int64), self.norm_exponent)
            nt.setflags(write=False)
            self._norm = nt
        return self._norm

    def subfield_elements(self) -> list[int]:
        """Encodings of F_q inside F_{q^r}, ascending."""
        self._require_tower()
        return sorted(int(v) for v in np.unique(self.trace_table()))

    def fiber_count(self, a: int, b: int) -> int:
        """#{g : Tr(g) = a, Norm(g) = b}, by exhaustive enumeration."""
        self._require_tower()
        for v in (a, b):
            if not self.in_subfield(int(v)):
                raise ArgNotInSubfield(f"{v} is not fixed by the q-power Frobenius")
        return int(np.count_nonzero((self.trace_table() == a) & (self.norm_table() == b)))

    # -- serialization ------------------------------------------------------
    def to_spec(self) -> dict:
        return {"p": self.p, "m": self.m,
                "tower": list(self.tower) if self.tower else None,
                "modulus": list(self.modulus)}

    @classmethod
    def from_spec(cls, spec: dict) -> "FieldCtx":
        tower = tuple(spec["tower"]) if spec.get("tower") else None
        modulus = spec.get("modulus")
        canonical = smallest_irreducible(spec["p"], spec["m"]) if is_prime(spec["p"]) else None
        if modulus is None or tuple(modulus) == canonical:
            return make_field(spec["p"], spec["m"], tower)
        return cls(spec["p"], spec["m"], modulus, tower)

    def dumps(self) -> str:
        return json.dumps(self.to_spec(), sort_keys=True)


@functools.lru_cache(maxsize=None)
def make_field(p: int, m: int, tower: tuple[int, int] | None = None) -> FieldCtx:
    """Field F_{p^m} with the canonical (smallest) modulus; cached per arguments."""
    if tower is not None:
        tower = tuple(int(t) for t in tower)
    return FieldCtx(p, m, None, tower)


def tower_field(q: int, r: int) -> FieldCtx:
    """F_{q^r} with the tower marked, for a prime power q."""
    p, s = prime_power(q)
    return make_field(p, s * r, (s, r))


def _build_tables(ctx: FieldCtx):
    from . import _kernels

    p, m, Q = ctx.p, ctx.m, ctx.order
    qm1 = Q - 1
    g = ctx.primitive_element()
    exp = _kernels.build_exp(p, m, np.array(ctx.modulus, dtype=np.int64), g, qm1)
    log = np.full(Q, -1, dtype=np.int64)
    log[exp[:qm1]] = np.arange(qm1, dtype=np.int64)
    if p == 2:
        neg = np.arange(Q, dtype=np.int64)
        zech = np.zeros(1, dtype=np.int64)
    else:
        allv = np.arange(Q, dtype=np.int64)
        neg = np.zeros(Q, dtype=np.int64)
        mul = 1
        a = allv
        for _ in range(m):
            neg += ((-(a % p)) % p) * mul
            a = a // p
            mul *= p
        # zech[d] = log(1 + g^d), -1 when 1 + g^d = 0
        one_plus = ctx.add_arr(np.ones(qm1, dtype=np.int64), exp[:qm1])
        zech = log[one_plus]
    for t in (exp, log, zech, neg):
        t.setflags(write=False)
    return (p, qm1, exp, log, zech, neg)


class FElem:
    """A field element: an encoded int bound to its FieldCtx."""

    __slots__ = ("ctx", "value")

    def __init__(self, ctx: FieldCtx, value: int):
        self.ctx = ctx
        self.value = int(value)

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(to_digits(self.value, self.ctx.p, self.ctx.m))

    def _other(self, o) -> int:
        if isinstance(o, FElem):
            self.ctx.check(o)
            return o.value
        if isinstance(o, int):
            # integers act through the prime field
            return _int_to_prime_field(self.ctx, o)
        return NotImplemented

    def __add__(self, o):
        v = self._other(o)
        return v if v is NotImplemented else FElem(self.ctx, self.ctx.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, o):
        v = self._other(o)
        return v if v is NotImplemented else FElem(self.ctx, self.ctx.sub(self.value, v))

    def __rsub__(self, o):
        v = self._other(o)
        return v if v is NotImplemented else FElem(self.ctx, self.ctx.sub(v, self.value))

    def __mul__(self, o):
        v = self._other(o)
        return v if v is NotImplemented else FElem(self.ctx, self.ctx.mul(self.value, v))

    __rmul__ = __mul__

    def __truediv__(self, o):
        v = self._other(o)
        return v if v is NotImplemented else FElem(self.ctx, self.ctx.div(self.value, v))

    def __neg__(self):
        return FElem(self.ctx, self.ctx.neg(self.value))

    def __pow__(self, e: int):
        return FElem(self.ctx, self.ctx.pow(self.value, int(e)))

    def inverse(self) -> "FElem":
        return FElem(self.ctx, self.ctx.inv(self.value))

    def trace(self) -> "FElem":
        return FElem(self.ctx, self.ctx.rel_trace(self.value))

    def norm(self) -> "FElem":
        return FElem(self.ctx, self.ctx.rel_norm(self.value))

    def __eq__(self, o):
        if isinstance(o, FElem):
            return self.value == o.value and (self.ctx is o.ctx or self.ctx == o.ctx)
        if isinstance(o, int):
            return self.value == _int_to_prime_field(self.ctx, o)
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __repr__(self):
        return f"FElem({self.value})"


def _int_to_prime_field(ctx: FieldCtx, n: int) -> int:
    # prime-field elements are encoded by their residue
    return n % ctx.p
