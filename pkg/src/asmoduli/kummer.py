"""Cyclic Kummer covers y^n = c * prod (x - a_i)^(m_i) of a punctured line.

An element of B = A[y]/(y^n - f) is a vector of n base-ring components, the
j-th being the coefficient of y^j.  The Galois generator sigma scales the
j-th component by zeta^j, so B splits into eigenlines A*y^j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Iterable, Mapping, Sequence

from .errors import ConfigInvalid, NotCoprime, RingMismatch, ZeroElement
from .gf import FieldCtx, prime_factors, root_of_unity
from .pfrac import (
    INF,
    PunctureId,
    PuncturedLine,
    RingElem,
    elem_add,
    elem_mul,
    elem_neg,
    elem_pow,
    frob_power,
    from_json as ring_from_json,
    rr_space,
    scalar_mul,
    to_json as ring_to_json,
    valuation,
)


class KummerCover:
    """The cover V -> U given by y^n = f, f = unit_const * prod (x - a_i)^(m_i)."""

    def __init__(
        self,
        base: PuncturedLine,
        n: int,
        exponents: Sequence[int],
        unit_const: int = 1,
        zeta: int | None = None,
    ):
        ctx = base.ctx
        if n < 1:
            raise ValueError("n must be positive")
        if n % ctx.p == 0:
            raise NotCoprime(f"gcd(n,p) != 1 for n={n}, p={ctx.p}")
        if len(exponents) != base.r:
            raise ConfigInvalid(f"need one exponent per finite puncture ({base.r}), got {len(exponents)}")
        if unit_const == 0:
            raise ConfigInvalid("unit_const must be nonzero")
        self.base = base
        self.n = n
        self.exponents = tuple(int(m) for m in exponents)
        self.unit_const = unit_const
        self.zeta = root_of_unity(ctx, n) if zeta is None else zeta
        if ctx.pow(self.zeta, n) != 1 or any(ctx.pow(self.zeta, d) == 1 for d in range(1, n)):
            raise ConfigInvalid("zeta is not a primitive n-th root of unity")
        for d in prime_factors(n):
            if all(m % d == 0 for m in self.exponents) and ctx.is_nth_power(unit_const, d):
                raise ConfigInvalid(f"cover is disconnected: f is a {d}-th power")

    @property
    def ctx(self) -> FieldCtx:
        return self.base.ctx

    def m(self, at: PunctureId) -> int:
        self.base.check_id(at)
        return -sum(self.exponents) if at == INF else self.exponents[at]

    def g(self, at: PunctureId) -> int:
        """Number of points above the puncture."""
        return gcd(self.n, self.m(at))

    def e(self, at: PunctureId) -> int:
        """Ramification index above the puncture."""
        return self.n // self.g(at)

    def mprime(self, at: PunctureId) -> int:
        return self.m(at) // self.g(at)

    def points(self, support: Iterable[PunctureId] | None = None) -> list[tuple[PunctureId, int]]:
        ids = self.base.puncture_ids() if support is None else list(support)
        return [(P, b) for P in ids for b in range(self.g(P))]

    @cached_property
    def f(self) -> RingElem:
        return self.f_power(1)

    def f_power(self, k: int) -> RingElem:
        cache = self.__dict__.setdefault("_fpow", {})
        if k not in cache:
            U = self.base
            out = U.const(self.ctx.pow(self.unit_const, k))
            for i, mi in enumerate(self.exponents):
                e = mi * k
                if e > 0:
                    out = elem_mul(out, elem_pow(U.linear(U.finite_punctures[i]), e))
                elif e < 0:
                    out = elem_mul(out, U.inv_linear(i, -e))
            cache[k] = out
        return cache[k]

    # element constructors --------------------------------------------------
    def zero(self) -> "CoverElem":
        z = self.base.zero()
        return CoverElem(self, (z,) * self.n)

    def lift(self, a: RingElem, j: int = 0) -> "CoverElem":
        """The element a * y^j."""
        if a.line != self.base:
            raise RingMismatch("base element from another line")
        comps = [self.base.zero()] * self.n
        comps[j % self.n] = a
        out = CoverElem(self, tuple(comps))
        if j >= self.n or j < 0:
            q, _ = divmod(j, self.n)
            if q < 0:
                raise ValueError("negative powers of y are not supported")
            out = CoverElem(self, tuple(elem_mul(c, self.f_power(q)) for c in out.comps))
        return out

    def y(self) -> "CoverElem":
        return self.lift(self.base.one(), 1)

    def describe(self) -> dict:
        return {
            "n": self.n,
            "exponents": list(self.exponents),
            "unit_const": self.ctx.to_str(self.unit_const),
        }

    def __eq__(self, other):
        return (
            isinstance(other, KummerCover)
            and self.base == other.base
            and (self.n, self.exponents, self.unit_const, self.zeta)
            == (other.n, other.exponents, other.unit_const, other.zeta)
        )

    def __hash__(self):
        return hash((self.base, self.n, self.exponents, self.unit_const, self.zeta))

    def __repr__(self) -> str:
        return f"KummerCover(n={self.n}, exponents={self.exponents}, unit_const={self.unit_const})"


@dataclass(frozen=True)
class CoverElem:
    """sum_j comps[j] * y^j in B."""

    cover: KummerCover = field(repr=False, compare=False)
    comps: tuple[RingElem, ...]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def support(self) -> list[int]:
        return [j for j, c in enumerate(self.comps) if not c.is_zero()]

    def __add__(self, other):
        return cover_add(self, other)

    def __sub__(self, other):
        return cover_add(self, cover_neg(other))

    def __neg__(self):
        return cover_neg(self)

    def __mul__(self, other):
        return cover_mul(self, other)

    def __str__(self) -> str:
        return to_string(self)


def _check(a: CoverElem, b: CoverElem) -> None:
    if a.cover != b.cover:
        raise RingMismatch("elements of different covers")


def cover_add(a: CoverElem, b: CoverElem) -> CoverElem:
    _check(a, b)
    return CoverElem(a.cover, tuple(elem_add(x, y) for x, y in zip(a.comps, b.comps)))


def cover_neg(a: CoverElem) -> CoverElem:
    return CoverElem(a.cover, tuple(elem_neg(x) for x in a.comps))


def cover_sub(a: CoverElem, b: CoverElem) -> CoverElem:
    return cover_add(a, cover_neg(b))


def cover_scale(c: int, a: CoverElem) -> CoverElem:
    return CoverElem(a.cover, tuple(scalar_mul(c, x) for x in a.comps))


def cover_mul(a: CoverElem, b: CoverElem) -> CoverElem:
    _check(a, b)
    V = a.cover
    n = V.n
    acc = [V.base.zero()] * n
    for i in a.support():
        for j in b.support():
            prod = elem_mul(a.comps[i], b.comps[j])
            k = i + j
            if k >= n:
                prod = elem_mul(prod, V.f)
                k -= n
            acc[k] = elem_add(acc[k], prod)
    return CoverElem(V, tuple(acc))


def cover_frob(a: CoverElem, s: int) -> CoverElem:
    """a^(p^s): Frobenius is additive, and y^(j p^s) = f^floor(j p^s / n) y^(j p^s mod n)."""
    V = a.cover
    pk = V.ctx.p**s
    acc = [V.base.zero()] * V.n
    for j in a.support():
        c = frob_power(a.comps[j], s)
        quo, rem = divmod(j * pk, V.n)
        if quo:
            c = elem_mul(c, V.f_power(quo))
        acc[rem] = elem_add(acc[rem], c)
    return CoverElem(V, tuple(acc))


def sigma_apply(b: CoverElem, power: int = 1) -> CoverElem:
    """The Galois generator y -> zeta*y, applied `power` times."""
    ctx = b.cover.ctx
    z = ctx.pow(b.cover.zeta, power)
    return CoverElem(b.cover, tuple(scalar_mul(ctx.pow(z, j), c) for j, c in enumerate(b.comps)))


def component_val(V: KummerCover, a: RingElem, j: int, at: PunctureId) -> int:
    """Valuation of a * y^j at any point above the puncture."""
    return V.e(at) * valuation(a, at) + j * V.mprime(at)


def cover_val(b: CoverElem, point: tuple[PunctureId, int]) -> int:
    at, branch = point
    V = b.cover
    V.base.check_id(at)
    if not 0 <= branch < V.g(at):
        raise ValueError(f"branch {branch} out of range at {at}")
    if b.is_zero():
        raise ZeroElement("valuation of zero")
    vals = {j: component_val(V, b.comps[j], j, at) for j in b.support()}
    low = min(vals.values())
    if sum(1 for v in vals.values() if v == low) == 1:
        return low
    # equal leading valuations from several components: cancellation is
    # branch dependent, so read it off the local expansion
    from .localexp import expansion_valuation

    return expansion_valuation(b, at, branch, low)


def rr_bounds(V: KummerCover, bound: int, support: Iterable[PunctureId], j: int) -> dict:
    supp = set(support)
    out = {}
    for P in V.base.puncture_ids():
        B = bound if P in supp else 0
        out[P] = (B + j * V.mprime(P)) // V.e(P)
    return out


def rr_component(V: KummerCover, bound: int, j: int, support: Iterable[PunctureId] | None = None) -> list[RingElem]:
    """Basis of {a in A : v_Q(a y^j) >= -bound over support, >= 0 elsewhere}."""
    support = V.base.puncture_ids() if support is None else support
    return rr_space(V.base, rr_bounds(V, bound, support, j))


def rr_space_cover(V: KummerCover, bound: int, support: Iterable[PunctureId] | None = None) -> list[CoverElem]:
    support = list(V.base.puncture_ids() if support is None else support)
    for P in support:
        V.base.check_id(P)
    out = []
    for j in range(V.n):
        out += [V.lift(a, j) for a in rr_component(V, bound, j, support)]
    return out


# --- serialization -----------------------------------------------------------

def to_json(b: CoverElem) -> dict:
    return {"comps": [[j, ring_to_json(b.comps[j])] for j in b.support()]}


def from_json(V: KummerCover, data: Mapping) -> CoverElem:
    comps = [V.base.zero()] * V.n
    for j, d in data.get("comps", []):
        comps[j] = ring_from_json(V.base, d)
    return CoverElem(V, tuple(comps))


def to_string(b: CoverElem) -> str:
    if b.is_zero():
        return "0"
    parts = []
    for j in b.support():
        s = str(b.comps[j])
        if j == 0:
            parts.append(s)
        else:
            yj = "y" if j == 1 else f"y^{j}"
            a = b.comps[j]
            parts.append(yj if a == b.cover.base.one() else f"({s})*{yj}")
    return " + ".join(parts)
