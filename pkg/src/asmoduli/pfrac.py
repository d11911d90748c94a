"""The ring A of functions on P^1 regular away from finitely many punctures.

Infinity is always punctured, so A is k[x] localized at the finite punctures
and every element has a unique partial-fraction normal form

    a = sum_k c_k x^k + sum_{i,e} c_{i,e} (x - a_i)^(-e).

Monomial keys order the basis 1, (x-a_0)^-1, (x-a_0)^-2, ..., (x-a_1)^-1, ...,
x, x^2, ...; this is the enumeration order used for every deterministic choice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Mapping, Sequence, Union

from .errors import RingMismatch, UnknownPuncture, ZeroElement
from .gf import FieldCtx

INF = "inf"
PunctureId = Union[int, str]
Key = tuple  # (0,0,0) constant, (1,i,e) pole term, (2,0,k) x^k with k >= 1

CONST_KEY: Key = (0, 0, 0)


def poly_key(k: int) -> Key:
    return CONST_KEY if k == 0 else (2, 0, k)


def pole_key(i: int, e: int) -> Key:
    return (1, i, e)


def _binom_mod(n: int, k: int, p: int) -> int:
    if k < 0 or k > n:
        return 0
    return comb(n, k) % p


def _neg_binom_mod(e: int, j: int, p: int) -> int:
    """binom(-e, j) mod p = (-1)^j binom(e+j-1, j)."""
    v = comb(e + j - 1, j) % p
    return (-v) % p if j % 2 else v


@dataclass(frozen=True)
class PuncturedLine:
    """P^1 minus the given finite points and infinity."""

    ctx: FieldCtx
    finite_punctures: tuple[int, ...]
    infinity_punctured: bool = True

    def __post_init__(self):
        if len(set(self.finite_punctures)) != len(self.finite_punctures):
            raise ValueError("punctures must be distinct")
        if not self.infinity_punctured:
            raise ValueError("infinity must be punctured")
        for a in self.finite_punctures:
            if not 0 <= a < self.ctx.order:
                raise ValueError(f"puncture {a} is not a field element")

    @property
    def r(self) -> int:
        return len(self.finite_punctures)

    def puncture_ids(self) -> list[PunctureId]:
        return list(range(self.r)) + [INF]

    def check_id(self, at: PunctureId) -> None:
        if at == INF:
            return
        if not isinstance(at, int) or not 0 <= at < self.r:
            raise UnknownPuncture(at)

    def id_of(self, point: Union[str, int]) -> PunctureId:
        """Puncture id from a field element string or 'inf'."""
        if point == INF:
            return INF
        code = self.ctx.parse(point)
        try:
            return self.finite_punctures.index(code)
        except ValueError:
            raise UnknownPuncture(point) from None

    def label(self, at: PunctureId) -> str:
        return INF if at == INF else self.ctx.to_str(self.finite_punctures[at])

    def key_label(self, key: Key) -> str:
        kind, i, e = key
        if kind == 0:
            return "1"
        if kind == 2:
            return "x" if e == 1 else f"x^{e}"
        a = self.finite_punctures[i]
        base = "x" if a == 0 else f"(x-{self.ctx.to_str(a)})"
        return f"{base}^-{e}"

    # constructors ---------------------------------------------------------
    def zero(self) -> "RingElem":
        return RingElem(self, (), ())

    def one(self) -> "RingElem":
        return self.const(1)

    def const(self, c: int) -> "RingElem":
        return RingElem(self, (c,) if c else (), ())

    def x(self) -> "RingElem":
        return self.from_coords({poly_key(1): 1})

    def monomial(self, key: Key, c: int = 1) -> "RingElem":
        return self.from_coords({key: c})

    def inv_linear(self, i: int, e: int = 1, c: int = 1) -> "RingElem":
        """c * (x - a_i)^(-e)."""
        self.check_id(i)
        return self.from_coords({pole_key(i, e): c})

    def linear(self, a: int) -> "RingElem":
        """x - a as a polynomial element."""
        return self.from_poly([self.ctx.neg(a), 1])

    def from_poly(self, coeffs: Sequence[int]) -> "RingElem":
        return self.from_coords({poly_key(k): c for k, c in enumerate(coeffs)})

    def from_coords(self, coords: Mapping[Key, int]) -> "RingElem":
        deg = max((k[2] for k in coords if k[0] == 2 and coords[k]), default=0)
        poly = [0] * (deg + 1)
        pp = []
        for key, c in coords.items():
            if not c:
                continue
            kind, i, e = key
            if kind == 0:
                poly[0] = c
            elif kind == 2:
                poly[e] = c
            else:
                self.check_id(i)
                if e < 1:
                    raise ValueError("pole exponent must be positive")
                pp.append(((i, e), c))
        while poly and poly[-1] == 0:
            poly.pop()
        return RingElem(self, tuple(poly), tuple(sorted(pp)))


@dataclass(frozen=True)
class RingElem:
    """An element of A in partial-fraction normal form."""

    line: PuncturedLine = field(repr=False, compare=False)
    poly: tuple[int, ...]
    pp: tuple[tuple[tuple[int, int], int], ...]

    def __post_init__(self):
        if self.poly and self.poly[-1] == 0:
            raise ValueError("poly part not trimmed")
        if any(c == 0 for _, c in self.pp):
            raise ValueError("zero principal-part coefficient stored")

    @property
    def ctx(self) -> FieldCtx:
        return self.line.ctx

    def is_zero(self) -> bool:
        return not self.poly and not self.pp

    def coords(self) -> dict[Key, int]:
        out = {poly_key(k): c for k, c in enumerate(self.poly) if c}
        for (i, e), c in self.pp:
            out[pole_key(i, e)] = c
        return out

    def constant_term(self) -> int:
        return self.poly[0] if self.poly else 0

    def __add__(self, other):
        return elem_add(self, other)

    def __sub__(self, other):
        return elem_add(self, elem_neg(other))

    def __neg__(self):
        return elem_neg(self)

    def __mul__(self, other):
        return elem_mul(self, other)

    def __str__(self) -> str:
        return to_string(self)


def _check(a: RingElem, b: RingElem) -> None:
    if a.line != b.line:
        raise RingMismatch("elements live on different punctured lines")


def _acc(ctx: FieldCtx, d: dict, key, c: int) -> None:
    if c:
        v = ctx.add(d.get(key, 0), c)
        if v:
            d[key] = v
        else:
            d.pop(key, None)


def elem_add(a: RingElem, b: RingElem) -> RingElem:
    _check(a, b)
    ctx = a.ctx
    out = a.coords()
    for k, c in b.coords().items():
        _acc(ctx, out, k, c)
    return a.line.from_coords(out)


def elem_neg(a: RingElem) -> RingElem:
    ctx = a.ctx
    return a.line.from_coords({k: ctx.neg(c) for k, c in a.coords().items()})


def elem_sub(a: RingElem, b: RingElem) -> RingElem:
    return elem_add(a, elem_neg(b))


def scalar_mul(c: int, a: RingElem) -> RingElem:
    ctx = a.ctx
    if c == 0:
        return a.line.zero()
    return a.line.from_coords({k: ctx.mul(c, v) for k, v in a.coords().items()})


def linear_combination(line: PuncturedLine, terms: Iterable[tuple[int, RingElem]]) -> RingElem:
    ctx = line.ctx
    out: dict = {}
    for c, a in terms:
        if c:
            for k, v in a.coords().items():
                _acc(ctx, out, k, ctx.mul(c, v))
    return line.from_coords(out)


def _mul_terms(line: PuncturedLine, k1: Key, k2: Key, c: int, out: dict) -> None:
    """Accumulate c * m1 * m2 into out, for basis monomials m1, m2."""
    ctx = line.ctx
    p = ctx.p
    pts = line.finite_punctures
    kind1, i1, e1 = k1
    kind2, i2, e2 = k2
    if kind1 != 1 and kind2 != 1:
        d1 = e1 if kind1 == 2 else 0
        d2 = e2 if kind2 == 2 else 0
        _acc(ctx, out, poly_key(d1 + d2), c)
        return
    if kind1 == 1 and kind2 != 1:
        k1, k2 = k2, k1
        kind1, i1, e1, kind2, i2, e2 = kind2, i2, e2, kind1, i1, e1
    if kind1 != 1:
        # x^k * (x-a)^(-e) with x^k = sum_j C(k,j) a^(k-j) u^j, u = x - a
        k = e1 if kind1 == 2 else 0
        a, e = pts[i2], e2
        for j in range(k + 1):
            coef = ctx.mul(c, ctx.mul(_binom_mod(k, j, p), ctx.pow(a, k - j)))
            if not coef:
                continue
            s = j - e
            if s < 0:
                _acc(ctx, out, pole_key(i2, -s), coef)
            else:
                # u^s = sum_t C(s,t) (-a)^(s-t) x^t
                na = ctx.neg(a)
                for t in range(s + 1):
                    _acc(ctx, out, poly_key(t), ctx.mul(coef, ctx.mul(_binom_mod(s, t, p), ctx.pow(na, s - t))))
        return
    if i1 == i2:
        _acc(ctx, out, pole_key(i1, e1 + e2), c)
        return
    # (x-a)^-e (x-b)^-f has principal parts at a and b only
    for (ia, e), (ib, f) in (((i1, e1), (i2, e2)), ((i2, e2), (i1, e1))):
        diff = ctx.sub(pts[ia], pts[ib])
        for j in range(e):
            coef = ctx.mul(_neg_binom_mod(f, j, p), ctx.pow(diff, -f - j))
            _acc(ctx, out, pole_key(ia, e - j), ctx.mul(c, coef))


def elem_mul(a: RingElem, b: RingElem) -> RingElem:
    _check(a, b)
    ctx = a.ctx
    ca, cb = a.coords(), b.coords()
    if len(ca) > len(cb):
        ca, cb = cb, ca
    out: dict = {}
    for k1, c1 in ca.items():
        for k2, c2 in cb.items():
            _mul_terms(a.line, k1, k2, ctx.mul(c1, c2), out)
    return a.line.from_coords(out)


def elem_pow(a: RingElem, k: int) -> RingElem:
    if k < 0:
        raise ValueError("negative powers are not supported")
    result = a.line.one()
    base = a
    while k:
        if k & 1:
            result = elem_mul(result, base)
        k >>= 1
        if k:
            base = elem_mul(base, base)
    return result


def frob_power(a: RingElem, s: int) -> RingElem:
    """a^(p^s) for s >= 0, using additivity of Frobenius."""
    ctx = a.ctx
    pk = ctx.p**s
    out = {}
    for (kind, i, e), c in a.coords().items():
        key = (kind, i, e * pk) if kind else CONST_KEY
        out[key] = ctx.frob(c, s)
    return a.line.from_coords(out)


def pole_order(a: RingElem, at: PunctureId) -> int:
    a.line.check_id(at)
    if at == INF:
        return max(len(a.poly) - 1, 0)
    return max((e for (i, e), _ in a.pp if i == at), default=0)


def laurent_at(a: RingElem, at: PunctureId, upto: int) -> dict[int, int]:
    """Laurent coefficients of a at a puncture, exponents < upto.

    The local parameter is t = x - a_i at a finite puncture and t = 1/x at
    infinity.  Returns {exponent: coefficient} with zero entries dropped.
    """
    line = a.line
    line.check_id(at)
    ctx = line.ctx
    p = ctx.p
    pts = line.finite_punctures
    out: dict[int, int] = {}
    if at == INF:
        for k, c in enumerate(a.poly):
            if c and -k < upto:
                _acc(ctx, out, -k, c)
        for (i, e), c in a.pp:
            ai = pts[i]
            # (x-a)^-e = t^e (1 - a t)^-e
            j = 0
            while e + j < upto:
                coef = ctx.mul(_binom_mod(e + j - 1, j, p), ctx.pow(ai, j))
                _acc(ctx, out, e + j, ctx.mul(c, coef))
                j += 1
                if ai == 0:
                    break
        return out
    a0 = pts[at]
    # poly part: x^k = sum_j C(k,j) a0^(k-j) t^j
    for k, c in enumerate(a.poly):
        if not c:
            continue
        for j in range(min(k, upto - 1) + 1):
            _acc(ctx, out, j, ctx.mul(c, ctx.mul(_binom_mod(k, j, p), ctx.pow(a0, k - j))))
    for (i, e), c in a.pp:
        if i == at:
            if -e < upto:
                _acc(ctx, out, -e, c)
            continue
        d = ctx.sub(a0, pts[i])
        # (t + d)^-e = sum_j binom(-e, j) d^(-e-j) t^j
        for j in range(max(upto, 0)):
            _acc(ctx, out, j, ctx.mul(c, ctx.mul(_neg_binom_mod(e, j, p), ctx.pow(d, -e - j))))
    return out


def valuation(a: RingElem, at: PunctureId) -> int:
    """Order of a at the puncture (negative for poles)."""
    if a.is_zero():
        raise ZeroElement("valuation of zero")
    po = pole_order(a, at)
    if po > 0 and at != INF:
        return -po
    if at == INF and len(a.poly) > 1:
        return -(len(a.poly) - 1)
    # no pole there; the order of vanishing is bounded by the number of terms
    bound = sum(e for (_, e), _ in a.pp) + len(a.poly) + 1
    ser = laurent_at(a, at, bound + 1)
    return min(ser)


def evaluate(a: RingElem, t: int) -> int:
    ctx = a.ctx
    if t in a.line.finite_punctures:
        raise ValueError("cannot evaluate at a puncture")
    acc = 0
    for k, c in enumerate(a.poly):
        acc = ctx.add(acc, ctx.mul(c, ctx.pow(t, k)))
    for (i, e), c in a.pp:
        acc = ctx.add(acc, ctx.mul(c, ctx.pow(ctx.sub(t, a.line.finite_punctures[i]), -e)))
    return acc


# --- Riemann-Roch spaces ------------------------------------------------------

def rr_space(U: PuncturedLine, bounds: Mapping[PunctureId, int]) -> list[RingElem]:
    """Basis of {a in A : pole order <= bounds[P] at every puncture P}.

    Missing punctures default to bound 0.  Negative bounds demand a zero of
    that order; the result is then the reduced echelon basis in monomial
    coordinates.  With all bounds non-negative the monomial basis is returned.
    """
    b = {P: int(bounds.get(P, 0)) for P in U.puncture_ids()}
    for P in bounds:
        U.check_id(P)
    if all(v >= 0 for v in b.values()):
        out = [U.one()]
        for i in range(U.r):
            out += [U.inv_linear(i, e) for e in range(1, b[i] + 1)]
        out += [U.from_poly([0] * k + [1]) for k in range(1, b[INF] + 1)]
        return out
    deg_d = sum(b.values())
    if deg_d < 0:
        return []
    # a = g(x) * prod (x-a_i)^(-b_i), deg g <= deg D
    base = U.one()
    for i in range(U.r):
        if b[i] > 0:
            base = elem_mul(base, U.inv_linear(i, b[i]))
        elif b[i] < 0:
            base = elem_mul(base, elem_pow(U.linear(U.finite_punctures[i]), -b[i]))
    gens = [elem_mul(U.from_poly([0] * k + [1]), base) for k in range(deg_d + 1)]
    from .fplinalg import k_rref

    return k_rref(U, gens)


def rr_dim(U: PuncturedLine, bounds: Mapping[PunctureId, int]) -> int:
    b = [int(bounds.get(P, 0)) for P in U.puncture_ids()]
    return max(sum(b) + 1, 0)


# --- serialization -------------------------------------------------------------

def to_json(a: RingElem) -> dict:
    ctx = a.ctx
    return {
        "poly": [ctx.to_str(c) for c in a.poly],
        "pp": [[i, e, ctx.to_str(c)] for (i, e), c in a.pp],
    }


def from_json(U: PuncturedLine, data: Mapping) -> RingElem:
    ctx = U.ctx
    coords: dict = {}
    for k, c in enumerate(data.get("poly", [])):
        _acc(ctx, coords, poly_key(k), ctx.parse(c))
    for i, e, c in data.get("pp", []):
        U.check_id(i)
        _acc(ctx, coords, pole_key(i, e), ctx.parse(c))
    return U.from_coords(coords)


def to_string(a: RingElem) -> str:
    if a.is_zero():
        return "0"
    ctx = a.ctx
    parts = []
    for key, c in sorted(a.coords().items()):
        lab = a.line.key_label(key)
        cs = ctx.to_str(c)
        if lab == "1":
            parts.append(cs)
        elif c == 1:
            parts.append(lab)
        else:
            parts.append(f"[{cs}]*{lab}")
    return " + ".join(parts)
