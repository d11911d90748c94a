"""Laurent expansions of cover elements at the points above a puncture.

At a puncture with local parameter t (t = x - a_i, or 1/x at infinity) and
ramification index e, a uniformizer s upstairs satisfies s^e = t and

    y = r * s^(m') * prod_k (1 + t/beta_k)^(m_k/n)

where f = u0 * t^m * (unit), r^n = u0 and m' = m/gcd(n, m).  The n choices of
r, indexed by root_index k via r_k = r_0 * zeta^k with r_0 the smallest n-th
root of u0, give the g = gcd(n, m) points above the puncture as k mod g.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InsufficientPrecision, NoSuchRoot
from .gf import FieldCtx
from .kummer import CoverElem, KummerCover
from .pfrac import INF, PunctureId, laurent_at


@lru_cache(maxsize=None)
def _gen_binom_mod(num: int, den: int, N: int, p: int) -> tuple[int, ...]:
    """binom(num/den, l) mod p for l < N; den must be prime to p."""
    alpha = Fraction(num, den)
    out = []
    c = Fraction(1)
    for l in range(N):
        out.append(c.numerator * pow(c.denominator, -1, p) % p)
        c = c * (alpha - l) / (l + 1)
    return tuple(out)


def _series_mul(ctx: FieldCtx, a: dict[int, int], b: dict[int, int], upto: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for i, x in a.items():
        for j, y in b.items():
            k = i + j
            if k < upto:
                v = ctx.add(out.get(k, 0), ctx.mul(x, y))
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
    return out


@dataclass(frozen=True)
class LocalFrame:
    """Local coordinates at one point above a puncture."""

    cover: KummerCover
    at: PunctureId
    root_index: int = 0

    @property
    def e(self) -> int:
        return self.cover.e(self.at)

    @property
    def g(self) -> int:
        return self.cover.g(self.at)

    @property
    def mprime(self) -> int:
        return self.cover.mprime(self.at)

    @property
    def branch(self) -> int:
        return self.root_index % self.g

    def u0(self) -> int:
        V = self.cover
        ctx = V.ctx
        u = V.unit_const
        if self.at == INF:
            return u
        ai = V.base.finite_punctures[self.at]
        for k, mk in enumerate(V.exponents):
            if k != self.at:
                u = ctx.mul(u, ctx.pow(ctx.sub(ai, V.base.finite_punctures[k]), mk))
        return u

    def root(self) -> int:
        ctx = self.cover.ctx
        roots = ctx.nth_roots(self.u0(), self.cover.n)
        if not roots:
            raise NoSuchRoot(
                f"leading coefficient at puncture {self.cover.base.label(self.at)} has no n-th root in F_{ctx.order}"
            )
        return ctx.mul(roots[0], ctx.pow(self.cover.zeta, self.root_index))

    def unit_series(self, j: int, upto: int) -> dict[int, int]:
        """prod_k (1 + t/beta_k)^(j m_k/n) in t, exponents < upto."""
        V = self.cover
        ctx = V.ctx
        p = ctx.p
        out = {0: 1}
        if upto <= 0:
            return {}
        for k, mk in enumerate(V.exponents):
            if k == self.at or j * mk == 0:
                continue
            if self.at == INF:
                z = ctx.neg(V.base.finite_punctures[k])  # (1 - a_k t)
            else:
                beta = ctx.sub(V.base.finite_punctures[self.at], V.base.finite_punctures[k])
                z = ctx.inv(beta)
            if z == 0:
                continue
            bins = _gen_binom_mod(j * mk, V.n, upto, p)
            fac = {}
            for l in range(upto):
                c = ctx.mul(ctx.from_int(bins[l]), ctx.pow(z, l))
                if c:
                    fac[l] = c
            out = _series_mul(ctx, out, fac, upto)
        return out

    def expand(self, b: CoverElem, s_upto: int) -> dict[int, int]:
        """Coefficients of b in s for exponents < s_upto."""
        V = self.cover
        ctx = V.ctx
        e, mp = self.e, self.mprime
        r = self.root()
        out: dict[int, int] = {}
        for j in b.support():
            a = b.comps[j]
            t_upto = -((j * mp - s_upto) // e)  # ceil((s_upto - j m') / e)
            ser = laurent_at(a, self.at, t_upto)
            if not ser:
                continue
            vmin = min(ser)
            unit = self.unit_series(j, t_upto - vmin)
            prod = _series_mul(ctx, ser, unit, t_upto)
            rj = ctx.pow(r, j)
            for k, c in prod.items():
                sexp = e * k + j * mp
                v = ctx.add(out.get(sexp, 0), ctx.mul(rj, c))
                if v:
                    out[sexp] = v
                else:
                    out.pop(sexp, None)
        return out

    def pole_bound(self, b: CoverElem) -> int:
        """An a-priori upper bound on the pole order of b at this point."""
        from .pfrac import valuation

        low = 0
        for j in b.support():
            low = min(low, self.e * valuation(b.comps[j], self.at) + j * self.mprime)
        return -low

    def principal_part(self, b: CoverElem, precision: int | None = None) -> dict[int, int]:
        """{J: coefficient of s^-J} for J >= 1."""
        need = self.pole_bound(b)
        if precision is not None and precision < need:
            raise InsufficientPrecision(f"pole order bound {need} exceeds precision {precision}")
        ser = self.expand(b, 0)
        return {-k: c for k, c in ser.items() if k < 0}


def expansion_valuation(b: CoverElem, at: PunctureId, branch: int, low: int) -> int:
    frame = LocalFrame(b.cover, at, branch)
    upto = low + 1
    while True:
        ser = frame.expand(b, upto)
        if ser:
            return min(ser)
        upto += max(8, upto - low)
