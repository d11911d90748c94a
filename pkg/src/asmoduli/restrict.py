"""Restriction of global eigen-classes to the punctured discs at the punctures.

At each support puncture P one point above P is fixed (root index k, branch
k mod g_P; index 0 by default).  Its stabilizer is generated by sigma^(m_P),
which acts on the local uniformizer as s -> zeta^(g_P) s, so the local
multiplier is e_rho^(m_P).  The restriction of a level-l class is the tuple
of canonical local classes of its principal parts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import BudgetExceeded, ConfigInvalid, NoProfile, NoSuchRoot
from .fplinalg import FpMap, FpSpace, fp_expand, kernel, rank, span_enumerate
from .gf import divisors
from .kummer import CoverElem, KummerCover, cover_scale
from .localexp import LocalFrame
from .localmod import LocalCover, class_support, local_coords, local_dims
from .moduli import ASClass, FilteredKernel, RhoAction, new_basis, piece_dims
from .pfrac import INF, PunctureId, PuncturedLine

Point = tuple  # (puncture id, root index)


@dataclass(frozen=True)
class PunctureExpansion:
    point: Point
    uniformizer: str
    precision: int
    series: dict = field(compare=False)

    def is_regular(self) -> bool:
        return not self.series


def expand_at(b: CoverElem, point: Point, precision: int | None = None) -> PunctureExpansion:
    """Principal part {J: c} of b at a point, in powers s^-J of the local uniformizer."""
    at, k = point
    frame = LocalFrame(b.cover, at, k)
    pp = frame.principal_part(b, precision)
    prec = frame.pole_bound(b) if precision is None else precision
    t = "1/x" if at == INF else f"x-{b.cover.base.label(at)}"
    return PunctureExpansion((at, k), f"s^{frame.e} = {t}", prec, pp)


def local_cover_at(fk: FilteredKernel, at: PunctureId) -> LocalCover:
    V = fk.cover
    ctx = V.ctx
    return LocalCover(ctx, V.e(at), ctx.pow(fk.e_rho, V.m(at)), ctx.pow(V.zeta, V.g(at)))


def target_points(fk: FilteredKernel, root_indices: Mapping[PunctureId, int] | None = None) -> list[Point]:
    root_indices = root_indices or {}
    return [(P, root_indices.get(P, 0)) for P in fk.support]


def restrict_class(
    fk: FilteredKernel, cls: ASClass | CoverElem, ell: int, root_indices: Mapping[PunctureId, int] | None = None
) -> dict[Point, dict[int, int]]:
    """Principal parts of a representative at the target points."""
    b = cls.rep if isinstance(cls, ASClass) else cls
    return {pt: expand_at(b, pt).series for pt in target_points(fk, root_indices)}


@dataclass(frozen=True)
class RestrictionMatrix:
    level: int
    map: FpMap
    points: tuple[Point, ...]
    local_supports: tuple[tuple[int, ...], ...]
    profile: tuple[tuple[PunctureId, int], ...]

    @property
    def kernel_dim(self) -> int:
        return self.map.source.ambient_dim - rank(self.map)

    @property
    def rank(self) -> int:
        return rank(self.map)

    @property
    def surjective(self) -> bool:
        return self.rank == self.map.target.ambient_dim


def local_class_vector(fk: FilteredKernel, parts: Mapping[Point, Mapping[int, int]], ell: int) -> np.ndarray:
    ctx = fk.ctx
    chunks = []
    for pt, pp in parts.items():
        lc = local_cover_at(fk, pt[0])
        chunks.append(fp_expand(ctx, local_coords(lc, pp, ell)))
    return np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)


def restriction_matrix(
    fk: FilteredKernel, ell: int, root_indices: Mapping[PunctureId, int] | None = None
) -> RestrictionMatrix:
    ctx = fk.ctx
    V = fk.cover
    pts = target_points(fk, root_indices)
    supports = tuple(tuple(class_support(local_cover_at(fk, P), ell)) for P, _ in pts)
    new = new_basis(fk, ell)
    src = FpSpace(tuple(f"c{i + 1}" for i in range(len(new))), ctx.M)
    tgt = FpSpace(tuple((V.base.label(P), k, J) for (P, k), sup in zip(pts, supports) for J in sup), ctx.M)
    cols = []
    for f in new:
        for beta in ctx.basis():
            parts = restrict_class(fk, cover_scale(beta, f), ell, root_indices)
            cols.append(local_class_vector(fk, parts, ell))
    mat = np.array(cols, dtype=np.int64).T if cols else np.zeros((tgt.ambient_dim, 0), dtype=np.int64)
    if mat.shape[0] != tgt.ambient_dim:
        mat = mat.reshape(tgt.ambient_dim, src.ambient_dim)
    profile = tuple((V.base.label(P), V.e(P)) for P, _ in pts)
    return RestrictionMatrix(ell, FpMap(mat % ctx.p, src, tgt, ctx.p), tuple(pts), supports, profile)


def local_piece_dims(fk: FilteredKernel, ell_max: int) -> dict[PunctureId, list[int]]:
    return {P: local_dims(local_cover_at(fk, P), ell_max) for P in fk.support}


def analyze_restriction(
    fk: FilteredKernel,
    levels: Sequence[int],
    root_indices: Mapping[PunctureId, int] | None = None,
    enumerate_limit: int = 12,
) -> dict:
    """Kernel dimension, surjectivity and p-power checks per level."""
    if not levels:
        raise ValueError("need at least one level")
    p = fk.ctx.p
    top = max(levels)
    gd = piece_dims(fk, top)
    ld = local_piece_dims(fk, top)
    rows = []
    for ell in levels:
        rm = restriction_matrix(fk, ell, root_indices)
        kd = rm.kernel_dim
        p_power_ok = True
        if kd <= enumerate_limit:
            K = kernel(rm.map)
            seen = {tuple(v) for v in span_enumerate(K, p)}
            p_power_ok = len(seen) == p**kd and all(not rm.map.apply(np.array(v)).any() for v in seen)
        rows.append(
            {
                "level": ell,
                "d_global": gd[ell],
                "sum_d_local": sum(ld[P][ell] for P in ld),
                "rank": rm.rank,
                "kernel_dim": kd,
                "kernel_size": p**kd,
                "p_power_checked": p_power_ok,
                "surjective": rm.surjective,
            }
        )
    first = next((r["level"] for r in rows if r["surjective"]), None)
    kdims = [r["kernel_dim"] for r in rows]
    return {
        "rows": rows,
        "first_surjective_level": first,
        "surjective_from_first": first is not None and all(r["surjective"] for r in rows if r["level"] >= first),
        "kernel_stable": len(set(kdims[-2:])) == 1,
        "stable_kernel_dim": kdims[-1],
        "degree": p ** kdims[-1],
        "p_power": all(r["p_power_checked"] for r in rows),
    }


# --- ramification profiles ---------------------------------------------------

@dataclass(frozen=True)
class ProfileCover:
    """A cover realizing a ramification profile, with its pole support."""

    cover: KummerCover
    support: tuple
    tame: tuple
    profile: tuple


def _exponent_candidates(n: int, count: int) -> Iterable[tuple[int, ...]]:
    reps = sorted(range(-(n - 1) // 2, n // 2 + 1), key=lambda m: (abs(m), -m))
    # prefer small total size, then the order of reps
    combos = list(itertools.product(reps, repeat=count))
    combos.sort(key=lambda c: (sum(abs(m) for m in c), [reps.index(m) for m in c]))
    return combos


def cover_for_profile(
    U: PuncturedLine, n: int, profile: Mapping[PunctureId, int], max_tame: int = 2
) -> ProfileCover:
    """A geometrically connected y^n = f ramified with index profile[P] at each puncture.

    Extra tame punctures (poles forbidden above them) are added when the
    profile cannot be met on U itself.  Constants and tame locations are
    chosen so that every support puncture has rational branches.
    """
    ctx = U.ctx
    ids = U.puncture_ids()
    for P in ids:
        if P not in profile:
            raise ConfigInvalid(f"profile misses puncture {U.label(P)}")
        if n % profile[P]:
            raise ConfigInvalid(f"ramification index {profile[P]} does not divide n={n}")
    want = {P: n // profile[P] for P in ids}  # required gcd(n, m_P)
    free_points = [a for a in range(ctx.order) if a not in U.finite_punctures]
    for t in range(max_tame + 1):
        for ms in _exponent_candidates(n, U.r + t):
            base_m, tame_m = ms[: U.r], ms[U.r :]
            if any(m % n == 0 for m in tame_m):
                continue
            m_inf = -sum(ms)
            if any(gcd(n, base_m[i]) != want[i] for i in range(U.r)) or gcd(n, m_inf) != want[INF]:
                continue
            if gcd(n, gcd(m_inf, *ms) if ms else m_inf) != 1:
                continue
            found = _place(U, n, base_m, tame_m, free_points)
            if found is not None:
                V, tame_ids = found
                support = tuple(range(U.r)) + (INF,)
                prof = tuple((P, V.e(P)) for P in support)
                return ProfileCover(V, support, tame_ids, prof)
    raise NoProfile(f"profile {dict(profile)} is not realizable with n={n} and at most {max_tame} tame points")


def _place(U, n, base_m, tame_m, free_points):
    ctx = U.ctx
    for locs in itertools.combinations(free_points, len(tame_m)):
        U2 = PuncturedLine(ctx, U.finite_punctures + tuple(locs))
        for c in range(1, ctx.order):
            try:
                V = KummerCover(U2, n, list(base_m) + list(tame_m), c)
            except ConfigInvalid:
                continue
            try:
                for P in list(range(U.r)) + [INF]:
                    LocalFrame(V, P).root()
            except NoSuchRoot:
                continue
            return V, tuple(range(U.r, U2.r))
    return None


def all_profiles(U: PuncturedLine, n: int) -> list[dict]:
    ids = U.puncture_ids()
    return [dict(zip(ids, combo)) for combo in itertools.product(divisors(n), repeat=len(ids))]


def essential_surjectivity_scan(
    U: PuncturedLine, n: int, rho: RhoAction, ell: int, budget: int = 64, max_tame: int = 2
) -> list[dict]:
    profiles = all_profiles(U, n)
    if len(profiles) > budget:
        raise BudgetExceeded(f"{len(profiles)} profiles exceed the budget {budget}")
    out = []
    for prof in profiles:
        key = {U.label(P): v for P, v in prof.items()}
        try:
            pc = cover_for_profile(U, n, prof, max_tame)
        except NoProfile as exc:
            out.append({"profile": key, "realizable": False, "reason": str(exc)})
            continue
        fk = FilteredKernel(pc.cover, rho, support=pc.support)
        rm = restriction_matrix(fk, ell)
        ld = local_piece_dims(fk, ell)
        out.append(
            {
                "profile": key,
                "realizable": True,
                "exponents": list(pc.cover.exponents),
                "unit_const": pc.cover.ctx.to_str(pc.cover.unit_const),
                "tame_points": [pc.cover.base.label(T) for T in pc.tame],
                "level": ell,
                "d_global": piece_dims(fk, ell)[ell],
                "sum_d_local": sum(v[ell] for v in ld.values()),
                "kernel_dim": rm.kernel_dim,
                "surjective": rm.surjective,
            }
        )
    return out
