"""Eigen-kernels of the Galois action, their pole filtration and class spaces.

For a Kummer cover V -> U with generator sigma and a multiplier e = zeta^s,
KerD = {b in B : sigma(b) = e b} = A * y^j0 with zeta^j0 = e.  Level l is the
part with pole order at most q^l above the support punctures.  Artin-Schreier
classes at level l are elements of level l modulo wp(level l-1), where
wp(f) = f^q - f (and modulo constants when e = 1).

Bases are chosen as a chain K_0 <= K_1 <= ... in which K_l contains K_(l-1)
and the q-th powers of K_(l-1) - K_(l-2); in these coordinates wp is a
coordinate shift, so every class has a unique representative supported on
K_l - K_(l-1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, ConfigInvalid, DependentSeed, LevelExceeded, NotInKernel
from .fplinalg import KSolver, fp_contract, fp_expand, reduce_by_rref, rref
from .kummer import (
    CoverElem,
    KummerCover,
    cover_add,
    cover_frob,
    cover_scale,
    cover_sub,
    rr_component,
    rr_space_cover,
    sigma_apply,
)
from .pfrac import CONST_KEY, PunctureId

DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class RhoAction:
    """rho(-1) acts on H = F_q as multiplication by e_rho = zeta_n^s."""

    s: int

    def e_rho(self, cover: KummerCover) -> int:
        ctx = cover.ctx
        e = ctx.pow(cover.zeta, self.s)
        if not ctx.in_subfield(e):
            raise ConfigInvalid(f"e_rho = zeta^{self.s} is not in F_{ctx.q}")
        return e


def kernel_D(cover: KummerCover, rho: RhoAction) -> int:
    """The index j0 with zeta^j0 = e_rho; KerD = A * y^j0."""
    e = rho.e_rho(cover)
    ctx = cover.ctx
    for j in range(cover.n):
        if ctx.pow(cover.zeta, j) == e:
            return j
    raise AssertionError("e_rho is not a power of zeta")  # pragma: no cover


def cover_coords(b: CoverElem) -> dict:
    return {(j, key): c for j in b.support() for key, c in b.comps[j].coords().items()}


def is_constant(b: CoverElem) -> bool:
    return all(j == 0 and key == CONST_KEY for j, key in cover_coords(b))


def level_bound(q: int, level: int) -> int:
    return q**level


@dataclass(frozen=True)
class ASClass:
    """A class at a fixed level, by its coordinates on the new basis vectors."""

    level: int
    coords: tuple[int, ...]
    rep: CoverElem = field(compare=False, repr=False)
    chain: str = "rho"

    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass(frozen=True)
class ModuliPiece:
    level: int
    dim: int
    labels: tuple[str, ...]


@dataclass
class _Level:
    level: int
    kernel_basis: list[CoverElem]
    K: list[CoverElem]
    n_old: int
    qmap: list[int]
    solver: KSolver
    wp_image_basis: list[CoverElem]
    _wp_rref: tuple | None = None

    @property
    def new(self) -> list[CoverElem]:
        return self.K[self.n_old :]


class BasisChain:
    """The chain K_0 <= K_1 <= ... for a filtered space of cover elements.

    `space(l)` returns a basis of level l.  With `with_constants` the constant
    1 is treated as sitting below level 0 and is quotiented out.
    """

    def __init__(self, cover: KummerCover, space: Callable[[int], list[CoverElem]], with_constants: bool):
        self.cover = cover
        self.space = space
        self.with_constants = with_constants
        self.levels: list[_Level] = []

    @property
    def ctx(self):
        return self.cover.ctx

    def _offset(self) -> int:
        return 1 if self.with_constants else 0

    def build(self, level_max: int) -> "BasisChain":
        while len(self.levels) <= level_max:
            self._build_next()
        return self

    def _build_next(self) -> None:
        ell = len(self.levels)
        ctx = self.ctx
        V = self.cover
        basis = self.space(ell)
        solver = KSolver(ctx)
        if self.with_constants:
            solver.add(cover_coords(V.lift(V.base.one())))
        K: list[CoverElem] = []
        qmap: list[int] = []
        wp_imgs: list[CoverElem] = []
        if ell > 0:
            prev = self.levels[-1]
            for f in prev.K:
                if not solver.add(cover_coords(f)):
                    raise DependentSeed(f"level {ell - 1} basis is not independent")
                K.append(f)
            n_old = len(K)
            qmap = list(prev.qmap)
            for i, f in enumerate(prev.new):
                if is_constant(f):
                    continue
                fq = cover_frob(f, ctx.m)
                if not solver.add(cover_coords(fq)):
                    raise DependentSeed(f"q-th power of basis element {i} at level {ell - 1} is dependent")
                qmap.append(len(K))
                K.append(fq)
            wp_imgs = [cover_sub(K[qmap[i]], f) for i, f in enumerate(prev.K)]
        else:
            n_old = 0
        for b in basis:
            if solver.add(cover_coords(b)):
                K.append(b)
        if solver.size != len(K) + self._offset():
            raise AssertionError("basis bookkeeping mismatch")  # pragma: no cover
        for b in K:
            if solver.coords(cover_coords(b)) is None:
                raise AssertionError("basis element outside its level")  # pragma: no cover
        expected = len(basis) + (0 if any(is_constant(b) for b in basis) or not self.with_constants else 1)
        if solver.size != expected:
            raise DependentSeed(f"level {ell}: seeds escape the level space")
        self.levels.append(_Level(ell, basis, K, n_old, qmap, solver, wp_imgs))

    def level(self, ell: int) -> _Level:
        if ell < 0:
            raise LevelExceeded("levels start at 0")
        self.build(ell)
        return self.levels[ell]

    def d(self, ell: int) -> int:
        lv = self.level(ell)
        return len(lv.K) - lv.n_old

    def _wp_rref(self, lv: _Level):
        if lv._wp_rref is None:
            ctx = self.ctx
            off = self._offset()
            width = (len(lv.K) + off) * ctx.M
            rows = []
            if self.with_constants:
                for beta in ctx.basis():
                    v = np.zeros(width, dtype=np.int64)
                    v[: ctx.M] = ctx.coeffs(beta)
                    rows.append(v)
            for i in range(lv.n_old):
                j = lv.qmap[i]
                for beta in ctx.basis():
                    v = np.zeros(width, dtype=np.int64)
                    v[(off + i) * ctx.M : (off + i + 1) * ctx.M] = ctx.coeffs(ctx.neg(beta))
                    v[(off + j) * ctx.M : (off + j + 1) * ctx.M] = ctx.coeffs(ctx.frob(beta, ctx.m))
                    rows.append(v)
            if rows:
                lv._wp_rref = rref(np.array(rows), ctx.p)
            else:
                lv._wp_rref = (np.zeros((0, width), dtype=np.int64), [])
        return lv._wp_rref

    def coordinates(self, b: CoverElem, ell: int) -> list[int]:
        lv = self.level(ell)
        c = lv.solver.coords(cover_coords(b))
        if c is None:
            raise LevelExceeded(f"element does not lie in level {ell}")
        return c

    def reduce(self, b: CoverElem, ell: int, chain: str = "rho") -> ASClass:
        ctx = self.ctx
        lv = self.level(ell)
        coeffs = self.coordinates(b, ell)
        R, pivots = self._wp_rref(lv)
        v = reduce_by_rref(fp_expand(ctx, coeffs), R, pivots, ctx.p)
        off = self._offset()
        k = fp_contract(ctx, v)
        if any(k[: off + lv.n_old]):
            raise AssertionError("canonical form not supported on the new basis")  # pragma: no cover
        new_coords = tuple(k[off + lv.n_old :])
        return ASClass(ell, new_coords, self.combine(ell, new_coords), chain)

    def combine(self, ell: int, coords: Sequence[int]) -> CoverElem:
        lv = self.level(ell)
        out = self.cover.zero()
        for c, f in zip(coords, lv.new):
            if c:
                out = cover_add(out, cover_scale(c, f))
        return out

    def wp(self, f: CoverElem) -> CoverElem:
        return cover_sub(cover_frob(f, self.ctx.m), f)


class FilteredKernel:
    """(KerD)_l for a cover, a multiplier and a pole support."""

    def __init__(self, cover: KummerCover, rho: RhoAction, support: Iterable[PunctureId] | None = None):
        self.cover = cover
        self.rho = rho
        self.e_rho = rho.e_rho(cover)
        self.j0 = kernel_D(cover, rho)
        ids = cover.base.puncture_ids()
        self.support = tuple(ids if support is None else [P for P in ids if P in set(support)])
        for P in support or ():
            cover.base.check_id(P)
        self.chain = BasisChain(cover, self._kernel_space, with_constants=(self.j0 == 0))
        self._full: BasisChain | None = None

    @property
    def ctx(self):
        return self.cover.ctx

    @property
    def q(self) -> int:
        return self.ctx.q

    def tame(self) -> tuple:
        return tuple(P for P in self.cover.base.puncture_ids() if P not in self.support)

    def _kernel_space(self, ell: int) -> list[CoverElem]:
        bound = level_bound(self.q, ell)
        return [self.cover.lift(a, self.j0) for a in rr_component(self.cover, bound, self.j0, self.support)]

    def _full_space(self, ell: int) -> list[CoverElem]:
        return rr_space_cover(self.cover, level_bound(self.q, ell), self.support)

    @property
    def full_chain(self) -> BasisChain:
        if self._full is None:
            self._full = BasisChain(self.cover, self._full_space, with_constants=True)
        return self._full

    def is_eigen(self, b: CoverElem) -> bool:
        return sigma_apply(b) == cover_scale(self.e_rho, b)


def kernel_level(fk: FilteredKernel, ell: int) -> list[CoverElem]:
    return list(fk.chain.level(ell).kernel_basis)


def build_basis_chain(fk: FilteredKernel, ell_max: int) -> FilteredKernel:
    fk.chain.build(ell_max)
    return fk


def chain_basis(fk: FilteredKernel, ell: int) -> list[CoverElem]:
    """K_l in chain order."""
    return list(fk.chain.level(ell).K)


def new_basis(fk: FilteredKernel, ell: int) -> list[CoverElem]:
    """K_l - K_(l-1)."""
    return list(fk.chain.level(ell).new)


def moduli_piece(fk: FilteredKernel, ell: int) -> ModuliPiece:
    d = fk.chain.d(ell)
    return ModuliPiece(ell, d, tuple(f"c{i + 1}" for i in range(d)))


def piece_dims(fk: FilteredKernel, ell_max: int) -> list[int]:
    return [fk.chain.d(ell) for ell in range(ell_max + 1)]


def wp_reduce(fk: FilteredKernel, b: CoverElem, ell: int) -> ASClass:
    if not fk.is_eigen(b):
        raise NotInKernel("sigma(b) != e_rho * b")
    return fk.chain.reduce(b, ell)


def wp(fk: FilteredKernel, f: CoverElem) -> CoverElem:
    return fk.chain.wp(f)


def iota_eval(fk: FilteredKernel, cls: ASClass) -> ASClass:
    """The same class, reduced against wp of the full level space plus constants."""
    return fk.full_chain.reduce(cls.rep, cls.level, chain="full")


def enumerate_classes(
    fk: FilteredKernel, ell: int, subfield_degree: int | None = None, budget: int = DEFAULT_BUDGET
) -> list[ASClass]:
    ctx = fk.ctx
    coeffs = ctx.subfield(ctx.M if subfield_degree is None else subfield_degree)
    d = fk.chain.d(ell)
    count = len(coeffs) ** d
    if count > budget:
        raise BudgetExceeded(f"{count} classes exceed the budget {budget}")
    return [ASClass(ell, tuple(t), fk.chain.combine(ell, t)) for t in itertools.product(coeffs, repeat=d)]


def enumerate_pairs(
    fk: FilteredKernel, ell: int, subfield_degree: int | None = None, budget: int = DEFAULT_BUDGET
) -> list[tuple[int, ASClass]]:
    """Classes paired with the value h in H = F_q recorded by a pair; one copy per h."""
    h_values = fk.ctx.fq_elements
    classes = enumerate_classes(fk, ell, subfield_degree, budget // max(len(h_values), 1))
    return [(h, c) for h in h_values for c in classes]


def universal_family(fk: FilteredKernel, ell: int) -> list[tuple[str, CoverElem]]:
    piece = moduli_piece(fk, ell)
    return list(zip(piece.labels, new_basis(fk, ell)))


def specialize(fk: FilteredKernel, ell: int, values: Sequence[int]) -> ASClass:
    family = universal_family(fk, ell)
    if len(values) != len(family):
        raise ValueError(f"expected {len(family)} coordinate values")
    b = fk.cover.lift(fk.cover.base.zero(), fk.j0)
    for c, (_, f) in zip(values, family):
        b = cover_add(b, cover_scale(c, f))
    return wp_reduce(fk, b, ell)


def floor_formula(fk: FilteredKernel, ell: int) -> int:
    """Sum over support punctures of floor((q^l + delta)/e) - floor((q^(l-1) + delta)/e)."""
    if ell < 1:
        raise ValueError("the floor formula is stated for levels >= 1")
    V = fk.cover
    hi, lo = fk.q**ell, fk.q ** (ell - 1)
    total = 0
    for P in fk.support:
        delta = fk.j0 * V.mprime(P)
        e = V.e(P)
        total += (hi + delta) // e - (lo + delta) // e
    return total


def dims_report(fk: FilteredKernel, levels: Iterable[int]) -> list[dict]:
    rows = []
    for ell in levels:
        lv = fk.chain.level(ell)
        d = fk.chain.d(ell)
        labels = [str(b) for b in lv.new]
        check = None if ell < 1 else (floor_formula(fk, ell) == d)
        rows.append(
            {
                "level": ell,
                "dim_kernel": len(lv.kernel_basis),
                "d_ell": d,
                "basis_labels": labels,
                "floor_formula_check": check,
            }
        )
    return rows
