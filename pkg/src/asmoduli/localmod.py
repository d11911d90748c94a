"""Covers of a punctured formal disc, k((s)) over k((t)) with s^n_t = t.

Local elements are principal parts {J: c} meaning sum c * s^-J.  The
generator acts by s -> zeta_t * s, so s^-J is an eigenvector with eigenvalue
zeta_t^-J; the local kernel at level l is spanned by the s^-J with
zeta_t^-J = e and J <= q^l.  Classes are taken modulo wp of the previous
level; the canonical representative pushes c * s^-(Jq) down to
c^(1/q) * s^-J, leaving support on indices J with q not dividing J.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import BudgetExceeded, LevelExceeded, NotCoprime
from .gf import FieldCtx, root_of_unity


@dataclass(frozen=True)
class LocalCover:
    ctx: FieldCtx
    n_t: int
    e_loc: int
    zeta_t: int

    def __post_init__(self):
        if self.n_t % self.ctx.p == 0:
            raise NotCoprime(f"gcd(n_t, p) != 1 for n_t={self.n_t}")
        if self.ctx.pow(self.e_loc, self.n_t) != 1:
            raise ValueError("local multiplier must satisfy e^n_t = 1")

    @property
    def q(self) -> int:
        return self.ctx.q

    def in_kernel(self, J: int) -> bool:
        return self.ctx.pow(self.zeta_t, -J) == self.e_loc

    def residue(self) -> int:
        """The smallest J >= 1 in the kernel (the i_0 of the floor formula)."""
        for J in range(1, self.n_t + 1):
            if self.in_kernel(J):
                return J
        raise AssertionError("local multiplier is not a power of zeta_t")  # pragma: no cover


def local_cover(ctx: FieldCtx, n_t: int, e_loc: int, zeta_t: int | None = None) -> LocalCover:
    return LocalCover(ctx, n_t, e_loc, root_of_unity(ctx, n_t) if zeta_t is None else zeta_t)


def local_kernel_level(lc: LocalCover, ell: int) -> list[int]:
    """Exponents J of the basis s^-J of the local kernel at level l."""
    if ell < 0:
        raise LevelExceeded("levels start at 0")
    return [J for J in range(1, lc.q**ell + 1) if lc.in_kernel(J)]


def class_support(lc: LocalCover, ell: int) -> list[int]:
    """Indices carrying canonical class coordinates at level l."""
    return [J for J in local_kernel_level(lc, ell) if J % lc.q]


def local_dims(lc: LocalCover, ell_max: int) -> list[int]:
    dims = [len(local_kernel_level(lc, ell)) for ell in range(ell_max + 1)]
    return [dims[0]] + [dims[ell] - dims[ell - 1] for ell in range(1, ell_max + 1)]


def local_floor_formula(lc: LocalCover, ell: int) -> int:
    i0 = lc.residue()
    hi, lo = lc.q**ell, lc.q ** (ell - 1)
    return (hi - i0) // lc.n_t - (lo - i0) // lc.n_t


def local_wp(lc: LocalCover, v: Mapping[int, int]) -> dict[int, int]:
    """wp(c s^-J) = c^q s^-(Jq) - c s^-J, extended additively."""
    ctx = lc.ctx
    out: dict[int, int] = {}
    for J, c in v.items():
        for K, d in ((J * lc.q, ctx.frob(c, ctx.m)), (J, ctx.neg(c))):
            w = ctx.add(out.get(K, 0), d)
            if w:
                out[K] = w
            else:
                out.pop(K, None)
    return out


def local_reduce(lc: LocalCover, v: Mapping[int, int], ell: int) -> dict[int, int]:
    """Canonical representative of a principal part modulo wp of level l-1."""
    ctx = lc.ctx
    q = lc.q
    if any(J > q**ell for J, c in v.items() if J >= 1 and c):
        raise LevelExceeded(f"pole order exceeds q^{ell}")
    work = {J: c for J, c in v.items() if J >= 1 and c}
    for J in range(max(work, default=0), 0, -1):
        c = work.get(J, 0)
        if c and J % q == 0:
            del work[J]
            K = J // q
            w = ctx.add(work.get(K, 0), ctx.frob(c, -ctx.m))
            if w:
                work[K] = w
            else:
                work.pop(K, None)
    return dict(sorted(work.items()))


def local_coords(lc: LocalCover, v: Mapping[int, int], ell: int) -> tuple[int, ...]:
    red = local_reduce(lc, v, ell)
    supp = class_support(lc, ell)
    extra = set(red) - set(supp)
    if extra:
        raise ValueError(f"principal part has terms outside the local kernel: {sorted(extra)}")
    return tuple(red.get(J, 0) for J in supp)


def enumerate_local_classes(
    lc: LocalCover, ell: int, subfield_degree: int | None = None, budget: int = 10**6
) -> list[dict[int, int]]:
    ctx = lc.ctx
    coeffs = ctx.subfield(ctx.M if subfield_degree is None else subfield_degree)
    supp = class_support(lc, ell)
    if len(coeffs) ** len(supp) > budget:
        raise BudgetExceeded("local class count exceeds the budget")
    return [
        {J: c for J, c in zip(supp, t) if c} for t in itertools.product(coeffs, repeat=len(supp))
    ]


def local_global_compare(ctx: FieldCtx, n_t: int, s: int, levels: Sequence[int], subfield_degree: int | None = None,
                         class_level: int = 1, budget: int = 10**6) -> dict:
    """Compare the local moduli with the global cover y^n_t = x of P^1 - {0}.

    The global side has punctures 0 and infinity with poles allowed only
    above 0; infinity is the tame point.  Dimensions are compared per level
    and the class sets at `class_level` are matched through restriction.
    """
    from .kummer import KummerCover
    from .moduli import FilteredKernel, RhoAction, enumerate_classes, piece_dims
    from .pfrac import PuncturedLine
    from .restrict import restrict_class

    U = PuncturedLine(ctx, (0,))
    V = KummerCover(U, n_t, [1])
    fk = FilteredKernel(V, RhoAction(s), support=[0])
    e_loc = ctx.pow(fk.e_rho, V.m(0))
    lc = LocalCover(ctx, V.e(0), e_loc, ctx.pow(V.zeta, V.g(0)))
    top = max(levels)
    gdims = piece_dims(fk, top)
    ldims = local_dims(lc, top)
    rows = [
        {"level": ell, "local_dim": ldims[ell], "global_dim": gdims[ell], "equal": ldims[ell] == gdims[ell]}
        for ell in levels
    ]
    gcls = enumerate_classes(fk, class_level, subfield_degree, budget)
    images = [restrict_class(fk, c, class_level)[(0, 0)] for c in gcls]
    local_set = {tuple(sorted(v.items())) for v in enumerate_local_classes(lc, class_level, subfield_degree, budget)}
    image_set = {tuple(sorted(local_reduce(lc, v, class_level).items())) for v in images}
    h_count = len(ctx.fq_elements)
    return {
        "rows": rows,
        "class_level": class_level,
        "global_classes": len(gcls),
        "local_classes": len(local_set),
        "image_classes": len(image_set),
        "bijective": len(image_set) == len(gcls) == len(local_set) and image_set == local_set,
        "global_pairs": h_count * len(gcls),
        "local_pairs": h_count * len(local_set),
    }
