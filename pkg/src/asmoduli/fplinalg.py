"""Linear algebra over F_p for spaces with an F_{p^M}-coordinate presentation.

A k-vector with entries in F_{p^M} is expanded into M F_p-coordinates per
entry (power-basis order), so additive maps that are only F_p-linear, such
as Frobenius twists, become ordinary matrices.  Pivots run in label order,
then coordinate order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch
from .gf import FieldCtx


@dataclass(frozen=True)
class FpSpace:
    labels: tuple[Hashable, ...]
    M: int

    @property
    def ambient_dim(self) -> int:
        return self.M * len(self.labels)

    def index(self, label: Hashable) -> int:
        return self.labels.index(label)


def fp_expand(ctx: FieldCtx, v: Sequence[int]) -> np.ndarray:
    """F_{p^M}-vector -> F_p-vector of length M * len(v)."""
    out = np.zeros(ctx.M * len(v), dtype=np.int64)
    for k, a in enumerate(v):
        out[k * ctx.M : (k + 1) * ctx.M] = ctx.coeffs(a)
    return out


def fp_contract(ctx: FieldCtx, w: Sequence[int], length: int | None = None) -> list[int]:
    w = np.asarray(w, dtype=np.int64)
    if w.ndim != 1 or len(w) % ctx.M:
        raise DimensionMismatch(f"length {len(w)} is not a multiple of M={ctx.M}")
    if length is not None and len(w) != length * ctx.M:
        raise DimensionMismatch(f"expected {length * ctx.M} coordinates, got {len(w)}")
    return [ctx.from_coeffs([int(c) for c in w[k : k + ctx.M]]) for k in range(0, len(w), ctx.M)]


def rref(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p; returns (nonzero rows, pivot columns)."""
    R = np.array(A, dtype=np.int64) % p
    if R.ndim != 2:
        raise DimensionMismatch("rref expects a matrix")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        inv = pow(int(R[r, c]), p - 2, p) if p > 2 else 1
        R[r] = (R[r] * inv) % p
        col = R[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if len(nzr):
            R[nzr] = (R[nzr] - np.outer(col[nzr], R[r])) % p
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank_of(A: np.ndarray, p: int) -> int:
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Basis of {x : A x = 0} as rows, one per free column."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = rref(A, p)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = (-R[r, f]) % p
    return basis


@dataclass(frozen=True)
class FpMap:
    """An F_p-linear map; columns are images of source coordinates."""

    matrix: np.ndarray
    source: FpSpace
    target: FpSpace
    p: int

    def __post_init__(self):
        if self.matrix.shape != (self.target.ambient_dim, self.source.ambient_dim):
            raise DimensionMismatch(
                f"matrix shape {self.matrix.shape} vs ({self.target.ambient_dim}, {self.source.ambient_dim})"
            )

    def apply(self, v: Sequence[int]) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64)
        if v.shape != (self.source.ambient_dim,):
            raise DimensionMismatch("vector does not match source dimension")
        return (self.matrix @ v) % self.p

    def to_bytes(self) -> bytes:
        header = np.array(self.matrix.shape, dtype=">u4").tobytes()
        return header + np.asarray(self.matrix, dtype=np.uint8).tobytes()


def kernel(f: FpMap) -> np.ndarray:
    return nullspace(f.matrix, f.p)


def image(f: FpMap) -> np.ndarray:
    if f.matrix.size == 0:
        return np.zeros((0, f.target.ambient_dim), dtype=np.int64)
    return rref(f.matrix.T, f.p)[0]


def rank(f: FpMap) -> int:
    return rank_of(f.matrix, f.p)


def canonical_rep(v: Sequence[int], subspace: Sequence[Sequence[int]] | np.ndarray, p: int) -> np.ndarray:
    """Representative of v + span(subspace) vanishing on the subspace's pivots."""
    v = np.asarray(v, dtype=np.int64) % p
    S = np.asarray(subspace, dtype=np.int64)
    if S.size == 0:
        return v
    if S.ndim != 2 or S.shape[1] != v.shape[0]:
        raise DimensionMismatch("subspace vectors must live in the ambient space of v")
    R, pivots = rref(S, p)
    return reduce_by_rref(v, R, pivots, p)


def reduce_by_rref(v: np.ndarray, R: np.ndarray, pivots: Sequence[int], p: int) -> np.ndarray:
    v = np.array(v, dtype=np.int64) % p
    for r, c in enumerate(pivots):
        if v[c]:
            v = (v - v[c] * R[r]) % p
    return v


def span_enumerate(basis: np.ndarray, p: int) -> Iterable[np.ndarray]:
    """All p^d vectors of a span, in lexicographic coefficient order."""
    basis = np.asarray(basis, dtype=np.int64)
    d = basis.shape[0]
    for idx in np.ndindex(*([p] * d)) if d else [()]:
        yield (np.asarray(idx, dtype=np.int64) @ basis) % p if d else np.zeros(basis.shape[1], dtype=np.int64)


# --- k-linear echelon forms on keyed coordinate dictionaries ------------------

def k_rref_coords(ctx: FieldCtx, vecs: Iterable[Mapping[Hashable, int]]) -> list[tuple[Hashable, dict]]:
    """Reduced echelon basis over F_{p^M} of keyed sparse vectors.

    Pivot = smallest key of each row.  Returns [(pivot, row)] sorted by pivot.
    """
    rows: dict = {}
    for v in vecs:
        w = _reduce_sparse(ctx, dict(v), rows)
        if not w:
            continue
        piv = min(w)
        inv = ctx.inv(w[piv])
        w = {k: ctx.mul(inv, c) for k, c in w.items()}
        for k2, r2 in list(rows.items()):
            c = r2.get(piv, 0)
            if c:
                rows[k2] = _axpy(ctx, r2, w, ctx.neg(c))
        rows[piv] = w
    return sorted(rows.items())


def _axpy(ctx: FieldCtx, y: dict, x: Mapping, a: int) -> dict:
    out = dict(y)
    for k, c in x.items():
        v = ctx.add(out.get(k, 0), ctx.mul(a, c))
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _reduce_sparse(ctx: FieldCtx, w: dict, rows: Mapping[Hashable, dict]) -> dict:
    for piv in sorted(rows):
        c = w.get(piv, 0)
        if c:
            w = _axpy(ctx, w, rows[piv], ctx.neg(c))
    return w


def k_rref(U, elems):
    """Reduced echelon basis of the k-span of ring elements (pfrac or kummer)."""
    from .pfrac import RingElem

    if elems and not isinstance(elems[0], RingElem):
        raise TypeError("k_rref expects base ring elements")
    return [U.from_coords(row) for _, row in k_rref_coords(U.ctx, [a.coords() for a in elems])]


class KSolver:
    """Incremental k-linear span of keyed sparse vectors with coordinates.

    Vectors are added in order; `coords` expresses a vector in terms of the
    accepted ones (by acceptance index).
    """

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.rows: dict = {}  # pivot -> (row, combination over accepted indices)
        self.size = 0

    def _reduce(self, w: dict) -> tuple[dict, dict]:
        ctx = self.ctx
        comb: dict = {}
        for piv in sorted(self.rows):
            c = w.get(piv, 0)
            if c:
                row, rc = self.rows[piv]
                w = _axpy(ctx, w, row, ctx.neg(c))
                comb = _axpy(ctx, comb, rc, ctx.neg(c))
        return w, comb

    def is_independent(self, v: Mapping) -> bool:
        return bool(self._reduce(dict(v))[0])

    def add(self, v: Mapping) -> bool:
        """Accept v if it is independent of the span; returns whether it was."""
        ctx = self.ctx
        w, comb = self._reduce(dict(v))
        if not w:
            return False
        idx = self.size
        self.size += 1
        comb = _axpy(ctx, comb, {idx: 1}, 1)
        piv = min(w)
        inv = ctx.inv(w[piv])
        w = {k: ctx.mul(inv, c) for k, c in w.items()}
        comb = {k: ctx.mul(inv, c) for k, c in comb.items()}
        for k2, (r2, c2) in list(self.rows.items()):
            c = r2.get(piv, 0)
            if c:
                self.rows[k2] = (_axpy(ctx, r2, w, ctx.neg(c)), _axpy(ctx, c2, comb, ctx.neg(c)))
        self.rows[piv] = (w, comb)
        return True

    def coords(self, v: Mapping) -> list[int] | None:
        """Coefficients of v over the accepted vectors, or None if outside the span."""
        w, comb = self._reduce(dict(v))
        if w:
            return None
        ctx = self.ctx
        return [ctx.neg(comb.get(i, 0)) for i in range(self.size)]
