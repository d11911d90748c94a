"""Finite groups by Cayley table: semidirect products, lifts, Gp classification.

Semidirect products use (p1, a)(p2, b) = (p1 * act(a)(p2), a b), and the
element (p, a) has index p + |P| * a.  For H = F_q and Z/n with multiplier e
(the action of -1), the generator 1 acts by e^-1, hence

    (h, 1)^n = (sum_{i<n} e^-i * h, 0).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd, prod
from typing import Mapping, Sequence

import numpy as np

from .errors import BudgetExceeded, IndexMismatch, NotAGroup, NotCoprime
from .gf import FieldCtx


class FiniteGroup:
    def __init__(self, table, labels: Sequence[str] | None = None, check: bool = True):
        T = np.asarray(table, dtype=np.int64)
        if T.ndim != 2 or T.shape[0] != T.shape[1]:
            raise NotAGroup("Cayley table must be square")
        self.table = T
        self.order = T.shape[0]
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(self.order))
        if len(self.labels) != self.order:
            raise NotAGroup("label count differs from order")
        if check:
            self._verify()
        self.identity = self._find_identity()
        self._inv = np.argmax(self.table == self.identity, axis=1)

    def _find_identity(self) -> int:
        ar = np.arange(self.order)
        for e in range(self.order):
            if (self.table[e] == ar).all() and (self.table[:, e] == ar).all():
                return e
        raise NotAGroup("no identity element")

    def _verify(self) -> None:
        T, N = self.table, self.order
        if T.min() < 0 or T.max() >= N:
            raise NotAGroup("table entries out of range")
        ar = np.arange(N)
        if not all((np.sort(T[a]) == ar).all() and (np.sort(T[:, a]) == ar).all() for a in range(N)):
            raise NotAGroup("table is not a Latin square")
        for a in range(N):
            # (a b) c == a (b c) for all b, c
            if not (T[T[a]] == T[a][T]).all():
                raise NotAGroup("multiplication is not associative")
        self._find_identity()

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self._inv[a])

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inv(g), -k
        result, base = self.identity, g
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def order_of(self, g: int) -> int:
        x, k = g, 1
        while x != self.identity:
            x = self.mul(x, g)
            k += 1
        return k

    @cached_property
    def orders(self) -> np.ndarray:
        return np.array([self.order_of(g) for g in range(self.order)])

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def generated(self, gens: Sequence[int]) -> frozenset[int]:
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A small generating set chosen greedily in index order (largest orders first)."""
        gens: list[int] = []
        H = frozenset({self.identity})
        cand = sorted(range(self.order), key=lambda g: (-self.order_of(g), g))
        while len(H) < self.order:
            g = next(g for g in cand if g not in H)
            gens.append(g)
            H = self.generated(gens)
        return tuple(gens)

    def is_normal(self, N: Sequence[int]) -> bool:
        Ns = set(N)
        return all(self.conj(g, x) in Ns for g in range(self.order) for x in Ns)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"


# --- constructions -------------------------------------------------------------

def cyclic(n: int) -> FiniteGroup:
    ar = np.arange(n)
    return FiniteGroup((ar[:, None] + ar[None, :]) % n, [str(i) for i in range(n)])


def elem_abelian(p: int, m: int) -> FiniteGroup:
    N = p**m
    digits = np.array([[(x // p**k) % p for k in range(m)] for x in range(N)])
    weights = p ** np.arange(m)
    T = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
    return FiniteGroup(T, [str(i) for i in range(N)])


def additive_group(ctx: FieldCtx) -> FiniteGroup:
    """(F_{p^M}, +) with element i the field element of code i."""
    N = ctx.order
    T = np.array([[ctx.add(a, b) for b in range(N)] for a in range(N)])
    return FiniteGroup(T, [ctx.to_str(a) for a in range(N)])


_Q8_LABELS = ("1", "i", "j", "k", "-1", "-i", "-j", "-k")


def quaternion8() -> FiniteGroup:
    # unit products among 1, i, j, k as (sign, unit)
    unit = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    T = np.zeros((8, 8), dtype=np.int64)
    for a in range(8):
        for b in range(8):
            s, u = unit[(a % 4, b % 4)]
            if (a >= 4) != (b >= 4):
                s = -s
            T[a, b] = u + (4 if s < 0 else 0)
    return FiniteGroup(T, _Q8_LABELS)


def symmetric(n: int) -> FiniteGroup:
    perms = list(itertools.permutations(range(n)))
    idx = {p: i for i, p in enumerate(perms)}
    # (s t)(x) = s(t(x))
    T = [[idx[tuple(s[t[x]] for x in range(n))] for t in perms] for s in perms]
    return FiniteGroup(T, ["".join(map(str, p)) for p in perms])


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    trivial = np.tile(np.arange(G.order), (H.order, 1))
    return semidirect(G, H, trivial).group


@dataclass
class SemidirectProduct:
    normal: FiniteGroup
    acting: FiniteGroup
    action: np.ndarray  # action[a] is the permutation of normal by element a
    group: FiniteGroup = field(repr=False)

    def pair(self, p: int, a: int) -> int:
        return p + self.normal.order * a

    def split(self, g: int) -> tuple[int, int]:
        return g % self.normal.order, g // self.normal.order

    def quotient(self, g: int) -> int:
        return g // self.normal.order

    def normal_elements(self) -> list[int]:
        return [self.pair(p, self.acting.identity) for p in range(self.normal.order)]


def semidirect(P: FiniteGroup, Q: FiniteGroup, action, check: bool = True) -> SemidirectProduct:
    act = np.asarray(action, dtype=np.int64)
    if act.shape != (Q.order, P.order):
        raise NotAGroup("action must give one permutation of P per element of Q")
    if check:
        if not is_hom_into_aut(P, Q, act):
            raise NotAGroup("action is not a homomorphism into Aut(P)")
    nP, nQ = P.order, Q.order
    p1 = np.repeat(np.arange(nP)[None, :], nQ, axis=0).reshape(-1)  # index g = p + nP*a
    a1 = np.repeat(np.arange(nQ), nP)
    # p1 * act(a1)(p2)
    moved = act[a1][:, p1]  # [g1, g2] -> act(a1)(p2)
    left = P.table[p1[:, None], moved]
    right = Q.table[a1[:, None], a1[None, :]]
    T = left + nP * right
    labels = [f"({P.labels[p]},{Q.labels[a]})" for a in range(nQ) for p in range(nP)]
    return SemidirectProduct(P, Q, act, FiniteGroup(T, labels, check=check))


def is_automorphism(P: FiniteGroup, perm: np.ndarray) -> bool:
    perm = np.asarray(perm)
    if sorted(perm.tolist()) != list(range(P.order)):
        return False
    return bool((perm[P.table] == P.table[perm[:, None], perm[None, :]]).all())


def is_hom_into_aut(P: FiniteGroup, Q: FiniteGroup, act: np.ndarray) -> bool:
    if not all(is_automorphism(P, act[a]) for a in range(Q.order)):
        return False
    # act(ab) = act(a) o act(b)
    for a in range(Q.order):
        for b in range(Q.order):
            if not (act[Q.table[a, b]] == act[a][act[b]]).all():
                return False
    return True


def extend_hom(G: FiniteGroup, H: FiniteGroup, gen_images: Mapping[int, int]) -> np.ndarray | None:
    """The homomorphism G -> H with the given generator images, or None."""
    img = np.full(G.order, -1, dtype=np.int64)
    img[G.identity] = H.identity
    queue = deque([G.identity])
    gens = list(gen_images.items())
    while queue:
        x = queue.popleft()
        for g, hg in gens:
            y = G.mul(x, g)
            v = H.mul(int(img[x]), hg)
            if img[y] < 0:
                img[y] = v
                queue.append(y)
            elif img[y] != v:
                return None
    if (img < 0).any():
        return None
    if not (img[G.table] == H.table[img[:, None], img[None, :]]).all():
        return None
    return img


def automorphisms(P: FiniteGroup, budget: int = 10**5) -> list[np.ndarray]:
    """All automorphisms of P as permutation arrays, in lexicographic order."""
    gens = P.generators
    cands = [[h for h in range(P.order) if P.order_of(h) == P.order_of(g)] for g in gens]
    if prod(len(c) for c in cands) > budget:
        raise BudgetExceeded("automorphism search exceeds the budget")
    out = []
    for imgs in itertools.product(*cands):
        f = extend_hom(P, P, dict(zip(gens, imgs)))
        if f is not None and len(set(f.tolist())) == P.order:
            out.append(f)
    out.sort(key=lambda a: a.tolist())
    return out


def aut_group(P: FiniteGroup, budget: int = 10**5) -> tuple[FiniteGroup, list[np.ndarray]]:
    auts = automorphisms(P, budget)
    idx = {tuple(a.tolist()): i for i, a in enumerate(auts)}
    T = [[idx[tuple(s[t].tolist())] for t in auts] for s in auts]
    return FiniteGroup(T, [f"aut{i}" for i in range(len(auts))], check=False), auts


def homomorphisms(G: FiniteGroup, H: FiniteGroup, budget: int = 10**6) -> list[np.ndarray]:
    gens = G.generators
    cands = [[h for h in range(H.order) if G.order_of(g) % H.order_of(h) == 0] for g in gens]
    if prod(len(c) for c in cands) > budget:
        raise BudgetExceeded("homomorphism search exceeds the budget")
    out = []
    for imgs in itertools.product(*cands):
        f = extend_hom(G, H, dict(zip(gens, imgs)))
        if f is not None:
            out.append(f)
    return out


def actions(P: FiniteGroup, Q: FiniteGroup, budget: int = 10**5) -> list[np.ndarray]:
    """Hom(Q, Aut(P)) as arrays act[a] = permutation of P."""
    A, auts = aut_group(P, budget)
    stack = np.array(auts)
    return [stack[h] for h in homomorphisms(Q, A, budget)]


# --- lifting in H x| Z/n ---------------------------------------------------------

def fq_cyclic_semidirect(ctx: FieldCtx, n: int, e: int) -> SemidirectProduct:
    """F_q x| Z/n where -1 acts as multiplication by e (so 1 acts by e^-1)."""
    if ctx.pow(e, n) != 1:
        raise ValueError("the multiplier must satisfy e^n = 1")
    H = additive_group(ctx)
    einv = ctx.inv(e)
    act = np.array([[ctx.mul(ctx.pow(einv, a), h) for h in range(ctx.order)] for a in range(n)])
    return semidirect(H, cyclic(n), act, check=False)


def geometric_sum_closed_form(ctx: FieldCtx, e: int, n: int, h: int) -> int:
    einv = ctx.inv(e)
    return ctx.mul(ctx.sum(ctx.pow(einv, i) for i in range(n)), h)


def solve_lift(ctx: FieldCtx, e: int, n: int, v: int, W: SemidirectProduct | None = None) -> set[int]:
    """{h in H : (h, 1)^n = (v, 0)} by table powers; H = F_q with multiplier e."""
    if n % ctx.p == 0:
        raise NotCoprime(f"p={ctx.p} divides n={n}")
    W = W or fq_cyclic_semidirect(ctx, n, e)
    G = W.group
    target = W.pair(v, 0)
    return {h for h in range(ctx.order) if G.power(W.pair(h, 1), n) == target}


def lift_closed_form(ctx: FieldCtx, e: int, n: int, v: int) -> set[int]:
    """The predicted solution set: {n^-1 v} if e = 1, else H or nothing."""
    if e == 1:
        n_inv = pow(n, -1, ctx.p)
        return {ctx.mul(ctx.from_int(n_inv), v)}
    return set(range(ctx.order)) if v == 0 else set()


# --- Gp conditions ----------------------------------------------------------------

def check_star_conditions(W: SemidirectProduct, gammas: Sequence[int], rho_prime: np.ndarray) -> bool:
    """For each element a of the acting group: gamma_a lies over a, has the order
    of a, and conjugates (p, 1) to (rho_prime(a)(p), 1)."""
    P, Q, G = W.normal, W.acting, W.group
    if len(gammas) != Q.order:
        raise IndexMismatch(f"need {Q.order} elements, got {len(gammas)}")
    for a, g in enumerate(gammas):
        if W.quotient(g) != a:
            return False
        if G.order_of(g) != Q.order_of(a):
            return False
        for p in range(P.order):
            if G.conj(g, W.pair(p, Q.identity)) != W.pair(int(rho_prime[a][p]), Q.identity):
                return False
    return True


def gp_witness(W: SemidirectProduct, rho_prime: np.ndarray) -> list[int] | None:
    """Elements (p_a, a) satisfying the order and conjugation clauses, or None."""
    P, Q, G = W.normal, W.acting, W.group
    gammas = []
    for a in range(Q.order):
        found = None
        for p in range(P.order):
            g = W.pair(p, a)
            if G.order_of(g) != Q.order_of(a):
                continue
            if all(G.conj(g, W.pair(x, Q.identity)) == W.pair(int(rho_prime[a][x]), Q.identity) for x in range(P.order)):
                found = g
                break
        if found is None:
            return None
        gammas.append(found)
    return gammas


def equivalent_extensions(W1: SemidirectProduct, W2: SemidirectProduct) -> bool:
    """An isomorphism W1 -> W2 restricting to the identity on P and inducing it on Q."""
    P, Q = W1.normal, W1.acting
    gens_Q = Q.generators
    G1, G2 = W1.group, W2.group
    fixed = {W1.pair(g, Q.identity): W2.pair(g, Q.identity) for g in P.generators}
    for cs in itertools.product(range(P.order), repeat=len(gens_Q)):
        imgs = dict(fixed)
        for a, c in zip(gens_Q, cs):
            imgs[W1.pair(P.identity, a)] = W2.pair(c, a)
        f = extend_hom(G1, G2, imgs)
        if f is not None and len(set(f.tolist())) == G1.order:
            return True
    return False


@dataclass
class GpResult:
    passing: list[int]  # indices into `actions`
    classes: list[list[int]]
    actions: list[np.ndarray]
    rho_prime_index: int
    witnesses: dict = field(default_factory=dict)

    @property
    def rho_prime_class(self) -> int:
        return next(k for k, cl in enumerate(self.classes) if self.rho_prime_index in cl)


def enumerate_gp_rho(
    P: FiniteGroup, Pp: FiniteGroup, rho_prime: np.ndarray, budget: int = 10**5
) -> GpResult:
    if P.order > 64 or Pp.order > 12:
        raise BudgetExceeded("Gp enumeration is limited to |P| <= 64 and |P'| <= 12")
    acts = actions(P, Pp, budget)
    rho_prime = np.asarray(rho_prime)
    try:
        rp_index = next(i for i, a in enumerate(acts) if (a == rho_prime).all())
    except StopIteration:
        raise ValueError("rho' is not a homomorphism into Aut(P)") from None
    passing, witnesses, prods = [], {}, {}
    for i, act in enumerate(acts):
        W = semidirect(P, Pp, act, check=False)
        w = gp_witness(W, rho_prime)
        if w is not None:
            passing.append(i)
            witnesses[i] = w
            prods[i] = W
    classes: list[list[int]] = []
    for i in passing:
        for cl in classes:
            if equivalent_extensions(prods[cl[0]], prods[i]):
                cl.append(i)
                break
        else:
            classes.append([i])
    return GpResult(passing, classes, acts, rp_index, witnesses)


# --- complements -------------------------------------------------------------------

def find_complement(G: FiniteGroup, N: Sequence[int], budget: int = 10**5) -> frozenset[int]:
    Ns = frozenset(N)
    if G.order % len(Ns):
        raise NotAGroup("N is not a subgroup")
    k = G.order // len(Ns)
    if gcd(len(Ns), k) != 1:
        raise ValueError("|N| and |G/N| must be coprime")
    cand = [g for g in range(G.order) if k % G.order_of(g) == 0 and (g not in Ns or g == G.identity)]
    tried = 0
    for r in range(0, 4):
        for gens in itertools.combinations(cand, r):
            tried += 1
            if tried > budget:
                raise BudgetExceeded("complement search exceeds the budget")
            H = G.generated(gens)
            if len(H) == k and not (H & Ns) - {G.identity}:
                return H
    raise BudgetExceeded("no complement found with at most three generators")


# --- parsing -------------------------------------------------------------------------

def parse_group(desc) -> FiniteGroup:
    if isinstance(desc, FiniteGroup):
        return desc
    if isinstance(desc, Mapping):
        if "table" in desc:
            return FiniteGroup(desc["table"], desc.get("labels"))
        if "semidirect" in desc:
            sd = desc["semidirect"]
            P, Q = parse_group(sd["normal"]), parse_group(sd["acting"])
            return semidirect(P, Q, parse_action(P, Q, sd["action"])).group
        raise ValueError("group mapping needs 'table' or 'semidirect'")
    kind, _, arg = str(desc).partition(":")
    if kind == "cyclic":
        return cyclic(int(arg))
    if kind == "elem_abelian":
        p, m = arg.split("^")
        return elem_abelian(int(p), int(m))
    if kind == "quaternion" and arg == "8":
        return quaternion8()
    if kind == "symmetric":
        return symmetric(int(arg))
    raise ValueError(f"unknown group {desc!r}")


def parse_action(P: FiniteGroup, Q: FiniteGroup, desc) -> np.ndarray:
    """Action from 'trivial' or {"generator_images": [{P-gen label: image label}, ...]}."""
    if desc == "trivial":
        return np.tile(np.arange(P.order), (Q.order, 1))
    imgs = desc["generator_images"]
    if len(imgs) != len(Q.generators):
        raise IndexMismatch(f"need images for {len(Q.generators)} generators of the acting group")
    A, auts = aut_group(P)
    gen_imgs = {}
    for qg, mapping in zip(Q.generators, imgs):
        f = extend_hom(P, P, {P.index(k): P.index(v) for k, v in mapping.items()})
        if f is None or len(set(f.tolist())) != P.order:
            raise NotAGroup(f"images {mapping} do not define an automorphism")
        gen_imgs[qg] = next(i for i, a in enumerate(auts) if (a == f).all())
    h = extend_hom(Q, A, gen_imgs)
    if h is None:
        raise NotAGroup("generator images do not define an action")
    return np.array(auts)[h]
