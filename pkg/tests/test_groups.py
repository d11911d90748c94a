import itertools
from collections import Counter

import numpy as np
import pytest

from asmoduli import groups as grp
from asmoduli.errors import BudgetExceeded, IndexMismatch, NotAGroup, NotCoprime
from asmoduli.gf import field_create


def order_stats(G):
    return dict(sorted(Counter(G.orders.tolist()).items()))


def test_small_groups_axioms_and_orders():
    assert order_stats(grp.cyclic(6)) == {1: 1, 2: 1, 3: 2, 6: 2}
    assert order_stats(grp.elem_abelian(2, 2)) == {1: 1, 2: 3}
    Q8 = grp.quaternion8()
    assert order_stats(Q8) == {1: 1, 2: 1, 4: 6}
    assert not Q8.is_abelian()
    assert Q8.mul(Q8.index("i"), Q8.index("j")) == Q8.index("k")
    assert order_stats(grp.symmetric(3)) == {1: 1, 2: 3, 3: 2}


def test_bad_tables_rejected():
    with pytest.raises(NotAGroup):
        grp.FiniteGroup([[0, 1], [0, 1]])
    # a Latin square that is not associative
    with pytest.raises(NotAGroup):
        grp.FiniteGroup([[0, 1, 2], [1, 0, 2], [2, 2, 0]])
    # no row or column acts as the identity
    with pytest.raises(NotAGroup):
        grp.FiniteGroup([[1, 2, 0, 3], [2, 0, 3, 1], [0, 3, 1, 2], [3, 1, 2, 0]])


@pytest.mark.parametrize(
    "G,count",
    [(grp.cyclic(5), 4), (grp.cyclic(8), 4), (grp.elem_abelian(2, 2), 6), (grp.elem_abelian(2, 3), 168),
     (grp.quaternion8(), 24), (grp.symmetric(3), 6)],
)
def test_automorphism_counts(G, count):
    auts = grp.automorphisms(G)
    assert len(auts) == count
    assert all(grp.is_automorphism(G, a) for a in auts)


def test_action_counts():
    C3 = grp.cyclic(3)
    # order-dividing-3 elements of S_3 and S_4
    assert len(grp.actions(grp.elem_abelian(2, 2), C3)) == 3
    assert len(grp.actions(grp.quaternion8(), C3)) == 9


def test_semidirect_products_identify():
    V4, Q8, C3 = grp.elem_abelian(2, 2), grp.quaternion8(), grp.cyclic(3)
    act = grp.parse_action(V4, C3, {"generator_images": [{"1": "2", "2": "3"}]})
    A4 = grp.semidirect(V4, C3, act).group
    assert order_stats(A4) == {1: 1, 2: 3, 3: 8}
    act = grp.parse_action(Q8, C3, {"generator_images": [{"i": "j", "j": "k"}]})
    SL23 = grp.semidirect(Q8, C3, act).group
    assert order_stats(SL23) == {1: 1, 2: 1, 3: 8, 4: 6, 6: 8}
    D = grp.direct_product(grp.cyclic(2), grp.cyclic(3))
    assert D.is_abelian() and order_stats(D) == order_stats(grp.cyclic(6))


def test_parse_errors():
    V4, C3 = grp.elem_abelian(2, 2), grp.cyclic(3)
    with pytest.raises(ValueError):
        grp.parse_group("dihedral:8")
    with pytest.raises(NotAGroup):
        grp.parse_action(V4, C3, {"generator_images": [{"1": "1", "2": "1"}]})
    with pytest.raises(IndexMismatch):
        grp.parse_action(V4, C3, {"generator_images": []})
    with pytest.raises(NotAGroup):
        # an involution cannot be the image of a generator of order 3
        grp.parse_action(V4, C3, {"generator_images": [{"1": "2", "2": "1"}]})


def brute_lift(ctx, e, n, v):
    """Solve (h,1)^n = (v,0) by unrolling the product rule by hand."""
    einv = ctx.inv(e)
    out = set()
    for h in range(ctx.order):
        acc, scale = 0, 1
        for _ in range(n):
            acc = ctx.add(acc, ctx.mul(scale, h))
            scale = ctx.mul(scale, einv)
        if acc == v:
            out.add(h)
    return out


@pytest.mark.parametrize("p,M,n", [(2, 2, 3), (2, 4, 5), (2, 4, 15), (5, 1, 4), (7, 1, 3), (3, 2, 4)])
def test_solve_lift_against_hand_rolled_products(p, M, n):
    F = field_create(p, M, M)
    for e in range(1, F.order):
        if F.pow(e, n) != 1:
            continue
        W = grp.fq_cyclic_semidirect(F, n, e)
        for v in range(F.order):
            sol = grp.solve_lift(F, e, n, v, W)
            assert sol == brute_lift(F, e, n, v) == grp.lift_closed_form(F, e, n, v)


def test_solve_lift_known_sets():
    F4 = field_create(2, 2, 2)
    assert grp.solve_lift(F4, 2, 3, 0) == {0, 1, 2, 3}
    assert grp.solve_lift(F4, 2, 3, 1) == set()
    F2 = field_create(2, 1, 1)
    assert grp.solve_lift(F2, 1, 3, 1) == {1}
    with pytest.raises(NotCoprime):
        grp.solve_lift(F4, 1, 2, 0)


def test_gp_classification():
    V4, Q8, C3 = grp.elem_abelian(2, 2), grp.quaternion8(), grp.cyclic(3)
    for act in grp.actions(V4, C3):
        r = grp.enumerate_gp_rho(V4, C3, act)
        assert len(r.classes) == 1 and r.rho_prime_class == 0
    rp = grp.parse_action(Q8, C3, {"generator_images": [{"i": "j", "j": "k"}]})
    r = grp.enumerate_gp_rho(Q8, C3, rp)
    assert r.passing == [1, 2, 5, 6] and r.classes == [[1, 2, 5, 6]]
    for i in r.passing:
        W = grp.semidirect(Q8, C3, r.actions[i])
        assert grp.check_star_conditions(W, r.witnesses[i], rp)
    with pytest.raises(BudgetExceeded):
        grp.enumerate_gp_rho(grp.cyclic(65), C3, np.tile(np.arange(65), (3, 1)))


def test_find_complement():
    S3 = grp.symmetric(3)
    A3 = [g for g in range(6) if S3.order_of(g) in (1, 3)]
    H = grp.find_complement(S3, A3)
    assert len(H) == 2 and not (H & set(A3)) - {S3.identity}
    V4, C3 = grp.elem_abelian(2, 2), grp.cyclic(3)
    W = grp.semidirect(V4, C3, grp.actions(V4, C3)[1])
    H = grp.find_complement(W.group, W.normal_elements())
    assert len(H) == 3 and {W.quotient(h) for h in H} == {0, 1, 2}
    assert W.group.is_normal(W.normal_elements())


def test_homomorphism_count():
    # Hom(C6, C4) has gcd(6, 4) = 2 elements
    assert len(grp.homomorphisms(grp.cyclic(6), grp.cyclic(4))) == 2
    assert len(grp.homomorphisms(grp.cyclic(4), grp.elem_abelian(2, 2))) == 4
    assert sum(1 for _ in itertools.islice(grp.homomorphisms(grp.cyclic(3), grp.symmetric(3)), 10)) == 3


def test_star_conditions_on_direct_product():
    P, Q = grp.elem_abelian(2, 2), grp.cyclic(3)
    trivial = np.tile(np.arange(P.order), (Q.order, 1))
    W = grp.semidirect(P, Q, trivial)
    gammas = [W.pair(P.identity, a) for a in range(Q.order)]
    assert grp.check_star_conditions(W, gammas, trivial)
    # (p, 1) with p != 1 has order 6 in the direct product, not 3
    bad = [gammas[0], W.pair(1, 1), gammas[2]]
    assert not grp.check_star_conditions(W, bad, trivial)
    with pytest.raises(IndexMismatch):
        grp.check_star_conditions(W, gammas[:2], trivial)


def test_complement_of_direct_factor():
    P, Q = grp.cyclic(4), grp.cyclic(3)
    W = grp.semidirect(P, Q, np.tile(np.arange(4), (3, 1)))
    H = grp.find_complement(W.group, W.normal_elements())
    assert H == frozenset(W.pair(0, a) for a in range(3))
