import itertools

import pytest
from hypothesis import given, settings, strategies as st

from asmoduli.errors import ConfigInvalid, NotCoprime
from asmoduli.gf import field_create
from asmoduli.kummer import (
    KummerCover,
    cover_add,
    cover_frob,
    cover_mul,
    cover_val,
    from_json,
    rr_space_cover,
    sigma_apply,
    to_json,
    to_string,
)
from asmoduli.localexp import LocalFrame
from asmoduli.pfrac import INF, PuncturedLine, pole_key, poly_key

F4 = field_create(2, 2, 2)
F9 = field_create(3, 1, 2)

COVERS = {
    "y3=x": KummerCover(PuncturedLine(F4, (0,)), 3, [1]),
    "y4=x": KummerCover(PuncturedLine(F9, (0,)), 4, [1]),
    "y3=x(x-1)": KummerCover(PuncturedLine(F4, (0, 1)), 3, [1, 1]),
    "y4=x^2(x-1)": KummerCover(PuncturedLine(F9, (0, 1)), 4, [2, 1]),
}


def cover_elems(V, deg=2, pole=2):
    U = V.base
    keys = [poly_key(k) for k in range(deg + 1)] + [pole_key(i, e) for i in range(U.r) for e in range(1, pole + 1)]
    comp = st.lists(st.integers(0, V.ctx.order - 1), min_size=len(keys), max_size=len(keys)).map(
        lambda cs: U.from_coords(dict(zip(keys, cs)))
    )
    return st.lists(comp, min_size=V.n, max_size=V.n).map(
        lambda cs: _sum(V, cs)
    )


def _sum(V, comps):
    out = V.zero()
    for j, a in enumerate(comps):
        out = cover_add(out, V.lift(a, j))
    return out


def power(b, k):
    out = b.cover.lift(b.cover.base.one())
    for _ in range(k):
        out = cover_mul(out, b)
    return out


@pytest.mark.parametrize("name", sorted(COVERS))
def test_y_to_the_n_is_f(name):
    V = COVERS[name]
    assert power(V.y(), V.n) == V.lift(V.f)


@pytest.mark.parametrize("name", sorted(COVERS))
def test_ramification_data_sums(name):
    V = COVERS[name]
    assert sum(V.m(P) for P in V.base.puncture_ids()) == 0
    for P in V.base.puncture_ids():
        assert V.e(P) * V.g(P) == V.n


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_sigma_is_ring_automorphism_of_order_n(data):
    V = COVERS[data.draw(st.sampled_from(sorted(COVERS)))]
    a = data.draw(cover_elems(V))
    b = data.draw(cover_elems(V))
    assert sigma_apply(cover_mul(a, b)) == cover_mul(sigma_apply(a), sigma_apply(b))
    assert sigma_apply(a, V.n) == a


@settings(max_examples=20, deadline=None)
@given(st.data())
def test_frobenius_is_pth_power(data):
    V = COVERS[data.draw(st.sampled_from(sorted(COVERS)))]
    a = data.draw(cover_elems(V, 1, 1))
    assert cover_frob(a, 1) == power(a, V.ctx.p)


def test_valuations_on_y3_equals_x():
    V = COVERS["y3=x"]
    U = V.base
    assert cover_val(V.lift(U.inv_linear(0), 1), (0, 0)) == -2
    assert cover_val(V.lift(U.x(), 1), (0, 0)) == 4
    assert cover_val(V.lift(U.x(), 1), (INF, 0)) == -4
    assert LocalFrame(V, 0).principal_part(V.lift(U.inv_linear(0), 1)) == {2: 1}


@pytest.mark.parametrize("name", sorted(COVERS))
def test_cover_val_is_leading_exponent(name):
    V = COVERS[name]
    U = V.base
    # x^-1 y^j + y^(j+1) style sums with possible cancellation between components
    for j, P in itertools.product(range(V.n), U.puncture_ids()):
        b = cover_add(V.lift(U.inv_linear(0), j), V.lift(U.one(), (j + 1) % V.n))
        for k in range(V.g(P)):
            ser = LocalFrame(V, P, k).expand(b, 50)
            assert cover_val(b, (P, k)) == min(ser)


@pytest.mark.parametrize("name", sorted(COVERS))
def test_rr_space_cover_matches_series_test(name):
    """Every basis element meets the pole bounds, and monomials meeting them lie in the span."""
    from asmoduli.fplinalg import KSolver
    from asmoduli.moduli import cover_coords

    V = COVERS[name]
    U = V.base
    bound = V.ctx.q
    basis = rr_space_cover(V, bound)

    def ok(b):
        for P in U.puncture_ids():
            for k in range(V.g(P)):
                ser = LocalFrame(V, P, k).expand(b, 0)
                if ser and -min(ser) > bound:
                    return False
        return True

    assert all(ok(b) for b in basis)
    solver = KSolver(V.ctx)
    for b in basis:
        assert solver.add(cover_coords(b))
    monos = [U.from_poly([0] * k + [1]) for k in range(8)] + [U.inv_linear(i, k) for i in range(U.r) for k in range(1, 8)]
    for j, a in itertools.product(range(V.n), monos):
        b = V.lift(a, j)
        if ok(b):
            assert solver.coords(cover_coords(b)) is not None


def test_json_roundtrip_and_string():
    V = COVERS["y4=x^2(x-1)"]
    U = V.base
    b = cover_add(V.lift(U.inv_linear(1, 2, 5), 3), V.lift(U.x(), 1))
    assert from_json(V, to_json(b)) == b
    assert "y^3" in to_string(b)


def test_construction_errors():
    U = PuncturedLine(F9, (0,))
    with pytest.raises(NotCoprime):
        KummerCover(U, 3, [1])
    with pytest.raises(ConfigInvalid):
        KummerCover(U, 4, [2])  # f = x^2 is a square
    with pytest.raises(ConfigInvalid):
        KummerCover(U, 4, [1, 1])
