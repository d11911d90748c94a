import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from asmoduli.errors import DimensionMismatch
from asmoduli.fplinalg import (
    FpMap,
    FpSpace,
    KSolver,
    canonical_rep,
    fp_contract,
    fp_expand,
    image,
    kernel,
    nullspace,
    rank,
    rank_of,
    rref,
    span_enumerate,
)
from asmoduli.gf import field_create


def brute_rank(A, p):
    """log_p of the number of distinct images A x over all x."""
    rows, cols = A.shape
    images = {tuple((A @ np.array(x)) % p) for x in itertools.product(range(p), repeat=cols)}
    n, r = len(images), 0
    while p**r < n:
        r += 1
    return r


matrices = st.tuples(st.sampled_from([2, 3]), st.integers(1, 4), st.integers(1, 4)).flatmap(
    lambda t: st.lists(st.integers(0, t[0] - 1), min_size=t[1] * t[2], max_size=t[1] * t[2]).map(
        lambda xs: (t[0], np.array(xs, dtype=np.int64).reshape(t[1], t[2]))
    )
)


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_rank_matches_image_count(pm):
    p, A = pm
    assert rank_of(A, p) == brute_rank(A, p)


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_nullspace_is_kernel(pm):
    p, A = pm
    N = nullspace(A, p)
    assert N.shape[0] == A.shape[1] - rank_of(A, p)
    for v in N:
        assert not ((A @ v) % p).any()


def test_rref_shape_and_pivots():
    A = np.array([[0, 2, 1], [0, 1, 2], [1, 0, 0]])
    R, piv = rref(A, 3)
    assert piv == [0, 1]
    assert (R == np.array([[1, 0, 0], [0, 1, 2]])).all()
    with pytest.raises(DimensionMismatch):
        rref(np.array([1, 2]), 3)


def test_fpmap_kernel_image_and_bytes():
    A = np.array([[1, 1, 0], [0, 0, 0]])
    f = FpMap(A, FpSpace(("a", "b", "c"), 1), FpSpace(("u", "v"), 1), 2)
    assert rank(f) == 1
    assert kernel(f).shape[0] == 2 and image(f).shape[0] == 1
    assert (f.apply([1, 0, 1]) == np.array([1, 0])).all()
    assert f.to_bytes() == f.to_bytes()


def test_canonical_rep_constant_on_cosets():
    p = 3
    S = np.array([[1, 2, 0, 1], [0, 1, 1, 0]])
    v = np.array([2, 0, 1, 1])
    reps = {tuple(canonical_rep((v + w) % p, S, p)) for w in span_enumerate(S, p)}
    assert len(reps) == 1
    assert len(list(span_enumerate(S, p))) == 9


def test_expand_contract_roundtrip():
    F = field_create(2, 2, 4)
    v = [0, 5, 15, 9]
    assert fp_contract(F, fp_expand(F, v)) == v


def test_ksolver_coordinates():
    F = field_create(3, 1, 2)
    s = KSolver(F)
    a, b = {"x": 1, "y": 2}, {"y": 1, "z": 4}
    assert s.add(a) and s.add(b)
    c = {"x": F.mul(3, 1), "y": F.add(F.mul(3, 2), F.mul(7, 1)), "z": F.mul(7, 4)}
    assert s.coords(c) == [3, 7]
    assert not s.add(c)
    assert s.coords({"w": 1}) is None
