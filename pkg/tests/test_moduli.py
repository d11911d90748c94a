import random

import pytest

from asmoduli.config import config_from_dict
from asmoduli.errors import BudgetExceeded, ConfigInvalid, LevelExceeded, NotInKernel
from asmoduli.kummer import cover_add, cover_scale, to_string
from asmoduli.moduli import (
    dims_report,
    enumerate_classes,
    enumerate_pairs,
    floor_formula,
    iota_eval,
    kernel_level,
    new_basis,
    piece_dims,
    specialize,
    universal_family,
    wp,
    wp_reduce,
)

# Frozen from the computed chains; each row is also checked against the
# kernel-dimension differences and the floor formula below.
FROZEN_DIMS = {
    "cfg_a": [1, 2, 8, 32, 128],
    "cfg_b": [0, 2, 8, 32, 128],
    "cfg_c": [0, 2, 2, 10, 26],
    "cfg_d": [0, 2, 8, 32, 128],
}
FROZEN_KERNEL_DIMS = {
    "cfg_a": [1, 3, 11, 43],
    "cfg_b": [1, 3, 11, 43],
    "cfg_c": [0, 2, 4, 14],
    "cfg_d": [0, 2, 10, 42],
}


@pytest.mark.parametrize("name", sorted(FROZEN_DIMS))
def test_frozen_dimensions(cfgs, name):
    fk = cfgs[name].kernel()
    assert piece_dims(fk, 4) == FROZEN_DIMS[name]
    assert [len(kernel_level(fk, l)) for l in range(4)] == FROZEN_KERNEL_DIMS[name]


@pytest.mark.parametrize("name", sorted(FROZEN_DIMS))
def test_dims_are_kernel_growth(cfgs, name):
    """wp is injective modulo constants, so d_l = dim KerD_l - dim KerD_(l-1)."""
    fk = cfgs[name].kernel()
    k = [len(kernel_level(fk, l)) for l in range(4)]
    const = 1 if fk.j0 == 0 else 0
    assert piece_dims(fk, 3) == [k[0] - const] + [k[l] - k[l - 1] for l in range(1, 4)]
    for l in range(1, 5):
        assert floor_formula(fk, l) == piece_dims(fk, 4)[l]


def test_cfg_a_level_one_basis(fk_a):
    assert sorted(to_string(b) for b in kernel_level(fk_a, 1)) == sorted(["y", "(x^-1)*y", "(x)*y"])
    assert [to_string(b) for b in new_basis(fk_a, 1)] == ["(x)*y", "(x^-1)*y"]
    y = fk_a.cover.y()
    # y^q - y = xy - y, so xy and y give the same class
    assert wp_reduce(fk_a, fk_a.cover.lift(fk_a.cover.base.x(), 1), 1) == wp_reduce(fk_a, y, 1)
    assert wp_reduce(fk_a, y, 1).coords == (1, 0)


def _random_level_elem(fk, ell, rng):
    b = fk.cover.lift(fk.cover.base.zero(), fk.j0)
    for f in kernel_level(fk, ell):
        b = cover_add(b, cover_scale(rng.randrange(fk.ctx.order), f))
    return b


@pytest.mark.parametrize("name", sorted(FROZEN_DIMS))
def test_reduction_is_constant_on_cosets(cfgs, name):
    fk = cfgs[name].kernel()
    rng = random.Random(7)
    V = fk.cover
    for ell in (1, 2):
        for _ in range(15):
            b = _random_level_elem(fk, ell, rng)
            f = _random_level_elem(fk, ell - 1, rng)
            shifted = cover_add(b, wp(fk, f))
            if fk.j0 == 0:
                shifted = cover_add(shifted, V.lift(V.base.const(rng.randrange(1, fk.ctx.order))))
            cls = wp_reduce(fk, b, ell)
            assert wp_reduce(fk, shifted, ell) == cls
            assert wp_reduce(fk, cls.rep, ell) == cls


@pytest.mark.parametrize("name", sorted(FROZEN_DIMS))
def test_specialize_roundtrip(cfgs, name):
    fk = cfgs[name].kernel()
    rng = random.Random(3)
    for ell in (1, 2):
        n = len(universal_family(fk, ell))
        for _ in range(10):
            vals = tuple(rng.randrange(fk.ctx.order) for _ in range(n))
            assert specialize(fk, ell, vals).coords == vals


def test_class_count_and_pairs(fk_a):
    assert len(enumerate_classes(fk_a, 1)) == 16
    assert len(set(enumerate_classes(fk_a, 1))) == 16
    assert len(enumerate_pairs(fk_a, 1)) == 4 * 16
    assert len(enumerate_classes(fk_a, 1, subfield_degree=1)) == 4
    with pytest.raises(BudgetExceeded):
        enumerate_classes(fk_a, 2, budget=100)


def test_iota_injective_small(fk_c):
    classes = enumerate_classes(fk_c, 1)
    assert len({iota_eval(fk_c, c) for c in classes}) == len(classes) == 81


def test_errors(fk_a):
    V = fk_a.cover
    with pytest.raises(NotInKernel):
        wp_reduce(fk_a, V.lift(V.base.one(), 2), 1)
    with pytest.raises(LevelExceeded):
        wp_reduce(fk_a, V.lift(V.base.inv_linear(0, 3), 1), 1)
    with pytest.raises(ValueError):
        specialize(fk_a, 1, [1])


def test_rho_outside_fq_rejected():
    raw = {"field": {"p": 2, "m": 1, "M": 2}, "base": {"punctures": ["0"]}, "cover": {"n": 3, "exponents": [1]}, "rho": {"s": 1}}
    with pytest.raises(ConfigInvalid):
        config_from_dict(raw)


def test_dims_report_rows(fk_b):
    rows = dims_report(fk_b, [0, 1, 2])
    assert [r["d_ell"] for r in rows] == [0, 2, 8]
    assert rows[0]["floor_formula_check"] is None and all(r["floor_formula_check"] for r in rows[1:])
