"""The acceptance oracles must reject deliberately broken implementations."""

from asmoduli import acceptance as acc
from asmoduli.moduli import ASClass, cover_coords


def test_coset_oracle_catches_a_non_canonical_reduction(monkeypatch, fk_a):
    # a "reduction" that ignores wp-equivalence separates equivalent elements
    def raw(fk, b, ell):
        return ASClass(ell, tuple(sorted(cover_coords(b).items())), b)

    monkeypatch.setattr(acc, "wp_reduce", raw)
    row = acc.class_count_check(fk_a, 1)
    assert row["pair_disagreements"] > 0 and row["distinct"] != row["expected"]


def test_monomial_scan_catches_a_truncated_basis(monkeypatch, fk_c):
    real = acc.kernel_level
    monkeypatch.setattr(acc, "kernel_level", lambda fk, ell: real(fk, ell)[:-1])
    row = acc.scan_monomials(fk_c, 1)
    assert row["missed"] > 0


def test_injectivity_check_catches_a_collapsing_iota(monkeypatch, cfgs):
    monkeypatch.setattr(acc, "iota_eval", lambda fk, c: ASClass(c.level, (), c.rep))
    res = acc.check_iota({"CFG-C": cfgs["cfg_c"]}, names=("CFG-C",), levels=(1,))
    assert not res["passed"]
