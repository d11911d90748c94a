import json

import pytest

from asmoduli.config import BUNDLED, bundled, config_from_dict, load_config, parse_levels
from asmoduli.errors import ConfigInvalid
from asmoduli.pfrac import INF

BASE = {"field": {"p": 2, "m": 2, "M": 2}, "base": {"punctures": ["0"]}, "cover": {"n": 3, "exponents": [1]}, "rho": {"s": 1}}


def variant(**changes):
    raw = json.loads(json.dumps(BASE))
    for path, value in changes.items():
        section, key = path.split("__")
        raw[section][key] = value
    return raw


def test_bundled_configs_load():
    for name in BUNDLED:
        cfg = bundled(name)
        assert cfg.cover is not None and cfg.levels == [0, 1, 2, 3]
    assert bundled("cfg_d").support == (0, INF)


def test_parse_levels():
    assert parse_levels("1..3") == [1, 2, 3]
    assert parse_levels("2") == [2]
    assert parse_levels([0, 1]) == [0, 1]
    for bad in ("3..1", "-1", {"a": 1}):
        with pytest.raises(ConfigInvalid):
            parse_levels(bad)


@pytest.mark.parametrize(
    "raw,fragment",
    [
        (variant(field__p=4), "not prime"),
        (variant(field__M=3), "must divide"),
        (variant(cover__n=2), "gcd(n,p)"),
        (variant(cover__n=5), "root of unity"),
        (variant(cover__exponents=[3]), "disconnected"),
        (variant(field__m=1), "F_q"),
        (variant(base__punctures=["0", "00"]), "distinct"),
        (variant(cover__zeta_choice="other"), "zeta_choice"),
        (dict(BASE, tame_support=["01"]), "tame"),
        ({"base": {}}, "field"),
    ],
)
def test_invalid_configs(raw, fragment):
    with pytest.raises(ConfigInvalid) as info:
        config_from_dict(raw)
    assert fragment in str(info.value)


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv("ASMODULI_BUDGET", "17")
    assert config_from_dict(BASE).budget == 17
    monkeypatch.setenv("ASMODULI_BUDGET", "lots")
    with pytest.raises(ConfigInvalid):
        config_from_dict(BASE)


def test_load_from_path(tmp_path):
    path = tmp_path / "mine.json"
    path.write_text(json.dumps(BASE))
    assert load_config(path).name == "mine"
    (tmp_path / "broken.json").write_text("{")
    with pytest.raises(ConfigInvalid):
        load_config(tmp_path / "broken.json")
    with pytest.raises(ConfigInvalid):
        load_config(tmp_path / "missing.json")
