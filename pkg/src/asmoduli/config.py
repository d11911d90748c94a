"""JSON configurations: field, punctured base, Kummer cover, multiplier, support."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from math import gcd
from pathlib import Path
from typing import Any, Mapping

from .errors import AsModuliError, ConfigInvalid
from .gf import FieldCtx, field_create, is_prime
from .kummer import KummerCover
from .moduli import DEFAULT_BUDGET, FilteredKernel, RhoAction
from .pfrac import PuncturedLine

BUNDLED = ("cfg_a", "cfg_b", "cfg_c", "cfg_d")


def budget_from_env(default: int = DEFAULT_BUDGET) -> int:
    raw = os.environ.get("ASMODULI_BUDGET")
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigInvalid(f"ASMODULI_BUDGET must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigInvalid("ASMODULI_BUDGET must be positive")
    return value


def parse_levels(value: Any, default: tuple[int, int] = (0, 3)) -> list[int]:
    """'a..b', 'k', [a, b] or None -> inclusive list of levels."""
    if value is None:
        lo, hi = default
    elif isinstance(value, int):
        lo = hi = value
    elif isinstance(value, (list, tuple)) and len(value) == 2:
        lo, hi = int(value[0]), int(value[1])
    elif isinstance(value, str):
        if ".." in value:
            a, b = value.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(value)
    else:
        raise ConfigInvalid(f"cannot read levels from {value!r}")
    if lo < 0 or hi < lo:
        raise ConfigInvalid(f"bad level range {lo}..{hi}")
    return list(range(lo, hi + 1))


def field_from(data: Mapping) -> FieldCtx:
    try:
        p, m, M = int(data["p"]), int(data["m"]), int(data["M"])
    except (KeyError, TypeError, ValueError):
        raise ConfigInvalid("field needs integer p, m, M") from None
    if not is_prime(p):
        raise ConfigInvalid(f"p={p} is not prime")
    if m < 1 or M < 1 or M % m:
        raise ConfigInvalid(f"m={m} must divide M={M}")
    if p**M > 1 << 16:
        raise ConfigInvalid("p^M above 65536 is outside desk scale")
    return field_create(p, m, M)


def line_from(ctx: FieldCtx, data: Mapping) -> PuncturedLine:
    if data.get("infinity", True) is not True:
        raise ConfigInvalid("infinity must be punctured")
    try:
        pts = tuple(ctx.parse(s) for s in data.get("punctures", []))
    except ValueError as exc:
        raise ConfigInvalid(f"bad puncture: {exc}") from None
    if len(set(pts)) != len(pts):
        raise ConfigInvalid("punctures must be distinct")
    return PuncturedLine(ctx, pts)


@dataclass
class Config:
    raw: dict
    name: str
    ctx: FieldCtx
    line: PuncturedLine
    cover: KummerCover | None = None
    rho: RhoAction | None = None
    support: tuple | None = None
    levels: list[int] = field(default_factory=lambda: [0, 1, 2, 3])
    budget: int = DEFAULT_BUDGET

    def kernel(self) -> FilteredKernel:
        if self.cover is None or self.rho is None:
            raise ConfigInvalid("configuration has no cover/rho section")
        return FilteredKernel(self.cover, self.rho, self.support)

    def describe(self) -> dict:
        out = {"name": self.name, "field": self.ctx.describe(), "punctures": [self.line.label(P) for P in self.line.puncture_ids()]}
        if self.cover is not None:
            out["cover"] = self.cover.describe()
        if self.rho is not None:
            out["rho"] = {"s": self.rho.s}
        if self.support is not None:
            out["support"] = [self.line.label(P) for P in self.support]
        return out


def config_from_dict(raw: Mapping, name: str | None = None) -> Config:
    raw = dict(raw)
    if "field" not in raw:
        raise ConfigInvalid("missing 'field' section")
    ctx = field_from(raw["field"])
    line = line_from(ctx, raw.get("base", {"punctures": []}))
    cfg = Config(raw, raw.get("name", name or "config"), ctx, line)
    cfg.levels = parse_levels(raw.get("levels"))
    cfg.budget = budget_from_env(int(raw.get("budgets", {}).get("enumerate", DEFAULT_BUDGET)))
    if "cover" in raw:
        cv = raw["cover"]
        n = int(cv.get("n", 0))
        if n < 1:
            raise ConfigInvalid("cover.n must be a positive integer")
        if gcd(n, ctx.p) != 1:
            raise ConfigInvalid("gcd(n,p)≠1")
        if (ctx.order - 1) % n:
            raise ConfigInvalid(f"no primitive {n}-th root of unity: {n} does not divide p^M-1={ctx.order - 1}")
        if cv.get("zeta_choice", "default") != "default":
            raise ConfigInvalid("only zeta_choice 'default' is supported")
        exps = [int(m) for m in cv.get("exponents", [])]
        try:
            c = ctx.parse(cv.get("unit_const", "1"))
        except ValueError as exc:
            raise ConfigInvalid(f"bad unit_const: {exc}") from None
        try:
            cfg.cover = KummerCover(line, n, exps, c)
        except AsModuliError as exc:
            raise ConfigInvalid(str(exc)) from None
        s = int(raw.get("rho", {}).get("s", 0))
        cfg.rho = RhoAction(s)
        try:
            cfg.rho.e_rho(cfg.cover)
        except ConfigInvalid:
            raise ConfigInvalid(f"e_rho = zeta^{s} does not lie in F_q (q={ctx.q})") from None
        # punctures kept out of the pole support; "tame" is accepted as a short alias
        tame = raw.get("tame_support", raw.get("tame", []))
        try:
            tame_ids = {line.id_of(t) for t in tame}
        except (AsModuliError, ValueError):
            raise ConfigInvalid(f"tame points {tame} are not punctures") from None
        cfg.support = tuple(P for P in line.puncture_ids() if P not in tame_ids)
    return cfg


def load_config(source: str | os.PathLike | Mapping) -> Config:
    if isinstance(source, Mapping):
        return config_from_dict(source)
    path = Path(source)
    if not path.exists() and str(source) in BUNDLED + ("scan_n3", "scan_n4"):
        return bundled(str(source))
    try:
        raw = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigInvalid(f"config file {source} not found") from None
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"config is not valid JSON: {exc}") from None
    return config_from_dict(raw, path.stem)


def bundled_raw(name: str) -> dict:
    return json.loads(resources.files("asmoduli").joinpath("data", f"{name}.json").read_text())


def bundled(name: str) -> Config:
    return config_from_dict(bundled_raw(name), name)
