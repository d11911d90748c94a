"""Command line interface: `asmoduli <command> [options]`.

Every command prints a JSON report on stdout.  With --out DIR the report is
also written to DIR/<command>.json together with a CSV mirror of its rows.
Exit status is 0 when every check the command performs passes, 1 when a
check fails, 2 for invalid input and 3 when a budget is exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import acceptance, groups as grp
from .config import Config, bundled_raw, field_from, load_config, parse_levels
from .errors import AsModuliError, BudgetExceeded, ConfigInvalid
from .gf import root_of_unity
from .kummer import from_json as cover_from_json, to_string as cover_to_string
from .localmod import local_dims, local_floor_formula, local_global_compare
from .moduli import (
    RhoAction,
    dims_report,
    enumerate_classes,
    iota_eval,
    specialize,
    universal_family,
    wp_reduce,
)
from .restrict import analyze_restriction, essential_surjectivity_scan, local_cover_at, restriction_matrix


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=str)


def _write_csv(path: Path, rows: list[dict]) -> None:
    cols = sorted({k for r in rows for k in r})
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v) for k, v in r.items()})


def emit(args, name: str, report: dict, rows: list[dict], ok: bool) -> int:
    report = {"command": name, "ok": bool(ok), **report}
    text = _dump(report)
    print(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{name}.json").write_text(text + "\n")
        _write_csv(out / f"{name}.csv", rows)
    return 0 if ok else 1


def _config(args) -> Config:
    if not args.config:
        raise ConfigInvalid("--config is required")
    return load_config(args.config)


def _levels(args, cfg: Config | None = None) -> list[int]:
    if args.levels is not None:
        return parse_levels(args.levels)
    return cfg.levels if cfg is not None else parse_levels(None)


def _class_json(cfg: Config, cls) -> dict:
    return {
        "level": cls.level,
        "coords": [cfg.ctx.to_str(c) for c in cls.coords],
        "rep": cover_to_string(cls.rep),
    }


def _read_input(value: str):
    """A JSON file path, or the name of a bundled input such as groups_q8."""
    path = Path(value)
    if not path.exists() and "/" not in value:
        try:
            return bundled_raw(value)
        except FileNotFoundError:
            pass
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigInvalid(f"input file {value} not found") from None
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"input is not valid JSON: {exc}") from None


def _read_json_arg(value: str):
    if value.startswith("@"):
        return json.loads(Path(value[1:]).read_text())
    try:
        return json.loads(value)
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"argument is not valid JSON: {exc}") from None


# --- commands ----------------------------------------------------------------

def cmd_dims(args) -> int:
    cfg = _config(args)
    rows = dims_report(cfg.kernel(), _levels(args, cfg))
    ok = all(r["floor_formula_check"] is not False for r in rows)
    return emit(args, "dims", {"config": cfg.describe(), "rows": rows}, rows, ok)


def cmd_enumerate(args) -> int:
    cfg = _config(args)
    fk = cfg.kernel()
    rows, classes = [], {}
    for ell in _levels(args, cfg):
        cls = enumerate_classes(fk, ell, args.subfield, cfg.budget)
        classes[str(ell)] = [_class_json(cfg, c) for c in cls]
        rows.append({"level": ell, "classes": len(cls), "pairs": len(cfg.ctx.fq_elements) * len(cls)})
    return emit(args, "enumerate", {"config": cfg.describe(), "rows": rows, "classes": classes}, rows, True)


def cmd_reduce(args) -> int:
    cfg = _config(args)
    fk = cfg.kernel()
    b = cover_from_json(cfg.cover, _read_json_arg(args.element))
    ell = _levels(args, cfg)[-1]
    cls = wp_reduce(fk, b, ell)
    row = {"input": cover_to_string(b), **_class_json(cfg, cls)}
    return emit(args, "reduce", {"config": cfg.describe(), "class": row}, [row], True)


def cmd_iota(args) -> int:
    cfg = _config(args)
    fk = cfg.kernel()
    ell = _levels(args, cfg)[-1]
    if args.element:
        cls = wp_reduce(fk, cover_from_json(cfg.cover, _read_json_arg(args.element)), ell)
    else:
        n_new = len(universal_family(fk, ell))
        vals = [cfg.ctx.parse(v) for v in args.coords.split(",")] if args.coords else [0] * n_new
        cls = specialize(fk, ell, vals)
    img = iota_eval(fk, cls)
    row = {"level": ell, "class": _class_json(cfg, cls)["coords"], "image": _class_json(cfg, img)["coords"]}
    return emit(args, "iota", {"config": cfg.describe(), "class": _class_json(cfg, cls), "image": _class_json(cfg, img)}, [row], True)


def cmd_local_dims(args) -> int:
    cfg = _config(args)
    fk = cfg.kernel()
    levels = _levels(args, cfg)
    rows = []
    for P in fk.support:
        lc = local_cover_at(fk, P)
        dims = local_dims(lc, max(levels))
        for ell in levels:
            formula = local_floor_formula(lc, ell) if ell >= 1 else None
            rows.append({"puncture": cfg.line.label(P), "n_t": lc.n_t, "level": ell, "d_local": dims[ell], "floor_formula": formula})
    ok = all(r["floor_formula"] in (None, r["d_local"]) for r in rows)
    return emit(args, "local-dims", {"config": cfg.describe(), "rows": rows}, rows, ok)


def cmd_local_global(args) -> int:
    cfg = _config(args)
    if cfg.cover is None:
        raise ConfigInvalid("configuration has no cover section")
    rep = local_global_compare(cfg.ctx, cfg.cover.n, cfg.rho.s, _levels(args, cfg), args.subfield, args.class_level, cfg.budget)
    ok = all(r["equal"] for r in rep["rows"]) and rep["bijective"]
    return emit(args, "local-global-check", {"config": cfg.describe(), **rep}, rep["rows"], ok)


def cmd_restrict(args) -> int:
    cfg = _config(args)
    fk = cfg.kernel()
    levels = [l for l in _levels(args, cfg) if l >= 1] or [1]
    rep = analyze_restriction(fk, levels)
    top = restriction_matrix(fk, max(levels))
    rep["profile"] = [list(x) for x in top.profile]
    rep["target_labels"] = [list(x) for x in top.map.target.labels]
    return emit(args, "restrict", {"config": cfg.describe(), **rep}, rep["rows"], rep["p_power"])


def cmd_scan(args) -> int:
    cfg = _config(args)
    sc = cfg.raw.get("scan")
    if sc is None:
        if cfg.cover is None:
            raise ConfigInvalid("scan-profiles needs a 'scan' or 'cover' section")
        sc = {"n": cfg.cover.n, "rho": {"s": cfg.rho.s}}
    level = args.level if args.level is not None else int(sc.get("level", 1))
    rows = essential_surjectivity_scan(
        cfg.line, int(sc["n"]), RhoAction(int(sc["rho"]["s"])), level, max_tame=int(sc.get("max_tame", 2))
    )
    ok = all(r["surjective"] for r in rows if r["realizable"])
    return emit(args, "scan-profiles", {"config": cfg.describe(), "rows": rows}, rows, ok)


def cmd_gp_rho(args) -> int:
    data = _read_input(args.input)
    try:
        P, Pp = grp.parse_group(data["P"]), grp.parse_group(data["P_prime"])
        rho_prime = grp.parse_action(P, Pp, data.get("rho_prime", "trivial"))
    except AsModuliError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigInvalid(f"group input is malformed: {exc}") from None
    res = grp.enumerate_gp_rho(P, Pp, rho_prime)
    rows = [
        {"class": k, "members": cl, "contains_rho_prime": res.rho_prime_index in cl}
        for k, cl in enumerate(res.classes)
    ]
    report = {
        "P_order": P.order,
        "P_prime_order": Pp.order,
        "actions": len(res.actions),
        "passing": res.passing,
        "rho_prime_index": res.rho_prime_index,
        "rows": rows,
    }
    return emit(args, "gp-rho", report, rows, any(r["contains_rho_prime"] for r in rows))


def cmd_solve_lift(args) -> int:
    data = _read_input(args.input)
    try:
        ctx = field_from(data["field"])
        n = int(data["n"])
        e = ctx.pow(root_of_unity(ctx, n), int(data.get("s", 0))) if "e" not in data else ctx.parse(data["e"])
        vs = [ctx.parse(data["v"])] if "v" in data else list(range(ctx.order))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigInvalid(f"lift input is malformed: {exc}") from None
    W = grp.fq_cyclic_semidirect(ctx, n, e)
    rows = []
    for v in vs:
        table = sorted(grp.solve_lift(ctx, e, n, v, W))
        closed = sorted(grp.lift_closed_form(ctx, e, n, v))
        rows.append({
            "v": ctx.to_str(v),
            "solutions": [ctx.to_str(h) for h in table],
            "count": len(table),
            "closed_form_count": len(closed),
            "agree": table == closed,
        })
    report = {"field": ctx.describe(), "n": n, "e": ctx.to_str(e), "rows": rows}
    return emit(args, "solve-lift", report, rows, all(r["agree"] for r in rows))


def cmd_verify(args) -> int:
    results = acceptance.run_all(seed=args.seed)
    for r in results:
        print(f"{'PASS' if r['passed'] else 'FAIL'} [{r['id']}] {r['name']}", file=sys.stderr)
    rows = [{"id": r["id"], "name": r["name"], "passed": r["passed"]} for r in results]
    return emit(args, "verify", {"criteria": results}, rows, all(r["passed"] for r in results))


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="asmoduli", description="Eigen-moduli of Artin-Schreier classes on Kummer covers.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_, config=True):
        sp = sub.add_parser(name, help=help_)
        if config:
            sp.add_argument("--config", help="config JSON path or bundled name (cfg_a .. cfg_d, scan_n3, scan_n4)")
            sp.add_argument("--levels", help="level or inclusive range a..b")
        sp.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
        sp.add_argument("--out", help="directory for JSON and CSV reports")
        sp.set_defaults(func=func)
        return sp

    add("dims", cmd_dims, "dimensions of the moduli pieces")
    sp = add("enumerate", cmd_enumerate, "list classes per level")
    sp.add_argument("--subfield", type=int, help="restrict coordinates to F_{p^d}")
    sp = add("reduce", cmd_reduce, "canonical class of a kernel element")
    sp.add_argument("--element", required=True, help="cover element JSON, or @file")
    sp = add("iota", cmd_iota, "image of a class in the full class group")
    sp.add_argument("--element", help="cover element JSON, or @file")
    sp.add_argument("--coords", help="comma-separated class coordinates")
    add("local-dims", cmd_local_dims, "local moduli dimensions per support puncture")
    sp = add("local-global-check", cmd_local_global, "compare local moduli with the once-punctured line")
    sp.add_argument("--subfield", type=int)
    sp.add_argument("--class-level", type=int, default=1)
    add("restrict", cmd_restrict, "restriction to the punctured discs")
    sp = add("scan-profiles", cmd_scan, "surjectivity for every ramification profile")
    sp.add_argument("--level", type=int)

    gp = sub.add_parser("groups", help="finite group computations")
    gsub = gp.add_subparsers(dest="group_command", required=True)
    for name, func, help_ in (
        ("gp-rho", cmd_gp_rho, "classify actions satisfying the Gp conditions"),
        ("solve-lift", cmd_solve_lift, "solve (h,1)^n = (v,0) in F_q x| Z/n"),
    ):
        g = gsub.add_parser(name, help=help_)
        g.add_argument("--input", required=True, help="input JSON path or bundled name")
        g.add_argument("--seed", type=int, default=0)
        g.add_argument("--out")
        g.set_defaults(func=func)

    add("verify", cmd_verify, "run the acceptance checks", config=False)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"asmoduli: budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (AsModuliError, OSError) as exc:
        print(f"asmoduli: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
