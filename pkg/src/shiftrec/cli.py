"""Command-line front end.

    shiftrec <subcommand> CONFIG.json [--out PATH] [--seed N] [--tol X]
                                      [--horizon N] [--budget N]

Every subcommand writes one JSON report.  Exit codes: 0 success, 1 config
error, 2 hypothesis violated, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import moran as mo
from .errors import ConfigError, ShiftRecError
from .families import family_from_name
from .recurrence import (PsiFunction, cover_crossing, cover_sum_audit,
                         dimension_R_f, dimension_R_psi)
from .shifts import ShiftSpace, shift_from_config
from .structure import (check_free_concatenation, check_w_specification,
                        mistake_profile, populated_lengths)
from .thermo import Potential, bowen_root, entropy_estimate, pressure_estimate
from .words import edit_ball_census, edit_ball_count, format_word, parse_word

log = logging.getLogger("shiftrec")

SUBCOMMANDS = ("entropy", "pressure", "bowen", "dim-rpsi", "dim-rf", "cover-audit",
               "spec-check", "free-concat", "mistake-profile", "edit-ball",
               "moran build", "moran audit", "point")

# which optional declarations each subcommand reads
NEEDS = {
    "entropy": {"structure"},
    "pressure": {"potential", "structure"},
    "bowen": {"potential", "structure"},
    "dim-rpsi": {"psi"},
    "dim-rf": {"potential", "structure"},
    "cover-audit": {"psi", "potential", "cover"},
    "spec-check": {"structure"},
    "free-concat": {"structure"},
    "mistake-profile": {"structure"},
    "edit-ball": {"edit_ball"},
    "moran build": {"psi", "potential", "structure", "moran"},
    "moran audit": {"psi", "potential", "structure", "moran"},
    "point": {"psi", "potential", "structure", "moran"},
}
OPTIONAL = {"potential", "psi", "structure", "moran", "cover", "edit_ball"}


@dataclass
class RunConfig:
    raw: dict
    space: ShiftSpace
    potential: Potential | None = None
    psi: PsiFunction | None = None
    structure: dict = field(default_factory=dict)
    budgets: dict = field(default_factory=dict)

    @property
    def digest(self) -> str:
        text = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()

    def budget(self, key, default):
        return self.budgets.get(key, default)


def load_config(path: str | Path, subcommand: str, overrides: dict) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict) or "space" not in raw:
        raise ConfigError("config must be an object with a 'space' declaration")
    for key in sorted(OPTIONAL & raw.keys() - NEEDS[subcommand]):
        log.warning("'%s' is ignored by %s", key, subcommand)
    space = shift_from_config(raw["space"])
    pot = Potential.from_config(raw["potential"]) if "potential" in raw else None
    psi = PsiFunction.from_config(raw["psi"]) if "psi" in raw else None
    budgets = dict(raw.get("budgets", {}))
    budgets.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(raw, space, pot, psi, dict(raw.get("structure", {})), budgets)


def _need(cfg: RunConfig, attr: str, sub: str):
    val = getattr(cfg, attr)
    if val is None:
        raise ConfigError(f"{sub} needs a '{attr}' declaration")
    return val


def _round(obj, digits=12):
    if isinstance(obj, float):
        if math.isfinite(obj):
            return float(f"{obj:.{digits}g}")
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _round(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v, digits) for v in obj]
    return obj


def _moran_setup(cfg: RunConfig, sub: str):
    m = dict(cfg.raw.get("moran", {}))
    family = family_from_name(m.get("F", cfg.structure.get("F", "L")))
    variant = m.get("variant", "psi" if cfg.psi is not None else "f")
    kwargs = {"psi": _need(cfg, "psi", sub)} if variant == "psi" else \
        {"f": _need(cfg, "potential", sub)}
    params = mo.make_params(cfg.space, family, int(m.get("M", 1)),
                            float(m.get("eta", 0.1)), n1=m.get("n1"),
                            h=m.get("h"), **kwargs)
    levels = int(m.get("levels", 3))
    schedule = mo.build_schedule(params, levels)
    return params, schedule, m


def run_subcommand(sub: str, cfg: RunConfig, out: Path) -> dict:
    horizon = int(cfg.budget("horizon", 30))
    tol = float(cfg.budget("tol", 1e-10))
    seed = int(cfg.budget("seed", 0))
    budget = int(cfg.budget("budget", 10**7))
    st = cfg.structure
    report: dict = {}
    if sub == "entropy":
        fam = family_from_name(st.get("D", "L"))
        report = entropy_estimate(cfg.space, fam, horizon).to_json()
    elif sub == "pressure":
        fam = family_from_name(st.get("D", "L"))
        f = _need(cfg, "potential", sub)
        s = float(cfg.raw.get("s", 1.0))
        report = pressure_estimate(cfg.space, fam, f.tilted(s), horizon).to_json()
        report["s"] = s
    elif sub == "bowen":
        fam = family_from_name(st.get("D", "L"))
        f = _need(cfg, "potential", sub)
        f.validate(cfg.space)
        report = bowen_root(cfg.space, fam, f, range(1, horizon + 1), tol).to_json()
    elif sub == "dim-rpsi":
        report = dimension_R_psi(cfg.space, _need(cfg, "psi", sub), horizon).to_json()
    elif sub == "dim-rf":
        fam = family_from_name(st.get("D", "L"))
        report = dimension_R_f(cfg.space, _need(cfg, "potential", sub),
                               range(1, horizon + 1), tol, fam).to_json()
    elif sub == "cover-audit":
        c = cfg.raw.get("cover", {})
        target = cfg.psi if c.get("target", "psi" if cfg.psi else "f") == "psi" \
            else cfg.potential
        if target is None:
            raise ConfigError("cover-audit needs psi or potential")
        N = range(int(c.get("N_min", 5)), int(c.get("N_max", horizon)) + 1)
        if "s" in c:
            report = cover_sum_audit(cfg.space, target, float(c["s"]), N).to_json()
        else:
            lo, hi, step = c.get("grid", [0.01, 1.0, 0.01])
            grid = [round(lo + j * step, 10) for j in range(int(round((hi - lo) / step)) + 1)]
            report = cover_crossing(cfg.space, target, grid, N)
    elif sub == "spec-check":
        G = family_from_name(st.get("G", "L"))
        cert = check_w_specification(cfg.space, G, int(st.get("tau_max", 2)),
                                     int(st.get("horizon", 8)), budget)
        report = cert.to_json()
        if not cert.ok:
            report["hypothesis_violated"] = True
    elif sub == "free-concat":
        F = family_from_name(st.get("F", "L"))
        h = int(st.get("horizon", 8))
        report = check_free_concatenation(cfg.space, F, h, budget).to_json()
        report["populated_lengths"] = populated_lengths(cfg.space, F, 2 * h)
    elif sub == "mistake-profile":
        F = family_from_name(st.get("F", "L"))
        n_list = st.get("n_list", list(range(1, 11)))
        report = mistake_profile(cfg.space, F, n_list,
                                 int(st.get("sample_budget", 5000)), seed).to_json()
    elif sub == "edit-ball":
        e = cfg.raw.get("edit_ball", {})
        deltas = e.get("deltas", [0.1, 0.25, 0.5])
        if "word" in e:
            w = parse_word(e["word"])
            rows = [edit_ball_count(cfg.space, w, d, budget) for d in deltas]
            report = {"rows": [{"center": format_word(r.center), "delta": r.radius_fraction,
                                "radius": r.radius, "count": r.count} for r in rows]}
        else:
            lengths = range(1, int(e.get("max_length", 8)) + 1)
            rows, C = edit_ball_census(cfg.space, lengths, deltas, budget)
            worst = max(rows, key=lambda r: r.count)
            report = {"fitted_C": C, "centers": len(rows) // len(deltas),
                      "rows": len(rows), "largest_ball": {
                          "center": format_word(worst.center),
                          "delta": worst.radius_fraction, "count": worst.count}}
    elif sub in ("moran build", "moran audit", "point"):
        params, schedule, m = _moran_setup(cfg, sub)
        branch_budget = int(cfg.budget("branch_budget", 10000))
        report = {"schedule": schedule.to_json(), "n_blocks": params.n_blocks or None,
                  "block_entropy_ratio": params.block_entropy_ratio,
                  "schedule_violations": mo.schedule_violations(params, schedule)}
        if sub == "moran build":
            levels = mo.build_levels(params, schedule, branch_budget=branch_budget, seed=seed)
            measure = mo.attach_measure(params, schedule, levels, tol)
            jsonl = out.with_suffix(".levels.jsonl")
            with jsonl.open("w") as fh:
                report["cylinders_written"] = mo.levels_to_jsonl(levels, measure, fh)
            report["levels_file"] = str(jsonl)
            report["sampled"] = [lv.sampled for lv in levels]
            report["conservation_errors"] = mo.conservation_errors(levels, measure)
        elif sub == "moran audit":
            slack = float(m.get("slack", 0.02))
            if params.variant == "psi":
                audit = mo.holder_audit(params, schedule, slack=slack)
            else:
                levels = mo.build_levels(params, schedule, branch_budget=branch_budget,
                                         seed=seed)
                measure = mo.attach_measure(params, schedule, levels, tol)
                audit = mo.holder_audit(params, schedule, measure, levels, slack=slack)
            report["audit"] = audit.to_json()
            if audit.target is not None:
                report["clears_last_two_levels"] = audit.clears(2)
            if "s" in m:
                report["mass_distribution"] = mo.mass_distribution_check(
                    audit, float(m["s"]), float(m.get("c", 1.0)),
                    float(m.get("eta_diam", 1.0))).to_json()
        else:
            count = int(m.get("points", 1))
            pts = [mo.materialize_point(params, schedule, seed + j) for j in range(count)]
            report["points"] = [{"seed": seed + j,
                                 "prefix": format_word(p.symbols[:200]),
                                 "length": len(p.symbols),
                                 "log": [c.to_json() for c in p.log],
                                 "ok": p.ok} for j, p in enumerate(pts)]
            report["all_ok"] = all(p.ok for p in pts)
    return report


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="shiftrec", description=__doc__.splitlines()[0])
    ap.add_argument("subcommand", help=" | ".join(SUBCOMMANDS))
    ap.add_argument("rest", nargs="+", help="[build|audit] CONFIG")
    ap.add_argument("--out", default=None)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--tol", type=float, default=None)
    ap.add_argument("--horizon", type=int, default=None)
    ap.add_argument("--budget", type=int, default=None)
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    rest = list(args.rest)
    sub = args.subcommand
    if sub == "moran":
        if not rest or rest[0] not in ("build", "audit"):
            print("moran needs 'build' or 'audit'", file=sys.stderr)
            return 1
        sub = f"moran {rest.pop(0)}"
    if sub not in SUBCOMMANDS or len(rest) != 1:
        print(f"unknown subcommand or missing config: {args.subcommand} {args.rest}",
              file=sys.stderr)
        return 1
    out = Path(args.out or f"{sub.replace(' ', '-')}.json")
    overrides = {"seed": args.seed, "tol": args.tol, "horizon": args.horizon,
                 "budget": args.budget}
    code = 0
    try:
        cfg = load_config(rest[0], sub, overrides)
        body = run_subcommand(sub, cfg, out)
        if body.get("hypothesis_violated"):
            code = 2
        report = {"subcommand": sub, "config_digest": cfg.digest,
                  "budgets": cfg.budgets, "space": cfg.space.describe(), **body}
    except ShiftRecError as exc:
        code = exc.exit_code
        report = {"subcommand": sub, "error": type(exc).__name__, "message": str(exc)}
    except ValueError as exc:
        # bad parameter values that slipped past config validation
        code = 1
        report = {"subcommand": sub, "error": "ConfigError", "message": str(exc)}
    out.write_text(json.dumps(_round(report), indent=2) + "\n")
    if code:
        print(f"{sub}: {report.get('error', 'hypothesis violated')}: "
              f"{report.get('message', '')}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
