"""Command-line front end: ``run``, ``verify`` and ``distance``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .codes import Family, build_code, distance_witness, min_logical_weight, verify_code
from .errors import BudgetExceeded, InvalidParameter
from .experiments import ExperimentConfig, PointResult, SweepResult, run_sweep

CSV_HEADER = ("family", "scenario", "schedule", "l", "d", "p", "trials", "failures",
              "rate", "ci_low", "ci_high", "seed")

_CONFIG_KEYS = {
    "family", "scenario", "schedule", "l_values", "p_values", "trials",
    "octagon_cnot_multiplier", "time_weight", "master_seed", "q", "rounds", "decoder",
    "output", "verbosity",
}
_PROB_KEYS = ("q", "octagon_cnot_multiplier")


class ConfigError(ValueError):
    pass


def load_config(path: str | Path) -> tuple[ExperimentConfig, dict]:
    """Parse a JSON config; returns the experiment config and the extra keys."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    return config_from_dict(doc)


def config_from_dict(doc: dict) -> tuple[ExperimentConfig, dict]:
    unknown = sorted(set(doc) - _CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config key '{unknown[0]}'")
    for key in ("family", "scenario", "l_values", "p_values"):
        if key not in doc:
            raise ConfigError(f"missing config key '{key}'")
    for i, p in enumerate(doc["p_values"]):
        if not isinstance(p, (int, float)) or not 0.0 <= p <= 1.0:
            raise ConfigError(f"config key 'p_values' entry {i} = {p!r} is not a probability")
    if doc.get("q") is not None and not 0.0 <= doc["q"] <= 1.0:
        raise ConfigError(f"config key 'q' = {doc['q']!r} is not a probability")
    extra = {k: doc[k] for k in ("output", "verbosity") if k in doc}
    fields = {k: v for k, v in doc.items() if k not in extra}
    if "p_values" in fields:
        fields["p_values"] = tuple(fields["p_values"])
    if "l_values" in fields:
        fields["l_values"] = tuple(fields["l_values"])
    try:
        cfg = ExperimentConfig(**fields)
    except (InvalidParameter, ValueError) as exc:
        key = _guess_key(str(exc), fields)
        raise ConfigError(f"config key '{key}': {exc}") from exc
    return cfg, extra


def _guess_key(message: str, fields: dict) -> str:
    lowered = message.lower()
    for key in sorted(fields, key=len, reverse=True):
        if key in lowered or key.replace("_", " ") in lowered:
            return key
    for key, hint in (("schedule", "schedule"), ("family", "family"), ("scenario", "scenario"),
                      ("p_values", "p value"), ("l_values", " l "), ("trials", "trials")):
        if hint in lowered:
            return key
    return "config"


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def results_csv(result: SweepResult) -> str:
    cfg = result.config
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for pt in sorted(result.points, key=lambda r: (r.l, r.p)):
        w.writerow([cfg.family.value, cfg.scenario.value, cfg.schedule.value, pt.l, pt.d,
                    f"{pt.p:.6g}", pt.trials, pt.failures, _fmt(pt.logical_rate),
                    _fmt(pt.ci_low), _fmt(pt.ci_high), cfg.master_seed])
    return buf.getvalue()


def _summary(pt: PointResult) -> str:
    return (f"l={pt.l} d={pt.d} p={pt.p:.6g}: {pt.failures}/{pt.trials} failed, "
            f"rate {pt.logical_rate:.4f} [{pt.ci_low:.4f}, {pt.ci_high:.4f}]")


def cmd_run(config_path: str, out_dir: Optional[str] = None, seed: Optional[int] = None,
            threads: int = 1) -> int:
    try:
        cfg, extra = load_config(config_path)
        if seed is not None:
            cfg = ExperimentConfig(**{**cfg.to_dict(), "master_seed": seed})
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = Path(out_dir or extra.get("output") or ".")
    out.mkdir(parents=True, exist_ok=True)
    quiet = extra.get("verbosity", 1) == 0
    result = run_sweep(cfg, workers=threads, progress=None if quiet else lambda pt: print(_summary(pt), flush=True))
    (out / "results.csv").write_text(results_csv(result))
    (out / "threshold.json").write_text(json.dumps(result.threshold.to_dict(), indent=2) + "\n")
    thr = result.threshold
    if not quiet:
        if thr.found:
            print(f"threshold p_c = {thr.p_c:.5f}, 95% interval {thr.ci}")
        else:
            print("no crossing in the swept range")
    return 0


def check_schedule(spec, name: str, schedule, report) -> None:
    """Schedule constraint checks plus the single-fault decoding sweep.

    The eight-step octagon ancilla cannot keep every fault within one qubit
    per cluster; its spread failures pass only when they all sit on octagon
    ancilla locations and the template has the minimum of two such fault
    positions per octagon.  The sweep gates only from l = 3: at l = 2 some
    single faults are beyond the code distance and the count is printed.
    """
    from .circuits import octagon_hook_count, solve_templates, validate_schedule
    from .decode import single_fault_sweep

    v = validate_schedule(spec, schedule)
    for cat in ("exclusivity", "determinism", "reproduction", "ordering"):
        msgs = v.failures.get(cat, [])
        report(f"schedule {name}: {cat}", not msgs, msgs[0] if msgs else "")
    spread = v.failures.get("fault_spread", [])
    if name == "8step" and spread:
        locs = schedule.locations()
        octs = schedule.octagon_ancillas
        stray = [k for k in v.spread_locations if not set(locs[k].qubits) & octs]
        tmpl = solve_templates("8step")
        hooks = (octagon_hook_count(tmpl["octZ"]), octagon_hook_count(tmpl["octX"]))
        report(f"schedule {name}: fault_spread", not stray and hooks == (2, 2),
               f"{len(stray)} spread failures off octagon ancillas, hooks {hooks}")
    else:
        report(f"schedule {name}: fault_spread", not spread, spread[0] if spread else "")
    sweep = single_fault_sweep(spec, schedule)
    if spec.l >= 3:
        report(f"single-fault sweep {name}", sweep.ok,
               f"{len(sweep.failures)} of {sweep.events} faults decoded wrongly, e.g. {sweep.failures[:1]}")
    else:
        print(f"INFO single-fault sweep {name}: {len(sweep.failures)} of {sweep.events} faults "
              f"decoded wrongly (not gated below l=3)", file=report.out)


class Reporter:
    def __init__(self, out):
        self.out = out
        self.failed: list[str] = []

    def __call__(self, name: str, ok: bool, detail: str = "") -> None:
        print(f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail and not ok else ""), file=self.out)
        if not ok:
            self.failed.append(name)


def cmd_verify(family: str, l: int, out=None) -> int:
    """Construction, metric, matching and schedule checks at one size."""
    from .circuits import build_schedule
    from .matching import (MatchingProblem, defect_node, matching_weight, mwpm, mwpm_bruteforce,
                           spatial_distance, spatial_distance_bfs)
    import numpy as np

    try:
        fam = Family.parse(family)
        spec = build_code(fam, l)
    except InvalidParameter as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = Reporter(out or sys.stdout)
    rep = verify_code(spec)
    report("code construction", rep.ok, "; ".join(rep.violations[:3]))
    for t in ("X", "Z"):
        ids = spec.check_ids(t)
        bad = [(a, b) for a in ids for b in ids
               if spatial_distance(spec, defect_node(spec, a), defect_node(spec, b))
               != spatial_distance_bfs(spec, defect_node(spec, a), defect_node(spec, b))]
        report(f"metric oracle ({t} checks)", not bad, f"pairs {bad[:3]}")
    rng = np.random.default_rng(0)
    ids = spec.check_ids("Z")
    mismatch = 0
    for _ in range(50):
        k = 2 * int(rng.integers(1, min(5, len(ids) // 2) + 1))
        nodes = [defect_node(spec, c) for c in rng.choice(ids, size=k, replace=False)]
        prob = MatchingProblem(nodes, lambda a, b: spatial_distance(spec, a, b))
        if matching_weight(prob, mwpm(prob)) != matching_weight(prob, mwpm_bruteforce(prob)):
            mismatch += 1
    report("matching oracle", mismatch == 0, f"{mismatch} instances differ from brute force")
    names = ("toric",) if fam is Family.TORIC else ("8step", "4step")
    for name in names:
        check_schedule(spec, name, build_schedule(spec, name), report)
    return 1 if report.failed else 0


def cmd_distance(family: str, l: int, w_max: int) -> int:
    try:
        spec = build_code(family, l)
        d = min_logical_weight(spec, w_max)
    except InvalidParameter as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 3
    if d is None:
        print(f"not found <= {w_max}")
        return 1
    print(d)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="c4toric", description="Toric and C4-toric code threshold experiments")
    ap.add_argument("--seed", type=int, default=None, help="override the config's master seed")
    ap.add_argument("--threads", type=int, default=1, help="worker processes for trial blocks")
    ap.add_argument("--out-dir", default=None, help="directory for results.csv and threshold.json")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a campaign from a JSON config")
    r.add_argument("config")
    v = sub.add_parser("verify", help="run the construction and schedule checks")
    v.add_argument("family")
    v.add_argument("l", type=int)
    d = sub.add_parser("distance", help="brute-force minimum logical weight")
    d.add_argument("family")
    d.add_argument("l", type=int)
    d.add_argument("w_max", type=int)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args.config, args.out_dir, args.seed, args.threads)
    if args.command == "verify":
        return cmd_verify(args.family, args.l)
    return cmd_distance(args.family, args.l, args.w_max)


if __name__ == "__main__":
    sys.exit(main())
