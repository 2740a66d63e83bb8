"""
Command-line front end.

    pcmdelay fit SPEC      fit the expansion, write <name>.pce.json
    pcmdelay compare SPEC  fit + PCM stats + Monte Carlo oracle, write CSV/JSON
    pcmdelay table [DIR]   comparison table over a directory of specs
    pcmdelay stats MODEL   sample a saved expansion

Exit codes: 0 ok, 1 every table row failed, 2 bad spec or usage,
3 collocation solve failure, 4 model evaluation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from .errors import (BindingError, DomainError, ExternalModelError, PlanningError,
                     SingularSystemError, SpecError)
from .montecarlo import input_truncations
from .pce import PceModel
from .problem import bundled_dir, load_spec, run_compare, run_fit, spec_to_dict

log = logging.getLogger("pcmdelay")

EXIT_OK, EXIT_ALL_FAILED, EXIT_SPEC, EXIT_SOLVE, EXIT_MODEL = 0, 1, 2, 3, 4

TABLE_COLUMNS = ["example", "mc_mean", "pcm_mean", "mean_err_pct",
                 "mc_sd", "pcm_sd", "sd_err_pct", "errors"]
COMPARISON_COLUMNS = ["example", "mc_mean", "pcm_mean", "mean_err_pct", "mc_sd",
                      "pcm_sd", "sd_err_pct", "pdf_max_gap", "pdf_peak",
                      "mean_err_kind", "sd_err_kind"]


def _exit_code(exc):
    if isinstance(exc, (SpecError, BindingError)):
        return EXIT_SPEC
    if isinstance(exc, (SingularSystemError, PlanningError)):
        return EXIT_SOLVE
    if isinstance(exc, (ExternalModelError, DomainError)):
        return EXIT_MODEL
    return None


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def write_csv(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    Path(path).write_text(buf.getvalue(), newline="")


def write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=False) + "\n")


def _load(args):
    spec = load_spec(args.spec)
    return spec.override(
        degree=getattr(args, "degree", None),
        seed=args.seed,
        mc_samples=getattr(args, "mc_samples", None),
        timeout_ms=args.timeout_ms,
    )


def _write_fit(spec, pce, out, emit_plan):
    write_json(out / f"{spec.name}.pce.json", pce.to_dict())
    if emit_plan:
        plan = dict(pce.fit_meta["plan"])
        plan["rcond"] = pce.fit_meta["rcond"]
        plan["solve_path"] = pce.fit_meta["solve_path"]
        plan["input_names"] = [s.name for s in spec.inputs]
        write_json(out / f"{spec.name}.plan.json", plan)


def cmd_fit(args):
    spec = _load(args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    pce = run_fit(spec)
    _write_fit(spec, pce, out, args.emit_plan)
    print(f"{spec.name}: {len(pce.terms)} model evaluations, solve path "
          f"{pce.fit_meta['solve_path']}, rcond {pce.fit_meta['rcond']:.3g}")
    return EXIT_OK


def _comparison_values(row):
    d = row.to_dict()
    return [d[c] for c in COMPARISON_COLUMNS]


def cmd_compare(args):
    spec = _load(args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    res = run_compare(spec)
    _write_fit(spec, res.pce, out, args.emit_plan)
    write_csv(out / f"{spec.name}.comparison.csv", COMPARISON_COLUMNS,
              [_comparison_values(res.row)])
    write_json(out / f"{spec.name}.stats.json", {
        "spec": spec_to_dict(spec),
        "pcm": res.pcm.to_dict(),
        "mc": res.mc.to_dict(),
        "comparison": res.row.to_dict(),
    })
    write_csv(out / f"{spec.name}.pdf_pcm.csv", ["x", "density"], res.pcm.pdf_curve.tolist())
    write_csv(out / f"{spec.name}.pdf_mc.csv", ["x", "density"], res.mc.pdf_curve.tolist())
    r = res.row
    print(f"{spec.name}: mean MC {r.mc_mean:.4f} PCM {r.pcm_mean:.4f} ({r.mean_err_pct:+.3f}%), "
          f"SD MC {r.mc_sd:.4f} PCM {r.pcm_sd:.4f} ({r.sd_err_pct:+.3f}%)")
    return EXIT_OK


def cmd_table(args):
    spec_dir = Path(args.spec_dir) if args.spec_dir else Path(str(bundled_dir()))
    paths = sorted(spec_dir.glob("*.json")) if spec_dir.is_dir() else []
    if not paths:
        print(f"no spec files in {spec_dir}", file=sys.stderr)
        return EXIT_SPEC
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows, ok = [], 0
    for path in paths:
        try:
            spec = load_spec(path).override(seed=args.seed, mc_samples=args.mc_samples,
                                            timeout_ms=args.timeout_ms)
            r = run_compare(spec).row
        except Exception as exc:  # one bad spec must not sink the table
            if _exit_code(exc) is None:
                log.exception("unexpected failure on %s", path)
            rows.append([path.stem, "", "", "", "", "", "", f"{type(exc).__name__}: {exc}"])
            continue
        ok += 1
        rows.append([r.example, r.mc_mean, r.pcm_mean, r.mean_err_pct,
                     r.mc_sd, r.pcm_sd, r.sd_err_pct, ""])
        print(f"{r.example:28s} mean {r.mean_err_pct:+8.3f}%  sd {r.sd_err_pct:+8.3f}%")
    write_csv(out / "table.csv", TABLE_COLUMNS, rows)
    return EXIT_OK if ok else EXIT_ALL_FAILED


def cmd_stats(args):
    try:
        pce = PceModel.from_json(Path(args.model).read_text())
    except (OSError, ValueError, KeyError) as exc:
        raise SpecError(f"{args.model}: {exc}") from None
    seed = args.seed if args.seed is not None else pce.fit_meta.get("seed", 0)
    trunc = input_truncations(pce.input_specs, args.truncation)
    rep = pce.stats(args.samples, seed, trunc)
    print(json.dumps(rep.to_dict(), indent=2))
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="pcmdelay", description=__doc__.split("\n\n")[0].strip())
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, spec_arg=True):
        if spec_arg:
            sp.add_argument("spec", help="problem spec JSON")
        sp.add_argument("--seed", type=int, help="plan / sampling seed (MC uses seed+1)")
        sp.add_argument("--out-dir", default=".", help="where output files go")
        sp.add_argument("--timeout-ms", type=int, help="per-run timeout for external models")

    f = sub.add_parser("fit", help="fit the expansion")
    common(f)
    f.add_argument("--degree", type=int)
    f.add_argument("--emit-plan", action="store_true", help="also write <name>.plan.json")
    f.set_defaults(func=cmd_fit)

    c = sub.add_parser("compare", help="fit, then compare against Monte Carlo")
    common(c)
    c.add_argument("--degree", type=int)
    c.add_argument("--mc-samples", type=int, help="sample count for both PCM stats and MC")
    c.add_argument("--emit-plan", action="store_true")
    c.set_defaults(func=cmd_compare)

    t = sub.add_parser("table", help="comparison table over a spec directory")
    t.add_argument("spec_dir", nargs="?", help="directory of spec JSON files (default: bundled examples)")
    common(t, spec_arg=False)
    t.add_argument("--mc-samples", type=int)
    t.set_defaults(func=cmd_table)

    s = sub.add_parser("stats", help="sample a saved expansion")
    s.add_argument("model", help="<name>.pce.json")
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--seed", type=int)
    s.add_argument("--truncation", type=float, default=None,
                   help="srv truncation for inputs without their own")
    s.set_defaults(func=cmd_stats)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "degree", None) is not None and args.degree < 1:
        parser.error("--degree must be >= 1")
    try:
        return args.func(args)
    except Exception as exc:
        code = _exit_code(exc)
        if code is None:
            raise
        print(f"error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
