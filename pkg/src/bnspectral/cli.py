"""Command-line front-end.

Subcommands: spectrum, measures, collapse, analyze, baseline, selftest.
Exit codes: 0 success, 2 usage error, 3 input error, 4 arity cap exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .analysis import (
    BASELINE_MODES,
    BaselineSpec,
    baseline_curves,
    determinative_power,
    sensitivity_scatter,
    uncertainty_curve,
)
from .boolfn import (
    ArityCapError,
    BoolFn,
    ProductDist,
    indices_of,
    mask_of,
    relevant_variables,
    transform,
)
from .measures import (
    avg_sensitivity,
    cond_entropy,
    entropy_bounds,
    influence,
    influence_entropy_identity,
    independence_test,
    mi_influence_bound_check,
    mutual_information,
    output_entropy,
    unateness,
)
from .netlang import (
    NetParseError,
    collapse,
    collapsed_to_json,
    effective_inputs,
    localize,
    parse,
    parse_expression,
    references,
)
from .reports import (
    curve_csv,
    curve_svg,
    ranking_table,
    round12,
    scatter_csv,
    scatter_svg,
    write_json,
)
from .selftest import format_reports, run_selftest

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_CAP = 4


class InputError(ValueError):
    pass


def _function_from_args(args) -> BoolFn:
    if args.expr:
        expr = parse_expression(args.expr)
        names = references(expr)
        net = parse(("@inputs " + " ".join(names) + "\n" if names else "")
                    + f"f = {args.expr}\n")
        return localize(net, args.cap).nodes[0].fn
    if args.table_hex:
        if not args.labels:
            raise InputError("--table-hex requires --labels")
        labels = args.labels.split(",")
        return BoolFn.from_hex(args.table_hex, labels)
    raise InputError("provide --expr or --table-hex")


def _dist_for(labels: tuple[str, ...], p_spec: str | None) -> ProductDist:
    n = len(labels)
    if p_spec is None:
        return ProductDist.uniform(n)
    if p_spec.startswith("@"):
        by_name = {}
        for lineno, line in enumerate(Path(p_spec[1:]).read_text().splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace("=", " ").split()
            if len(parts) != 2:
                raise InputError(f"{p_spec[1:]}:{lineno}: expected 'name p'")
            by_name[parts[0]] = float(parts[1])
        missing = [name for name in labels if name not in by_name]
        if missing:
            raise InputError(f"missing probabilities for: {', '.join(missing)}")
        return ProductDist(tuple(by_name[name] for name in labels))
    values = [float(v) for v in p_spec.split(",")]
    if len(values) == 1:
        values = values * n
    if len(values) != n:
        raise InputError(f"got {len(values)} probabilities for {n} variables")
    return ProductDist(tuple(values))


def _mask_from_names(arg: str | None, labels: tuple[str, ...]) -> int:
    if arg is None:
        return (1 << len(labels)) - 1
    if arg.strip() == "":
        return 0
    try:
        return mask_of(labels.index(name) for name in arg.split(","))
    except ValueError as exc:
        raise InputError(f"unknown variable in --A: {exc}") from exc


def _subset_label(mask: int, labels: tuple[str, ...]) -> str:
    if mask == 0:
        return "{}"
    return "{" + ",".join(labels[i] for i in indices_of(mask)) + "}"


def cmd_spectrum(args) -> int:
    f = _function_from_args(args)
    d = _dist_for(f.labels, args.p)
    s = transform(f, d, cap=args.cap)
    order = sorted(range(1 << f.arity), key=lambda m: (bin(m).count("1"), m))
    if args.format == "json":
        rows = [{"mask": m, "subset": _subset_label(m, f.labels),
                 "degree": bin(m).count("1"), "coefficient": round12(s.coeff(m))}
                for m in order]
        print(json.dumps(rows, indent=2))
    else:
        print("mask,degree,subset,coefficient")
        for m in order:
            print(f"{m},{bin(m).count('1')},{_subset_label(m, f.labels)},{round12(s.coeff(m))!r}")
    return EXIT_OK


def cmd_measures(args) -> int:
    f = _function_from_args(args)
    d = _dist_for(f.labels, args.p)
    mask = _mask_from_names(args.A, f.labels)
    s = transform(f, d, cap=args.cap)
    bounds = entropy_bounds(f, d, mask)
    lhs = rhs = None
    if mask:
        lhs, rhs = mi_influence_bound_check(f, d, mask)
    prof = unateness(f)
    report = {
        "labels": list(f.labels),
        "table_hex": f.to_hex(),
        "relevant": [f.labels[i] for i in indices_of(relevant_variables(f))],
        "A": _subset_label(mask, f.labels),
        "influence": {f.labels[i]: influence(f, d, i) for i in range(f.arity)},
        "avg_sensitivity": avg_sensitivity(f, d),
        "avg_sensitivity_A": avg_sensitivity(f, d, mask),
        "output_entropy": output_entropy(f, d),
        "cond_entropy_A": cond_entropy(f, d, mask),
        "mutual_information_A": mutual_information(f, d, mask),
        "entropy_bounds_A": {"lower": bounds.lower, "exact": bounds.exact,
                             "upper": bounds.upper},
        "sensitivity_mi_bound_A": None if lhs is None else {"lhs": lhs, "rhs": rhs},
        "influence_entropy_pairs": {
            f.labels[i]: list(influence_entropy_identity(f, d, i)) for i in range(f.arity)
        },
        "independent_of_A": independence_test(s, mask),
        "unate": {"is_unate": prof.is_unate,
                  "polarity": {f.labels[i]: prof.polarity[i] for i in range(f.arity)}},
    }
    from .reports import _rounded

    print(json.dumps(_rounded(report), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_collapse(args) -> int:
    net = parse(Path(args.network).read_text())
    c = collapse(net, cap=args.cap)
    payload = collapsed_to_json(c)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_json(out / "collapsed.json", payload)
        print(f"wrote {out / 'collapsed.json'}")
    else:
        print(json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_OK


def _network_dist(c, p_spec: str | None) -> ProductDist:
    return _dist_for(tuple(c.inputs), p_spec)


def cmd_analyze(args) -> int:
    path = Path(args.network)
    text = path.read_text()
    net = parse(text)
    c = collapse(net, cap=args.cap)
    d = _network_dist(c, args.p)
    ranking = determinative_power(c, d, threads=args.threads)
    L = args.L if args.L is not None else len(ranking.tau)
    curve = uncertainty_curve(c, d, ranking.tau, L)
    scatter = sensitivity_scatter(c, d, threads=args.threads)
    baseline = None
    if args.baseline:
        spec = BaselineSpec(mode=args.baseline, trials=args.trials, seed=args.seed)
        baseline = baseline_curves(net, spec, d, L, cap=args.cap)

    eff, non_eff = effective_inputs(c)
    report = {
        "metadata": {
            "tool": "bnspectral",
            "version": __version__,
            "network_file": str(args.network),
            "dataset_sha256": hashlib.sha256(text.encode()).hexdigest(),
            "seed": args.seed,
            "distribution": {"kind": "uniform"} if args.p is None else
                            {"kind": "product", "p": {name: round12(p) for name, p
                                                      in zip(c.inputs, d.probs)}},
            "counts": {
                "inputs": len(c.inputs),
                "nodes": len(c.nodes),
                "effective_inputs": len(eff),
                "non_effective_inputs": len(non_eff),
                "constants": len(c.constants),
            },
            "cap": args.cap,
            "threads": args.threads,
            "L": L,
        },
        "d_values": dict(ranking.d_values),
        "tau": list(ranking.tau),
        "curve": [[l, v] for l, v in curve.points],
        "baseline": None if baseline is None else {
            "mode": baseline.mode,
            "trials": baseline.trials,
            "seed": baseline.seed,
            "resampled": baseline.resampled,
            "mean": list(baseline.mean.values),
            "stddev": list(baseline.stddev),
        },
        "scatter": [
            {"name": r.name, "in_degree": r.in_degree,
             "avg_sensitivity": r.avg_sensitivity, "prob_one": r.prob_one,
             "poincare_lower": r.poincare_lower}
            for r in scatter
        ],
        "non_effective_inputs": list(non_eff),
    }

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_json(out / "report.json", report)
    (out / "curve.csv").write_text(curve_csv(curve, baseline))
    (out / "scatter.csv").write_text(scatter_csv(scatter))
    if args.svg:
        (out / "curve.svg").write_text(curve_svg(curve, baseline))
        (out / "scatter.svg").write_text(scatter_svg(scatter))
    print(ranking_table(ranking, args.top))
    print(f"\nwrote report.json, curve.csv, scatter.csv to {out}")
    return EXIT_OK


def cmd_baseline(args) -> int:
    path = Path(args.network)
    net = parse(path.read_text())
    c = collapse(net, cap=args.cap)
    d = _network_dist(c, args.p)
    ranking = determinative_power(c, d, threads=args.threads)
    L = args.L if args.L is not None else len(ranking.tau)
    curve = uncertainty_curve(c, d, ranking.tau, L)
    spec = BaselineSpec(mode=args.mode, trials=args.trials, seed=args.seed)
    baseline = baseline_curves(net, spec, d, L, cap=args.cap)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "baseline.csv").write_text(curve_csv(curve, baseline))
    write_json(out / "baseline.json", {
        "mode": baseline.mode,
        "trials": baseline.trials,
        "seed": baseline.seed,
        "resampled": baseline.resampled,
        "true_curve": [[l, v] for l, v in curve.points],
        "mean": list(baseline.mean.values),
        "stddev": list(baseline.stddev),
    })
    print(f"wrote baseline.csv, baseline.json to {out}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    reports = run_selftest(trials=args.trials, seed=args.seed)
    print(format_reports(reports))
    return EXIT_OK if all(r.passed for r in reports) else 1


def _add_function_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--expr", help="inline expression, e.g. 'x1 AND x2'")
    sub.add_argument("--table-hex", help="little-endian truth table hex")
    sub.add_argument("--labels", help="comma list of variable names (with --table-hex)")
    sub.add_argument("--p", help="probabilities: comma list, single value, or @file")


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--cap", type=int, default=None, help="arity cap override")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bnspectral",
                                 description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    subs = ap.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("spectrum", help="coefficients of a single function")
    _add_function_args(sp)
    _add_common(sp)
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.set_defaults(fn=cmd_spectrum)

    sm = subs.add_parser("measures", help="influence/entropy/MI report for a function")
    _add_function_args(sm)
    _add_common(sm)
    sm.add_argument("--A", help="comma list of conditioning variables (default: all)")
    sm.set_defaults(fn=cmd_measures)

    sc = subs.add_parser("collapse", help="collapse a network file to input-layer tables")
    sc.add_argument("network")
    sc.add_argument("--out", help="output directory (default: print JSON)")
    _add_common(sc)
    sc.set_defaults(fn=cmd_collapse)

    sa = subs.add_parser("analyze", help="full network analysis with reports")
    sa.add_argument("network")
    sa.add_argument("--p", help="probabilities: comma list, single value, or @file")
    sa.add_argument("--L", type=int, default=None, help="curve length (default: all inputs)")
    sa.add_argument("--baseline", choices=list(BASELINE_MODES), default=None)
    sa.add_argument("--trials", type=int, default=25)
    sa.add_argument("--top", type=int, default=10)
    sa.add_argument("--out", default="out")
    sa.add_argument("--svg", action="store_true", help="also write SVG figures")
    _add_common(sa)
    sa.set_defaults(fn=cmd_analyze)

    sb = subs.add_parser("baseline", help="randomized baseline curves for a network")
    sb.add_argument("network")
    sb.add_argument("--p", help="probabilities: comma list, single value, or @file")
    sb.add_argument("--mode", choices=list(BASELINE_MODES), required=True)
    sb.add_argument("--trials", type=int, default=25)
    sb.add_argument("--L", type=int, default=None)
    sb.add_argument("--out", default="out")
    _add_common(sb)
    sb.set_defaults(fn=cmd_baseline)

    st = subs.add_parser("selftest", help="randomized identity suite")
    st.add_argument("--trials", type=int, default=1000)
    st.add_argument("--seed", type=int, default=0)
    st.set_defaults(fn=cmd_selftest)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ArityCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (NetParseError, InputError, FileNotFoundError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
