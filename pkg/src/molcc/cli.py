"""Command-line front end: featurize, train, infer and decode-verify."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .chemgraph import ChemGraphError, write_sdf
from .features import (
    DatasetError,
    build_dictionary,
    featurize_all,
    read_dataset,
    read_dictionary_json,
    read_feature_csv,
    read_values_csv,
    write_dictionary_json,
    write_feature_csv,
    write_skip_report,
)
from .milp.build import build_milp
from .milp.decode import decode_solution
from .milp.model import MilpBuildError, read_solution_text
from .milp.spec import SeedTree, load_specification, spec_from_dictionary
from .milp.verify import report_json, verify_solution
from .regress import DEFAULT_LAMBDA_GRID, Hyperplane, RegressionError, cross_validate, lasso_fit, select_lambda
from .twolayer import OutOfDictionaryError

log = logging.getLogger("molcc")

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2


class CliError(Exception):
    pass


def _need(path, what):
    if path is None:
        raise CliError(f"--{what} is required")
    p = Path(path)
    if not p.is_file():
        raise CliError(f"{what} file not found: {path}")
    return p


# ---------------------------------------------------------------- featurize


def cmd_featurize(args) -> int:
    sdf = _need(args.sdf, "sdf")
    values = _need(args.values, "values")
    if args.dict is None or args.features is None:
        raise CliError("--dict and --features output paths are required")
    elements = args.elements.split(",") if args.elements else None
    ds = read_dataset(sdf, values, args.rho, args.cmin, args.cmax, elements)
    dictionary = build_dictionary(ds.molecules, args.rho, args.cmin, args.cmax, use_cc=args.cc == "on")
    fm = featurize_all(ds.molecules, dictionary)
    write_dictionary_json(dictionary, args.dict)
    write_feature_csv(fm, args.features)
    skips = args.skipped or str(Path(args.features).with_suffix(".skipped.csv"))
    write_skip_report(ds.skipped, skips)
    print(f"molecules: {len(fm.ids)}  skipped: {len(ds.skipped)}  columns: {len(fm.header)}")
    return EXIT_OK


# ---------------------------------------------------------------- train


def _grid(text):
    if text in (None, "default"):
        return list(DEFAULT_LAMBDA_GRID)
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise CliError(f"bad --lambda-grid {text!r}") from None


def cmd_train(args) -> int:
    fm = read_feature_csv(_need(args.features, "features"))
    vals_path = _need(args.values, "values")
    values = read_values_csv(vals_path.read_text())
    missing = [i for i in fm.ids if i not in values]
    if missing:
        raise CliError(f"no value for {len(missing)} feature rows, e.g. {missing[0]!r}")
    if args.model is None:
        raise CliError("--model output path is required")
    X = np.array(fm.rows, dtype=float)
    y = np.array([values[i] for i in fm.ids], dtype=float)
    if args.lam is not None:
        lam = args.lam
        report = cross_validate(X, y, lam, seed=args.seed)
        grid = None
    else:
        grid = _grid(args.lambda_grid)
        lam, report, _ = select_lambda(X, y, grid, seed=args.seed)
    h = lasso_fit(X, y, lam, column_names=fm.header)
    h.meta.update(
        {
            "seed": args.seed,
            "lambda_grid": grid,
            "cv_median_r2": report.median_r2,
            "n_train": len(fm.ids),
            "train_r2": float(1 - ((y - h.predict(X)) ** 2).sum() / ((y - y.mean()) ** 2).sum()),
        }
    )
    Path(args.model).write_text(h.to_json())
    rpath = args.report or str(Path(args.model).with_suffix(".cv.json"))
    Path(rpath).write_text(report.to_json())
    print(f"lambda: {lam:g}  median CV R2: {report.median_r2:.6f}  nonzero weights: {int(np.count_nonzero(h.weights))}")
    return EXIT_OK


# ---------------------------------------------------------------- infer


def _load_inputs(args):
    hyper = Hyperplane.from_json(_need(args.model, "model").read_text())
    dictionary = read_dictionary_json(args.dict) if args.dict else None
    if args.spec:
        spec = load_specification(_need(args.spec, "spec"), args.seed_tree)
    else:
        if dictionary is None or args.seed_tree is None:
            raise CliError("give --spec, or --dict together with --seed-tree")
        tree = SeedTree.from_obj(json.loads(_need(args.seed_tree, "seed-tree").read_text()))
        if args.ylb is None or args.yub is None:
            raise CliError("--ylb and --yub are required without --spec")
        spec = spec_from_dictionary(dictionary, tree, args.ylb, args.yub)
    if args.ylb is not None:
        spec.y_lb = args.ylb
    if args.yub is not None:
        spec.y_ub = args.yub
    if spec.y_lb > spec.y_ub:
        raise CliError(f"target range is empty: y_lb={spec.y_lb} > y_ub={spec.y_ub}")
    return spec, hyper, dictionary


def cmd_infer(args) -> int:
    spec, hyper, dictionary = _load_inputs(args)
    if args.lp is None:
        raise CliError("--lp output path is required")
    m = build_milp(spec, hyper, dictionary, objective=args.objective)
    m.write(args.lp, args.varmap)
    fams = " ".join(f"{k}={v}" for k, v in sorted(m.family_counts().items()))
    print(f"#V={m.n_vars} #C={m.n_constraints}")
    print(f"constraints by family: {fams}")
    return EXIT_OK


# ---------------------------------------------------------------- decode-verify


def cmd_decode_verify(args) -> int:
    spec, hyper, dictionary = _load_inputs(args)
    m = build_milp(spec, hyper, dictionary)
    sol = read_solution_text(_need(args.solution, "solution").read_text(), known=m.variables)
    decoded = decode_solution(sol, m, spec)
    for line in decoded.trace:
        log.info("%s", line)
    report = verify_solution(decoded.graph, spec, hyper, dictionary, sol)
    report["trace"] = decoded.trace
    if args.out:
        Path(args.out).write_text(write_sdf([decoded.graph]))
    rpath = args.report or (str(Path(args.out).with_suffix(".report.json")) if args.out else None)
    if rpath:
        Path(rpath).write_text(report_json(report))
    failed = [c["check"] for c in report["checks"] if not c["passed"]]
    if failed:
        print(f"verification failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_VERIFY
    print(f"verified: {len(report['checks'])} checks passed, {decoded.graph.n_heavy} heavy atoms")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="molcc", description="Descriptor-based molecular property models and inverse MILP generation.")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    def shape(sp):
        sp.add_argument("--rho", type=int, default=2)
        sp.add_argument("--cmin", type=int, default=4)
        sp.add_argument("--cmax", type=int, default=6)

    f = sub.add_parser("featurize", help="SDF + values -> dictionary JSON and feature CSV")
    f.add_argument("--sdf")
    f.add_argument("--values")
    shape(f)
    f.add_argument("--cc", choices=("on", "off"), default="on")
    f.add_argument("--elements", help="comma-separated allowed element labels, e.g. C,N,O,S(2)")
    f.add_argument("--dict")
    f.add_argument("--features")
    f.add_argument("--skipped", help="skip report CSV (default: next to the feature CSV)")
    f.set_defaults(func=cmd_featurize)

    t = sub.add_parser("train", help="fit a Lasso hyperplane with repeated 5-fold CV")
    t.add_argument("--features")
    t.add_argument("--values")
    t.add_argument("--lambda", dest="lam", type=float)
    t.add_argument("--lambda-grid", help="comma-separated values or 'default'")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--model")
    t.add_argument("--report", help="CV report JSON (default: next to the model)")
    t.set_defaults(func=cmd_train)

    for name, func, helptext in (
        ("infer", cmd_infer, "write the inverse MILP as an LP file"),
        ("decode-verify", cmd_decode_verify, "decode a solver solution and verify it"),
    ):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("--spec")
        s.add_argument("--seed-tree")
        s.add_argument("--model")
        s.add_argument("--dict")
        s.add_argument("--ylb", type=float)
        s.add_argument("--yub", type=float)
        if name == "infer":
            s.add_argument("--lp")
            s.add_argument("--varmap")
            s.add_argument("--objective", choices=("feas", "max", "min"), default="feas")
        else:
            s.add_argument("--solution")
            s.add_argument("--out", help="decoded SDF")
            s.add_argument("--report", help="verification report JSON")
        s.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (CliError, DatasetError, ChemGraphError, MilpBuildError, RegressionError, OutOfDictionaryError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
