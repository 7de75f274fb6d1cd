"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 complexity overflow,
4 analytic precondition failure (e.g. a spectrum that is not trace class).
"""

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import complexity as cx
from . import sobolev as sb
from . import tractability as tr
from . import weights as wt
from .errors import (
    ComplexityOverflow,
    DegenerateProblem,
    Divergent,
    IBCError,
    NegativeVariance,
    NotTraceClass,
    TrivialSpectrum,
    Undecidable,
)
from .spectrum import Finite, spectrum_from_json
from .tensor_enum import MAX_NODES, Criterion, ProblemSpec, SymmetrySpec

EXIT_OK, EXIT_INPUT, EXIT_OVERFLOW, EXIT_ANALYTIC = 0, 2, 3, 4
_ANALYTIC = (NotTraceClass, TrivialSpectrum, DegenerateProblem, Undecidable, Divergent, NegativeVariance)


class InputError(IBCError):
    pass


# -- parsing helpers --------------------------------------------------------------


def _load_json(text):
    """Inline JSON or a path to a JSON file."""
    text = text.strip()
    if text[:1] in "{[" or text[:1].isdigit() or text[:1] in "-.":
        return json.loads(text)
    return json.loads(Path(text).read_text())


def parse_dims(text):
    """``"A..B"``, ``"A"`` or ``"A,B,C"``."""
    try:
        if ".." in text:
            a, b = text.split("..")
            dims = list(range(int(a), int(b) + 1))
        else:
            dims = [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise InputError(f"bad --dims {text!r}") from exc
    if not dims or min(dims) < 1:
        raise InputError("dimensions must be >= 1")
    return dims


def parse_floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"bad number list {text!r}") from exc


def parse_ints(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"bad integer list {text!r}") from exc


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".12g")
    if isinstance(v, (tuple, list)):
        return " ".join(str(x) for x in v)
    return str(v)


def emit(rows, header, args):
    """Write ``rows`` (lists aligned with ``header``) as CSV or JSON."""
    if args.format == "json":
        recs = [dict(zip(header, r)) for r in rows]
        text = json.dumps(recs, indent=2, default=_json_default) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) for v in r])
        text = buf.getvalue()
    _write(text, args)


def _json_default(o):
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(type(o))


def _write(text, args):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _grid(fn, cells, jobs):
    """Evaluate ``fn`` on each cell; output order follows ``cells``."""
    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, cells))
    return [fn(c) for c in cells]


# -- problem assembly -----------------------------------------------------------------


def _spec_json(args):
    if not args.spec:
        raise InputError("--spec is required")
    obj = _load_json(args.spec)
    if "family" in obj:
        obj = {"spectrum": obj}
    return obj


def _symmetry(args, obj, d):
    choice = args.symmetry or [obj.get("symmetry", "entire")]
    if isinstance(choice[0], dict):
        return SymmetrySpec.from_json(choice[0], d)
    if choice[0] == "groups":
        if len(choice) != 2:
            raise InputError("--symmetry groups needs a FILE")
        return SymmetrySpec.from_json(_load_json(choice[1]), d)
    if len(choice) != 1:
        raise InputError("unexpected --symmetry arguments")
    return SymmetrySpec.from_json(choice[0], d)


def _scaling(args, obj):
    raw = args.scaling if args.scaling is not None else obj.get("scaling")
    if raw is None:
        return None
    if isinstance(raw, str):
        raw = _load_json(raw)
    if isinstance(raw, (int, float)):
        return tr.Constant(float(raw))
    return tr.scaling_from_json(raw)


def build_problem(args, obj, d):
    spectrum = spectrum_from_json(obj["spectrum"])
    fam = _scaling(args, obj)
    s = 1.0 if fam is None else fam.value(d, spectrum.lambda_1)
    criterion = args.criterion or obj.get("criterion", "abs")
    return ProblemSpec(spectrum, d, s, _symmetry(args, obj, d), Criterion.parse(criterion))


def _dims(args, obj):
    if args.dims:
        return parse_dims(args.dims)
    if "d" in obj:
        return [int(obj["d"])]
    raise InputError("--dims is required")


# -- subcommands ------------------------------------------------------------------------


def cmd_complexity(args):
    obj = _spec_json(args)
    dims = _dims(args, obj)
    epss = parse_floats(args.epsilons)
    problems = {d: build_problem(args, obj, d) for d in dims}
    cells = [(d, e) for d in dims for e in epss]

    def run(cell):
        d, e = cell
        try:
            return cx.info_complexity(problems[d], e, args.max_nodes), False
        except ComplexityOverflow:
            return None, True

    results = _grid(run, cells, args.jobs)
    rows = [
        [d, e, problems[d].criterion.value, n, over] for (d, e), (n, over) in zip(cells, results)
    ]
    emit(rows, ["d", "eps", "criterion", "n", "overflow"], args)
    if any(o for _, o in results) and not args.allow_overflow:
        return EXIT_OVERFLOW
    return EXIT_OK


def cmd_error(args):
    obj = _spec_json(args)
    dims = _dims(args, obj)
    ns = parse_ints(args.n)
    problems = {d: build_problem(args, obj, d) for d in dims}
    if args.plan:
        rows = []
        for d in dims:
            for rank, (idx, norm) in enumerate(cx.optimal_algorithm_plan(problems[d], max(ns)), 1):
                rows.append([d, rank, idx, norm])
        emit(rows, ["d", "rank", "index", "normalization"], args)
        return EXIT_OK
    cells = [(d, n) for d in dims for n in ns]
    if args.avg:
        fn = lambda c: cx.avg_tail_error(problems[c[0]], c[1], args.tol)  # noqa: E731
        header = ["d", "n", "avg_tail_error"]
        rows = [[d, n, v] for (d, n), v in zip(cells, _grid(fn, cells, args.jobs))]
    else:
        fn = lambda c: cx.minimal_error(problems[c[0]], c[1])  # noqa: E731
        header = ["d", "n", "criterion", "error", "initial_error"]
        vals = _grid(fn, cells, args.jobs)
        rows = [
            [d, n, problems[d].criterion.value, v, cx.initial_error(problems[d])]
            for (d, n), v in zip(cells, vals)
        ]
    emit(rows, header, args)
    return EXIT_OK


def cmd_classify(args):
    obj = _spec_json(args)
    spectrum = spectrum_from_json(obj["spectrum"])
    criterion = Criterion.parse(args.criterion or obj.get("criterion", "abs"))
    growth = None
    if args.growth:
        growth = tr.growth_from_json(_load_json(args.growth))
    elif args.symmetry:
        growth = tr.growth_from_json(args.symmetry[0])
    elif "growth" in obj:
        growth = tr.growth_from_json(obj["growth"])
    scaling = _scaling(args, obj)
    if growth is not None and growth.kind == "antisym":
        verdict = tr.classify_antisymmetric(spectrum, growth, criterion)
    elif growth is not None and growth.kind == "sym":
        verdict = tr.classify_symmetric(spectrum, growth, criterion)
    elif scaling is not None:
        verdict = tr.classify_scaled(spectrum, scaling, criterion)
    else:
        verdict = tr.classify_unscaled(spectrum, criterion)
    rec = verdict.to_json()
    if args.format == "csv":
        emit(
            [[rec["class"], rec["rule"], rec["implied"], rec["excluded"], rec["spt_exponent"]]],
            ["class", "rule", "implied", "excluded", "spt_exponent"],
            args,
        )
    else:
        _write(json.dumps(rec, indent=2) + "\n", args)
    return EXIT_OK


def cmd_rkhs(args):
    rows = []
    if args.moment:
        k, p = int(args.moment[0]), float(args.moment[1])
        if args.mc:
            est, se = sb.cube_moment(k, p, "montecarlo", args.mc, args.seed)
        else:
            est, se = sb.cube_moment(k, p, "exact"), 0.0
        rows.append(["moment", k, p, est, se])
    if args.block_size:
        p, l = float(args.block_size[0]), float(args.block_size[1])
        rows.append(["block_size", p, l, sb.lp_block_size(p, l), None])
    if args.gammas:
        gammas = parse_floats(args.gammas)
        if args.linfty is not None:
            rows.append(["linfty_bound", args.linfty, args.tau, sb.linfty_tail_bound(gammas, args.linfty, args.tau), None])
        else:
            kernel = sb.KernelSpec(args.kernel, gammas)
            rule = sb.CubatureRule.from_csv(args.rule) if args.rule else sb.CubatureRule.empty(len(gammas))
            err = sb.qmc_worst_case_error(kernel, rule, args.quad_tol)
            rows.append(["qmc_error", len(gammas), rule.n, err, None])
    if not rows:
        raise InputError("nothing to do: give --gammas, --moment or --block-size")
    emit(rows, ["quantity", "arg1", "arg2", "value", "stderr"], args)
    return EXIT_OK


def cmd_bounds(args):
    weights = wt.weights_from_json(_load_json(args.weights))
    if args.wt is not None:
        emit([[args.wt, wt.wt_criterion(weights, args.wt)]], ["kappa", "weakly_tractable"], args)
        return EXIT_OK
    dims = parse_dims(args.dims)
    a, b, t = args.a, args.b, args.t
    rows = []
    for d in dims:
        s, _ = wt.partition_blocks(weights, d)
        row = [d, s, wt.lower_bound_complexity(weights, d), wt.smooth_lower_bound(weights, d)]
        if args.eps is not None:
            ub, tau = wt.upper_bound_grid_min(weights, d, args.eps, t, a, b)
            row += [args.eps, ub, tau]
        rows.append(row)
    header = ["d", "s", "lower_bound", "smooth_lower_bound"]
    if args.eps is not None:
        header += ["eps", "upper_bound", "tau"]
    emit(rows, header, args)
    return EXIT_OK


def _toy_spectrum(example, beta, eps_min):
    if example == "1":
        return Finite([1.0, 1.0])
    if example == "2":
        return Finite([1.0] * 5)
    # lambda_1 = 1, lambda_{j+1} = j^-beta; entries <= eps^2 never contribute
    # to a count at eps because every factor is at most 1
    vals = [1.0]
    j = 1
    while j ** (-beta) > eps_min**2:
        vals.append(j ** (-beta))
        j += 1
    return Finite(vals)


def cmd_toy(args):
    dims = parse_dims(args.dims)
    epss = parse_floats(args.epsilons)
    if args.example == "scaled":
        spec = Finite([1.0, 1.0])
        fam = tr.GeometricScale(args.r)
        cells = [(d, e) for d in dims for e in epss]

        def run(cell):
            d, e = cell
            base = ProblemSpec(spec, d)
            return [
                d,
                e,
                cx.info_complexity(base, e, args.max_nodes),
                cx.info_complexity(base.with_(scaling=fam.value(d, 1.0)), e, args.max_nodes),
                cx.info_complexity(base.with_(scaling=fam.value(d, 1.0), criterion="norm"), e, args.max_nodes),
            ]

        rows = _grid(run, cells, args.jobs)
        emit(rows, ["d", "eps", "n_unscaled", "n_scaled", "n_scaled_norm"], args)
        return EXIT_OK
    if args.example not in ("1", "2", "3"):
        raise InputError(f"unknown toy example {args.example!r}")
    spec = _toy_spectrum(args.example, args.beta, min(epss))
    cells = [(d, e) for d in dims for e in epss]

    def run(cell):
        d, e = cell
        out = [d, e]
        for sym in (SymmetrySpec.entire(d), SymmetrySpec.full_sym(d), SymmetrySpec.full_antisym(d)):
            try:
                out.append(cx.info_complexity(ProblemSpec(spec, d, symmetry=sym), e, args.max_nodes))
            except ComplexityOverflow:
                out.append(None)
        return out

    rows = _grid(run, cells, args.jobs)
    emit(rows, ["d", "eps", "n_ent", "n_sym", "n_asy"], args)
    if any(v is None for r in rows for v in r) and not args.allow_overflow:
        return EXIT_OVERFLOW
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), help="default csv (json for classify)")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--jobs", type=int, default=1, help="worker threads for grid cells")
    common.add_argument("--seed", type=int, default=0)

    problem = argparse.ArgumentParser(add_help=False)
    problem.add_argument("--spec", help="problem JSON (inline or file)")
    problem.add_argument("--dims", help="A..B or comma list")
    problem.add_argument("--criterion", choices=("abs", "norm"))
    problem.add_argument(
        "--symmetry", nargs="+", metavar="MODE", help="entire | full-sym | full-antisym | groups FILE"
    )
    problem.add_argument("--scaling", help="number or scaling family JSON")

    p = argparse.ArgumentParser(prog="ibctensor", description="Tensor product problem complexity tools.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("complexity", parents=[common, problem], help="information complexity on a grid")
    c.add_argument("--epsilons", default="0.5")
    c.add_argument("--allow-overflow", action="store_true")
    c.add_argument("--max-nodes", type=int, default=MAX_NODES)
    c.set_defaults(func=cmd_complexity)

    e = sub.add_parser("error", parents=[common, problem], help="minimal and average-case errors")
    e.add_argument("--n", default="0", help="comma list of information budgets")
    e.add_argument("--avg", action="store_true", help="average-case tail error")
    e.add_argument("--tol", type=float, default=1e-12)
    e.add_argument("--plan", action="store_true", help="dump the optimal algorithm's index list")
    e.set_defaults(func=cmd_error)

    k = sub.add_parser("classify", parents=[common, problem], help="tractability verdict")
    k.add_argument("--growth", help="symmetry growth JSON")
    k.set_defaults(func=cmd_classify, default_format="json")

    r = sub.add_parser("rkhs", parents=[common], help="Sobolev kernels, cubature errors, cube moments")
    r.add_argument("--kernel", choices=("anchored_min", "unanchored_cosh_sinh"), default="anchored_min")
    r.add_argument("--gammas", help="comma list of coordinate weights")
    r.add_argument("--rule", help="cubature CSV (last column weight); empty rule if omitted")
    r.add_argument("--quad-tol", type=float, default=1e-12)
    r.add_argument("--linfty", type=int, help="n for the L_infinity tail bound")
    r.add_argument("--tau", type=float, default=0.75)
    r.add_argument("--moment", nargs=2, metavar=("K", "P"))
    r.add_argument("--mc", type=int, help="Monte Carlo sample count for --moment")
    r.add_argument("--block-size", nargs=2, metavar=("P", "L"))
    r.set_defaults(func=cmd_rkhs)

    b = sub.add_parser("bounds", parents=[common], help="product-weight complexity bounds")
    b.add_argument("--weights", required=True, help="weight family JSON")
    b.add_argument("--dims", default="1..10")
    b.add_argument("--eps", type=float)
    b.add_argument("--a", type=float, default=wt.PRESET_SMOOTH[0])
    b.add_argument("--b", type=float, default=wt.PRESET_SMOOTH[1])
    b.add_argument("--t", type=float, default=wt.PRESET_SMOOTH[2])
    b.add_argument("--wt", type=float, metavar="KAPPA", help="weak tractability criterion")
    b.set_defaults(func=cmd_bounds)

    t = sub.add_parser("toy", parents=[common], help="preset toy tables")
    t.add_argument("--example", default="1", help="1, 2, 3 or scaled")
    t.add_argument("--dims", default="1..12")
    t.add_argument("--epsilons", default="0.5")
    t.add_argument("--beta", type=float, default=1.0, help="decay of example 3")
    t.add_argument("--r", type=float, default=0.9, help="s_d = r^d for the scaled preset")
    t.add_argument("--allow-overflow", action="store_true")
    t.add_argument("--max-nodes", type=int, default=10**7)
    t.set_defaults(func=cmd_toy)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = getattr(args, "default_format", "csv")
    try:
        return args.func(args)
    except ComplexityOverflow as exc:
        print(f"overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except _ANALYTIC as exc:
        print(f"precondition failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ANALYTIC
    except (IBCError, ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
