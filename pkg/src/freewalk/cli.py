"""Command-line interface: solve, sweep, closed-form, simulate, quality, verify.

Exit codes: 0 success, 1 verification failure, 2 usage error (argparse),
3 invalid walk or spec, 4 solver failure, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Iterable

import numpy as np

from . import closedform as cf
from . import verify as verify_mod
from .groups import (
    GroupTableError,
    Letter,
    NonGeneratingSetError,
    letter_lengths,
    normal_words,
)
from .harmonic import (
    build_chain,
    cylinder_prob,
    log_cylinder_prob,
    tau2_invariance_residual,
    two_factor_identity,
)
from .metrics import (
    drift_weighted,
    entropy,
    metrics_report,
    quality,
    quality_sup,
    volume,
)
from .traffic import (
    ConsistencyError,
    DEFAULT_MAX_ITER,
    MaxIterationsError,
    RecurrentGroupError,
    StepDistribution,
    solve_walk,
)
from .simulate import estimate_drift, estimate_hitting, estimate_prefix, simulate
from .walkspec import (
    WalkSpec,
    build_family,
    default_tolerance,
    load_spec,
    minimal_generators,
    resolve_generators,
    z2z3_walk,
    z3z3_asym,
    z3z3_sym,
    hecke_simple,
    zkzk_simple,
)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INVALID = 3
EXIT_SOLVER = 4
EXIT_IO = 5


def _f17(x: float) -> str:
    """Full-precision decimal: 17 significant digits."""
    return format(float(x), ".17g")


def _csv_float(x: float) -> str:
    """Shortest round-trip decimal for byte-stable CSV output."""
    return repr(float(x))


def _default_tol() -> float:
    return default_tolerance()


def _add_walk_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--spec", help="path to a JSON walk spec")
    parser.add_argument("--family", help="named measure family (e.g. zkzk-simple)")
    parser.add_argument("--k", type=int, help="cyclic order for zkzk/hecke families")
    parser.add_argument("--p", type=float, help="family parameter p")
    parser.add_argument("--q", type=float, help="family parameter q")
    parser.add_argument("--orders", help="comma list of cyclic orders, e.g. 2,3,5")
    parser.add_argument("--weights", help="comma list of per-factor weights")
    parser.add_argument("--gens", default="natural",
                        help="generating set: natural, minimal, or comma list of letters")
    parser.add_argument("--tol", type=float, default=None, help="solver tolerance")
    parser.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    parser.add_argument("--seed", type=int, default=20240809)


def _walk_from_args(args: argparse.Namespace) -> WalkSpec:
    if args.spec:
        spec = load_spec(args.spec)
        if args.tol is not None:
            spec = WalkSpec(spec.product, spec.mu, spec.generators, args.tol, args.max_iter, args.seed)
        return spec
    if not args.family:
        raise ValueError("give --spec FILE or --family NAME")
    params = {}
    if args.k is not None:
        params["k"] = args.k
    if args.p is not None:
        params["p"] = args.p
    if args.q is not None:
        params["q"] = args.q
    if args.orders:
        params["orders"] = [int(x) for x in args.orders.split(",")]
    if args.weights:
        params["weights"] = [float(x) for x in args.weights.split(",")]
    product, mu = build_family(args.family, **params)
    gens_spec = args.gens if args.gens in ("natural", "minimal") else args.gens.split(",")
    return WalkSpec(
        product=product,
        mu=mu,
        generators=resolve_generators(product, gens_spec),
        tol=args.tol if args.tol is not None else _default_tol(),
        max_iter=args.max_iter,
        seed=args.seed,
    )


def cmd_solve(args: argparse.Namespace) -> int:
    spec = _walk_from_args(args)
    product, mu = spec.product, spec.mu
    report = solve_walk(product, mu, tol=spec.tol, max_iter=spec.max_iter)
    metrics = metrics_report(product, mu, report)
    out = sys.stdout
    out.write(f"walk: {product!r}, {product.nletters} letters\n")
    for u in product.alphabet:
        out.write(f"mu({u}) = {_f17(mu[u])}\n")
    out.write(f"iterations = {report.iterations}\n")
    out.write(f"sup residual = {_f17(report.sup_residual)}\n")
    out.write(f"traffic residual = {_f17(report.traffic_residual)}\n")
    out.write(f"consistency residual = {_f17(report.q.consistency_residual())}\n")
    for u in product.alphabet:
        out.write(f"q({u}) = {_f17(report.q[u])}\n")
    for u in product.alphabet:
        out.write(f"r({u}) = {_f17(report.r[u])}\n")
    for i in range(product.nfactors):
        out.write(f"r(Sigma_{i}) = {_f17(report.r.factor_sum(i))}\n")
    out.write(f"stationary = {str(report.stationary).lower()}\n")
    if product.nfactors == 2:
        out.write(f"two-factor identity q(S1)q(S2) = {_f17(two_factor_identity(report.q))}\n")
        chain = build_chain(product, report.r)
        worst = max(tau2_invariance_residual(chain, w) for w in normal_words(product, 2))
        out.write(f"tau^2 residual (cylinders <= 2) = {_f17(worst)}\n")
    out.write(f"gamma = {_f17(metrics.gamma)}\n")
    out.write(f"entropy = {_f17(metrics.entropy)}\n")
    out.write(f"volume = {_f17(metrics.volume)}\n")
    out.write(f"quality = {_f17(metrics.quality)}\n")
    out.write(f"hd measure = {_f17(metrics.hd_measure)}\n")
    out.write(f"hd support = {_f17(metrics.hd_support)}\n")
    return EXIT_OK


def _sweep_rows(args: argparse.Namespace) -> tuple[list[str], Iterable[list[str]]]:
    family = args.family
    res = args.resolution
    tol = args.tol if args.tol is not None else _default_tol()

    def metric_cells(product, mu):
        report = solve_walk(product, mu, tol=tol)
        m = metrics_report(product, mu, report)
        return [_csv_float(m.gamma), _csv_float(m.entropy), _csv_float(m.volume), _csv_float(m.quality)]

    if family == "z2z3":
        n = round(1.0 / res)
        header = ["p", "q", "gamma", "entropy", "volume", "quality", "error"]

        def rows():
            for i in range(0, n + 1):
                for j in range(0, n + 1 - i):
                    p, q = i / n, j / n
                    try:
                        cells = metric_cells(*z2z3_walk(p, q))
                        yield [_csv_float(p), _csv_float(q)] + cells + [""]
                    except Exception as exc:
                        yield [_csv_float(p), _csv_float(q), "", "", "", "", type(exc).__name__]

        return header, rows()
    if family in ("z3z3-sym", "z3z3-asym"):
        header = (["p", "gamma", "entropy", "volume", "quality", "error"]
                  if family == "z3z3-sym"
                  else ["p", "q", "gamma", "entropy", "volume", "quality", "error"])
        n = round(1.0 / res)

        def rows():
            if family == "z3z3-sym":
                for i in range(1, round(0.5 / res)):
                    p = i * res
                    try:
                        yield [_csv_float(p)] + metric_cells(*z3z3_sym(p)) + [""]
                    except Exception as exc:
                        yield [_csv_float(p), "", "", "", "", type(exc).__name__]
            else:
                for i in range(1, n):
                    for j in range(1, n - i):
                        p, q = i / n, j / n
                        try:
                            yield [_csv_float(p), _csv_float(q)] + metric_cells(*z3z3_asym(p, q)) + [""]
                        except Exception as exc:
                            yield [_csv_float(p), _csv_float(q), "", "", "", "", type(exc).__name__]

        return header, rows()
    if family in ("zkzk", "hecke"):
        header = ["k", "gamma", "entropy", "volume", "quality", "error"]
        builder = zkzk_simple if family == "zkzk" else hecke_simple

        def rows():
            for k in range(args.k_min, args.k_max + 1):
                try:
                    yield [str(k)] + metric_cells(*builder(k)) + [""]
                except Exception as exc:
                    yield [str(k), "", "", "", "", type(exc).__name__]

        return header, rows()
    if family == "quality-zkzk-minimal":
        header = ["p", "gamma_S", "entropy", "volume_S", "quality", "error"]
        product, _ = zkzk_simple(args.k or 4)
        gens = minimal_generators(product)
        lengths = letter_lengths(product, gens)
        v_s = volume(product, lengths)
        n = round(1.0 / res)

        def rows():
            for i in range(1, round(0.5 / res)):
                p = i * res
                probs = np.zeros(product.nletters)
                k = product.factors[0].order
                for u, mass in [
                    (Letter(0, 1), p), (Letter(0, k - 1), p),
                    (Letter(1, 1), 0.5 - p), (Letter(1, k - 1), 0.5 - p),
                ]:
                    probs[product.letter_index(u)] = mass
                try:
                    mu = StepDistribution(product, probs)
                    report = solve_walk(product, mu, tol=tol)
                    h = entropy(product, mu, report.r, report.q)
                    g = drift_weighted(product, mu, report.r, lengths)
                    yield [
                        _csv_float(p), _csv_float(g), _csv_float(h),
                        _csv_float(v_s), _csv_float(h / (g * v_s)), "",
                    ]
                except Exception as exc:
                    yield [_csv_float(p), "", "", "", "", type(exc).__name__]

        return header, rows()
    raise ValueError(f"unknown sweep family {family!r}")


def cmd_sweep(args: argparse.Namespace) -> int:
    header, rows = _sweep_rows(args)
    handle = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
    finally:
        if args.out:
            handle.close()
    return EXIT_OK


_CLOSED_FORMS = {
    "z2z3": (("p", "q"), lambda a: cf.drift_z2z3(a["p"], a["q"])),
    "z3z3-sym": (("p",), lambda a: cf.drift_z3z3_sym(a["p"])),
    "z3z3-asym": (("p", "q"), lambda a: cf.drift_z3z3_asym(a["p"], a["q"])),
    "zkzk": (("k",), lambda a: cf.drift_zkzk(int(a["k"]))),
    "hecke": (("k",), lambda a: cf.drift_hecke(int(a["k"]))),
    "uniform-pair": (("p", "k1", "k2"), lambda a: cf.drift_uniform_pair(a["p"], int(a["k1"]), int(a["k2"]))),
}


def cmd_closed_form(args: argparse.Namespace) -> int:
    names, fn = _CLOSED_FORMS[args.family]
    if args.batch:
        with open(args.batch, newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            rows = [dict(row) for row in reader]
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(list(names) + ["gamma"])
        for row in rows:
            params = {name: float(row[name]) for name in names}
            writer.writerow([row[name] for name in names] + [_csv_float(fn(params))])
        return EXIT_OK
    params = {}
    for name in names:
        value = getattr(args, name.replace("-", "_"), None)
        if value is None:
            raise ValueError(f"family {args.family!r} needs --{name}")
        params[name] = value
    sys.stdout.write(_f17(fn(params)) + "\n")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    spec = _walk_from_args(args)
    product, mu = spec.product, spec.mu
    lengths = None
    if args.gens != "natural":
        lengths = letter_lengths(product, spec.generators)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["metric", "estimate", "stderr", "replications", "horizon", "note"])
    est = estimate_drift(product, mu, steps=args.steps, reps=args.reps, seed=spec.seed, lengths=lengths)
    writer.writerow(["drift", _csv_float(est.estimate), _csv_float(est.stderr),
                     est.replications, est.horizon, est.note])
    if args.hitting:
        target = Letter.parse(args.hitting)
        hit = estimate_hitting(product, mu, target, horizon=args.horizon, reps=args.reps, seed=spec.seed)
        writer.writerow([f"hitting({target})", _csv_float(hit.estimate), _csv_float(hit.stderr),
                         hit.replications, hit.horizon, hit.note])
    if args.prefix_len:
        pre = estimate_prefix(product, mu, steps=args.steps, reps=args.reps,
                              seed=spec.seed, prefix_len=args.prefix_len)
        kept = pre.replications - pre.dropped
        for word in sorted(pre.frequencies, key=str):
            writer.writerow([f"prefix({word})", _csv_float(pre.frequencies[word]), "",
                             kept, pre.horizon, f"dropped={pre.dropped}"])
    if args.dump_lengths:
        with open(args.dump_lengths, "w", newline="", encoding="utf-8") as handle:
            dump = csv.writer(handle, lineterminator="\n")
            dump.writerow(["replication", "step", "length"])
            for rep in range(min(args.reps, args.dump_reps)):
                traj = simulate(product, mu, args.steps, spec.seed, lengths=lengths, stream=rep)
                for n, value in enumerate(traj.lengths):
                    dump.writerow([rep, n, _csv_float(value)])
    return EXIT_OK


def cmd_cylinder(args: argparse.Namespace) -> int:
    spec = _walk_from_args(args)
    product = spec.product
    report = solve_walk(product, spec.mu, tol=spec.tol, max_iter=spec.max_iter)
    chain = build_chain(product, report.r)
    for text in args.word:
        word = product.parse_word(text)
        sys.stdout.write(f"cylinder({word}) = {_f17(cylinder_prob(chain, word))}\n")
        if args.log:
            sys.stdout.write(f"log cylinder({word}) = {_f17(log_cylinder_prob(chain, word))}\n")
    return EXIT_OK


def cmd_quality(args: argparse.Namespace) -> int:
    spec = _walk_from_args(args)
    product = spec.product
    if args.sup:
        sweep = quality_sup(product, spec.generators, args.resolution,
                            tol=spec.tol)
        sys.stdout.write(f"sup quality = {_f17(sweep.best_quality)}\n")
        sys.stdout.write(f"grid points evaluated = {sweep.evaluations}\n")
        sys.stdout.write(f"argmax on grid boundary = {str(sweep.at_boundary).lower()}\n")
        for u in product.alphabet:
            p = sweep.best_mu[u]
            if p > 0:
                sys.stdout.write(f"best mu({u}) = {_f17(p)}\n")
        if sweep.at_boundary:
            sys.stdout.write("note: supremum may be attained only in the closure "
                             "(degenerate step law with zero drift)\n")
        return EXIT_OK
    value = quality(product, spec.mu, spec.generators, tol=spec.tol)
    sys.stdout.write(f"quality = {_f17(value)}\n")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if args.list:
        for number, (title, _) in sorted(verify_mod.CRITERIA.items()):
            sys.stdout.write(f"criterion {number:2d}: {title}\n")
        return EXIT_OK
    numbers = None
    if args.criteria:
        numbers = [int(x) for x in args.criteria.split(",")]
    failures = 0
    for result in verify_mod.run_all(numbers):
        status = "PASS" if result.passed else "FAIL"
        sys.stdout.write(f"{status} criterion {result.number:2d}: {result.title}\n")
        if args.verbose or not result.passed:
            for line in result.details:
                sys.stdout.write(f"    {line}\n")
        for note in result.notes:
            sys.stdout.write(f"    NOTE: {note}\n")
        failures += 0 if result.passed else 1
    sys.stdout.write(f"{len(verify_mod.CRITERIA) if numbers is None else len(numbers)} criteria, "
                     f"{failures} failed\n")
    return EXIT_OK if failures == 0 else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freewalk",
        description="Random walks on free products of finite groups: traffic solver, "
                    "harmonic measure, drift/entropy/volume metrics, and oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one walk and print the full report")
    _add_walk_arguments(p_solve)
    p_solve.set_defaults(fn=cmd_solve)

    p_sweep = sub.add_parser("sweep", help="sweep a family over a parameter grid, emit CSV")
    p_sweep.add_argument("--family", required=True,
                         choices=["z2z3", "z3z3-sym", "z3z3-asym", "zkzk", "hecke",
                                  "quality-zkzk-minimal"])
    p_sweep.add_argument("--resolution", type=float, default=0.01)
    p_sweep.add_argument("--k", type=int, help="k for quality-zkzk-minimal")
    p_sweep.add_argument("--k-min", type=int, default=3)
    p_sweep.add_argument("--k-max", type=int, default=8)
    p_sweep.add_argument("--tol", type=float, default=None)
    p_sweep.add_argument("--out", help="CSV output path (default stdout)")
    p_sweep.set_defaults(fn=cmd_sweep)

    p_cf = sub.add_parser("closed-form", help="evaluate a closed-form drift formula")
    p_cf.add_argument("--family", required=True, choices=sorted(_CLOSED_FORMS))
    p_cf.add_argument("--p", type=float)
    p_cf.add_argument("--q", type=float)
    p_cf.add_argument("--k", type=float)
    p_cf.add_argument("--k1", type=float)
    p_cf.add_argument("--k2", type=float)
    p_cf.add_argument("--batch", help="CSV of parameter rows; emits rows with gamma appended")
    p_cf.set_defaults(fn=cmd_closed_form)

    p_sim = sub.add_parser("simulate", help="Monte Carlo estimates for one walk")
    _add_walk_arguments(p_sim)
    p_sim.add_argument("--steps", type=int, default=10_000)
    p_sim.add_argument("--reps", type=int, default=200)
    p_sim.add_argument("--horizon", type=int, default=1000)
    p_sim.add_argument("--hitting", help="letter to estimate the hitting probability of")
    p_sim.add_argument("--prefix-len", type=int, default=0)
    p_sim.add_argument("--dump-lengths", help="CSV path for per-trajectory length series")
    p_sim.add_argument("--dump-reps", type=int, default=10)
    p_sim.set_defaults(fn=cmd_simulate)

    p_cyl = sub.add_parser("cylinder", help="harmonic measure of cylinders given as letter lists")
    _add_walk_arguments(p_cyl)
    p_cyl.add_argument("--word", action="append", required=True,
                       help="word as 'f:e.f:e' (repeatable)")
    p_cyl.add_argument("--log", action="store_true", help="also print the log-mass")
    p_cyl.set_defaults(fn=cmd_cylinder)

    p_q = sub.add_parser("quality", help="h/(gamma_S v_S) for one walk, or its sup over a grid")
    _add_walk_arguments(p_q)
    p_q.add_argument("--sup", action="store_true", help="grid-search symmetric laws on S")
    p_q.add_argument("--resolution", type=float, default=1e-3)
    p_q.set_defaults(fn=cmd_quality)

    p_ver = sub.add_parser("verify", help="run the acceptance criteria")
    p_ver.add_argument("--list", action="store_true", help="list criteria without running")
    p_ver.add_argument("--criteria", help="comma list of criterion numbers")
    p_ver.add_argument("--verbose", action="store_true", help="print detail lines for passes too")
    p_ver.set_defaults(fn=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (NonGeneratingSetError, RecurrentGroupError, GroupTableError) as exc:
        sys.stderr.write(f"invalid walk: {exc}\n")
        return EXIT_INVALID
    except (MaxIterationsError, ConsistencyError) as exc:
        sys.stderr.write(f"solver failure: {exc}\n")
        return EXIT_SOLVER
    except OSError as exc:
        sys.stderr.write(f"i/o failure: {exc}\n")
        return EXIT_IO
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
