"""``cameo`` command line.

Exit codes: 0 success, 2 usage error, 3 domain error, 4 budget exceeded.
"""

from __future__ import annotations

import argparse
import math
import os
import secrets
import sys

from cameo import analytic, graphgen, harness, pathconn, weights
from cameo.exceptions import BudgetExceeded, DomainError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_BUDGET = 4


def resolve_seed(value):
    """``--seed`` wins, then ``$CAMEO_SEED``, then a fresh random seed."""
    if value is not None:
        return value
    env = os.environ.get("CAMEO_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise DomainError(f"CAMEO_SEED must be an integer, got {env!r}") from None
    return secrets.randbits(63)


def _dist(text):
    try:
        return weights.WeightDistribution.parse(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(text):
    try:
        return [int(float(v)) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(prog="cameo", description="Cameo random graph laboratory.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def seeded(p):
        p.add_argument("--seed", type=int, help="random seed (default: $CAMEO_SEED, else random)")

    p = sub.add_parser("gen", help="sample weights and generate a graph as an edge list")
    p.add_argument("--n", type=int, required=True, help="number of vertices")
    p.add_argument("--c", type=float, required=True, help="edge density parameter (expected edges c(n-1))")
    p.add_argument("--alpha", type=float, required=True, help="affinity exponent")
    p.add_argument("--dist", type=_dist, required=True, help="weight distribution, e.g. powerlaw:gamma=3.0")
    seeded(p)
    p.add_argument("--method", choices=graphgen.METHODS, default="envelope", help="edge sampler")
    p.add_argument("--out", help="edge-list output path (default stdout)")
    p.add_argument("--weights-out", help="also write the weights as CSV index,omega,y")

    p = sub.add_parser("degrees", help="degree histogram of an edge-list graph")
    p.add_argument("--graph", required=True, help="edge-list file")

    p = sub.add_parser("coeffs", help="square-count coefficients C_m for word length L")
    p.add_argument("--L", type=int, required=True, help="word length (number of binomials minus one)")
    p.add_argument("--z", type=float, help="also evaluate the generating functions at z")

    p = sub.add_parser("predict", help="threshold prediction for (dist, c, alpha)")
    p.add_argument("--dist", type=_dist, required=True, help="weight distribution")
    p.add_argument("--c", type=float, required=True, help="edge density parameter")
    p.add_argument("--alpha", type=float, required=True, help="affinity exponent in [0, 1), not 1/2")
    p.add_argument("--n", type=int, help="also report the jump value at this graph size")

    p = sub.add_parser("paths", help="count simple paths of length k between two vertices")
    p.add_argument("--graph", required=True, help="edge-list file")
    p.add_argument("--i", type=int, required=True, help="first endpoint")
    p.add_argument("--j", type=int, required=True, help="second endpoint")
    p.add_argument("--k", type=int, required=True, help="path length in edges")
    p.add_argument("--budget", type=int, default=pathconn.DEFAULT_EXPANSION_BUDGET, help="node-expansion budget")
    p.add_argument("--weights", help="weights CSV; adds the expected walk count for comparison")
    p.add_argument("--c", type=float, help="edge density parameter (default: from the graph header)")

    p = sub.add_parser("measure", help="distance and essential-diameter measurements")
    p.add_argument("--graph", required=True, help="edge-list file")
    p.add_argument("--epl", action="store_true", help="expected path length and component diameter")
    p.add_argument("--essdiam", action="store_true", help="epsilon-essential diameter upper bound")
    p.add_argument("--epsilon", type=float, default=0.01, help="vertex fraction for --essdiam")
    p.add_argument("--reach", type=_int_list, help="comma-separated k values for reach fractions P_k")
    p.add_argument("--gamma", type=_int_list, help="comma-separated k values for k-path connectivity")
    p.add_argument("--pairs", type=int, default=500, help="pair budget")
    p.add_argument("--centers", type=int, default=16, help="center budget for --essdiam")
    seeded(p)

    p = sub.add_parser("scan", help="run a threshold scan from a JSON config")
    p.add_argument("--config", required=True, help="JSON file with ExperimentConfig fields")
    p.add_argument("--out", help="results CSV (overrides output_path; default stdout)")

    p = sub.add_parser("validate", help="numerical checks of the weight lemmas")
    p.add_argument("--lemma", choices=["1", "2", "3", "appendix"], required=True, help="which check to run")
    p.add_argument("--dist", type=_dist, required=True, help="weight distribution")
    p.add_argument("--n", type=_int_list, default=[1000, 10000, 100000], help="comma-separated sizes")
    p.add_argument("--trials", type=int, default=20, help="trials per size")
    p.add_argument("--beta", type=float, default=1.5, help="exponent for lemmas 2 and 3")
    p.add_argument("--grid", type=_float_list, default=[10.0, 30.0, 100.0, 300.0, 1000.0],
                   help="weights at which to evaluate the appendix regularity exponent")
    seeded(p)

    for p in sub.choices.values():
        p.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="worker cap")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        seed = resolve_seed(getattr(args, "seed", None))
        print(f"seed={seed}", file=sys.stderr)
        return COMMANDS[args.command](args, seed)
    except DomainError as exc:
        print(f"cameo: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except BudgetExceeded as exc:
        print(f"cameo: {exc}", file=sys.stderr)
        return EXIT_BUDGET


def _cmd_gen(args, seed):
    params = graphgen.CameoParams(args.n, args.c, args.alpha)
    sample = weights.sample_weights(args.dist, args.n, args.alpha, seed)
    g = graphgen.generate(params, sample, seed, args.method)
    if args.out:
        graphgen.write_edgelist(g, args.out, params, seed)
    else:
        graphgen.write_edgelist(g, sys.stdout, params, seed)
    if args.weights_out:
        weights.write_weights_csv(sample, args.weights_out)
    print(f"edges={g.edge_count} clamped_pairs={graphgen.clamp_count(params, sample)}", file=sys.stderr)
    return EXIT_OK


def _cmd_degrees(args, seed):
    g, _ = graphgen.read_edgelist(args.graph)
    print("degree,count")
    for d, k in sorted(graphgen.empirical_degree_histogram(g).items()):
        print(f"{d},{k}")
    return EXIT_OK


def _cmd_coeffs(args, seed):
    pc = analytic.path_coefficients(args.L)
    print("m,C_m")
    for m, c in enumerate(pc.coeffs):
        print(f"{m},{c}")
    if args.z is not None:
        fx, fy = analytic.generating_function(args.L, args.z)
        print(f"# f_X={fx!r} f_Y={fy!r} total={fx + fy!r}")
    return EXIT_OK


def _cmd_predict(args, seed):
    try:
        pred = analytic.predict_threshold(args.dist, args.c, args.alpha)
    except DomainError as exc:
        if args.alpha == 0.5:
            print("regime=boundary case")
        raise exc
    for key, value in pred.as_dict().items():
        print(f"{key}={'' if value is None else value}")
    if args.n is not None:
        k_c = pred.k_c(args.n)
        print(f"k_c_at_n={'' if k_c is None else k_c}")
    return EXIT_OK


def _cmd_paths(args, seed):
    g, meta = graphgen.read_edgelist(args.graph)
    count = pathconn.count_simple_paths(g, args.i, args.j, args.k, args.budget)
    print(f"gamma={count}")
    if args.weights:
        alpha = _header_float(meta, "alpha")
        c = args.c if args.c is not None else _header_float(meta, "c")
        sample = weights.read_weights_csv(args.weights, alpha)
        if sample.n != g.n:
            raise DomainError("weights file and graph disagree on n")
        print(f"expected_walks={analytic.expected_gamma_walks(sample, c, args.k, args.i, args.j)!r}")
    return EXIT_OK


def _header_float(meta, key):
    try:
        return float(meta[key])
    except (KeyError, ValueError):
        raise DomainError(f"graph header lacks a usable {key}=; pass it explicitly") from None


def _cmd_measure(args, seed):
    # flag "exact" on sampled rows means each sampled value is exact; the
    # sampling error is in the stderr column
    g, _ = graphgen.read_edgelist(args.graph)
    rows = []
    if args.epl:
        ds = pathconn.distance_stats(g, args.pairs, seed)
        rows.append({"metric": "epl", "value": ds.epl, "stderr": ds.epl_stderr, "budget": args.pairs,
                     "flag": pathconn.EXACT})
        rows.append({"metric": "median_distance", "value": ds.median_distance, "budget": args.pairs, "flag": pathconn.EXACT})
        rows.append({"metric": "component_diameter", "value": ds.component_diameter, "flag": ds.diameter_flag})
        rows.append({"metric": "largest_component", "value": ds.largest_component_size, "flag": pathconn.EXACT})
    if args.essdiam:
        est = pathconn.essential_diameter_upper(g, args.epsilon, args.centers, seed)
        rows.append({"metric": "essential_diameter", "k": None, "value": est.upper_bound,
                     "budget": args.centers, "flag": est.flag})
    if args.reach:
        d = pathconn.sample_pair_distances(g, args.pairs, seed, max_depth=max(args.reach))
        for k, frac in zip(args.reach, pathconn.reach_fractions(d, args.reach)):
            se = math.sqrt(frac * (1 - frac) / d.size)
            rows.append({"metric": "reach_fraction", "k": k, "value": frac, "stderr": se,
                         "budget": args.pairs, "flag": pathconn.EXACT})
    for k in args.gamma or []:
        try:
            gs = pathconn.gamma_stats(g, k, args.pairs, seed)
        except BudgetExceeded:
            rows.append({"metric": "gamma_max", "k": k, "budget": args.pairs, "flag": pathconn.BUDGET_EXHAUSTED})
            continue
        rows.append({"metric": "gamma_max", "k": k, "value": gs.gamma_max, "budget": args.pairs, "flag": pathconn.LOWER_BOUND})
        rows.append({"metric": "gamma_mean_edges", "k": k, "value": gs.gamma_mean_edges,
                     "budget": gs.edges_sampled, "flag": pathconn.EXACT})
        rows.append({"metric": "gamma_mean_pairs", "k": k, "value": gs.gamma_mean_pairs, "budget": args.pairs, "flag": pathconn.EXACT})
    pathconn.write_measurements(rows, sys.stdout)
    return EXIT_OK


def _cmd_scan(args, seed):
    config = harness.ExperimentConfig.from_json(args.config)
    if args.out:
        config.output_path = args.out
    result = harness.run_threshold_scan(config, n_jobs=args.threads)
    if not config.output_path:
        harness.write_table(result.rows, sys.stdout)
    return EXIT_OK


def _cmd_validate(args, seed):
    if args.lemma == "1":
        table = harness.validate_lemma1(args.dist, args.n, args.trials, seed)
    elif args.lemma == "2":
        table = [harness.validate_lemma2(args.dist, args.beta, n, seed) for n in args.n]
    elif args.lemma == "3":
        table = harness.validate_lemma3(args.dist, args.beta, args.n, args.trials, seed)
    else:
        table = harness.validate_appendix(args.dist, args.grid)
    harness.write_table(table, sys.stdout)
    return EXIT_OK


COMMANDS = {
    "gen": _cmd_gen,
    "degrees": _cmd_degrees,
    "coeffs": _cmd_coeffs,
    "predict": _cmd_predict,
    "paths": _cmd_paths,
    "measure": _cmd_measure,
    "scan": _cmd_scan,
    "validate": _cmd_validate,
}


if __name__ == "__main__":
    sys.exit(main())
