"""The eleven acceptance criteria, each at its stated tolerance and runtime.

Every test prints ``criterion N: PASS|FAIL ...``; the lines are repeated in
the terminal summary.
"""

import contextlib
import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from cameo import analytic, harness, pathconn
from cameo.graphgen import CameoParams, Graph, edge_probabilities, generate
from cameo.weights import WeightDistribution, sample_weights

PL3 = WeightDistribution.power_law(3.0)
EXP1 = WeightDistribution.exponential(1.0)


@contextlib.contextmanager
def criterion(number, limit_s, log):
    """Time the block; record PASS only if it finished without error inside ``limit_s``."""
    info = {}
    start = time.perf_counter()
    ok = False
    try:
        yield info
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < limit_s
        status = "PASS" if ok and within else "FAIL"
        detail = " ".join(f"{k}={v}" for k, v in info.items())
        line = f"criterion {number}: {status} ({elapsed:.1f}s of {limit_s:g}s) {detail}".rstrip()
        print(line)
        log.append(line)
    assert within, f"criterion {number} took {elapsed:.1f}s, limit {limit_s}s"


def test_criterion_01_coefficients(acceptance_log):
    with criterion(1, 1.0, acceptance_log) as info:
        got = analytic.path_coefficients(3).coeffs
        info["L3"] = got
        assert got == (5, 10, 1)
        for L in range(1, 13):
            assert analytic.path_coefficients(L) == analytic.coefficients_bruteforce(L)
        info["checked_L"] = "1..12"


def exact_matrix_power(L, z):
    """Integer/Fraction iteration of [[1, z], [1, 1]] applied to (1 + z, 2)."""
    fx, fy = 1 + z, Fraction(2)
    for _ in range(L - 1):
        fx, fy = fx + z * fy, fx + fy
    return fx, fy


def test_criterion_02_generating_function(acceptance_log):
    with criterion(2, 1.0, acceptance_log) as info:
        worst = 0.0
        for z in (0.25, 1.0, 4.0):
            for L in range(1, 61):
                fx, fy = analytic.generating_function(L, z)
                ex, ey = exact_matrix_power(L, Fraction(z))
                worst = max(worst, float(abs(Fraction(fx + fy) - (ex + ey)) / (ex + ey)))
                worst = max(worst, float(abs(Fraction(fx) - ex) / ex), float(abs(Fraction(fy) - ey) / ey))
        info["max_rel_err"] = f"{worst:.2e}"
        assert worst < 1e-9


def test_criterion_03_growth_rate(acceptance_log):
    with criterion(3, 1.0, acceptance_log) as info:
        A = integrate.quad(lambda w: 2.0 ** 0.75 * w ** (-3 * 0.75), 1, np.inf, epsrel=1e-12)[0]
        A2 = integrate.quad(lambda w: 2.0 ** 0.5 * w ** (-3 * 0.5), 1, np.inf, epsrel=1e-12)[0]
        target = A + math.sqrt(A2)
        ratio = analytic.s_value(51, A, A2) / analytic.s_value(50, A, A2)
        info["ratio"] = f"{ratio:.5f}"
        info["target"] = f"{target:.5f}"
        assert abs(ratio - target) / target < 0.01


def test_criterion_04_edge_density(acceptance_log):
    with criterion(4, 60.0, acceptance_log) as info:
        out = harness.edge_density(PL3, 2.0, 0.3, 10**4, 20, seed=0)
        info["mean_edges"] = out["mean_edges"]
        info["rel_err"] = f"{out['relative_error']:.4f}"
        assert out["target"] == 19998
        assert out["relative_error"] < 0.02


def enumerate_paths(n, adj, i, j, k):
    others = [v for v in range(n) if v not in (i, j)]
    return sum(
        all(b in adj[a] for a, b in zip(seq, seq[1:]))
        for mid in itertools.permutations(others, k - 1)
        for seq in [(i, *mid, j)]
    )


def test_criterion_05_exact_path_counting(acceptance_log):
    with criterion(5, 60.0, acceptance_log) as info:
        assert pathconn.count_simple_paths(Graph.complete(6), 0, 5, 3) == 12
        rng = np.random.default_rng(5)
        checks = 0
        for _ in range(100):
            n = int(rng.integers(2, 8))
            p = rng.uniform(0.2, 0.95)
            edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
            g = Graph.from_edges(n, edges)
            adj = {v: set() for v in range(n)}
            for u, v in edges:
                adj[u].add(v)
                adj[v].add(u)
            for i, j in itertools.permutations(range(n), 2):
                for k in range(1, 7):
                    assert pathconn.count_simple_paths(g, i, j, k) == enumerate_paths(n, adj, i, j, k)
                    checks += 1
        info["comparisons"] = checks


def test_criterion_06_first_moment(acceptance_log):
    with criterion(6, 300.0, acceptance_log) as info:
        n, c, alpha, seed = 200, 5.0, 0.25, 6
        cfg = harness.ExperimentConfig("powerlaw:gamma=3.0", c, alpha, [n], [3], trials=2000, master_seed=seed)
        i, j = 0, 1
        counts = harness.gamma_samples(cfg, i, j, 3)
        # exact expectation: independent edges, so each simple string contributes p_ia p_ab p_bj
        P = edge_probabilities(CameoParams(n, c, alpha), sample_weights(PL3, n, alpha, seed))
        mid = [v for v in range(n) if v not in (i, j)]
        M = P[i, mid][:, None] * P[np.ix_(mid, mid)] * P[mid, j][None, :]
        expected = float(M.sum())  # diagonal of P is zero, so a == b drops out
        mean = counts.mean()
        se = counts.std(ddof=1) / math.sqrt(counts.size)
        info["mc_mean"] = f"{mean:.4f}"
        info["exact"] = f"{expected:.4f}"
        info["z"] = f"{(mean - expected) / se:.2f}"
        assert abs(mean - expected) <= 3 * se


def test_criterion_07_second_moment(acceptance_log):
    with criterion(7, 300.0, acceptance_log) as info:
        cfg = harness.ExperimentConfig("powerlaw:gamma=3.0", 10.0, 0.25, [150], [3], trials=2000, master_seed=0)
        pred = analytic.predict_threshold(cfg.dist, cfg.c, cfg.alpha)
        assert pred.regime == analytic.LOW_ALPHA
        res = harness.second_moment_ratio(cfg, 0, 1, 3)
        info["ratio"] = f"{res.ratio:.4f}"
        info["stderr"] = f"{res.stderr:.4f}"
        assert 1.0 <= res.ratio <= 1.5


def test_criterion_08_low_alpha_threshold(acceptance_log):
    with criterion(8, 600.0, acceptance_log) as info:
        n = 3 * 10**4
        pred = analytic.predict_threshold(PL3, 1.0, 0.25)
        target = math.log(n) / math.log(pred.B)
        medians = []
        for t in range(5):
            s = 1000 + t
            g = generate(CameoParams(n, 1.0, 0.25), sample_weights(PL3, n, 0.25, s), s)
            medians.append(pathconn.distance_stats(g, 500, s).median_distance)
        med = float(np.median(medians))
        info["B"] = f"{pred.B:.5f}"
        info["median_distance"] = med
        info["ln_n_over_ln_B"] = f"{target:.3f}"
        assert abs(pred.B - 2.250) < 1e-3
        assert abs(med - target) <= 2


def test_criterion_09_high_alpha(acceptance_log):
    with criterion(9, 600.0, acceptance_log) as info:
        n, seed = 10**5, 9
        pred = analytic.predict_threshold(EXP1, 2.0, 0.75)
        assert pred.delta == pytest.approx(0.5) and pred.k_c_constant == pytest.approx(4.0)
        g = generate(CameoParams(n, 2.0, 0.75), sample_weights(EXP1, n, 0.75, seed), seed)
        est = pathconn.essential_diameter_upper(g, 0.01, 16, seed)
        d = pathconn.sample_pair_distances(g, 2000, seed, max_depth=2)
        frac = pathconn.reach_fractions(d, [2])[0]
        info["ess_diam_upper"] = est.upper_bound
        info["reach_k2"] = frac
        assert est.upper_bound is not None and est.upper_bound <= 6
        assert frac < 0.1


def test_criterion_10_lemmas(acceptance_log):
    with criterion(10, 300.0, acceptance_log) as info:
        row = harness.validate_lemma1(PL3, [10**6], 20, seed=10)[0]
        info["lemma1"] = f"{row['log_max_over_log_n']:.3f}"
        assert 0.4 <= row["log_max_over_log_n"] <= 0.6
        ladder = [10**3, 10**4, 10**5, 10**6]
        for name, dist in (("powerlaw", PL3), ("exponential", EXP1)):
            table = harness.validate_lemma3(dist, 1.5, ladder, 1000, seed=10)
            vals = [r["normalized_log_ratio"] for r in table]
            info[f"lemma3_{name}"] = "/".join(f"{v:.4f}" for v in vals)
            assert all(r["regime"] == "truncated" for r in table)
            assert all(a > b for a, b in zip(vals, vals[1:]))


def test_criterion_11_subcritical(acceptance_log):
    with criterion(11, 300.0, acceptance_log) as info:
        n = 10**5
        pred = analytic.predict_threshold(PL3, 0.2, 0.25)
        assert pred.regime == analytic.SUBCRITICAL
        largest = []
        for t in range(10):
            s = 1100 + t
            g = generate(CameoParams(n, 0.2, 0.25), sample_weights(PL3, n, 0.25, s), s)
            largest.append(int(pathconn.components(g)[1].max()))
        info["max_largest_component"] = max(largest)
        assert all(size < 0.05 * n for size in largest)
