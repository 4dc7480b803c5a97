"""Seeded Monte Carlo experiments that compare predictions with simulation.

Every trial gets a seed derived from ``(master_seed, n, trial)``, so results
do not depend on execution order and a rerun reproduces each CSV byte.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import platform
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
from joblib import Parallel, delayed

from cameo import __version__, _random
from cameo.analytic import predict_threshold
from cameo.exceptions import BudgetExceeded, DomainError
from cameo.graphgen import CameoParams, clamp_count, generate
from cameo.pathconn import components, count_simple_paths, sample_pair_distances, sample_pairs
from cameo.weights import (
    WeightDistribution,
    expected_max_weight,
    hill_tail_exponent,
    induced_tail_exponent,
    regularity_exponent,
    sample_weights,
    truncated_moment,
)

MAX_N = 5_000_000
MAX_EXACT_N = 50_000


@dataclass
class ExperimentConfig:
    distribution: str
    c: float
    alpha: float
    n_list: list
    k_list: list
    trials: int = 1
    pair_budget: int = 200
    master_seed: int = 0
    output_path: Optional[str] = None
    method: str = "envelope"
    gamma_pairs: int = 0
    resample_weights: bool = False

    def __post_init__(self):
        self.n_list = [int(n) for n in self.n_list]
        self.k_list = [int(k) for k in self.k_list]
        if self.trials < 1:
            raise DomainError("trials must be >= 1")
        for name, values in (("n_list", self.n_list), ("k_list", self.k_list)):
            if not values or sorted(values) != values:
                raise DomainError(f"{name} must be non-empty and ascending")
        if self.pair_budget < 1:
            raise DomainError("pair_budget must be >= 1")
        self.dist = WeightDistribution.parse(self.distribution)

    @classmethod
    def from_dict(cls, data):
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self):
        return {k: v for k, v in asdict(self).items()}

    def config_hash(self):
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def trial_seed(self, n, trial):
        return _random.derive_seed(self.master_seed, n, trial)


def check_resources(config):
    """Refuse oversize experiments before anything is generated."""
    for n in config.n_list:
        if n > MAX_N:
            raise BudgetExceeded(f"n={n} exceeds the limit {MAX_N}")
        if config.method == "exact" and n > MAX_EXACT_N:
            raise BudgetExceeded(f"exact sampler limited to n <= {MAX_EXACT_N}, got {n}")
        if n < 2:
            raise DomainError("every n must be >= 2")


@dataclass
class ScanResult:
    rows: list
    prediction: Optional[object]
    config: ExperimentConfig
    seeds: dict = field(default_factory=dict)

    COLUMNS = (
        "n", "trial", "seed", "k", "reach_fraction", "gamma_mean", "gamma_max",
        "edge_count", "expected_edges", "clamp_count", "largest_component", "predicted_k_c",
    )

    def reach_curve(self, n, trial):
        return [r["reach_fraction"] for r in self.rows if r["n"] == n and r["trial"] == trial]

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=self.COLUMNS, lineterminator="\n")
            writer.writeheader()
            for row in self.rows:
                writer.writerow({k: _fmt(row[k]) for k in self.COLUMNS})


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value


def _scan_cell(config, n, trial, prediction):
    seed = config.trial_seed(n, trial)
    sample = sample_weights(config.dist, n, config.alpha, seed)
    params = CameoParams(n, config.c, config.alpha)
    g = generate(params, sample, seed, config.method)
    kmax = config.k_list[-1]
    d = sample_pair_distances(g, config.pair_budget, seed, max_depth=kmax)
    _, sizes = components(g)
    clamped = clamp_count(params, sample)
    k_c = prediction.k_c(n) if prediction is not None else None
    rows = []
    rng = _random.stream(seed, _random.PAIRS, 4)
    pa, pb = sample_pairs(n, config.gamma_pairs, rng) if config.gamma_pairs else ((), ())
    for k in config.k_list:
        gm = gx = None
        if config.gamma_pairs:
            counts = [count_simple_paths(g, int(a), int(b), k) for a, b in zip(pa, pb)]
            gm, gx = float(np.mean(counts)), int(max(counts))
        rows.append({
            "n": n, "trial": trial, "seed": seed, "k": k,
            "reach_fraction": float(np.mean(d <= k)),
            "gamma_mean": gm, "gamma_max": gx,
            "edge_count": g.edge_count, "expected_edges": params.c * (n - 1),
            "clamp_count": clamped, "largest_component": int(sizes.max()),
            "predicted_k_c": k_c,
        })
    return rows


def run_threshold_scan(config, n_jobs=1):
    """Reach-fraction curves P_k for every (n, trial), next to the predicted jump."""
    check_resources(config)
    try:
        prediction = predict_threshold(config.dist, config.c, config.alpha)
    except DomainError:
        prediction = None
    cells = [(n, t) for n in config.n_list for t in range(config.trials)]
    results = Parallel(n_jobs=n_jobs)(
        delayed(_scan_cell)(config, n, t, prediction) for n, t in cells
    )
    rows = [row for cell in results for row in cell]
    seeds = {f"{n}/{t}": config.trial_seed(n, t) for n, t in cells}
    result = ScanResult(rows, prediction, config, seeds)
    if config.output_path:
        result.write_csv(config.output_path)
        write_manifest(config, seeds, config.output_path + ".manifest.json")
    return result


def write_manifest(config, seeds, path):
    manifest = {
        "config": config.to_dict(),
        "config_sha256": config.config_hash(),
        "versions": {
            "cameo": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "seeds": seeds,
    }
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


@dataclass(frozen=True)
class MomentRatio:
    ratio: Optional[float]
    stderr: Optional[float]
    mean: float
    mean_stderr: float
    trials: int
    diagnostic: str = ""


def gamma_samples(config, i, j, k, n_jobs=1):
    """Simple-path counts Gamma_k(i, j) over ``config.trials`` fresh graphs.

    The weight sample is drawn once from ``master_seed`` and kept fixed unless
    ``config.resample_weights`` is set.
    """
    check_resources(config)
    n = config.n_list[0]
    params = CameoParams(n, config.c, config.alpha)
    fixed = None if config.resample_weights else sample_weights(config.dist, n, config.alpha, config.master_seed)

    def one(t):
        seed = config.trial_seed(n, t)
        sample = fixed if fixed is not None else sample_weights(config.dist, n, config.alpha, seed)
        return count_simple_paths(generate(params, sample, seed, config.method), i, j, k)

    counts = Parallel(n_jobs=n_jobs)(delayed(one)(t) for t in range(config.trials))
    return np.asarray(counts, dtype=float)


def moment_ratio(x):
    """``mean(X**2) / mean(X)**2`` with a delta-method standard error."""
    x = np.asarray(x, dtype=float)
    t = x.size
    m1 = float(x.mean())
    m1_se = float(x.std(ddof=1) / math.sqrt(t)) if t > 1 else 0.0
    if m1 == 0.0:
        return MomentRatio(None, None, 0.0, m1_se, t, "empirical mean is zero; ratio undefined")
    m2 = float(np.mean(x * x))
    ratio = m2 / m1**2
    cov = np.cov(np.vstack([x * x, x]), ddof=1)
    grad = np.array([1.0 / m1**2, -2.0 * m2 / m1**3])
    stderr = float(math.sqrt(max(grad @ cov @ grad, 0.0) / t))
    return MomentRatio(ratio, stderr, m1, m1_se, t)


def second_moment_ratio(config, i, j, k, n_jobs=1):
    """Monte Carlo estimate of E[Gamma_k^2] / E[Gamma_k]^2 for one vertex pair."""
    if config.trials < 100:
        raise DomainError("second-moment estimates need trials >= 100")
    return moment_ratio(gamma_samples(config, i, j, k, n_jobs))


def edge_density(dist, c, alpha, n, trials, seed, method="envelope"):
    """Mean edge count over ``trials`` fresh (weights, graph) draws against c(n - 1)."""
    params = CameoParams(n, c, alpha)
    counts, clamps = [], []
    for t in range(trials):
        s = _random.derive_seed(seed, n, t)
        sample = sample_weights(dist, n, alpha, s)
        counts.append(generate(params, sample, s, method).edge_count)
        clamps.append(clamp_count(params, sample))
    mean = float(np.mean(counts))
    target = c * (n - 1)
    return {
        "n": n, "trials": trials, "mean_edges": mean, "target": target,
        "relative_error": abs(mean - target) / target, "max_clamp_count": int(max(clamps)),
    }


def validate_lemma1(dist, n_list, trials, seed):
    """Largest weight against its predicted scale ``F^{-1}(1 - 1/n)``.

    ``log_max_over_log_n`` is the median of log(max w) / log n and
    ``log_ratio`` the median of log(max w) / log F^{-1}(1 - 1/n), which
    should approach 1.
    """
    if trials < 10:
        raise DomainError("lemma 1 validation needs trials >= 10")
    table = []
    for n in n_list:
        maxima = np.array([
            sample_weights(dist, n, 0.0, _random.derive_seed(seed, n, t)).omegas.max()
            for t in range(trials)
        ])
        expected = expected_max_weight(dist, n)
        if n == 1:
            log_n_ratio = ratio = 1.0
        else:
            log_n_ratio = float(np.median(np.log(maxima) / math.log(n)))
            ratio = float(np.median(np.log(maxima) / math.log(expected)))
        table.append({
            "n": n, "median_max": float(np.median(maxima)), "expected_max": expected,
            "log_max_over_log_n": log_n_ratio, "log_ratio": ratio,
        })
    return table


def validate_lemma2(dist, beta, n, seed, top_fraction=0.01):
    """Hill estimate of the tail exponent of ``y = phi**-beta`` against the prediction."""
    sample = sample_weights(dist, n, beta, seed)
    return {
        "n": n, "beta": beta,
        "hill_exponent": hill_tail_exponent(sample.ys, top_fraction),
        "predicted_exponent": induced_tail_exponent(dist, beta),
    }


def validate_lemma3(dist, beta, n_list, trials, seed):
    """Truncated moment against the empirical mean of ``phi**-beta``.

    Each trial draws one weight sequence of length ``max(n_list)`` and
    evaluates every n on its prefix, so the ladder follows a single
    sequence as n grows.  Per n, ``normalized_log_ratio`` is the median over
    trials of ``|log(T_n / mean(y[:n]))| / log n``.  For divergent moments
    (regime ``truncated``) it must fall with n; for finite moments (regime
    ``convergent``) the raw ratio tends to 1 instead.
    """
    regime = "convergent" if dist.has_finite_moment(beta) else "truncated"
    n_list = [int(n) for n in n_list]
    if min(n_list) < 2:
        raise DomainError("every n must be >= 2")
    tn = np.array([truncated_moment(dist, beta, n) for n in n_list])
    means = np.empty((trials, len(n_list)))
    for t in range(trials):
        ys = sample_weights(dist, max(n_list), beta, _random.derive_seed(seed, t)).ys
        csum = np.cumsum(ys)
        means[t] = [csum[n - 1] / n for n in n_list]
    ratios = tn / means
    logn = np.log(np.array(n_list, dtype=float))
    normalized = np.median(np.abs(np.log(ratios)) / logn, axis=0)
    return [
        {
            "n": n, "regime": regime, "truncated_moment": float(tn[i]),
            "median_ratio": float(np.median(ratios[:, i])),
            "normalized_log_ratio": float(normalized[i]),
        }
        for i, n in enumerate(n_list)
    ]


def validate_appendix(dist, omega_grid):
    """Regularity exponent on a grid; tends to zero only for fast-decaying densities."""
    values = regularity_exponent(dist, omega_grid)
    return [{"omega": float(w), "exponent": float(v)} for w, v in zip(omega_grid, values)]


def write_table(rows, fh):
    if not rows:
        return
    writer = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(v) for k, v in row.items()})
