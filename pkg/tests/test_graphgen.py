import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from cameo.exceptions import DomainError
from cameo.graphgen import (
    CameoParams,
    Graph,
    clamp_count,
    edge_probabilities,
    edge_probability,
    empirical_degree_histogram,
    expected_degree,
    expected_edge_count,
    generate,
    read_edgelist,
    write_edgelist,
)
from cameo.weights import WeightDistribution, WeightSample, sample_weights

PL3 = WeightDistribution.power_law(3.0)
EXP1 = WeightDistribution.exponential(1.0)


def hand_sample():
    """Exponential(1) at alpha=1 has y = exp(w - 1); pick w so y = 1, 2, 3."""
    return WeightSample.from_omegas(EXP1, 1 + np.log([1.0, 2.0, 3.0]), 1.0)


def check_simple(g):
    for v in range(g.n):
        nb = g.neighbors(v)
        assert np.all(np.diff(nb) > 0), "sorted, no multi-edges"
        assert v not in nb
        for u in nb:
            assert g.has_edge(int(u), v)
    assert g.edge_count * 2 == int(g.degrees.sum())


def test_params_validation():
    with pytest.raises(DomainError):
        CameoParams(1, 1.0, 0.0)
    with pytest.raises(DomainError):
        CameoParams(10, 0.0, 0.0)
    with pytest.raises(DomainError):
        CameoParams(10, -1.0, 0.0)
    p = CameoParams(10, 2, 0)
    assert isinstance(p.c, float) and p.n == 10


def test_edge_probability_hand_values():
    s = hand_sample()
    p = CameoParams(3, 1.0, 1.0)
    assert edge_probability(p, s, 0, 1) == pytest.approx(0.5, rel=1e-14)
    assert edge_probability(p, s, 0, 2) == pytest.approx(4 / 6, rel=1e-14)
    assert edge_probability(p, s, 1, 2) == pytest.approx(5 / 6, rel=1e-14)


def test_edge_probability_homogeneous():
    for n, c in [(10, 1.0), (100, 3.0), (7, 2.5)]:
        s = sample_weights(PL3, n, 0.0, seed=1)
        assert np.all(s.ys == 1.0)
        assert edge_probability(CameoParams(n, c, 0.0), s, 0, n - 1) == pytest.approx(2 * c / n)


def test_edge_probability_errors():
    s = hand_sample()
    p = CameoParams(3, 1.0, 1.0)
    with pytest.raises(DomainError):
        edge_probability(p, s, 1, 1)
    with pytest.raises(DomainError):
        edge_probability(p, s, 0, 3)
    with pytest.raises(DomainError):
        edge_probability(CameoParams(3, 1.0, 0.5), s, 0, 1)
    with pytest.raises(DomainError):
        edge_probability(CameoParams(4, 1.0, 1.0), s, 0, 1)


def test_clamp_everywhere_gives_complete_graph():
    s = sample_weights(PL3, 12, 0.3, seed=2)
    p = CameoParams(12, 1e6, 0.3)
    assert np.all(edge_probabilities(p, s)[~np.eye(12, dtype=bool)] == 1.0)
    assert clamp_count(p, s) == 66
    for method in ("exact", "envelope"):
        g = generate(p, s, seed=0, method=method)
        assert g == Graph.complete(12)
        assert g.edge_count == 66


def test_clamp_count_matches_matrix():
    for seed in range(5):
        s = sample_weights(PL3, 60, 0.8, seed=seed)
        p = CameoParams(60, 4.0, 0.8)
        P = p.c / s.normalizer * (s.ys[:, None] + s.ys[None, :])
        iu = np.triu_indices(60, 1)
        assert clamp_count(p, s) == int(np.count_nonzero(P[iu] >= 1.0))


@pytest.mark.parametrize("method", ["exact", "envelope"])
def test_determinism(method):
    s = sample_weights(PL3, 500, 0.3, seed=4)
    p = CameoParams(500, 2.0, 0.3)
    a = generate(p, s, seed=11, method=method)
    b = generate(p, s, seed=11, method=method)
    assert a == b
    assert a != generate(p, s, seed=12, method=method)


def test_unknown_method():
    s = hand_sample()
    with pytest.raises(DomainError):
        generate(CameoParams(3, 1.0, 1.0), s, 0, method="fast")


@pytest.mark.parametrize("method", ["exact", "envelope"])
def test_per_pair_frequency(method):
    s = sample_weights(PL3, 6, 0.6, seed=8)
    p = CameoParams(6, 1.2, 0.6)
    P = edge_probabilities(p, s)
    trials = 10**5
    counts = np.zeros((6, 6))
    for t in range(trials):
        g = generate(p, s, seed=t, method=method)
        e = g.edges()
        counts[e[:, 0], e[:, 1]] += 1
    iu = np.triu_indices(6, 1)
    freq = counts[iu] / trials
    se = np.sqrt(P[iu] * (1 - P[iu]) / trials)
    assert np.all(np.abs(freq - P[iu]) <= 4 * se + 1e-12)


def test_exact_and_envelope_edge_count_distributions_agree():
    s = sample_weights(PL3, 2000, 0.3, seed=13)
    p = CameoParams(2000, 2.0, 0.3)
    a = [generate(p, s, seed=t, method="exact").edge_count for t in range(200)]
    b = [generate(p, s, seed=10**6 + t, method="envelope").edge_count for t in range(200)]
    assert stats.ks_2samp(a, b).pvalue > 0.01


def test_envelope_degree_profile_matches_probabilities():
    # a heavier check than edge counts: per-vertex degree sums vs row sums of p
    s = sample_weights(PL3, 300, 0.7, seed=17)
    p = CameoParams(300, 3.0, 0.7)
    P = edge_probabilities(p, s)
    trials = 400
    deg = np.zeros(300)
    for t in range(trials):
        deg += generate(p, s, seed=t, method="envelope").degrees
    mean = P.sum(axis=1)
    se = np.sqrt((P * (1 - P)).sum(axis=1) / trials)
    z = (deg / trials - mean) / se
    assert np.max(np.abs(z)) < 4.5
    assert abs(z.mean()) < 3 / math.sqrt(300) * 1.5


@pytest.mark.parametrize("method", ["exact", "envelope"])
def test_mean_edge_count(method):
    n, c = 10**4, 2.0
    s = sample_weights(PL3, n, 0.3, seed=1)
    p = CameoParams(n, c, 0.3)
    counts = [generate(p, s, seed=t, method=method).edge_count for t in range(20)]
    assert expected_edge_count(p) == 19998.0
    assert np.mean(counts) == pytest.approx(19998, rel=0.02)


def test_mean_degree_over_seeds():
    n, c = 10**4, 2.0
    p = CameoParams(n, c, 0.3)
    means = []
    for t in range(20):
        s = sample_weights(PL3, n, 0.3, seed=100 + t)
        g = generate(p, s, seed=t)
        hist = empirical_degree_histogram(g)
        assert sum(hist.values()) == n
        means.append(sum(d * k for d, k in hist.items()) / n)
    assert np.mean(means) == pytest.approx(2 * c * (n - 1) / n, rel=0.03)


def test_expected_degree_examples():
    s = hand_sample()
    p = CameoParams(3, 1.0, 1.0)
    assert expected_degree(p, s, 0) == pytest.approx(1 + 1 / 6, rel=1e-14)
    # for unclamped pairs the formula equals the row sum of probabilities
    assert expected_degree(p, s, 0) == pytest.approx(edge_probabilities(p, s)[0].sum(), rel=1e-14)
    s0 = sample_weights(PL3, 100, 0.0, seed=3)
    assert expected_degree(CameoParams(100, 1.0, 0.0), s0, 5) == pytest.approx(1.98)
    with pytest.raises(DomainError):
        expected_degree(p, s, 3)


def test_expected_degree_sum():
    s = sample_weights(PL3, 1000, 0.45, seed=6)
    p = CameoParams(1000, 2.5, 0.45)
    total = math.fsum(expected_degree(p, s, i) for i in range(1000))
    assert total == pytest.approx(2 * 2.5 * 999, rel=1e-9)


def test_histogram_examples():
    assert empirical_degree_histogram(Graph.complete(5)) == {4: 5}
    assert empirical_degree_histogram(Graph.from_edges(7, [])) == {0: 7}


def test_from_edges_rejects_bad_input():
    with pytest.raises(DomainError):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(DomainError):
        Graph.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(DomainError):
        Graph.from_edges(3, [(0, 3)])


def test_edgelist_round_trip(tmp_path):
    s = sample_weights(PL3, 200, 0.3, seed=4)
    p = CameoParams(200, 2.0, 0.3)
    g = generate(p, s, seed=9)
    path = tmp_path / "g.edges"
    write_edgelist(g, path, p, 9)
    lines = path.read_text().splitlines()
    assert lines[0] == "# cameo n=200 c=2.0 alpha=0.3 seed=9"
    pairs = [tuple(map(int, line.split())) for line in lines[1:]]
    assert pairs == sorted(pairs)
    assert all(u < v for u, v in pairs)
    back, meta = read_edgelist(path)
    assert back == g
    assert meta == {"n": "200", "c": "2.0", "alpha": "0.3", "seed": "9"}


def test_edgelist_keeps_isolated_tail(tmp_path):
    g = Graph.from_edges(10, [(0, 1)])
    buf = io.StringIO()
    write_edgelist(g, buf)
    path = tmp_path / "x.edges"
    path.write_text(buf.getvalue())
    assert read_edgelist(path)[0].n == 10


def test_edgelist_requires_header(tmp_path):
    path = tmp_path / "bad.edges"
    path.write_text("0 1\n")
    with pytest.raises(DomainError):
        read_edgelist(path)


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(2, 80),
    c=st.floats(0.05, 30.0),
    alpha=st.floats(-0.5, 1.5),
    seed=st.integers(0, 2**32),
    method=st.sampled_from(["exact", "envelope"]),
)
def test_generated_graphs_are_simple(n, c, alpha, seed, method):
    s = sample_weights(PL3, n, alpha, seed)
    g = generate(CameoParams(n, c, alpha), s, seed, method)
    check_simple(g)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 40), c=st.floats(0.01, 50.0), alpha=st.floats(-1, 2), seed=st.integers(0, 1000))
def test_probability_symmetric_and_bounded(n, c, alpha, seed):
    s = sample_weights(EXP1, n, alpha, seed)
    P = edge_probabilities(CameoParams(n, c, alpha), s)
    assert np.array_equal(P, P.T)
    assert np.all((P >= 0) & (P <= 1))
