"""Soft-threshold sums, edge counts, concentrated-degree location, and
the parameter estimators built on them."""

import math
import warnings

import numpy as np
import pytest

from lndp.estimators import (
    SoftThresholdSpec,
    baseline_laplace_edges,
    baseline_rr_edges,
    conc_deg,
    est_clique,
    est_edges,
    est_er_p,
    est_soft_threshold,
    soft_threshold_value,
)
from lndp.graph_core import (
    Graph,
    GraphParameterError,
    generate_bounded,
    generate_clique_plus_isolated,
    generate_er,
)
from lndp.mechanisms import PrivacyParams, gaussian_sigma
from lndp.rng import child_rng

PARAMS = PrivacyParams(1.0, 1e-6)


def k4() -> Graph:
    return Graph.from_edges(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])


class TestSoftThresholdValue:
    def test_below(self):
        assert soft_threshold_value(-1.0, SoftThresholdSpec(0, 10)) == 0.0

    def test_midpoint(self):
        assert soft_threshold_value(5.0, SoftThresholdSpec(0, 10)) == 0.5

    def test_above(self):
        assert soft_threshold_value(11.0, SoftThresholdSpec(0, 10)) == 1.0

    def test_invalid_window(self):
        with pytest.raises(GraphParameterError):
            SoftThresholdSpec(2.0, 2.0)


class TestEstSoftThreshold:
    def test_k4_noiseless(self):
        got = est_soft_threshold(
            k4(), SoftThresholdSpec(0, 6), PARAMS, 0, debug_noiseless=True
        )
        assert got == 2.0

    def test_empty_noiseless(self):
        got = est_soft_threshold(
            Graph.empty(10), SoftThresholdSpec(1, 2), PARAMS, 0,
            debug_noiseless=True,
        )
        assert got == 0.0

    def test_unbiased(self):
        G = generate_er(30, 0.4, 3)
        spec = SoftThresholdSpec(0, 10)
        truth = est_soft_threshold(G, spec, PARAMS, 0, debug_noiseless=True)
        trials = 500
        vals = [est_soft_threshold(G, spec, PARAMS, t) for t in range(trials)]
        sigma = gaussian_sigma(math.sqrt(1.0 + 30 / 100), PARAMS)
        se = sigma * math.sqrt(30) / math.sqrt(trials)
        assert abs(np.mean(vals) - truth) <= 4 * se


class TestEstEdges:
    def test_k4_noiseless(self):
        assert est_edges(k4(), 3, PARAMS, 0, debug_noiseless=True) == 6.0

    def test_empty_noiseless(self):
        assert est_edges(Graph.empty(50), 5, PARAMS, 0, debug_noiseless=True) == 0.0

    def test_noiseless_exact_on_bounded(self):
        for seed in range(10):
            G = generate_bounded(60, 6, 0.5, seed)
            m = G.edge_count
            got = est_edges(G, 6, PARAMS, seed, debug_noiseless=True)
            assert math.isclose(got, m, abs_tol=1e-9)

    def test_determinism(self):
        G = generate_er(40, 0.2, 1)
        assert est_edges(G, 39, PARAMS, 5) == est_edges(G, 39, PARAMS, 5)

    def test_bad_bound(self):
        with pytest.raises(GraphParameterError):
            est_edges(k4(), 0, PARAMS, 0)


class TestConcDeg:
    def test_empty_noiseless_reconstruction(self):
        n = 100
        s = 10
        res = conc_deg(Graph.empty(n), PARAMS, s, 0, debug_noiseless=True)
        assert res.j_hat == 0
        assert res.x_hat == -2.0 * s
        # all degrees (0) are >= x_hat = -2s, so k = n; identity gives 0
        assert math.isclose((n / n) * res.x_hat + res.v_hat, 0.0, abs_tol=1e-9)

    def test_clique_noiseless_reconstruction(self):
        n = 64
        k = n // 2
        s = math.ceil(math.sqrt(n))
        G = generate_clique_plus_isolated(n, k, 0)
        res = conc_deg(G, PARAMS, s, 0, debug_noiseless=True)
        avg = k * (k - 1) / n
        assert math.isclose((k / n) * res.x_hat + res.v_hat, avg, abs_tol=1e-9)

    def test_width_too_small_rejected(self):
        with pytest.raises(GraphParameterError):
            conc_deg(Graph.empty(100), PARAMS, 9, 0)

    def test_small_eps_warns(self):
        n = 10**4
        G = Graph.empty(n)
        tiny = PrivacyParams(1e-4, 1e-6)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            conc_deg(G, tiny, 100, 0, debug_noiseless=True)
        assert any("budget" in str(w.message) for w in caught)

    @pytest.mark.xfail(
        strict=True,
        reason="the prescribed per-coordinate noise level exceeds the bin "
        "signal at n=10^4, so the window is usually rejected (j_hat=0); "
        "measured coverage ~22/100 vs the required 90/100",
    )
    def test_coverage_on_clique_instance(self):
        # Window-coverage frequency on the clique instance at n = 10^4:
        # nonzero degrees should land inside [x_hat, x_hat + 4s] in at
        # least 90 of 100 noisy trials.  Asserted as stated.
        n = 10**4
        k = n // 2
        s = math.ceil(math.sqrt(n))
        G = generate_clique_plus_isolated(n, k, 0)
        d = k - 1  # the only nonzero degree
        hits = 0
        for t in range(100):
            res = conc_deg(G, PARAMS, s, t)
            if res.x_hat <= d <= res.x_hat + 4 * s:
                hits += 1
        assert hits >= 90


class TestEstErP:
    def test_empty_noiseless(self):
        assert abs(est_er_p(Graph.empty(400), PARAMS, 0, debug_noiseless=True)) <= 1e-9

    def test_noiseless_near_truth(self):
        n, p = 2000, 0.3
        G = generate_er(n, p, 7)
        got = est_er_p(G, PARAMS, 7, debug_noiseless=True)
        # noiseless reconstruction returns the exact average degree / n
        assert math.isclose(got, G.degrees().mean() / n, abs_tol=1e-9)


class TestEstClique:
    def test_noiseless_exact(self):
        n = 256
        k = n // 2
        G = generate_clique_plus_isolated(n, k, 0)
        assert math.isclose(
            est_clique(G, PARAMS, 0, debug_noiseless=True), k, abs_tol=1e-6
        )

    def test_empty_noiseless_clamped(self):
        got = est_clique(Graph.empty(100), PARAMS, 0, debug_noiseless=True)
        assert math.isfinite(got) and got >= 0.0


class TestBaselines:
    def test_laplace_noiseless_exact(self):
        G = generate_er(100, 0.3, 1)
        assert baseline_laplace_edges(G, 1.0, 0, debug_noiseless=True) == G.edge_count

    def test_laplace_unbiased(self):
        G = generate_er(60, 0.3, 2)
        m = G.edge_count
        trials = 1000
        vals = [baseline_laplace_edges(G, 1.0, t) for t in range(trials)]
        scale = 2.0 * 60 / 1.0
        se = scale * math.sqrt(2.0) * math.sqrt(60) / 2.0 / math.sqrt(trials)
        assert abs(np.mean(vals) - m) <= 4 * se

    def test_rr_no_flip_exact(self):
        G = generate_er(80, 0.4, 3)
        assert baseline_rr_edges(G, PARAMS, 0, debug_no_flip=True) == G.edge_count

    def test_rr_unbiased(self):
        n = 40
        G = generate_er(n, 0.4, 4)
        m = G.edge_count
        trials = 1000
        vals = np.array([baseline_rr_edges(G, PARAMS, t) for t in range(trials)])
        se = vals.std(ddof=1) / math.sqrt(trials)
        assert abs(vals.mean() - m) <= 4 * se

    def test_rr_determinism(self):
        G = generate_er(30, 0.5, 6)
        assert baseline_rr_edges(G, PARAMS, 9) == baseline_rr_edges(G, PARAMS, 9)


class TestSoftThresholdSensitivity:
    @pytest.mark.parametrize("window", [(0.0, 3.0), (1.0, 4.0)])
    def test_exhaustive_n5(self, window):
        from lndp.analysis import l2_sensitivity_oracle
        from lndp.estimators import _soft_threshold_vector

        n = 5
        spec = SoftThresholdSpec(*window)
        got = l2_sensitivity_oracle(
            lambda G: _soft_threshold_vector(G, spec), n
        )
        assert got <= math.sqrt(1.0 + n / spec.width**2) + 1e-12
