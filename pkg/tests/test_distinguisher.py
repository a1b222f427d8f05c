"""Starpartite/regular distinguishing: hyperparameters, probabilities,
the protocol itself, and the parameter-point gap check."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lndp.distinguisher import (
    LABEL_REGULAR,
    LABEL_STAR,
    DistinguisherParams,
    distinguish,
    gap_check,
    membership_bits,
    normal_cdf,
    p_nt,
    p_star_p_reg,
)
from lndp.graph_core import (
    Graph,
    GraphParameterError,
    generate_regular,
    generate_starpartite,
    rewire_node,
)
from lndp.rng import child_rng


class TestPnt:
    def test_t_equals_n(self):
        assert p_nt(100, 100) == 1.0

    def test_value(self):
        assert math.isclose(p_nt(100, 10), 1.0 - 0.9**10, rel_tol=1e-12)
        assert round(p_nt(100, 10), 10) == 0.6513215599

    def test_monotone_in_t(self):
        n = 100
        vals = [p_nt(n, t) for t in range(1, n + 1)]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_t_zero_rejected(self):
        with pytest.raises(GraphParameterError):
            p_nt(10, 0)


class TestNormalCdf:
    def test_zero(self):
        assert normal_cdf(0.0) == 0.5

    @given(x=st.floats(-8.0, 8.0))
    def test_symmetry(self, x):
        assert math.isclose(normal_cdf(x) + normal_cdf(-x), 1.0, abs_tol=1e-12)

    def test_975_quantile(self):
        assert math.isclose(normal_cdf(1.959963985), 0.975, abs_tol=1e-9)


class TestPStarPReg:
    def test_outputs_are_probabilities(self):
        p_star, p_reg = p_star_p_reg(100, 10, 1e-6)
        assert 0.0 <= p_star <= 1.0 and 0.0 <= p_reg <= 1.0

    @settings(max_examples=100, deadline=None)
    @given(n=st.integers(10, 10**5), t=st.integers(1, 9),
           sb=st.floats(1e-3, 50.0))
    def test_p_reg_at_most_one_minus_gamma(self, n, t, sb):
        gamma = 1.0 / (200.0 * max(sb, 1.0) ** 2)
        _, p_reg = p_star_p_reg(n, t, sb)
        assert p_reg <= 1.0 - gamma + 1e-12

    def test_sigma_rejected_nonpositive(self):
        with pytest.raises(GraphParameterError):
            p_star_p_reg(100, 10, 0.0)


class TestParams:
    def test_derived_formulas(self):
        p = DistinguisherParams(n=1000, t=4, eps=0.3, delta=0.05)
        ln2d = math.log(2.0 / 0.05)
        assert math.isclose(p.c_edp, math.sqrt(2.0 * math.log(2.5 / 0.05)) / 0.3)
        assert p.s == math.ceil(3.0 * 4 * ln2d)
        assert p.multiset_size == 250
        base = p.s + (p.s / 4 + math.sqrt(3.0 * p.s / 4 * ln2d)) * 1000
        assert math.isclose(p.sigma_priv, p.c_edp * math.sqrt(base))
        assert math.isclose(p.sigma_bar, p.sigma_priv / math.sqrt(1000))
        assert math.isclose(p.tau, sum(p_star_p_reg(1000, 4, p.sigma_bar)) / 2.0)

    def test_regime_flag(self):
        assert DistinguisherParams(n=100, t=2, eps=0.4, delta=0.05).in_private_regime
        assert not DistinguisherParams(
            n=100, t=2, eps=0.4, delta=0.05, noise_scale=0.5
        ).in_private_regime

    def test_bad_t(self):
        with pytest.raises(GraphParameterError):
            DistinguisherParams(n=10, t=11, eps=0.3, delta=0.05)


class TestMembershipBits:
    def test_empty_graph_all_zero(self):
        G = Graph.empty(10)
        ms = np.zeros((3, 5), dtype=np.int64)
        assert not membership_bits(G, ms).any()

    def test_direct_small_case(self):
        G = Graph.from_edges(5, [(0, 1), (2, 3)])
        ms = np.array([[1, 1], [4, 4]])
        bits = membership_bits(G, ms)
        # column 0: multiset {1}; neighbors-of containing 1: node 0 only
        assert bits[:, 0].tolist() == [True, False, False, False, False]
        # column 1: multiset {4}; no node has 4 as neighbor
        assert not bits[:, 1].any()

    def test_multiset_sizes(self):
        p = DistinguisherParams(n=100, t=7, eps=0.3, delta=0.05)
        pub = child_rng(3, "public")
        ms = pub.integers(0, p.n, size=(p.s, p.multiset_size))
        assert ms.shape == (p.s, 100 // 7)

    def test_rewiring_changes_at_most_s_plus_nX_bits(self):
        # Rewiring node i* flips at most s + n*X bit-matrix entries,
        # X = multiplicity of i* across all multisets; exhaustive over
        # nodes and many rewirings at n=12, s=4, t=3.
        n, s, t = 12, 4, 3
        rng = child_rng(0, "exhaustive")
        ms = rng.integers(0, n, size=(s, n // t))
        G = generate_regular(n, 3, 1)
        base = membership_bits(G, ms)
        for i in range(n):
            X = int((ms == i).sum())
            others = [j for j in range(n) if j != i]
            for mask in range(2 ** (n - 1)):
                nbrs = [others[b] for b in range(n - 1) if mask >> b & 1]
                H = rewire_node(G, i, nbrs)
                changed = int((membership_bits(H, ms) != base).sum())
                assert changed <= s + n * X

    def test_X_distribution_mean(self):
        # multiplicity of a fixed node across all multisets ~ Bin(sn/t, 1/n)
        n, t = 60, 5
        p = DistinguisherParams(n=n, t=t, eps=0.3, delta=0.05)
        total = p.s * p.multiset_size
        xs = []
        for seed in range(10**4):
            ms = child_rng(seed, "public").integers(0, n, size=(p.s, p.multiset_size))
            xs.append(int((ms == 0).sum()))
        mean = np.mean(xs)
        want = total / n  # = s/t up to multiset-size flooring
        se = np.std(xs, ddof=1) / math.sqrt(len(xs))
        assert abs(mean - want) <= 3 * se

    def test_p_nt_matches_hit_frequencies(self):
        n, t = 60, 5
        p = DistinguisherParams(n=n, t=t, eps=0.3, delta=0.05)
        centers = set(range(t))  # starpartite centers by construction
        reg = generate_regular(n, t, 2)
        reg_node = 0
        reg_nbrs = set(map(int, reg.neighbors(reg_node)))
        hit_star = hit_reg = 0
        trials = 10**4
        for seed in range(trials):
            S = child_rng(seed, "hits").integers(0, n, size=p.multiset_size)
            if centers.intersection(S.tolist()):
                hit_star += 1
            if reg_nbrs.intersection(S.tolist()):
                hit_reg += 1
        want = p_nt(n, t)
        se = math.sqrt(want * (1 - want) / trials)
        assert abs(hit_star / trials - want) <= 3 * se
        assert abs(hit_reg / trials - want) <= 3 * se


class TestDistinguish:
    def test_debug_accuracy_both_families(self):
        n, t = 500, 5
        params = DistinguisherParams(
            n=n, t=t, eps=0.2, delta=0.05, noise_scale=1e-6
        )
        ok_star = ok_reg = 0
        for trial in range(30):
            seed = int(child_rng(11, "d", trial).integers(1 << 63))
            S = generate_starpartite(n, t, seed)
            R = generate_regular(n, t, seed)
            if distinguish(S, params, seed)[0] == LABEL_STAR:
                ok_star += 1
            if distinguish(R, params, seed)[0] == LABEL_REGULAR:
                ok_reg += 1
        assert ok_star >= 20
        assert ok_reg >= 20

    def test_empty_graph_y_distribution(self):
        n, t = 200, 4
        params = DistinguisherParams(n=n, t=t, eps=0.2, delta=0.05)
        # all bits 0: column means are pure noise with sd sigma_bar, so
        # Y_j ~ Bernoulli(P[N(0, sigma_bar^2) in [0,1]]); aggregate the
        # column count over 30 seeds for a stable 3-SE comparison
        runs = 30
        fraction = np.mean(
            [distinguish(Graph.empty(n), params, seed)[1] for seed in range(runs)]
        )
        want = normal_cdf(1.0 / params.sigma_bar) - normal_cdf(0.0)
        se = math.sqrt(want * (1 - want) / (params.s * runs))
        assert abs(fraction - want) <= 3 * se

    def test_determinism(self):
        n, t = 120, 3
        params = DistinguisherParams(n=n, t=t, eps=0.2, delta=0.05)
        G = generate_regular(n, t, 5)
        assert distinguish(G, params, 42) == distinguish(G, params, 42)

    def test_n_mismatch_rejected(self):
        params = DistinguisherParams(n=100, t=2, eps=0.2, delta=0.05)
        with pytest.raises(GraphParameterError):
            distinguish(Graph.empty(99), params, 0)


class TestGapCheck:
    def test_canonical_point_passes(self):
        rep = gap_check(0.4, 0.05)
        assert rep.cond_s_large
        assert rep.cond_sigma_bar
        assert rep.cond_r_le_gamma
        assert rep.cond_n_ge_3t
        assert rep.conditions_hold
        assert rep.gap >= rep.gap_lower_bound
        assert rep.gap_lower_bound > 0.0

    def test_n_at_least_3t_by_formula(self):
        for eps in (0.1, 0.25, 0.4):
            for delta in (0.01, 0.05):
                assert gap_check(eps, delta).cond_n_ge_3t

    def test_out_of_regime_rejected(self):
        with pytest.raises(GraphParameterError):
            gap_check(0.6, 0.05)
        with pytest.raises(GraphParameterError):
            gap_check(0.4, 0.2)
