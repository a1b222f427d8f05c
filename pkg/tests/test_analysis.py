"""Statistical distances, privacy accounting, and the brute-force
verification oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lndp.analysis import (
    DiscretePMF,
    GaussianProduct,
    adv_grouposition_eps,
    bhatt_dp_bound,
    bhatt_gaussian_product,
    bhattacharyya,
    group_privacy,
    l2_sensitivity_oracle,
    splicing_check,
    tv_distance,
    tv_from_bhatt,
)
from lndp.graph_core import GraphParameterError
from lndp.mechanisms import PrivacyParams, gaussian_sigma, leaky_rr_pmf

pmf_strategy = st.lists(
    st.floats(1e-6, 1.0), min_size=1, max_size=6
).map(lambda ws: DiscretePMF.from_probs(np.array(ws) / np.sum(ws)))


class TestTV:
    def test_identical(self):
        P = DiscretePMF.from_probs([0.3, 0.7])
        assert tv_distance(P, P) == 0.0

    def test_disjoint(self):
        P = DiscretePMF(support=("a",), probs=[1.0])
        Q = DiscretePMF(support=("b",), probs=[1.0])
        assert tv_distance(P, Q) == 1.0

    def test_value(self):
        P = DiscretePMF.from_probs([0.6, 0.4])
        Q = DiscretePMF.from_probs([0.5, 0.5])
        assert math.isclose(tv_distance(P, Q), 0.1)


class TestBhattacharyya:
    def test_identical_zero(self):
        P = DiscretePMF.from_probs([0.25, 0.75])
        assert bhattacharyya(P, P) == 0.0

    def test_disjoint_infinite(self):
        P = DiscretePMF(support=("a",), probs=[1.0])
        Q = DiscretePMF(support=("b",), probs=[1.0])
        assert bhattacharyya(P, Q) == math.inf

    def test_label_invariance(self):
        P = DiscretePMF(support=("x", "y"), probs=[0.5, 0.5])
        Q = DiscretePMF(support=("y", "x"), probs=[0.5, 0.5])
        assert bhattacharyya(P, Q) == 0.0

    @settings(max_examples=100, deadline=None)
    @given(eps=st.floats(1e-4, 10.0), delta=st.floats(0.0, 0.999))
    def test_leaky_rr_closed_form(self, eps, delta):
        p = PrivacyParams(eps, delta)
        P = DiscretePMF.from_probs(leaky_rr_pmf(0, p))
        Q = DiscretePMF.from_probs(leaky_rr_pmf(1, p))
        want = -math.log(
            2.0 * (1.0 - delta) / (math.exp(eps / 2.0) + math.exp(-eps / 2.0))
        ) if delta < 1.0 else math.inf
        assert math.isclose(bhattacharyya(P, Q), want, abs_tol=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(p1=pmf_strategy, q1=pmf_strategy, p2=pmf_strategy, q2=pmf_strategy)
    def test_tensorization(self, p1, q1, p2, q2):
        def product(A, B):
            probs = np.outer(A.probs, B.probs).ravel()
            return DiscretePMF(
                support=tuple(
                    (a, b) for a in A.support for b in B.support
                ),
                probs=probs / probs.sum(),
            )

        lhs = bhattacharyya(product(p1, p2), product(q1, q2))
        rhs = bhattacharyya(p1, q1) + bhattacharyya(p2, q2)
        assert math.isclose(lhs, rhs, rel_tol=1e-9, abs_tol=1e-9)

    @settings(max_examples=300, deadline=None)
    @given(p=pmf_strategy, q=pmf_strategy)
    def test_tv_upper_bound(self, p, q):
        p2 = DiscretePMF(support=tuple(range(len(p.support))), probs=p.probs)
        q2 = DiscretePMF(support=tuple(range(len(q.support))), probs=q.probs)
        assert tv_distance(p2, q2) <= tv_from_bhatt(bhattacharyya(p2, q2)) + 1e-12


class TestGaussianProduct:
    def test_identical_means(self):
        A = GaussianProduct(means=[1.0, 2.0], sigma=3.0)
        assert bhatt_gaussian_product(A, A) == 0.0

    def test_two_sigma_separation(self):
        s = 1.7
        A = GaussianProduct(means=[0.0], sigma=s)
        B = GaussianProduct(means=[2.0 * s], sigma=s)
        assert math.isclose(bhatt_gaussian_product(A, B), 0.5)

    def test_additivity(self):
        A1 = GaussianProduct(means=[0.0], sigma=1.0)
        B1 = GaussianProduct(means=[1.0], sigma=1.0)
        A2 = GaussianProduct(means=[0.0, 0.0], sigma=1.0)
        B2 = GaussianProduct(means=[1.0, 1.0], sigma=1.0)
        assert math.isclose(
            bhatt_gaussian_product(A2, B2),
            2.0 * bhatt_gaussian_product(A1, B1),
        )

    def test_dimension_mismatch(self):
        with pytest.raises(GraphParameterError):
            bhatt_gaussian_product(
                GaussianProduct(means=[0.0], sigma=1.0),
                GaussianProduct(means=[0.0, 1.0], sigma=1.0),
            )


class TestTvFromBhatt:
    def test_zero(self):
        assert tv_from_bhatt(0.0) == 0.0

    def test_infinite(self):
        assert math.isclose(tv_from_bhatt(math.inf), math.sqrt(2.0))

    def test_ln2(self):
        assert math.isclose(tv_from_bhatt(math.log(2.0)), 1.0)

    def test_negative_rejected(self):
        with pytest.raises(GraphParameterError):
            tv_from_bhatt(-0.1)


class TestDpBound:
    def test_limit_zero(self):
        assert bhatt_dp_bound(PrivacyParams(1e-12, 0.0)) <= 1e-12

    @settings(max_examples=100, deadline=None)
    @given(eps=st.floats(1e-4, 10.0), delta=st.floats(0.0, 0.99))
    def test_tight_on_leaky_rr(self, eps, delta):
        p = PrivacyParams(eps, delta)
        P = DiscretePMF.from_probs(leaky_rr_pmf(0, p))
        Q = DiscretePMF.from_probs(leaky_rr_pmf(1, p))
        assert math.isclose(bhattacharyya(P, Q), bhatt_dp_bound(p), abs_tol=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(eps=st.floats(1e-4, 10.0), delta=st.floats(0.0, 0.99))
    def test_upper_bounded_by_simple_form(self, eps, delta):
        got = bhatt_dp_bound(PrivacyParams(eps, delta))
        simple = min(eps * eps / 8.0, eps / 2.0) + delta / (1.0 - delta)
        assert got <= simple + 1e-12


class TestGroupPrivacy:
    def test_k1_identity(self):
        p = PrivacyParams(0.5, 1e-4)
        g = group_privacy(p, 1)
        assert math.isclose(g.eps, 0.5) and math.isclose(g.delta, math.e**0.5 * 1e-4)

    def test_hand_computed(self):
        g = group_privacy(PrivacyParams(0.1, 1e-6), 3)
        assert math.isclose(g.eps, 0.3, abs_tol=1e-12)
        assert math.isclose(g.delta, 3.0 * math.exp(0.3) * 1e-6, rel_tol=1e-12)

    def test_delta_zero(self):
        g = group_privacy(PrivacyParams(0.2, 0.0), 4)
        assert g.delta == 0.0


class TestAdvGrouposition:
    def test_k0(self):
        assert adv_grouposition_eps(0.5, 0, 0.01) == 0.0

    def test_hand_computed(self):
        got = adv_grouposition_eps(0.1, 10, 0.01)
        want = 0.35 + 0.2 * math.sqrt(60.0 * math.log(200.0))
        assert math.isclose(got, want, rel_tol=1e-12)
        assert abs(got - 3.93) < 0.02

    def test_sqrt_k_growth(self):
        eps = 0.001
        ratio = adv_grouposition_eps(eps, 400, 0.01) / adv_grouposition_eps(
            eps, 100, 0.01
        )
        assert 1.9 < ratio < 2.6


class TestSensitivityOracle:
    def test_constant_map(self):
        assert l2_sensitivity_oracle(lambda G: np.array([1.0, 2.0]), 4) == 0.0

    def test_degree_vector_n4(self):
        got = l2_sensitivity_oracle(lambda G: G.degrees().astype(float), 4)
        assert math.isclose(got, math.sqrt((4 - 1) ** 2 + (4 - 1)))

    def test_refuses_large_n(self):
        with pytest.raises(GraphParameterError):
            l2_sensitivity_oracle(lambda G: G.degrees().astype(float), 7)


class TestSplicing:
    def test_d0_trivial(self):
        rep = splicing_check(n=10, d=0, sigma=1.0, trials=5, seed=0)
        assert rep.lhs_mean == 0.0 and rep.rhs_mean == 0.0 and rep.holds

    def test_parameter_validation(self):
        with pytest.raises(GraphParameterError):
            splicing_check(n=10, d=6, sigma=1.0, trials=5, seed=0)

    def test_inequality_small_instance(self):
        sigma = gaussian_sigma(math.sqrt(2.0), PrivacyParams(0.05, 1e-4))
        rep = splicing_check(n=30, d=2, sigma=sigma, trials=100, seed=1)
        assert rep.holds
        assert rep.margin_in_se >= 3.0

    def test_lhs_closed_form(self):
        n, d = 30, 2
        sigma = 50.0
        rep = splicing_check(n=n, d=d, sigma=sigma, trials=100, seed=2)
        want = n * d * d / (8.0 * sigma * sigma)
        assert abs(rep.lhs_mean - want) <= max(3.0 * rep.lhs_se, 1e-12)
