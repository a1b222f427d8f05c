"""Statistical distances, privacy accounting, and brute-force
verification oracles for the sensitivity and splicing inequalities."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from lndp.graph_core import (
    Graph,
    GraphParameterError,
    all_graphs,
    generate_regular,
    generate_starpartite,
    rewire_node,
)
from lndp.mechanisms import PrivacyParams
from lndp.rng import child_rng

__all__ = [
    "DiscretePMF",
    "GaussianProduct",
    "tv_distance",
    "bhattacharyya",
    "bhatt_gaussian_product",
    "tv_from_bhatt",
    "bhatt_dp_bound",
    "group_privacy",
    "adv_grouposition_eps",
    "l2_sensitivity_oracle",
    "splicing_check",
    "SplicingReport",
]


@dataclass(frozen=True)
class DiscretePMF:
    """A finitely supported pmf with hashable outcome labels."""

    support: tuple = ()
    probs: np.ndarray = field(default=None, repr=False)

    def __post_init__(self) -> None:
        support = tuple(self.support)
        probs = np.asarray(self.probs, dtype=np.float64)
        if len(support) != probs.size:
            raise GraphParameterError("support and probs must have equal length")
        if len(set(support)) != len(support):
            raise GraphParameterError("support labels must be distinct")
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-9:
            raise GraphParameterError("probs must be >= 0 and sum to 1")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_probs(cls, probs) -> "DiscretePMF":
        probs = np.asarray(probs, dtype=np.float64)
        return cls(support=tuple(range(probs.size)), probs=probs)


def _aligned(P: DiscretePMF, Q: DiscretePMF) -> tuple[np.ndarray, np.ndarray]:
    """Both prob vectors on the union support, zero-filled."""
    labels = list(dict.fromkeys(list(P.support) + list(Q.support)))
    pos = {lb: i for i, lb in enumerate(labels)}
    p = np.zeros(len(labels))
    q = np.zeros(len(labels))
    for lb, pr in zip(P.support, P.probs):
        p[pos[lb]] = pr
    for lb, pr in zip(Q.support, Q.probs):
        q[pos[lb]] = pr
    return p, q


def tv_distance(P: DiscretePMF, Q: DiscretePMF) -> float:
    """Total variation distance: half the l1 difference."""
    p, q = _aligned(P, Q)
    return float(0.5 * np.abs(p - q).sum())


def bhattacharyya(P: DiscretePMF, Q: DiscretePMF) -> float:
    """-ln of the Hellinger affinity sum sqrt(p q); +inf on disjoint
    supports (the sentinel for zero affinity)."""
    p, q = _aligned(P, Q)
    affinity = float(np.sqrt(p * q).sum())
    if affinity == 0.0:
        return math.inf
    return -math.log(min(affinity, 1.0))


@dataclass(frozen=True)
class GaussianProduct:
    """A product of independent Gaussians with a shared sigma."""

    means: np.ndarray = field(repr=False)
    sigma: float = 1.0

    def __post_init__(self) -> None:
        means = np.asarray(self.means, dtype=np.float64)
        if not self.sigma > 0:
            raise GraphParameterError(f"sigma must be positive, got {self.sigma}")
        object.__setattr__(self, "means", means)


def bhatt_gaussian_product(A: GaussianProduct, B: GaussianProduct) -> float:
    """Closed-form Bhattacharyya distance between equal-variance Gaussian
    products: sum_i (mu_A[i] - mu_B[i])^2 / (8 sigma^2)."""
    if A.means.shape != B.means.shape:
        raise GraphParameterError("mean vectors must have equal dimension")
    if A.sigma != B.sigma:
        raise GraphParameterError("closed form requires a shared sigma")
    diff = A.means - B.means
    return float((diff @ diff) / (8.0 * A.sigma**2))


def tv_from_bhatt(B: float) -> float:
    """Upper bound sqrt(2 (1 - exp(-B))) on total variation distance."""
    if B < 0:
        raise GraphParameterError(f"Bhattacharyya distance must be >= 0, got {B}")
    return math.sqrt(2.0 * (1.0 - math.exp(-B)))


def bhatt_dp_bound(params: PrivacyParams) -> float:
    """The largest Bhattacharyya distance an (eps, delta) pair allows
    between output distributions on neighboring inputs:
    ln((e^{eps/2} + e^{-eps/2})/2) + ln(1/(1-delta)).  Attained by leaky
    randomized response."""
    if params.delta >= 1:
        raise GraphParameterError("bound is undefined at delta = 1")
    return math.log(
        (math.exp(params.eps / 2.0) + math.exp(-params.eps / 2.0)) / 2.0
    ) + math.log(1.0 / (1.0 - params.delta))


def group_privacy(params: PrivacyParams, k: int) -> PrivacyParams:
    """Basic group privacy: k rewired nodes cost (k eps, k e^{k eps} delta)."""
    if k < 1:
        raise GraphParameterError(f"group size must be >= 1, got {k}")
    return PrivacyParams(
        eps=k * params.eps, delta=min(1.0, k * math.exp(k * params.eps) * params.delta)
    )


def adv_grouposition_eps(eps: float, k: int, delta_prime: float) -> float:
    """Advanced grouping of k single-node guarantees: the joint
    indistinguishability level 7 k eps^2 / 2 + 2 eps sqrt(6 k ln(2/delta'))."""
    if k < 0:
        raise GraphParameterError(f"group size must be >= 0, got {k}")
    if not 0.0 < delta_prime < 1.0:
        raise GraphParameterError("delta' must lie in (0, 1)")
    if k == 0:
        return 0.0
    return 3.5 * k * eps * eps + 2.0 * eps * math.sqrt(
        6.0 * k * math.log(2.0 / delta_prime)
    )


_REWIRING_PAIRS_CACHE: dict[int, list[tuple[Graph, Graph]]] = {}


def _rewiring_pairs(n: int) -> list[tuple[Graph, Graph]]:
    """All (G, H) pairs with H a single-node rewiring of G, for every
    graph on n nodes.  Every H is itself an n-node graph, so pairs are
    enumerated once per n and cached."""
    if n not in _REWIRING_PAIRS_CACHE:
        pairs = []
        masks = list(range(1 << (n - 1)))
        for G in all_graphs(n):
            for i in range(n):
                others = [j for j in range(n) if j != i]
                for mask in masks:
                    new_nbrs = [others[b] for b in range(n - 1) if mask >> b & 1]
                    pairs.append((G, rewire_node(G, i, new_nbrs)))
        _REWIRING_PAIRS_CACHE[n] = pairs
    return _REWIRING_PAIRS_CACHE[n]


def l2_sensitivity_oracle(report_map: Callable[[Graph], np.ndarray], n: int) -> float:
    """Exact worst-case l2 report change over every graph on n nodes and
    every single-node rewiring, by exhaustive enumeration (n <= 6).

    Reports are memoized per graph; the maximization runs over the
    cached (graph, rewired graph) pairs.
    """
    if n > 6:
        raise GraphParameterError("exhaustive sensitivity oracle supports n <= 6")
    reports = {G: np.asarray(report_map(G), dtype=np.float64) for G in all_graphs(n)}
    worst = 0.0
    for G, H in _rewiring_pairs(n):
        diff = reports[G] - reports[H]
        worst = max(worst, float(math.sqrt(diff @ diff)))
    return worst


@dataclass(frozen=True)
class SplicingReport:
    """Monte-Carlo comparison of joint-report distances from the empty
    graph: regular inputs vs starpartite inputs (scaled by 1/(1-d/n))."""

    lhs_mean: float
    lhs_se: float
    rhs_mean: float
    rhs_se: float
    rhs_scale: float
    lhs_tv_bound: float

    @property
    def holds(self) -> bool:
        return self.lhs_mean <= self.rhs_scale * self.rhs_mean

    @property
    def margin_in_se(self) -> float:
        spread = math.hypot(self.lhs_se, self.rhs_scale * self.rhs_se)
        gap = self.rhs_scale * self.rhs_mean - self.lhs_mean
        return math.inf if spread == 0.0 else gap / spread


def splicing_check(
    n: int, d: int, sigma: float, trials: int, seed: int
) -> SplicingReport:
    """Check that uniform d-regular graphs are no further (in expected
    Bhattacharyya distance of the degrees-plus-Gaussian-noise report
    vector from the empty graph's) than 1/(1-d/n) times uniform
    d-starpartite graphs.

    The degrees-only Gaussian randomizer admits the closed form
    B = sum_i d_i^2 / (8 sigma^2), so both expectations are over the
    random graph only — no density estimation.
    """
    if d > n // 2 or (n * d) % 2 != 0:
        raise GraphParameterError("need d <= n/2 and n*d even")
    if d == 0:
        return SplicingReport(0.0, 0.0, 0.0, 0.0, 1.0, 0.0)
    lhs = np.empty(trials)
    rhs = np.empty(trials)
    for i in range(trials):
        trial_seed = int(child_rng(seed, "splice", i).integers(1 << 63))
        G = generate_regular(n, d, trial_seed)
        lhs[i] = float(G.degrees() @ G.degrees()) / (8.0 * sigma * sigma)
        S = generate_starpartite(n, d, trial_seed)
        rhs[i] = float(S.degrees() @ S.degrees()) / (8.0 * sigma * sigma)
    scale = 1.0 / (1.0 - d / n)
    return SplicingReport(
        lhs_mean=float(lhs.mean()),
        lhs_se=float(lhs.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0,
        rhs_mean=float(rhs.mean()),
        rhs_se=float(rhs.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0,
        rhs_scale=scale,
        lhs_tv_bound=tv_from_bhatt(float(lhs.mean())),
    )
