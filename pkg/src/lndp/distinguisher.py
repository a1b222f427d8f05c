"""Distinguishing random t-starpartite from t-regular graphs under
local node privacy.

The server publishes s random multisets of nodes; each node reports a
noisy indicator of whether its neighborhood meets each multiset.  On a
regular graph the column means concentrate strictly inside [0, 1]; on a
starpartite graph a constant fraction of columns sit exactly at 1, where
additive noise pushes them outside half the time.  Thresholding the
fraction of in-range columns at tau separates the two families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from lndp.graph_core import Graph, GraphParameterError
from lndp.rng import child_rng

__all__ = [
    "DistinguisherParams",
    "p_nt",
    "normal_cdf",
    "p_star_p_reg",
    "membership_bits",
    "distinguish",
    "gap_check",
    "GapCheckReport",
]

LABEL_STAR = "starpartite"
LABEL_REGULAR = "regular"


def p_nt(n: int, t: int) -> float:
    """1 - (1 - t/n)^(n/t): the chance that n/t uniform draws hit a fixed
    t-subset, and equally that a degree-t node is hit by one multiset."""
    if t < 1 or t > n:
        raise GraphParameterError(f"need 1 <= t <= n, got t={t}, n={n}")
    if t == n:
        return 1.0
    return 1.0 - (1.0 - t / n) ** (n / t)


def normal_cdf(x: float) -> float:
    """Standard normal CDF, absolute error well below 1e-12."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _normal_prob(lo: float, hi: float, mean: float, sd: float) -> float:
    return normal_cdf((hi - mean) / sd) - normal_cdf((lo - mean) / sd)


def _gamma_r(n: int, t: int, sigma_bar: float) -> tuple[float, float]:
    """The regular-side slack parameters gamma and r.

    Their formulas assume the proof regime sigma_bar >= 1; below it
    gamma = 1/(200 sigma_bar^2) would exceed 1 and ln(1/gamma) would go
    negative, so sigma_bar is floored at 1 here (a no-op in regime).
    """
    sb = max(sigma_bar, 1.0)
    gamma = 1.0 / (200.0 * sb * sb)
    r = math.sqrt(3.0 * p_nt(n, t) / n * math.log(1.0 / gamma))
    return gamma, r


def p_star_p_reg(n: int, t: int, sigma_bar: float) -> tuple[float, float]:
    """Gaussian-CDF expressions for the expected fraction of in-[0,1]
    column means on each family; returns (p_star, p_reg)."""
    if sigma_bar <= 0:
        raise GraphParameterError(f"sigma_bar must be positive, got {sigma_bar}")
    p = p_nt(n, t)
    gamma, r = _gamma_r(n, t, sigma_bar)
    p_reg = (1.0 - gamma) * _normal_prob(r, 1.0 - r, p, sigma_bar)
    p_star = (1.0 - p) * _normal_prob(0.0, 1.0, t / n, sigma_bar) + p * _normal_prob(
        0.0, 1.0, 1.0, sigma_bar
    )
    return p_star, p_reg


@dataclass(frozen=True)
class DistinguisherParams:
    """All hyperparameters of the distinguishing protocol, derived
    deterministically from (n, t, eps, delta) and the debug noise scale."""

    n: int
    t: int
    eps: float
    delta: float
    noise_scale: float = 1.0

    def __post_init__(self) -> None:
        if self.t < 1 or self.t > self.n:
            raise GraphParameterError(f"need 1 <= t <= n, got t={self.t}, n={self.n}")
        if not self.eps > 0 or not 0.0 < self.delta < 1.0:
            raise GraphParameterError("need eps > 0 and delta in (0, 1)")
        if not self.noise_scale > 0:
            raise GraphParameterError("noise scale must be positive")

    @property
    def in_private_regime(self) -> bool:
        return self.eps < 0.5 and self.delta < 0.1 and self.noise_scale == 1.0

    @property
    def c_edp(self) -> float:
        return math.sqrt(2.0 * math.log(2.5 / self.delta)) / self.eps

    @property
    def s(self) -> int:
        """Number of published multisets."""
        return math.ceil(3.0 * self.t * math.log(2.0 / self.delta))

    @property
    def multiset_size(self) -> int:
        return self.n // self.t

    @property
    def sigma_priv(self) -> float:
        ln2d = math.log(2.0 / self.delta)
        s = self.s
        base = s + (s / self.t + math.sqrt(3.0 * s / self.t * ln2d)) * self.n
        return self.noise_scale * self.c_edp * math.sqrt(base)

    @property
    def sigma_bar(self) -> float:
        return self.sigma_priv / math.sqrt(self.n)

    @property
    def gamma(self) -> float:
        return _gamma_r(self.n, self.t, self.sigma_bar)[0]

    @property
    def r(self) -> float:
        return _gamma_r(self.n, self.t, self.sigma_bar)[1]

    @property
    def tau(self) -> float:
        p_star, p_reg = p_star_p_reg(self.n, self.t, self.sigma_bar)
        return (p_star + p_reg) / 2.0


def membership_bits(G: Graph, multisets: np.ndarray) -> np.ndarray:
    """b[i, j] = 1 iff node i has a neighbor in multiset j."""
    n = G.n
    s = multisets.shape[0]
    bits = np.zeros((n, s), dtype=bool)
    if G.indices.size == 0:
        return bits
    degs = np.diff(G.indptr)
    src_has = degs > 0
    for j in range(s):
        member = np.zeros(n, dtype=bool)
        member[multisets[j]] = True
        hit = member[G.indices]
        sums = np.add.reduceat(hit, G.indptr[:-1][src_has])
        bits[src_has, j] = sums > 0
    return bits


def distinguish(
    G: Graph, params: DistinguisherParams, seed: int
) -> tuple[str, float]:
    """Label G as starpartite or regular; returns (label, fraction of
    in-range column means).

    The multisets are public randomness: drawn from the (seed, "public")
    stream, with replacement, floor(n/t) elements each.  Per-(node,
    column) report noise N(0, sigma_priv^2) comes from the
    (seed, "report-noise") stream in node-major order.
    """
    if G.n != params.n:
        raise GraphParameterError(f"graph has n={G.n}, params expect n={params.n}")
    pub = child_rng(seed, "public")
    multisets = pub.integers(0, params.n, size=(params.s, params.multiset_size))
    bits = membership_bits(G, multisets)
    noise_rng = child_rng(seed, "report-noise")
    a = bits + noise_rng.normal(0.0, params.sigma_priv, size=bits.shape)
    col_means = a.mean(axis=0)
    y = (col_means >= 0.0) & (col_means <= 1.0)
    fraction = float(y.mean())
    label = LABEL_REGULAR if fraction >= params.tau else LABEL_STAR
    return label, fraction


@dataclass(frozen=True)
class GapCheckReport:
    """Numeric check of the distinguisher's success-probability gap at
    the prescribed (n, t, s) parameter point for a given (eps, delta)."""

    n: float
    t: float
    s: float
    sigma_bar: float
    cond_s_large: bool
    cond_sigma_bar: bool
    cond_r_le_gamma: bool
    cond_n_ge_3t: bool
    gap: float
    gap_lower_bound: float

    @property
    def conditions_hold(self) -> bool:
        return (
            self.cond_s_large
            and self.cond_sigma_bar
            and self.cond_r_le_gamma
            and self.cond_n_ge_3t
        )

    @property
    def gap_ok(self) -> bool:
        return self.gap >= self.gap_lower_bound


_K = 72.0e4 * math.pi


def gap_check(eps: float, delta: float) -> GapCheckReport:
    """Evaluate the regular/starpartite gap at the canonical parameter
    point n = (3/4) K ln^5(2/delta) c^10, t = 30 K ln^2(2/delta) c^6,
    s = 3 t ln(2/delta), with K = 72*10^4*pi and c = sqrt(2 ln(2.5/delta))/eps.

    Checks (a) s >= (K/3) sigma_bar^6, (b) sigma_bar >= 1,
    (c) r <= gamma, (d) n >= 3t, and that the success-probability gap
    p_reg - p_star clears its lower bound 1/(100 sqrt(2 pi) sigma_bar^3).
    All quantities are evaluated in floating point; n, t, s are far past
    desk scale and never materialized as graphs.
    """
    if not 0.0 < eps < 0.5 or not 0.0 < delta < 0.1:
        raise GraphParameterError("gap check needs eps in (0, 1/2), delta in (0, 1/10)")
    ln2d = math.log(2.0 / delta)
    c = math.sqrt(2.0 * math.log(2.5 / delta)) / eps
    t = 30.0 * _K * ln2d**2 * c**6
    s = 3.0 * t * ln2d
    n = 0.75 * _K * ln2d**5 * c**10
    sigma_bar = c * math.sqrt(s / n + s / t + math.sqrt(3.0 * s / t * ln2d))
    p = 1.0 - (1.0 - t / n) ** (n / t)
    gamma = 1.0 / (200.0 * sigma_bar**2)
    r = math.sqrt(3.0 * p / n * math.log(1.0 / gamma))
    p_reg = (1.0 - gamma) * _normal_prob(r, 1.0 - r, p, sigma_bar)
    p_star = (1.0 - p) * _normal_prob(0.0, 1.0, t / n, sigma_bar) + p * _normal_prob(
        0.0, 1.0, 1.0, sigma_bar
    )
    return GapCheckReport(
        n=n,
        t=t,
        s=s,
        sigma_bar=sigma_bar,
        cond_s_large=s >= _K / 3.0 * sigma_bar**6,
        cond_sigma_bar=sigma_bar >= 1.0,
        cond_r_le_gamma=r <= gamma,
        cond_n_ge_3t=n >= 3.0 * t,
        gap=p_reg - p_star,
        gap_lower_bound=1.0 / (100.0 * math.sqrt(2.0 * math.pi) * sigma_bar**3),
    )
