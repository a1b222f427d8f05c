"""End-user statistics over locally private reports: soft-threshold
sums, edge counting, concentrated-degree averaging, Erdos-Renyi and
clique-size estimation, and the Laplace / randomized-response baselines.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from lndp.blur import num_bins
from lndp.graph_core import Graph, GraphParameterError
from lndp.linquery import anslin, anslin_node_sigma
from lndp.mechanisms import PrivacyParams, gaussian_sigma
from lndp.rng import child_rng

__all__ = [
    "SoftThresholdSpec",
    "ConcDegResult",
    "soft_threshold_value",
    "est_soft_threshold",
    "est_edges",
    "conc_deg",
    "est_er_p",
    "est_clique",
    "baseline_laplace_edges",
    "baseline_rr_edges",
]


@dataclass(frozen=True)
class SoftThresholdSpec:
    """The ramp window [lower, upper] of a soft threshold."""

    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not self.lower < self.upper:
            raise GraphParameterError(
                f"need lower < upper, got [{self.lower}, {self.upper}]"
            )

    @property
    def width(self) -> float:
        return self.upper - self.lower


def soft_threshold_value(d: float, spec: SoftThresholdSpec) -> float:
    """0 below the window, 1 above it, linear ramp inside."""
    if d <= spec.lower:
        return 0.0
    if d >= spec.upper:
        return 1.0
    return (d - spec.lower) / spec.width


def _soft_threshold_vector(G: Graph, spec: SoftThresholdSpec) -> np.ndarray:
    d = G.degrees().astype(np.float64)
    return np.clip((d - spec.lower) / spec.width, 0.0, 1.0)


def est_soft_threshold(
    G: Graph,
    spec: SoftThresholdSpec,
    params: PrivacyParams,
    seed: int,
    debug_noiseless: bool = False,
) -> float:
    """Sum of per-node soft-threshold reports.

    Each node releases st(d_i) + N(0, (1 + n/(u-l)^2) * 2 ln(1.25/delta)
    / eps^2); the server sums.  Unbiased for the true soft-threshold sum.
    """
    y = _soft_threshold_vector(G, spec)
    if debug_noiseless:
        return float(y.sum())
    sigma = gaussian_sigma(math.sqrt(1.0 + G.n / spec.width**2), params)
    rng = child_rng(seed, "soft-threshold-noise")
    return float(y.sum() + rng.normal(0.0, sigma, size=G.n).sum())


def est_edges(
    G: Graph,
    D: int,
    params: PrivacyParams,
    seed: int,
    debug_noiseless: bool = False,
) -> float:
    """Private edge count for a D-bounded graph.

    With u = max(D, sqrt(n)) every degree lies in [0, u], so the
    soft-threshold sum times u/2 recovers m exactly in the noiseless
    limit; noise adds O((D sqrt(n) + n) sqrt(log(1/delta))/eps) error.
    """
    if D < 1:
        raise GraphParameterError(f"degree bound must be >= 1, got {D}")
    u = max(float(D), math.sqrt(G.n))
    y = est_soft_threshold(
        G, SoftThresholdSpec(0.0, u), params, seed, debug_noiseless=debug_noiseless
    )
    return u * y / 2.0


@dataclass(frozen=True)
class ConcDegResult:
    """Window anchor and mass-weighted correction for a degree
    distribution concentrated on a 4s-wide window [x_hat, x_hat + 4s]."""

    x_hat: float
    v_hat: float
    j_hat: int


def _warn_if_eps_small(n: int, params: PrivacyParams) -> None:
    floor = math.sqrt(math.log(n) * math.log(1.0 / params.delta) / n) if n > 1 else 0.0
    if params.eps < floor:
        warnings.warn(
            f"eps={params.eps} is below sqrt(log n * log(1/delta)/n) ~ {floor:.3g}; "
            "the concentrated-degree guarantees need a larger budget",
            stacklevel=3,
        )


def conc_deg(
    G: Graph,
    params: PrivacyParams,
    s: int,
    seed: int,
    debug_noiseless: bool = False,
) -> ConcDegResult:
    """Locate the degree mass of a concentrated-degree graph.

    Runs the identity linear query on the blurred degree pmf, picks the
    largest nonzero-bin estimate j_nz, and accepts it only if it clears
    the noise-maximum threshold theta = sigma_coord * sqrt(2 ln(40 nu))
    (a 19/20-confidence bound on the largest of nu coordinate noises);
    otherwise j = 0.  Returns x_hat = s(j-2) and the weighted window sum
    v_hat = sum_{i=1..4} i*s*v_hat[j-2+i], so that (k/n) x_hat + v_hat
    reconstructs the average degree when all nonzero degrees fall in
    [x_hat, x_hat + 4s] and k counts degrees >= x_hat.
    """
    n = G.n
    if s < math.sqrt(n):
        raise GraphParameterError(f"width s={s} must be at least sqrt(n)={math.sqrt(n):.3f}")
    _warn_if_eps_small(n, params)
    nu = num_bins(n, s)
    eye = np.eye(nu)
    v_hat = anslin(G, eye, params, s, seed, debug_noiseless=debug_noiseless)
    if debug_noiseless:
        sigma_coord = 0.0
    else:
        sigma_coord = anslin_node_sigma(eye, n, s, params) / math.sqrt(n)
    theta = sigma_coord * math.sqrt(2.0 * math.log(40.0 * nu))
    j_nz = 1 + int(np.argmax(v_hat[1:]))  # ties: lowest index
    # a zero estimate is never evidence of mass, even at theta = 0
    j = j_nz if v_hat[j_nz] >= theta and v_hat[j_nz] > 0 else 0
    window = np.arange(j - 1, j + 3)
    vals = np.where(
        (window >= 0) & (window < nu), v_hat[np.clip(window, 0, nu - 1)], 0.0
    )
    v_weighted = float(np.arange(1, 5) * s @ vals)
    return ConcDegResult(x_hat=float(s * (j - 2)), v_hat=v_weighted, j_hat=j)


def est_er_p(
    G: Graph, params: PrivacyParams, seed: int, debug_noiseless: bool = False
) -> float:
    """Edge-probability estimate for an Erdos-Renyi graph: average degree
    via the concentrated-degree window at s = ceil(2 sqrt(3 n ln(10n))),
    divided by n."""
    n = G.n
    s = math.ceil(2.0 * math.sqrt(3.0 * n * math.log(10.0 * n)))
    res = conc_deg(G, params, s, seed, debug_noiseless=debug_noiseless)
    return (res.x_hat + res.v_hat) / n


def est_clique(
    G: Graph, params: PrivacyParams, seed: int, debug_noiseless: bool = False
) -> float:
    """Clique-size estimate for a clique-plus-isolated-nodes graph.

    Solves k(k-1)/n = (k/n) x_hat + v_hat for k; the max(0, .) clamp
    keeps the root real under noise.
    """
    n = G.n
    s = math.ceil(math.sqrt(n))
    res = conc_deg(G, params, s, seed, debug_noiseless=debug_noiseless)
    half = (res.x_hat + 1.0) / 2.0
    return half + math.sqrt(max(0.0, half * half + n * res.v_hat))


def baseline_laplace_edges(
    G: Graph, eps: float, seed: int, debug_noiseless: bool = False
) -> float:
    """Baseline: each node releases d_i + Lap(2n/eps); half the sum."""
    if eps <= 0:
        raise GraphParameterError(f"eps must be positive, got {eps}")
    total = float(G.degrees().sum())
    if debug_noiseless:
        return total / 2.0
    rng = child_rng(seed, "laplace-edges")
    return (total + rng.laplace(0.0, 2.0 * G.n / eps, size=G.n).sum()) / 2.0


def baseline_rr_edges(
    G: Graph, params: PrivacyParams, seed: int, debug_no_flip: bool = False
) -> float:
    """Baseline: randomized response on every upper-triangle adjacency
    bit at the reduced per-bit budget eps' = eps/sqrt(8 n log(1/delta)),
    then the standard debias (b(e^eps'+1)-1)/(e^eps'-1) summed over all
    pairs.  debug_no_flip evaluates the eps' -> infinity limit, where the
    debias is the identity and the sum is exactly m.
    """
    n, m = G.n, G.edge_count
    if debug_no_flip:
        return float(m)
    if params.delta <= 0 or params.delta >= 1:
        raise GraphParameterError("randomized-response baseline needs delta in (0, 1)")
    eps_bit = params.eps / math.sqrt(8.0 * n * math.log(1.0 / params.delta))
    total_pairs = n * (n - 1) // 2
    q_flip = 1.0 / (1.0 + math.exp(eps_bit))
    rng = child_rng(seed, "rr-edges")
    flips = rng.random(total_pairs) < q_flip
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(G.indptr))
    dst = G.indices.astype(np.int64)
    keep = src < dst
    i, j = src[keep], dst[keep]
    # flat index of pair (i, j), i < j, in row-major upper-triangle order
    pos = i * (2 * n - i - 1) // 2 + (j - i - 1)
    ones = m - int(flips[pos].sum()) + int(flips.sum()) - int(flips[pos].sum())
    e = math.exp(eps_bit)
    return (ones * (e + 1.0) - total_pairs) / (e - 1.0)
