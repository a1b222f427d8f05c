"""Linear queries on the compressed blurry degree distribution.

Each node rounds its degree into the coarse bin grid, pushes the
workload matrix through its (two-entry) rounding column, and releases
the result plus spherical Gaussian noise; the server averages.  Exact
(L, R) factorizations let a low-sensitivity inner workload R be answered
privately and post-processed with L — the counting workload ships with a
binary-tree (dyadic interval) factorization of logarithmic quality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from lndp.blur import blur_matrix, num_bins
from lndp.graph_core import Graph, GraphParameterError, degree_pmf
from lndp.mechanisms import PrivacyParams, gaussian_sigma
from lndp.rng import child_rng

__all__ = [
    "Workload",
    "Factorization",
    "norm_1_to_2",
    "norm_2_to_inf",
    "counting_workload",
    "fact_counting",
    "anslin",
    "anslin_node_sigma",
    "factmech",
    "pmf_estimate",
    "cdf_estimate",
]

_NOISE_CHUNK_ENTRIES = 1 << 24


def _as_matrix(M) -> np.ndarray:
    mat = np.asarray(getattr(M, "matrix", M), dtype=np.float64)
    if mat.ndim != 2:
        raise GraphParameterError(f"workload must be 2-dimensional, got {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise GraphParameterError("workload entries must be finite")
    return mat


@dataclass(frozen=True)
class Workload:
    """A k x nu matrix of linear queries against the nu coarse degree bins."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", _as_matrix(self.matrix))

    @property
    def k(self) -> int:
        return self.matrix.shape[0]

    @property
    def nu(self) -> int:
        return self.matrix.shape[1]


def norm_1_to_2(M) -> float:
    """Largest l2 norm of a column."""
    mat = _as_matrix(M)
    return float(np.sqrt((mat * mat).sum(axis=0).max(initial=0.0)))


def norm_2_to_inf(M) -> float:
    """Largest l2 norm of a row."""
    mat = _as_matrix(M)
    return float(np.sqrt((mat * mat).sum(axis=1).max(initial=0.0)))


@dataclass(frozen=True)
class Factorization:
    """An exact factorization W = L @ R; approximate ones are rejected."""

    L: np.ndarray = field(repr=False)
    R: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        L, R = _as_matrix(self.L), _as_matrix(self.R)
        if L.shape[1] != R.shape[0]:
            raise GraphParameterError(
                f"inner dimensions disagree: {L.shape} vs {R.shape}"
            )
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "R", R)

    @property
    def workload(self) -> np.ndarray:
        return self.L @ self.R

    @property
    def gamma(self) -> float:
        """The factorization quality ||L||_{2->inf} * ||R||_{1->2}."""
        return norm_2_to_inf(self.L) * norm_1_to_2(self.R)

    def check_exact(self, target, tol: float = 1e-9) -> None:
        if np.max(np.abs(self.workload - _as_matrix(target))) > tol:
            raise GraphParameterError(
                "factorization is not exact for the target workload "
                "(approximate factorizations are unsupported)"
            )


def counting_workload(nu: int) -> np.ndarray:
    """The nu x nu lower-triangular all-ones matrix: row j sums bins 0..j,
    so applied to a pmf it yields the CDF."""
    return np.tril(np.ones((nu, nu)))


def _dyadic_intervals(nu: int) -> list[tuple[int, int]]:
    """Segment-tree intervals over [0, nu): 2*nu - 1 of them."""
    out: list[tuple[int, int]] = []
    stack = [(0, nu)]
    while stack:
        lo, hi = stack.pop()
        out.append((lo, hi))
        if hi - lo > 1:
            mid = (lo + hi) // 2
            stack.append((mid, hi))
            stack.append((lo, mid))
    return out


def _prefix_cover(lo: int, hi: int, e: int, take: list[tuple[int, int]]) -> None:
    """Canonical dyadic cover of [0, e) restricted to node [lo, hi)."""
    if e <= lo:
        return
    if hi <= e:
        take.append((lo, hi))
        return
    mid = (lo + hi) // 2
    _prefix_cover(lo, mid, e, take)
    _prefix_cover(mid, hi, e, take)


def fact_counting(nu: int) -> Factorization:
    """Binary-tree factorization of the counting workload.

    R maps the nu bins onto all 2*nu-1 dyadic-interval sums; L rebuilds
    each prefix from its canonical cover of at most ceil(log2 nu)+1
    intervals.  gamma <= ceil(log2 nu) + 1.
    """
    if nu < 1:
        raise GraphParameterError(f"dimension must be >= 1, got {nu}")
    intervals = _dyadic_intervals(nu)
    index = {iv: r for r, iv in enumerate(intervals)}
    ell = len(intervals)
    R = np.zeros((ell, nu))
    for (lo, hi), r in index.items():
        R[r, lo:hi] = 1.0
    L = np.zeros((nu, ell))
    for j in range(nu):
        take: list[tuple[int, int]] = []
        _prefix_cover(0, nu, j + 1, take)
        for iv in take:
            L[j, index[iv]] = 1.0
    return Factorization(L=L, R=R)


def anslin_node_sigma(M, n: int, s: int, params: PrivacyParams) -> float:
    """Per-node, per-coordinate noise std for the averaged linear-query
    protocol: the Gaussian mechanism at the joint-report l2 sensitivity
    bound 2*||M||_{1->2}*sqrt(1 + n/s^2)."""
    return gaussian_sigma(2.0 * norm_1_to_2(M) * math.sqrt(1.0 + n / s**2), params)


def anslin(
    G: Graph,
    M,
    params: PrivacyParams,
    s: int,
    seed: int,
    debug_noiseless: bool = False,
) -> np.ndarray:
    """Averaged noisy linear query: returns M @ D_hat + Z with Z a
    spherical Gaussian of per-coordinate std sigma_node/sqrt(n).

    Each node contributes M applied to its two-entry rounding column
    plus iid N(0, sigma_node^2) per coordinate; the server averages over
    the fixed node order.  Node i's noise block is row i of a node-major
    draw from the (seed, "anslin-noise") stream, so the result is
    independent of any parallel schedule.
    """
    mat = _as_matrix(M)
    n = G.n
    if s < 1:
        raise GraphParameterError(f"width s must be >= 1, got {s}")
    nu = num_bins(n, s)
    if mat.shape[1] != nu:
        raise GraphParameterError(
            f"workload has {mat.shape[1]} columns, expected nu = {nu}"
        )
    A = blur_matrix(n, s)
    out = mat @ A.apply(degree_pmf(G).probs)
    if debug_noiseless:
        return out
    sigma = anslin_node_sigma(mat, n, s, params)
    if sigma == 0.0:
        return out
    k = mat.shape[0]
    rng = child_rng(seed, "anslin-noise")
    total = np.zeros(k)
    chunk = max(1, _NOISE_CHUNK_ENTRIES // max(k, 1))
    for a in range(0, n, chunk):
        rows = min(chunk, n - a)
        total += rng.normal(0.0, sigma, size=(rows, k)).sum(axis=0)
    return out + total / n


def factmech(
    G: Graph,
    F: Factorization,
    params: PrivacyParams,
    s: int,
    seed: int,
    debug_noiseless: bool = False,
) -> np.ndarray:
    """Answer the workload L @ R by releasing the inner queries R through
    the noisy linear-query protocol and post-processing with L."""
    v_hat = anslin(G, F.R, params, s, seed, debug_noiseless=debug_noiseless)
    return F.L @ v_hat


def pmf_estimate(
    G: Graph, params: PrivacyParams, s: int, seed: int, debug_noiseless: bool = False
) -> np.ndarray:
    """Private estimate of the compressed blurry degree pmf."""
    nu = num_bins(G.n, s)
    eye = Factorization(L=np.eye(nu), R=np.eye(nu))
    return factmech(G, eye, params, s, seed, debug_noiseless=debug_noiseless)


def cdf_estimate(
    G: Graph, params: PrivacyParams, s: int, seed: int, debug_noiseless: bool = False
) -> np.ndarray:
    """Private estimate of the compressed blurry degree CDF via the
    binary-tree factorization of the counting workload."""
    nu = num_bins(G.n, s)
    return factmech(
        G, fact_counting(nu), params, s, seed, debug_noiseless=debug_noiseless
    )
