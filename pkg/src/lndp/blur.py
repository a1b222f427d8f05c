"""Randomized rounding to multiples of s, the blur matrix, and the
compressed blurry degree distribution, plus Wasserstein-infinity tooling.

Rounding a degree d to the two neighboring multiples of s with
probabilities proportional to proximity preserves the mean exactly and
moves no sample by more than s; applied to the whole degree distribution
it compresses n degree bins down to nu = ceil(n/s)+1 coarse bins while
keeping every linear query answerable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from lndp.graph_core import DegreePMF, GraphParameterError
from lndp.rng import child_rng

__all__ = [
    "BlurMatrix",
    "CompressedBlurryPMF",
    "randomized_round",
    "blur_matrix",
    "compressed_blurry",
    "winf_distance",
]


def num_bins(n: int, s: int) -> int:
    """nu = ceil(n/s) + 1: the multiples of s reachable from degrees < n."""
    return -(-n // s) + 1


def randomized_round(x: float, s: int, seed: int, count: int | None = None):
    """Round x to s*floor(x/s) or s*ceil(x/s), the fractional part
    deciding the coin: P(round up) = (x mod s)/s.

    With count=None returns one scalar; otherwise an array of count
    independent roundings from the same seeded stream.
    """
    if s < 1:
        raise GraphParameterError(f"width s must be >= 1, got {s}")
    if x < 0:
        raise GraphParameterError(f"input must be nonnegative, got {x}")
    base = int(x // s)
    frac = x / s - base
    if frac == 0.0:
        return s * base if count is None else np.full(count, s * base)
    rng = child_rng(seed, "round")
    if count is None:
        return s * (base + (1 if rng.random() < frac else 0))
    return s * (base + (rng.random(count) < frac).astype(np.int64))


@dataclass(frozen=True)
class BlurMatrix:
    """The nu x n column-stochastic rounding map A_s.

    Column d holds the rounding distribution of degree d: entry (i, d)
    is max(1 - |d - s*i|/s, 0), nonzero for at most the two rows
    floor(d/s) and floor(d/s)+1.  Stored implicitly; dense
    materialization is for tests only.
    """

    n: int
    s: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.s < 1:
            raise GraphParameterError(f"need n >= 1 and s >= 1, got {self.n}, {self.s}")

    @property
    def nu(self) -> int:
        return num_bins(self.n, self.s)

    def column(self, d: int) -> tuple[np.ndarray, np.ndarray]:
        """(rows, weights) of the <= 2 nonzeros in column d."""
        if not 0 <= d < self.n:
            raise GraphParameterError(f"degree {d} out of range")
        base, rem = divmod(d, self.s)
        if rem == 0:
            return np.array([base]), np.array([1.0])
        frac = rem / self.s
        return np.array([base, base + 1]), np.array([1.0 - frac, frac])

    def columns(self, degrees: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Vectorized column supports: (lower rows, upper weights) per degree.

        Returns (base, w_lo, w_hi) with base = floor(d/s); weight w_hi
        sits on row base+1 (w_hi = 0 when d is a multiple of s).
        """
        d = np.asarray(degrees)
        base = d // self.s
        w_hi = (d - base * self.s) / self.s
        return base.astype(np.int64), 1.0 - w_hi, w_hi

    def dense(self) -> np.ndarray:
        out = np.zeros((self.nu, self.n))
        for d in range(self.n):
            rows, w = self.column(d)
            out[rows, d] = w
        return out

    def apply(self, probs: np.ndarray) -> np.ndarray:
        """A_s @ probs without materializing the dense matrix."""
        if probs.shape != (self.n,):
            raise GraphParameterError(
                f"expected a length-{self.n} vector, got shape {probs.shape}"
            )
        d = np.arange(self.n)
        base, w_lo, w_hi = self.columns(d)
        out = np.zeros(self.nu)
        np.add.at(out, base, w_lo * probs)
        hi = np.minimum(base + 1, self.nu - 1)  # w_hi is 0 whenever base+1 overflows
        np.add.at(out, hi, w_hi * probs)
        return out


def blur_matrix(n: int, s: int) -> BlurMatrix:
    return BlurMatrix(n=n, s=s)


@dataclass(frozen=True)
class CompressedBlurryPMF:
    """Length-nu pmf over the multiples of s; index i means degree s*i."""

    probs: np.ndarray = field(repr=False)
    s: int = 1
    n: int = 1

    def __post_init__(self) -> None:
        p = np.asarray(self.probs, dtype=np.float64)
        object.__setattr__(self, "probs", p)
        if p.shape != (num_bins(self.n, self.s),):
            raise GraphParameterError(
                f"expected length {num_bins(self.n, self.s)}, got {p.shape}"
            )
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
            raise GraphParameterError("blurry pmf entries must be >= 0 and sum to 1")

    @property
    def support(self) -> np.ndarray:
        return self.s * np.arange(self.probs.size)

    def mean(self) -> float:
        return float(self.support @ self.probs)


def compressed_blurry(D: DegreePMF, s: int) -> CompressedBlurryPMF:
    """The compressed blurry degree distribution A_s @ D."""
    A = blur_matrix(D.n, s)
    return CompressedBlurryPMF(probs=A.apply(D.probs), s=s, n=D.n)


def winf_distance(P, Q) -> float:
    """Wasserstein-infinity distance between two pmfs on the reals.

    Accepts DegreePMF, CompressedBlurryPMF, or a (support, probs) pair.
    Computed exactly via the quantile coupling: the largest gap between
    the two inverse CDFs over all quantile levels.  A 1e-12 guard keeps
    floating-point ties on shared cumulative levels from flipping a
    breakpoint to the wrong side.
    """
    sp, pp = _clean(*_as_support_probs(P))
    sq, pq = _clean(*_as_support_probs(Q))
    cum_p = np.cumsum(pp)
    cum_q = np.cumsum(pq)
    cum_p[-1] = cum_q[-1] = 1.0
    levels = np.union1d(cum_p, cum_q)
    ip = np.searchsorted(cum_p, levels - 1e-12)
    iq = np.searchsorted(cum_q, levels - 1e-12)
    return float(np.max(np.abs(sp[ip] - sq[iq])))


def _as_support_probs(P) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(P, CompressedBlurryPMF):
        return P.support, P.probs
    if isinstance(P, DegreePMF):
        return np.arange(P.n), P.probs
    support, probs = P
    return np.asarray(support), np.asarray(probs)


def _clean(support: np.ndarray, probs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    support = np.asarray(support, dtype=np.float64)
    probs = np.asarray(probs, dtype=np.float64)
    if support.shape != probs.shape:
        raise GraphParameterError("support and probs must have matching shapes")
    if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-9:
        raise GraphParameterError("probs must be >= 0 and sum to 1")
    order = np.argsort(support)
    support, probs = support[order], probs[order]
    keep = probs > 0
    return support[keep], probs[keep]
