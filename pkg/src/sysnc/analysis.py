"""Closed-form decoding probabilities and delay metrics.

The three transmission schemes are modelled over a packet erasure channel
with loss probability p:

* systematic: exact full-recovery probability (conditional on the receive
  count and averaged over the channel) plus a small-p approximation for
  recovering at least m < k packets;
* straightforward: full-recovery probability from the rank statistics of
  uniform random GF(q) matrices (no closed form exists for its partial
  recovery, which is available through simulation only);
* ordered-uncoded: exact partial/full recovery via a Poisson-binomial tail.

All probability functions are pure. Two arithmetic paths are provided where
precision matters: float functions (exact integer binomials with one
correctly rounded division per term, log-space weights once factorials
overflow doubles) and ``*_exact`` variants over ``fractions.Fraction`` for
oracle-scale parameters.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

# Above this n the erasure-channel weights C(n,r)(1-p)^r p^(n-r) switch to
# log space; below it, exact integer binomials keep full double precision.
_EXACT_WEIGHT_LIMIT = 64


class InvariantViolation(RuntimeError):
    """A computed quantity broke a property the model guarantees."""


class ThresholdUnreachableWarning(UserWarning):
    """The recovery threshold m exceeds what the approximation can ever reach."""


def binomial(n: int, k: int) -> int:
    """Exact C(n, k). Raises for k outside [0, n]; callers clamp their sums."""
    if n < 0 or k < 0 or k > n:
        raise ValueError(f"C({n}, {k}) is outside the supported domain")
    return math.comb(n, k)


def log_binomial(n: int, k: int) -> float:
    """ln C(n, k) via lgamma, for ranges where the exact value overflows a double."""
    if n < 0 or k < 0 or k > n:
        raise ValueError(f"C({n}, {k}) is outside the supported domain")
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def full_rank_prob(k: int, r: int, q: int = 2) -> float:
    """Probability that r uniform random GF(q) combinations of k unknowns have rank k.

    prod_{j=0}^{k-1} (1 - q^(j-r)); 1 for k == 0 (empty product), 0 for r < k.
    """
    _check_field(q)
    if k < 0 or r < 0:
        raise ValueError("counts must be non-negative")
    if k == 0:
        return 1.0
    if r < k:
        return 0.0
    prod = 1.0
    for j in range(k):
        prod *= 1.0 - float(q) ** (j - r)
    return prod


def full_rank_prob_exact(k: int, r: int, q: int = 2) -> Fraction:
    _check_field(q)
    if k < 0 or r < 0:
        raise ValueError("counts must be non-negative")
    if k == 0:
        return Fraction(1)
    if r < k:
        return Fraction(0)
    prod = Fraction(1)
    for j in range(k):
        prod *= 1 - Fraction(1, q ** (r - j))
    return prod


def cond_full_decode_prob(k: int, r: int, n: int, q: int = 2) -> float:
    """Probability of recovering all k source packets of the systematic scheme,
    given that exactly r of the n transmitted packets arrived.

    The r arrivals are a uniform r-subset of the n sends; conditioning on the
    number h of systematic packets among them, the k - h missing packets must
    be solvable from the r - h received coded ones:

        [ C(n-k, r-k) + sum_{h=h_min}^{k-1} C(k,h) C(n-k, r-h) W(k-h, r-h) ]
          / C(n, r),    h_min = max(0, r - n + k)

    with W the full-rank probability above. Each binomial ratio is an exact
    integer quotient rounded once, so the result is accurate for any n.
    """
    _check_field(q)
    if not 1 <= k <= r <= n:
        raise ValueError(f"need 1 <= k <= r <= n, got k={k}, r={r}, n={n}")
    den = math.comb(n, r)
    h_min = max(0, r - n + k)
    acc = math.comb(n - k, r - k) / den
    for h in range(h_min, k):
        acc += (
            math.comb(k, h)
            * math.comb(n - k, r - h)
            / den
            * full_rank_prob(k - h, r - h, q)
        )
    return min(acc, 1.0)


def cond_full_decode_prob_exact(k: int, r: int, n: int, q: int = 2) -> Fraction:
    _check_field(q)
    if not 1 <= k <= r <= n:
        raise ValueError(f"need 1 <= k <= r <= n, got k={k}, r={r}, n={n}")
    den = math.comb(n, r)
    h_min = max(0, r - n + k)
    acc = Fraction(math.comb(n - k, r - k), den)
    for h in range(h_min, k):
        acc += (
            Fraction(math.comb(k, h) * math.comb(n - k, r - h), den)
            * full_rank_prob_exact(k - h, r - h, q)
        )
    return acc


def full_decode_prob(k: int, n: int, p: float, q: int = 2) -> float:
    """Probability that a systematic-scheme receiver recovers all k packets
    after n transmissions over an erasure channel with loss probability p."""
    _check_erasure(p)
    if n < k:
        raise ValueError(f"need n >= k, got n={n}, k={k}")
    total = 0.0
    for r in range(k, n + 1):
        w = _receive_pmf(n, r, p)
        if w:
            total += w * cond_full_decode_prob(k, r, n, q)
    return min(total, 1.0)


def full_decode_prob_exact(k: int, n: int, p: Fraction, q: int = 2) -> Fraction:
    if not 0 <= p <= 1:
        raise ValueError(f"erasure probability {p} outside [0, 1]")
    if n < k:
        raise ValueError(f"need n >= k, got n={n}, k={k}")
    total = Fraction(0)
    for r in range(k, n + 1):
        weight = math.comb(n, r) * (1 - p) ** r * p ** (n - r)
        total += weight * cond_full_decode_prob_exact(k, r, n, q)
    return total


def partial_decode_prob_approx(
    k: int, m: int, n: int, p: float, q: int = 2
) -> float:
    """Small-p approximation for recovering at least m of k source packets.

    Counts only the min(k, n) transmitted systematic packets: for small p
    the m recovered packets are almost surely systematic, so the probability
    reduces to a binomial tail. For m == k the exact full-recovery expression
    is used instead (the approximation is stated for m < k only). When m
    exceeds min(k, n) the approximation can never reach the threshold; 0 is
    returned under a ThresholdUnreachableWarning.
    """
    _check_erasure(p)
    if not 1 <= m <= k:
        raise ValueError(f"need 1 <= m <= k, got m={m}, k={k}")
    if n < 1:
        raise ValueError("need n >= 1")
    n_min = min(k, n)
    if m > n_min:
        warnings.warn(
            f"threshold m={m} unreachable under the systematic-only "
            f"approximation with min(k, n)={n_min}",
            ThresholdUnreachableWarning,
            stacklevel=2,
        )
        return 0.0
    if m == k:
        return full_decode_prob(k, n, p, q)
    return min(sum(_receive_pmf(n_min, r, p) for r in range(m, n_min + 1)), 1.0)


def sf_full_decode_prob(k: int, n: int, p: float, q: int = 2) -> float:
    """Full-recovery probability of the straightforward scheme: the receive
    count must reach k and the received uniform random matrix must have full rank."""
    _check_erasure(p)
    if n < k:
        raise ValueError(f"need n >= k, got n={n}, k={k}")
    total = 0.0
    for r in range(k, n + 1):
        w = _receive_pmf(n, r, p)
        if w:
            total += w * full_rank_prob(k, r, q)
    return min(total, 1.0)


def ou_partial_decode_prob(k: int, m: int, n: int, p) -> float | Fraction:
    """Exact probability that cyclic repetition delivers at least m of k packets
    within n sends.

    Packet i goes out ``(n - i) // k + 1`` times (0 if i > n) and survives
    with probability 1 - p^copies; the recovered count is a sum of
    independent non-identical Bernoullis, evaluated with the standard
    Poisson-binomial dynamic program. Works in whatever arithmetic ``p``
    supports (float or Fraction).
    """
    if not 1 <= m <= k:
        raise ValueError(f"need 1 <= m <= k, got m={m}, k={k}")
    if n < 1:
        raise ValueError("need n >= 1")
    if not 0 <= p <= 1:
        raise ValueError(f"erasure probability {p} outside [0, 1]")
    survive = []
    for i in range(1, k + 1):
        copies = (n - i) // k + 1 if i <= n else 0
        survive.append(1 - p**copies if copies else 0)
    tail = poisson_binomial_tail(survive, m)
    if isinstance(tail, float):
        return min(max(tail, 0.0), 1.0)  # the DP can overshoot 1 by an ulp
    return tail


def poisson_binomial_tail(probs, threshold: int):
    """P[at least ``threshold`` successes] for independent Bernoulli trials ``probs``."""
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    dist = [1]
    for s in probs:
        stay = 1 - s
        nxt = [dist[0] * stay]
        nxt.extend(dist[j] * stay + dist[j - 1] * s for j in range(1, len(dist)))
        nxt.append(dist[-1] * s)
        dist = nxt
    return sum(dist[threshold:], dist[0] * 0)


def decode_prob_ratio(k: int, r: int, n: int, q: int = 2) -> float:
    """How much likelier full recovery from r arrivals is with the systematic
    scheme than with the straightforward one. Exceeds 1 for every finite n
    and tends to 1 as n - k grows."""
    w = full_rank_prob(k, r, q)
    if w == 0.0:
        # Every factor of the rank product is positive for r >= k >= 1.
        raise InvariantViolation(
            f"full-rank probability vanished at k={k}, r={r}, q={q}"
        )
    return cond_full_decode_prob(k, r, n, q) / w


def min_packets_for_target(
    prob_fn: Callable[[int], float],
    p_hat: float,
    n_start: int,
    n_max: int,
) -> int | None:
    """Smallest n in [n_start, n_max] with prob_fn(n) >= p_hat; None if the cap
    is reached first (e.g. an approximation that plateaus below the target).

    Linear scan, relying on prob_fn being non-decreasing in n.
    """
    if not 0 < p_hat <= 1:
        raise ValueError(f"target probability {p_hat} outside (0, 1]")
    if n_start < 1 or n_max < n_start:
        raise ValueError(f"bad search range [{n_start}, {n_max}]")
    for n in range(n_start, n_max + 1):
        if prob_fn(n) >= p_hat:
            return n
    return None


@dataclass(frozen=True)
class TargetMetrics:
    """Minimum transmissions to hit a target probability, for partial (m
    packets) and full (k packets) recovery; None marks an unreachable target."""

    p_hat: float
    n_partial: int | None
    n_full: int | None

    def __post_init__(self) -> None:
        if not 0 < self.p_hat <= 1:
            raise ValueError(f"target probability {self.p_hat} outside (0, 1]")
        if (
            self.n_partial is not None
            and self.n_full is not None
            and self.n_partial > self.n_full
        ):
            raise InvariantViolation(
                f"partial recovery needed {self.n_partial} packets but full "
                f"recovery only {self.n_full}"
            )

    @property
    def delta_n(self) -> int | None:
        """Extra packets full recovery needs beyond partial recovery."""
        if self.n_partial is None or self.n_full is None:
            return None
        return self.n_full - self.n_partial


@dataclass(frozen=True)
class ReceptionProfile:
    """Receive-side counts for one session: r packets arrived, h of them systematic."""

    k: int
    n: int
    r: int
    h: int

    def __post_init__(self) -> None:
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if not 0 <= self.r <= self.n:
            raise ValueError(f"receive count r={self.r} outside [0, {self.n}]")
        if not self.h_min <= self.h <= min(self.k, self.r):
            raise ValueError(
                f"systematic count h={self.h} outside "
                f"[{self.h_min}, {min(self.k, self.r)}]"
            )

    @property
    def h_min(self) -> int:
        """Fewest systematic packets an r-packet reception can contain."""
        return max(0, self.r - (self.n - self.k))


@dataclass(frozen=True)
class AnalysisParams:
    """Validated parameter bundle for one analysis row."""

    k: int
    n: int
    m: int
    p: float
    q: int = 2

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("generation size k must be positive")
        if not 1 <= self.m <= self.k:
            raise ValueError(f"need 1 <= m <= k, got m={self.m}, k={self.k}")
        if self.n < 1:
            raise ValueError("transmission count n must be positive")
        _check_erasure(self.p)
        _check_field(self.q)

    @property
    def n_min(self) -> int:
        return min(self.k, self.n)


def _receive_pmf(n: int, r: int, p: float) -> float:
    """P[exactly r of n packets arrive] when each is erased with probability p."""
    if p == 0:
        return 1.0 if r == n else 0.0
    if p == 1:
        return 1.0 if r == 0 else 0.0
    if n <= _EXACT_WEIGHT_LIMIT:
        return math.comb(n, r) * (1.0 - p) ** r * p ** (n - r)
    return math.exp(log_binomial(n, r) + r * math.log1p(-p) + (n - r) * math.log(p))


def _check_field(q: int) -> None:
    if q < 2:
        raise ValueError(f"field size q={q} must be at least 2")


def _check_erasure(p: float) -> None:
    if not 0 <= p <= 1:
        raise ValueError(f"erasure probability {p} outside [0, 1]")
