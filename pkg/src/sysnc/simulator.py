"""Erasure-channel Monte Carlo harness and decoder timing benchmark.

Reproducibility contract: every random draw comes from a stream derived by a
fixed mixing function, so results are bit-identical across runs and across
any parallel scheduling of trials.

* ``scheme_seed = blake2b("scheme|<scheme>|<master_seed>")`` isolates schemes;
* per trial, ``derive_stream(seed, trial, "encoder")`` feeds the encoder and
  ``derive_stream(seed, trial, "channel")`` feeds the erasure channel, so
  changing the loss probability never perturbs the coded coefficients of a
  given trial;
* encoder draws happen for every coded packet in sequence order, whether or
  not the channel later drops it.
"""

from __future__ import annotations

import hashlib
import random
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .codec import (
    SCHEME_ENCODERS,
    SCHEMES,
    ProgressiveDecoder,
    SourceMessage,
    TransmittedPacket,
    combine_words,
    full_rank_decode,
)

BENCH_DECODERS = ("ge", "gepd")


def _mix(*labels) -> int:
    key = "|".join(str(x) for x in labels).encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")


def derive_stream(seed: int, trial_index: int, role: str) -> random.Random:
    """Deterministic per-trial random stream for one role ('encoder'/'channel')."""
    return random.Random(_mix(role, seed, trial_index))


def scheme_seed(master_seed: int, scheme: str) -> int:
    """Sub-seed isolating one transmission scheme under a master seed."""
    return _mix("scheme", scheme, master_seed)


def make_test_message(k: int, payload_len: int) -> SourceMessage:
    """Fixed, distinguishable source payloads for simulations and benchmarks."""
    return SourceMessage(
        tuple(
            hashlib.shake_256(f"payload|{i}".encode()).digest(payload_len)
            for i in range(1, k + 1)
        )
    )


@dataclass(frozen=True)
class ChannelConfig:
    """Memoryless packet erasure channel: each packet lost with probability p."""

    p: float
    seed: int

    def __post_init__(self) -> None:
        if not 0 <= self.p <= 1:
            raise ValueError(f"erasure probability {self.p} outside [0, 1]")


def erase(
    schedule: list[TransmittedPacket], cfg: ChannelConfig, trial_index: int
) -> list[TransmittedPacket]:
    """Drop each packet independently with probability cfg.p, preserving order.

    The drop pattern is a pure function of (cfg.seed, trial_index).
    """
    rng = derive_stream(cfg.seed, trial_index, "channel").random
    return [pkt for pkt in schedule if rng() >= cfg.p]


@dataclass(frozen=True)
class TrialResult:
    """Per-trial record: packets decoded after each transmission count."""

    n_first: int
    decoded_count_by_n: tuple[int, ...]

    def count_at(self, n: int) -> int:
        return self.decoded_count_by_n[n - self.n_first]


@dataclass(frozen=True)
class EmpiricalCurve:
    """Estimated P[decoded >= m] per transmission count, from repeated trials."""

    scheme: str
    k: int
    m: int
    p: float
    seed: int
    trials: int
    points: tuple[tuple[int, float, int], ...]  # (n, estimate, trials)

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be positive")
        for _, est, count in self.points:
            if not 0 <= est <= 1 or count < 1:
                raise ValueError("estimates must lie in [0, 1] with trials > 0")

    def estimate_at(self, n: int) -> float:
        for point_n, est, _ in self.points:
            if point_n == n:
                return est
        raise KeyError(f"no point at n={n}")


def run_single_trial(
    scheme: str,
    msg: SourceMessage,
    n_range: tuple[int, int],
    cfg: ChannelConfig,
    trial_index: int,
) -> TrialResult:
    """One full trial on the packet-object path: encode the whole schedule,
    apply the channel, feed survivors in order to a fresh progressive decoder.

    Mostly useful for inspection and as a cross-check of the packed fast path
    used by :func:`run_trials`.
    """
    n_lo, n_hi = _check_n_range(n_range)
    encoder = SCHEME_ENCODERS[scheme]
    enc_rng = derive_stream(cfg.seed, trial_index, "encoder")
    schedule = [encoder(msg, n, enc_rng) for n in range(1, n_hi + 1)]
    received = erase(schedule, cfg, trial_index)
    decoder = ProgressiveDecoder(msg.k, msg.payload_len)
    counts = []
    arrivals = iter(received)
    nxt = next(arrivals, None)
    for n in range(1, n_hi + 1):
        if nxt is not None and nxt.sequence_index == n:
            decoder.receive(nxt)
            nxt = next(arrivals, None)
        if n >= n_lo:
            counts.append(decoder.decoded_count)
    return TrialResult(n_lo, tuple(counts))


def _trial_counts(
    scheme: str,
    packet_words: tuple[int, ...],
    payload_len: int,
    n_hi: int,
    p: float,
    seed: int,
    trial_index: int,
) -> list[int]:
    """Packed fast path of one trial: decoded count after each n in [1, n_hi].

    Draw-for-draw identical to :func:`run_single_trial` (same streams, same
    order), but short-circuits after full recovery since the count can only
    stay at k from there on.
    """
    k = len(packet_words)
    getbits = derive_stream(seed, trial_index, "encoder").getrandbits
    channel = derive_stream(seed, trial_index, "channel").random
    receive = ProgressiveDecoder(k, payload_len).receive_words
    counts = [0] * (n_hi + 1)
    done = 0
    systematic = scheme == "systematic"
    ordered = scheme == "ordered-uncoded"
    for n in range(1, n_hi + 1):
        if systematic and n <= k:
            vec = 1 << (n - 1)
            pay = packet_words[n - 1]
        elif ordered:
            i = (n - 1) % k
            vec = 1 << i
            pay = packet_words[i]
        else:
            vec = getbits(k)
            pay = None
        if channel() >= p and vec:
            if pay is None:
                pay = combine_words(packet_words, vec)
            done += len(receive(vec, pay))
        counts[n] = done
        if done == k:
            for j in range(n + 1, n_hi + 1):
                counts[j] = k
            break
    return counts


def _count_block(args) -> list[list[int]]:
    """Aggregate success counts for a contiguous block of trials (worker unit)."""
    scheme, packet_words, payload_len, n_hi, p, seed, start, stop, m_list = args
    success = [[0] * (n_hi + 1) for _ in m_list]
    for trial in range(start, stop):
        counts = _trial_counts(
            scheme, packet_words, payload_len, n_hi, p, seed, trial
        )
        for mi, m in enumerate(m_list):
            row = success[mi]
            for n in range(1, n_hi + 1):
                if counts[n] >= m:
                    row[n] += 1
    return success


def run_trials(
    scheme: str,
    k: int,
    m_list: list[int],
    n_range: tuple[int, int],
    cfg: ChannelConfig,
    trials: int,
    *,
    payload_len: int = 8,
    workers: int = 1,
) -> list[EmpiricalCurve]:
    """Estimate P[decoded >= m] for each m and each n in n_range.

    Each trial encodes one schedule, drops packets through the channel, and
    feeds survivors incrementally to a progressive decoder, sampling the
    decoded count at every n (one decoder pass per trial). Trials are
    independent and carry their own derived streams, so any ``workers``
    partitioning yields bit-identical results.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    if trials < 1:
        raise ValueError("trials must be positive")
    if workers < 1:
        raise ValueError("workers must be positive")
    for m in m_list:
        if not 1 <= m <= k:
            raise ValueError(f"recovery threshold m={m} outside [1, {k}]")
    n_lo, n_hi = _check_n_range(n_range)
    sub_seed = scheme_seed(cfg.seed, scheme)
    packet_words = make_test_message(k, payload_len).packet_words
    m_tuple = tuple(m_list)
    if workers == 1:
        success = _count_block(
            (scheme, packet_words, payload_len, n_hi, cfg.p, sub_seed, 0, trials, m_tuple)
        )
    else:
        step = -(-trials // workers)
        blocks = [
            (scheme, packet_words, payload_len, n_hi, cfg.p, sub_seed,
             start, min(start + step, trials), m_tuple)
            for start in range(0, trials, step)
        ]
        success = [[0] * (n_hi + 1) for _ in m_tuple]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for block in pool.map(_count_block, blocks):
                for mi, row in enumerate(block):
                    for n, c in enumerate(row):
                        success[mi][n] += c
    return [
        EmpiricalCurve(
            scheme,
            k,
            m,
            cfg.p,
            cfg.seed,
            trials,
            tuple(
                (n, success[mi][n] / trials, trials) for n in range(n_lo, n_hi + 1)
            ),
        )
        for mi, m in enumerate(m_tuple)
    ]


@dataclass(frozen=True)
class BenchResult:
    """Wall-time summary for one decoder at one generation size."""

    decoder: str
    k: int
    median_ns: int
    p25_ns: int
    p75_ns: int
    repetitions: int


def bench_decode(
    k_values: list[int],
    decoder: str,
    repetitions: int,
    *,
    seed: int = 0,
    payload_len: int = 8,
) -> list[BenchResult]:
    """Time full recovery from a lossless stream of straightforward packets.

    For each k, pre-built packet streams are fed to the decoder until all k
    source packets are out: the progressive decoder eliminates per arrival,
    while the batch eliminator reruns from scratch on every arrival from the
    k-th onward (the receiver cannot know the rank without eliminating).
    Streams are pre-generated outside the timed section and shared across
    decoders for a given seed. Medians and quartiles over ``repetitions``
    runs; absolute numbers are hardware-relative and only the ordering
    between decoders on one host is meaningful.
    """
    if decoder not in BENCH_DECODERS:
        raise ValueError(f"unknown decoder {decoder!r}; expected one of {BENCH_DECODERS}")
    if repetitions < 1:
        raise ValueError("repetitions must be positive")
    results = []
    for k in k_values:
        msg = make_test_message(k, payload_len)
        streams = [
            _bench_stream(msg, k, seed, rep) for rep in range(repetitions)
        ]
        _timed_decode(decoder, k, streams[0])  # warm-up, discarded
        times = [_timed_decode(decoder, k, stream) for stream in streams]
        p25, med, p75 = _quartiles(times)
        results.append(BenchResult(decoder, k, med, p25, p75, repetitions))
    return results


def _bench_stream(
    msg: SourceMessage, k: int, seed: int, rep: int
) -> list[TransmittedPacket]:
    # k + 96 uniform packets: the chance of still lacking full rank is ~2^-96.
    rng = derive_stream(scheme_seed(seed, f"bench-k{k}"), rep, "encoder")
    return [
        SCHEME_ENCODERS["straightforward"](msg, n, rng) for n in range(1, k + 97)
    ]


def _timed_decode(decoder: str, k: int, stream: list[TransmittedPacket]) -> int:
    if decoder == "gepd":
        start = time.perf_counter_ns()
        dec = ProgressiveDecoder(k, len(stream[0].payload))
        for pkt in stream:
            dec.receive(pkt)
            if dec.decoded_count == k:
                return time.perf_counter_ns() - start
    else:
        start = time.perf_counter_ns()
        received: list[TransmittedPacket] = []
        for pkt in stream:
            received.append(pkt)
            if len(received) >= k and full_rank_decode(received, k) is not None:
                return time.perf_counter_ns() - start
    raise RuntimeError(f"stream of {len(stream)} packets never reached full rank")


def _quartiles(times: list[int]) -> tuple[int, int, int]:
    if len(times) == 1:
        return times[0], times[0], times[0]
    q = statistics.quantiles(times, n=4, method="inclusive")
    return round(q[0]), round(statistics.median(times)), round(q[2])


def _check_n_range(n_range: tuple[int, int]) -> tuple[int, int]:
    n_lo, n_hi = n_range
    if not 1 <= n_lo <= n_hi:
        raise ValueError(f"bad transmission range [{n_lo}, {n_hi}]")
    return n_lo, n_hi
