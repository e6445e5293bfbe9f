"""Binary network-coding toolkit: encoders, progressive decoding,
closed-form decoding probabilities, and an erasure-channel simulator."""

from .analysis import (
    AnalysisParams,
    InvariantViolation,
    ReceptionProfile,
    TargetMetrics,
    ThresholdUnreachableWarning,
    binomial,
    cond_full_decode_prob,
    cond_full_decode_prob_exact,
    decode_prob_ratio,
    full_decode_prob,
    full_decode_prob_exact,
    full_rank_prob,
    full_rank_prob_exact,
    log_binomial,
    min_packets_for_target,
    ou_partial_decode_prob,
    partial_decode_prob_approx,
    poisson_binomial_tail,
    sf_full_decode_prob,
)
from .codec import (
    SCHEME_ENCODERS,
    SCHEMES,
    ProgressiveDecoder,
    SourceMessage,
    TransmittedPacket,
    back_substitute,
    encode_ordered_uncoded,
    encode_straightforward,
    encode_systematic,
    full_rank_decode,
    rref_decodable_set,
)
from .gf2 import (
    MAX_LENGTH,
    BitMatrix,
    CodingVector,
    DimensionError,
    degree,
    leftmost_one,
    swap_rows,
    xor_rows,
)
from .simulator import (
    BenchResult,
    ChannelConfig,
    EmpiricalCurve,
    TrialResult,
    bench_decode,
    derive_stream,
    erase,
    make_test_message,
    run_single_trial,
    run_trials,
    scheme_seed,
)

__version__ = "0.1.0"
