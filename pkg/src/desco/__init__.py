"""Diversity-embedded streaming erasure codes and their multicast relatives."""
from .channel import ErasurePattern, apply, periodic_burst, single_burst, spaced_bursts
from .desco import (
    DescoCode,
    decode_user1,
    decode_user2,
    desco_construct,
    desco_encode,
    expose_parities,
    recursive_nonurgent_decode,
    t2_star,
)
from .gf import GF, FieldElement, InconsistentSystemError, LinearSystem, ff_add, ff_mul, field, solve_incremental
from .harness import SweepReport, converse_experiment, run_scenario, smallest_passing_spacing, sweep, two_burst_ok
from .musco import (
    CapacityAnswer,
    CcSco,
    CertificationError,
    ExpandedMusco,
    IaSco,
    MulticastParams,
    ParameterError,
    capacity,
    ccsco_construct,
    code_from_dict,
    converse_rate_bound,
    expanded_musco_construct,
    iasco_best_shift,
    iasco_construct,
    source_collapse,
    source_expand,
)
from .oracle import OracleState, oracle_decode
from .sco import (
    MAIN,
    OPPOSITE,
    ConstructionError,
    DiagonalIndex,
    ScoCode,
    choose_coefficients,
    diagonal_main,
    diagonal_opposite,
    sco_decode_burst,
    sco_for,
    sco_parity,
    verify_code,
)
from .stream import ChannelSymbol, DecodeReport, ParityVector, ReceivedStream, SourceSymbol, Stream

__version__ = "0.1.0"
