"""List privacy amplification toolkit.

Extracts L candidate keys plus a secret index from a partially
compromised string, trading a longer key for the adversary's ignorance
of which list entry is in use.  Includes exact GF(2^m) and Toeplitz
universal hashing, key-length calculators, a desk-scale security
verification lab, and a BB84 post-processing pipeline simulator.
"""

from .bitconv import BitString, bits_pack, bits_unpack, xor_convolve_fast, xor_convolve_naive
from .bounds import (
    Bb84Params,
    BoundParams,
    auth_cost,
    bb84_key_length,
    bb84_min_entropy,
    bb84_phase_threshold,
    binary_entropy,
    binary_entropy_inverse,
    clamped_length,
    epsilon_total,
    finite_size_delta,
    net_rate,
    qlhl_length,
    qllhl_length,
)
from .gf2m import DEFAULT_POLYS, FieldSpec, gf_add, gf_inner_product, gf_mul, validate_field
from .listhash import (
    IpSeed,
    ListKeyBundle,
    ListPaParams,
    ToeplitzSeed,
    ip_list_hash,
    ip_sample_seed,
    list_pa,
    read_key_bytes,
    read_seed_bytes,
    toeplitz_list_hash,
    toeplitz_sample_seed,
    write_key_bytes,
    write_seed_bytes,
)
from .qkdsim import PipelineConfig, PipelineTranscript, emit_report, intercept_resend_demo, simulate_round
from .rngstream import RandomStream
from .seclab import (
    CqSource,
    DistanceReport,
    make_syndrome_source,
    min_entropy,
    real_ideal_distance,
    smooth_min_entropy,
    universality_check,
    verify_qllhl,
)

__version__ = "0.1.0"
