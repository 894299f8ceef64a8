"""Pre-transformed Reed-Muller codes with permutation-stable dynamic
freezing, ensemble list decoding, and the analysis/simulation tooling
around them."""

from .exceptions import ConfigurationError, DimensionOverflowError, ResourceCapError
from .gf2 import BitMatrix, invert, kron_power, mat_mul, rank, row_space_equal, rref
from .codespec import (
    CodeSpec,
    Constraint,
    RULE_INFO,
    RULE_ZERO,
    build_constraint,
    constraint_from_text,
    constraint_to_text,
    count_stable_variants,
    enumerate_stable_variants,
    make_spec,
    max_dynamic_count,
    stable_weight_classes,
)
from .autgroup import (
    AffinePerm,
    GroupSpec,
    StabilityReport,
    enumerate_group,
    group_from_name,
    group_size,
    identity_perm,
    is_stable,
    perms_from_text,
    perms_to_text,
    post_transformation_matrix,
    sample_blta,
    sample_blta_pl,
    sample_group,
    stability_survey,
    transform_constraint,
)
from .encdec import (
    AEDecoder,
    DecodeResult,
    SoftInput,
    ae_decode,
    encode,
    info_from_codeword,
    polar_transform,
    sc_decode,
    scl_decode,
    select_ml,
    squared_distance,
)
from .analysis import (
    WeightSpectrum,
    brute_weight_enum,
    formula_spectrum,
    known_perms_storage,
    low_weight_enum_scl,
    memory_requirements,
    qfunc,
    rm_minweight_count,
    truncated_union_bound,
)
from .sim import (
    BLERPoint,
    ChannelPoint,
    DecoderSpec,
    points_to_csv,
    run_bler,
    transmit,
    wilson_interval,
)

__version__ = "0.1.0"
