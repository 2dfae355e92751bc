"""Non-stochastic information leakage over finite uncertain variables."""

from .datasets import (
    MAJORITY_VOTE_REFERENCE,
    QuantizerSpec,
    Table,
    build_empirical,
    build_joint,
    load_table,
    majority_vote_fixture,
    max_distortion,
    uniform_quantize,
)
from .errors import (
    DataError,
    DomainError,
    EmptyConditionError,
    EmptyDataError,
    IngestionError,
    NSLeakError,
    OracleScaleError,
    PartitionError,
    SelectorError,
)
from .leakage import (
    AttributePartition,
    LeakageReport,
    convert_leakage_maximal,
    guessing_leakage,
    identifiability_bound,
    identity_leakage,
    is_epsilon_identifiable,
    maximal_leakage,
    maximal_leakage_oracle,
    worst_case_attribute,
)
from .overlap import OverlapPartition, maximin_information, one_shot_sup_oracle, overlap_partition
from .partitions import bell_number, set_partitions
from .stochastic import (
    EmpiricalJoint,
    empirical_from_pairs,
    guessing_entropy,
    sibson_infinity_leakage,
    stochastic_guessing_leakage,
)
from .uv import (
    JointRange,
    conditional_hartley_entropy,
    conditional_range,
    conditional_ranges,
    hartley_entropy,
    is_markov_chain,
    is_unrelated,
    marginal_range,
    zero_mutual_information,
)

__version__ = "0.1.0"
