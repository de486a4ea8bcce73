"""Hidden quantum Markov models with projective rotational symmetry.

Operator-algebra primitives, rotation representations with their sign
cocycle, finite-volume state evaluation under two causal structures, and
numerical symmetry verification for a concrete spin-1 chain model.
"""

from .aklt import (
    AkltModel,
    AkltTensors,
    IntertwiningReport,
    build_model,
    build_tensors,
    dense_contraction_oracle,
    dense_word_value,
    emission_map,
    gram_matrix,
    projector_word,
    single_site_distribution,
    transition_map,
    verify_intertwining,
)
from .errors import (
    ConfigError,
    DimensionMismatchError,
    NonCommutingError,
    NonHermitianError,
    NonUnimodularError,
    RankEstimationError,
    SubgroupStructureError,
    UnsupportedSpinError,
)
from .grouprep import (
    LinearRep,
    NontrivialClassReport,
    ProjectiveRep,
    RotationElement,
    TwoCocycle,
    cocycle_eval,
    commutator_pairing,
    detect_nontrivial_class,
    gauge_transform,
    haar_rotations,
    haar_sample,
    section_cocycle,
    spin_half_rep,
    spin_one_rep,
    spin_rep,
    trivial_cocycle,
    trivial_rep,
)
from .hqmm import (
    CausalStructure,
    GenerativeTriple,
    ObservableWord,
    classical_diagonal_triple,
    composite_map,
    finite_volume_state,
    hidden_marginal,
    kolmogorov_check,
    load_model_config,
    load_word,
    observable_marginal,
    random_word,
    sliced_map,
)
from .opalg import (
    BipartiteMap,
    ChoiMatrix,
    ComplexOperator,
    CpuCertificate,
    OperatorMap,
    certify_cpu,
    hermitian_eigenvalues,
    operator_norm,
    tensor,
)
from .symmetry import (
    CheckResult,
    SymmetryAction,
    check_emission_covariance,
    check_global_invariance,
    check_initial_invariance,
    check_sliced_covariance,
    check_transition_equivariance,
    invariant_states,
    twirl_invariant_state,
)

__version__ = "0.1.0"

__all__ = [
    "AkltModel",
    "AkltTensors",
    "BipartiteMap",
    "CausalStructure",
    "CheckResult",
    "ChoiMatrix",
    "ComplexOperator",
    "ConfigError",
    "CpuCertificate",
    "DimensionMismatchError",
    "GenerativeTriple",
    "IntertwiningReport",
    "LinearRep",
    "NonCommutingError",
    "NonHermitianError",
    "NonUnimodularError",
    "NontrivialClassReport",
    "ObservableWord",
    "OperatorMap",
    "ProjectiveRep",
    "RankEstimationError",
    "RotationElement",
    "SubgroupStructureError",
    "SymmetryAction",
    "TwoCocycle",
    "UnsupportedSpinError",
    "build_model",
    "build_tensors",
    "certify_cpu",
    "check_emission_covariance",
    "check_global_invariance",
    "check_initial_invariance",
    "check_sliced_covariance",
    "check_transition_equivariance",
    "classical_diagonal_triple",
    "cocycle_eval",
    "commutator_pairing",
    "composite_map",
    "dense_contraction_oracle",
    "dense_word_value",
    "detect_nontrivial_class",
    "emission_map",
    "finite_volume_state",
    "gauge_transform",
    "gram_matrix",
    "haar_rotations",
    "haar_sample",
    "hermitian_eigenvalues",
    "hidden_marginal",
    "invariant_states",
    "kolmogorov_check",
    "load_model_config",
    "load_word",
    "observable_marginal",
    "operator_norm",
    "projector_word",
    "random_word",
    "section_cocycle",
    "single_site_distribution",
    "sliced_map",
    "spin_half_rep",
    "spin_one_rep",
    "spin_rep",
    "tensor",
    "transition_map",
    "trivial_cocycle",
    "trivial_rep",
    "twirl_invariant_state",
    "verify_intertwining",
]
