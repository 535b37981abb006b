"""Masking of quantum channel families by broadcast isometries.

The package decides whether a family of channels can be masked (both reduced
outputs independent of the family member), synthesizes an explicit isometric
masker for every maskable class, and verifies masking numerically through
brute-force reduced-channel comparison.
"""

from .channels import (
    ALL_DIRECTIONS,
    BlochAffine,
    ChannelSpec,
    ClassicalChannel,
    DepolarizedUnitary,
    KrausChannel,
    PauliFourVector,
    Unitary,
    amplitude_damping,
    apply,
    bit_flip,
    bloch_affine,
    channel_dims,
    choi,
    conjugate,
    dephasing,
    dephasing_about,
    depolarizing,
    identity_channel,
    is_unital,
    pure_fixed_points,
    rotation_about,
    to_kraus,
)
from .linalg import (
    DECISION_TOL,
    VERIFY_TOL,
    BipartiteDims,
    EigenDecomposition,
    commutator_norm,
    eig_hermitian,
    is_isometry,
    partial_trace,
    random_unitary,
    simultaneous_eigenbasis,
    tensor,
)
from .masking import (
    CommonEigenbasis,
    FixedPointAxis,
    Fourier,
    GateFamily,
    Masker,
    MaskingDecision,
    NoCommonFixedPoint,
    NoConstantAxis,
    NonUnital,
    NoPureFixedPoint,
    NoncommutingPair,
    PauliAxis,
    SearchReport,
    Trivial,
    classical_no_go_search,
    decide_classical_family,
    decide_depolarized_family,
    decide_gate_family,
    decide_identity_family,
    decide_identity_pair,
    decide_pauli_family,
    synthesize_classical_masker,
    synthesize_gate_masker,
    synthesize_identity_masker,
    synthesize_pauli_masker,
)
from .verify import (
    VerificationReport,
    local_orthogonality_check,
    reduced_channel_choi,
    state_mask_check,
    verify_identity_masking,
    verify_masking,
)

__all__ = [
    "ALL_DIRECTIONS",
    "BipartiteDims",
    "BlochAffine",
    "ChannelSpec",
    "ClassicalChannel",
    "CommonEigenbasis",
    "DECISION_TOL",
    "DepolarizedUnitary",
    "EigenDecomposition",
    "FixedPointAxis",
    "Fourier",
    "GateFamily",
    "KrausChannel",
    "Masker",
    "MaskingDecision",
    "NoCommonFixedPoint",
    "NoConstantAxis",
    "NonUnital",
    "NoPureFixedPoint",
    "NoncommutingPair",
    "PauliAxis",
    "PauliFourVector",
    "SearchReport",
    "Trivial",
    "Unitary",
    "VERIFY_TOL",
    "VerificationReport",
    "amplitude_damping",
    "apply",
    "bit_flip",
    "bloch_affine",
    "channel_dims",
    "choi",
    "classical_no_go_search",
    "commutator_norm",
    "conjugate",
    "decide_classical_family",
    "decide_depolarized_family",
    "decide_gate_family",
    "decide_identity_family",
    "decide_identity_pair",
    "decide_pauli_family",
    "dephasing",
    "dephasing_about",
    "depolarizing",
    "eig_hermitian",
    "identity_channel",
    "is_isometry",
    "is_unital",
    "local_orthogonality_check",
    "partial_trace",
    "pure_fixed_points",
    "random_unitary",
    "reduced_channel_choi",
    "rotation_about",
    "simultaneous_eigenbasis",
    "state_mask_check",
    "synthesize_classical_masker",
    "synthesize_gate_masker",
    "synthesize_identity_masker",
    "synthesize_pauli_masker",
    "tensor",
    "to_kraus",
    "verify_identity_masking",
    "verify_masking",
]
