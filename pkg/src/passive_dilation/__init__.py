"""Passive dilations and additive-noise normal forms of Gaussian quantum channels."""

from .dilation import (
    DilatabilityReport,
    NotDilatableError,
    PassiveDilation,
    check_dilatable,
    construct_dilation,
    is_passive_channel,
    minimal_modes,
    random_dilatable_channel,
    relate_minimal_dilations,
    verify_dilation,
)
from .gaussian import (
    GaussianChannel,
    GaussianState,
    additive_channel,
    apply,
    beamsplitter,
    compose,
    is_passive_state,
    random_state,
    unitary_channel,
    validate_channel,
    validate_state,
)
from .normal_form import NormalForm, compute_normal_form, reconstruct
from .numerics import Tolerance
from .symplectic import ModeOrdering, OrthogonalSymplectic, phi_inverse, phi_iso

__version__ = "0.1.0"

__all__ = [
    "DilatabilityReport",
    "GaussianChannel",
    "GaussianState",
    "ModeOrdering",
    "NormalForm",
    "NotDilatableError",
    "OrthogonalSymplectic",
    "PassiveDilation",
    "Tolerance",
    "additive_channel",
    "apply",
    "beamsplitter",
    "check_dilatable",
    "compose",
    "compute_normal_form",
    "construct_dilation",
    "is_passive_channel",
    "is_passive_state",
    "minimal_modes",
    "phi_inverse",
    "phi_iso",
    "random_dilatable_channel",
    "random_state",
    "reconstruct",
    "relate_minimal_dilations",
    "unitary_channel",
    "validate_channel",
    "validate_state",
    "verify_dilation",
]
