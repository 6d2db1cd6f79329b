"""Localized diagonal automorphisms of the Cuntz algebra O_2 and their extensions
to the 2-adic ring algebra, computed exactly on finite phase tables."""

from .cantor import (
    LevelCapExceeded,
    Residue,
    Word,
    birkhoff_average,
    odometer_step,
    orbit_period,
    residue_to_word,
    word_to_residue,
)
from .diagonal import (
    DiagonalUnitary,
    Localized,
    NotLocalized,
    ad_u,
    compress,
    dmul,
    phi,
    sup_distance,
    uz_phi_build,
)
from .extend import (
    CocycleObstruction,
    Extendible,
    ExtensionCertificate,
    NotExtendible,
    NotInImage,
    PointSpectrumMismatch,
    Preimage,
    check_map,
    check_product_formula,
    coboundary,
    decide_extendible,
    homomorphism_check,
    invert_check,
    solve_cocycle,
    verify_structural_identity,
)
from .phases import Phase, classify_two_power_root
from .reptrunc import verify_certificate, verify_identity, x_sequence
from .sweep import run_sweep

__version__ = "0.1.0"

__all__ = [
    "CocycleObstruction",
    "DiagonalUnitary",
    "Extendible",
    "ExtensionCertificate",
    "LevelCapExceeded",
    "Localized",
    "NotExtendible",
    "NotInImage",
    "NotLocalized",
    "Phase",
    "PointSpectrumMismatch",
    "Preimage",
    "Residue",
    "Word",
    "ad_u",
    "birkhoff_average",
    "check_map",
    "check_product_formula",
    "classify_two_power_root",
    "coboundary",
    "compress",
    "decide_extendible",
    "dmul",
    "homomorphism_check",
    "invert_check",
    "odometer_step",
    "orbit_period",
    "phi",
    "residue_to_word",
    "run_sweep",
    "solve_cocycle",
    "sup_distance",
    "uz_phi_build",
    "verify_certificate",
    "verify_identity",
    "verify_structural_identity",
    "word_to_residue",
    "x_sequence",
]
