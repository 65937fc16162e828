"""Numerical verification of refined Bohr-type inequalities for matrix-valued Schur functions."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BohrLabError,
    BracketError,
    ContractError,
    DegenerateFamilyError,
    DomainError,
    InvalidInputError,
)
from .functionals import FunctionalKind, closed_form_psi, eval_functional  # noqa: E402
from .kernels import BACKEND  # noqa: E402
from .matcore import ComplexMatrix, operator_norm  # noqa: E402
from .radii import SHARP_CONSTANTS, empirical_radius, isolate_root, sharpness_scan  # noqa: E402
from .series import MatrixPowerSeries, psi_family, random_schur_matrix  # noqa: E402

__all__ = [
    "BACKEND",
    "BohrLabError",
    "BracketError",
    "ComplexMatrix",
    "ContractError",
    "DegenerateFamilyError",
    "DomainError",
    "FunctionalKind",
    "InvalidInputError",
    "MatrixPowerSeries",
    "SHARP_CONSTANTS",
    "closed_form_psi",
    "empirical_radius",
    "eval_functional",
    "isolate_root",
    "operator_norm",
    "psi_family",
    "random_schur_matrix",
    "sharpness_scan",
]
