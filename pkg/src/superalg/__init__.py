"""Polynomial algebras of separable superintegrable systems.

Exact ladder algebra, deformed-oscillator representations, and numerical
cross-checks for two-dimensional systems built from one-dimensional
Hamiltonians with ladder operators.
"""

__version__ = "0.1.0"

from .polycore import BiPoly, Poly, Surd, poly_roots, exact_roots  # noqa: E402
from .diffop import DifferentialOperator, certify_ladder, express_in_H  # noqa: E402
from .oscalg import (  # noqa: E402
    LadderSystem,
    build_F,
    certify_difference_form,
    commutator_poly,
    random_ladder_system,
    structure_function,
)
from .spectrum import Level, SpectrumTable  # noqa: E402
from .repsolve import RepresentationFamily, algebraic_spectrum, enumerate_reps, validate_family  # noqa: E402
from .models import (  # noqa: E402
    CagedParams,
    PainleveParams,
    caged_exact_level,
    caged_oracle_spectrum,
    caged_system,
    painleve_potential,
    painleve_system,
    rational_p4,
    toy_system,
)
from .specnum import Grid1D, assemble_2d, compare_spectra, eigen_1d  # noqa: E402
from .p4ode import P4Trajectory, integrate_p4  # noqa: E402
from .audit import DiscrepancyReport, audit_printed_forms  # noqa: E402

__all__ = [
    "BiPoly", "Poly", "Surd", "poly_roots", "exact_roots",
    "DifferentialOperator", "certify_ladder", "express_in_H",
    "LadderSystem", "build_F", "certify_difference_form", "commutator_poly",
    "random_ladder_system", "structure_function",
    "Level", "SpectrumTable",
    "RepresentationFamily", "algebraic_spectrum", "enumerate_reps", "validate_family",
    "CagedParams", "PainleveParams", "caged_exact_level", "caged_oracle_spectrum",
    "caged_system", "painleve_potential", "painleve_system", "rational_p4", "toy_system",
    "Grid1D", "assemble_2d", "compare_spectra", "eigen_1d",
    "P4Trajectory", "integrate_p4",
    "DiscrepancyReport", "audit_printed_forms",
]
