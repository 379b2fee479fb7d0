"""Exact equivariant Čech cohomology over combinatorial covers with a free
involution, and descriptors of Real smooth Deligne cohomology built from it.

Everything is computed over the integers with exact arithmetic; rationals
enter only as `fractions.Fraction`.
"""

__version__ = "0.1.0"

from .cechengine import (
    CoefficientComplex,
    build_equivariant_complex,
    build_full_complex,
    equivariant_cohomology,
    hypercohomology,
    nonequivariant_cohomology,
)
from .coverdata import (
    IQ,
    IZ,
    Z_TRIVIAL,
    C2Cover,
    CoefficientSystem,
    FlatCocycle,
    double_fixed_indices,
    product_cover,
    validate_cover,
)
from .deligne import (
    DeligneDescriptor,
    FlatCocycleClass,
    QuotientCoefficients,
    classify_flat_line_bundles,
    classify_line_bundles,
    classify_line_bundles_with_connection,
    cocycles_equivalent,
    deligne_descriptor,
    flat_cocycle_class,
    quotient_coefficients_cohomology,
    real_circle_maps,
)
from .exactalg import (
    ElementCoordinates,
    GroupDescriptor,
    IntegerCochainComplex,
    class_coordinates,
    class_representative,
    complex_cohomology,
    fixed_subcomplex,
    kernel_basis,
    smith_normal_form,
    solve_int,
    solve_rational,
)

__all__ = [
    "__version__",
    "C2Cover",
    "CoefficientComplex",
    "CoefficientSystem",
    "DeligneDescriptor",
    "ElementCoordinates",
    "FlatCocycle",
    "FlatCocycleClass",
    "GroupDescriptor",
    "IntegerCochainComplex",
    "IQ",
    "IZ",
    "QuotientCoefficients",
    "Z_TRIVIAL",
    "build_equivariant_complex",
    "build_full_complex",
    "class_coordinates",
    "class_representative",
    "classify_flat_line_bundles",
    "classify_line_bundles",
    "classify_line_bundles_with_connection",
    "cocycles_equivalent",
    "complex_cohomology",
    "deligne_descriptor",
    "double_fixed_indices",
    "equivariant_cohomology",
    "fixed_subcomplex",
    "flat_cocycle_class",
    "hypercohomology",
    "kernel_basis",
    "nonequivariant_cohomology",
    "product_cover",
    "quotient_coefficients_cohomology",
    "real_circle_maps",
    "smith_normal_form",
    "solve_int",
    "solve_rational",
    "validate_cover",
]
