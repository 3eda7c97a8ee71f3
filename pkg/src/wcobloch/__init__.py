"""Weighted composition operators on Bloch-type spaces of the unit disc.

The package evaluates analytic functions given as expression trees,
estimates Bloch-type norms on boundary-refining grids, classifies
boundedness and compactness of the operator f -> psi * (f o phi) through
the standard growth quantities, computes the weighted duality pairing
against polynomials, and checks the scalar/vector factorization identities
at finite dimension.
"""

__version__ = "0.1.0"

from .analytic import (
    AnalyticFn, DomainError, PowerSeries, PrecisionWarning, gen_binom, taylor,
)
from .bloch import (
    Classification, Inconclusive, LowerBoundRow, QReport, TailRow, apply_wco,
    bloch_norm, classify, is_little_bloch, lower_bound_check, q1, q2, q3,
    q_report,
)
from .catalog import (
    DegenerateParameterError, SelfMap, TestFnSpec, ValidationError, Weight,
    binomial_kernel, catalog_functions, constant_weight, coordinate_weight,
    make_selfmap, selfmap_from_fn, standard_pairs, test_fn_f, test_fn_g,
    test_fn_h, weight_from_fn,
)
from .expr import (
    Add, BranchCutError, Compose, Const, Div, Exp, ExprNode, Log, Mul, Named,
    PowReal, Sub, Var,
)
from .grids import DiscGrid, Shell, default_grid
from .pairing import (
    PairingResult, Polynomial, WeakNullReport, WeakNullRow, beta_integral,
    pair_poly, pair_poly_at_radius, pair_quadrature, weak_null_certificate,
)
from .parsing import ArityError, ParseError, parse_constant, parse_expr
from .vector import (
    Functional, IdentityCheck, NormTransferReport, NormTransferRow, VecFn,
    apply_wco_vec, basis_functional, check_commutation,
    check_norm_transfer, check_prop1_factorizations, vec_bloch_norm,
    weak_norm,
)

__all__ = [
    "__version__",
    # expression trees
    "ExprNode", "Var", "Const", "Add", "Sub", "Mul", "Div", "PowReal",
    "Log", "Exp", "Compose", "Named", "BranchCutError",
    # analytic functions
    "AnalyticFn", "PowerSeries", "DomainError", "PrecisionWarning",
    "gen_binom", "taylor",
    # grids
    "DiscGrid", "Shell", "default_grid",
    # catalog
    "SelfMap", "Weight", "ValidationError", "DegenerateParameterError",
    "TestFnSpec", "make_selfmap", "selfmap_from_fn", "weight_from_fn",
    "binomial_kernel", "test_fn_f", "test_fn_g", "test_fn_h",
    "constant_weight", "coordinate_weight", "standard_pairs",
    "catalog_functions",
    # parsing
    "parse_expr", "parse_constant", "ParseError", "ArityError",
    # Bloch analysis
    "bloch_norm", "q1", "q2", "q3", "apply_wco", "classify",
    "Classification", "QReport", "TailRow", "q_report",
    "lower_bound_check", "LowerBoundRow", "is_little_bloch", "Inconclusive",
    # pairing
    "Polynomial", "PairingResult", "beta_integral", "pair_poly",
    "pair_poly_at_radius", "pair_quadrature", "weak_null_certificate",
    "WeakNullReport", "WeakNullRow",
    # vector case
    "VecFn", "Functional", "basis_functional", "vec_bloch_norm",
    "weak_norm", "apply_wco_vec", "check_prop1_factorizations",
    "check_commutation", "check_norm_transfer", "IdentityCheck",
    "NormTransferReport", "NormTransferRow",
]
