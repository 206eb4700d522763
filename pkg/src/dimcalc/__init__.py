"""dimcalc: exact arithmetic for cohomological dimension types.

The package computes with decorated dimension types over the Bockstein
family of groups, derives Bockstein bases of abelian coefficient groups,
and replays the bound arithmetic of the product, union, decomposition
and fiber theorems as verifiable reports.  See the README for the
expression language and the command line interface.
"""

from .decorated import (
    INF,
    BasisKind,
    BocksteinGroup,
    DecoratedNumber,
    Decoration,
    DimensionType,
    ExtNat,
    NotRepresentableError,
    ValidityError,
    boltyanskii_type,
    constant,
)
from .exprs import (
    EvaluationError,
    Expr,
    ParseError,
    TypeMismatchError,
    evaluate_expr,
    free_parameters,
    kind_of,
    parse,
    render,
)
from .groups import (
    Cyclic,
    DirectSum,
    Free,
    GroupExpr,
    LocalizedIntegers,
    PadicCircle,
    Presented,
    PrimePredicate,
    Rationals,
    SigmaSet,
    StructuralProfile,
    bockstein_basis,
    dim_with_coefficients,
    profile,
    smith_normal_form,
)
from .harness import (
    Claim,
    ClaimResult,
    LawReport,
    Scenario,
    ScenarioReport,
    SweepReport,
    builtin_scenario,
    builtin_scenario_names,
    check_algebra_laws,
    cube_theorem_sweep,
    decomposition_bound_holds,
    fiber_bound,
    random_dimension_type,
    random_type_above,
    run_scenario,
    uniform_types,
    union_bound,
)

__version__ = "0.1.0"

__all__ = [
    "INF",
    "BasisKind",
    "BocksteinGroup",
    "Claim",
    "ClaimResult",
    "Cyclic",
    "DecoratedNumber",
    "Decoration",
    "DimensionType",
    "DirectSum",
    "EvaluationError",
    "Expr",
    "ExtNat",
    "Free",
    "GroupExpr",
    "LawReport",
    "LocalizedIntegers",
    "NotRepresentableError",
    "PadicCircle",
    "ParseError",
    "Presented",
    "PrimePredicate",
    "Rationals",
    "Scenario",
    "ScenarioReport",
    "SigmaSet",
    "StructuralProfile",
    "SweepReport",
    "TypeMismatchError",
    "ValidityError",
    "bockstein_basis",
    "boltyanskii_type",
    "builtin_scenario",
    "builtin_scenario_names",
    "check_algebra_laws",
    "constant",
    "cube_theorem_sweep",
    "decomposition_bound_holds",
    "dim_with_coefficients",
    "evaluate_expr",
    "fiber_bound",
    "free_parameters",
    "kind_of",
    "parse",
    "profile",
    "random_dimension_type",
    "random_type_above",
    "render",
    "run_scenario",
    "smith_normal_form",
    "uniform_types",
    "union_bound",
    "__version__",
]
