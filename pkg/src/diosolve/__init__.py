"""Exact solver for systems of linear Diophantine equations and inequalities
over nonnegative integers: computes the characteristic generating series of
the solution set as a rational function with factored binomial denominator,
extracts minimal solutions and parametric families, and counts or enumerates
solutions, with two independent cross-checking back-ends."""

from .polyring import (
    BinomialFactor,
    DegenerateFactor,
    ExponentVector,
    GeneralRational,
    LaurentPolynomial,
    NiceRational,
    NonExpandable,
    ParseError,
    PoleAtOne,
    PoleAtZero,
    PolyError,
    StepBudget,
    StepCeilingExceeded,
    coefficient_of,
    eval_at,
    expand_truncated,
    lp_add,
    lp_div_exact,
    lp_mul,
    lp_neg,
    nice_from_general,
    normalize,
    parse_rational,
    render_rational,
    rf_equal,
    substitute_monomial,
)
from .dioph import (
    Constraint,
    ConstraintSystem,
    HypothesisViolated,
    Relation,
    SolveOptions,
    UnknownVariable,
    characteristic_series,
    euler_count,
    euler_solutions,
    homogenize,
    normalize_system,
    parse_system,
    weight_substitution,
)
from .basis import (
    SolutionBasis,
    euler_candidates,
    gordan_minimal_single,
    gordan_minimal_system,
    hilbert_basis,
    minimal_elements,
    parametric_form,
)
from .oracle import EnumerationReport, brute_solutions, check_basis, check_series

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
