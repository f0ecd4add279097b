"""Bivariate Szasz-Mirakjan type operators."""

from ._core import (
    BiszError,
    EvaluationError,
    InvalidParameter,
    ParseError,
    TruncationFailure,
    UnknownBuiltin,
    UnknownIdentifier,
    apply_szasz,
    apply_yhat,
    asymptotic_limits,
    builtin_names,
    comparison_grid,
    deriv,
    error_table,
    evaluate_expression,
    lambda_factor,
    moments,
    order_fit,
    poisson_mean,
    pretty_print,
    recover_table2_point,
    voronovskaya,
)

__all__ = [
    "BiszError",
    "EvaluationError",
    "InvalidParameter",
    "ParseError",
    "TruncationFailure",
    "UnknownBuiltin",
    "UnknownIdentifier",
    "apply_szasz",
    "apply_yhat",
    "asymptotic_limits",
    "builtin_names",
    "comparison_grid",
    "deriv",
    "error_table",
    "evaluate_expression",
    "lambda_factor",
    "moments",
    "order_fit",
    "poisson_mean",
    "pretty_print",
    "recover_table2_point",
    "voronovskaya",
]
