"""Extreme generalized order statistics under a random sample size.

Thin wrapper over the compiled core. Models, index laws and regimes are
given as the spec strings the ``gosx`` command line accepts, for example
``Model("cauchy")``, ``law="uniform:0.5:1.5"`` or ``regime="uu"``.
"""

from ._gosx import (
    ConvergenceError,
    DomainError,
    Model,
    NoAttractionError,
    QuadratureError,
    RegimeError,
    UnsupportedCaseError,
    index_law_cdf,
    joint_df_direct,
    joint_upper_df,
    marginal_df,
    mixture,
    model_families,
    omega_ll,
    omega_lu,
    omega_uu,
    parse_real,
    range_df,
    reg_inc_beta,
    reg_inc_gamma,
    reg_inc_gamma_upper,
    selftest,
    simulate,
)

__all__ = [
    "ConvergenceError",
    "DomainError",
    "Model",
    "NoAttractionError",
    "QuadratureError",
    "RegimeError",
    "UnsupportedCaseError",
    "index_law_cdf",
    "joint_df_direct",
    "joint_upper_df",
    "marginal_df",
    "mixture",
    "model_families",
    "omega_ll",
    "omega_lu",
    "omega_uu",
    "parse_real",
    "range_df",
    "reg_inc_beta",
    "reg_inc_gamma",
    "reg_inc_gamma_upper",
    "selftest",
    "simulate",
]
