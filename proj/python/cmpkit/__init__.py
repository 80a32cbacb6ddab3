"""Mean-parametrized Conway-Maxwell-Poisson distribution."""

from ._core import (
    CmpError,
    FitResult,
    MeanCmp,
    cdf,
    convergence_diagnostic,
    empirical_baseline,
    fit,
    limit_pmf,
    pmf,
    quantile,
    sample,
    smooth,
    solve_eta,
)

__all__ = [
    "CmpError",
    "FitResult",
    "MeanCmp",
    "cdf",
    "convergence_diagnostic",
    "empirical_baseline",
    "fit",
    "limit_pmf",
    "pmf",
    "quantile",
    "sample",
    "smooth",
    "solve_eta",
]
