"""Bayesian compressed regression."""

from ._core import (
    BcregError,
    Model,
    draw_projection,
    fit,
    log_marginal,
    posterior,
    predictive,
    simulate,
)

__all__ = [
    "BcregError",
    "Model",
    "draw_projection",
    "fit",
    "log_marginal",
    "posterior",
    "predictive",
    "simulate",
]
