"""Numerical checks for degenerate elliptic geometry."""

from ._degen import (
    BracketError,
    DomainError,
    Geometry,
    NonConvergence,
    YoungFunction,
    ZeroFunction,
    b0_threshold,
    ball_volume,
    convolution_lower_bound,
    distance,
    l4_partial_sums,
    least_eigenvalue,
    max_principle_b0,
    mu0,
    orlicz_norm,
    power_geometry,
    sobolev_endpoint,
    structure_conditions,
    turning_data,
)

__all__ = [
    "BracketError",
    "DomainError",
    "Geometry",
    "NonConvergence",
    "YoungFunction",
    "ZeroFunction",
    "b0_threshold",
    "ball_volume",
    "convolution_lower_bound",
    "distance",
    "l4_partial_sums",
    "least_eigenvalue",
    "max_principle_b0",
    "mu0",
    "orlicz_norm",
    "power_geometry",
    "sobolev_endpoint",
    "structure_conditions",
    "turning_data",
]
