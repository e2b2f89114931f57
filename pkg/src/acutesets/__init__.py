"""Exact construction and verification of acute point sets."""

__version__ = "0.1.0"

from .exact import (
    DegenerateInputError,
    DimensionError,
    Hyperplane,
    QVector,
    dot,
    norm_sq,
    project_onto,
    rational_circle_points,
    scale,
    side_of,
    sub,
)
from .verifier import (
    VerificationReport,
    check_triple,
    robustness_radius,
    upper_bound_check,
    verify_acute,
    verify_naive,
)
from .doubling import choose_radius, double, power_construct
from .fibonacci import AcuteConfiguration, base_config, extend, fibonacci_construct
from .baselines import EfRunConfig, ef_random, exhaustive_max_cube_subset
