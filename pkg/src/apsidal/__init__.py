"""Apsidal angle of power-law central-force orbits and its monotonicity in energy."""

from .errors import (
    ApsidalError,
    ConvergenceError,
    DegenerateOrbitError,
    DomainError,
    IntegratorError,
    NumericalError,
    UnboundedOrbitError,
)
from .model import (
    BoundedOrbit,
    EnergyWindow,
    ForceLaw,
    apsides_to_invariants,
    circular_radius,
    eccentricity,
    effective_potential,
    energy_for_eccentricity,
    energy_window,
    reduced_potential,
    turning_points,
)
from .quadrature import ApsidalResult, QuadratureOptions, apsidal_angle, apsidal_angle_radial
from .schaaf import CriterionVerdict, Route, Verdict, classify, dual_exponent
from .oracle import ArcResult, IntegratorOptions, integrate_arc
from .analysis import duality_probe, monotonicity_scan, newton_limit_probe, theorem_sweep

__version__ = "0.1.0"
