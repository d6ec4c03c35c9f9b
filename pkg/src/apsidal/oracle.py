"""Independent check of the apsidal angle by direct integration.

Integrates the reduced radial system

    r'' = ell^2 r^-3 - r^(-alpha-1),    theta' = ell / r^2

from the pericenter (r_-, r' = 0, theta = 0) until r' next vanishes, using an
embedded Runge-Kutta 5(4) pair with event location on the dense output.
Nothing here shares code with the quadrature path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DegenerateOrbitError, DomainError, IntegratorError, StateError
from .model import effective_potential

#: below this eccentricity the event function is too flat for apsis detection
MIN_ORACLE_ECCENTRICITY = 1e-4


@dataclass(frozen=True)
class IntegratorOptions:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps: int = 1_000_000
    event_tol: float = 1e-12
    keep_trajectory: bool = False

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "event_tol"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.max_steps < 1:
            raise DomainError("max_steps must be positive")


@dataclass(frozen=True)
class ArcResult:
    delta_theta: float
    t_arc: float
    steps: int
    energy_drift: float
    trajectory: Optional[np.ndarray] = None  # rows of (t, r, rdot, theta)


def _rhs(law):
    a, ell = law.alpha, law.ell
    ell2 = ell * ell

    def f(t, y):
        r, v, _ = y
        if not r > 0:
            raise IntegratorError(f"radius left the domain (r={r!r}) at t={t!r}")
        return [v, ell2 / r**3 - r ** (-a - 1.0), ell / (r * r)]

    return f


def _energy(law, r, v):
    return 0.5 * v * v + effective_potential(law, r)


def _integrate(law, y0, t_span, direction, opts):
    """Integrate until r' crosses zero in ``direction``; returns the solve_ivp solution."""

    def apsis(t, y):
        return y[1]

    apsis.terminal = True
    apsis.direction = direction

    steps = 0
    rhs = _rhs(law)

    def counted(t, y):
        nonlocal steps
        steps += 1
        if steps > 7 * opts.max_steps:  # ~7 evaluations per RK45 step
            raise IntegratorError(f"step budget of {opts.max_steps} exhausted")
        return rhs(t, y)

    sol = solve_ivp(
        counted, t_span, y0, method="RK45", rtol=opts.rel_tol, atol=opts.abs_tol,
        events=apsis, dense_output=False,
    )
    if sol.status != 1 or not len(sol.t_events[0]):
        raise IntegratorError(f"no apsis found on the arc: {sol.message}")
    return sol


def _arc_time_bound(orbit):
    # theta' >= ell / r_+^2, and the sweep stays well below 1e3 * pi / sqrt(2 - alpha)
    law = orbit.law
    return 1e3 * np.pi / np.sqrt(2.0 - law.alpha) * orbit.r_plus**2 / law.ell


def integrate_arc(orbit, opts=None):
    """Sweep angle from pericenter to the next apocenter of ``orbit``."""
    opts = opts or IntegratorOptions()
    if orbit.e < MIN_ORACLE_ECCENTRICITY:
        raise DegenerateOrbitError(
            f"e={orbit.e:.3g} is too close to circular for apsis detection"
        )
    law, h = orbit.law, orbit.h
    sol = _integrate(law, [orbit.r_minus, 0.0, 0.0], (0.0, _arc_time_bound(orbit)), -1, opts)
    t, (r, v, th) = sol.t, sol.y
    t_end = float(sol.t_events[0][0])
    r_end, v_end, th_end = sol.y_events[0][0]

    energies = _energy(law, r, v)
    scale = abs(h) if h != 0 else 1.0
    drift = float(np.max(np.abs(energies - h)) / scale)
    if drift > 100 * opts.rel_tol:
        raise IntegratorError(f"energy drift {drift:.3g} exceeds {100 * opts.rel_tol:.3g}")
    if abs(v_end) > opts.event_tol * max(1.0, abs(orbit.law.ell / orbit.r_plus)):
        raise IntegratorError(f"apsis event not resolved: rdot={v_end:.3g}")

    trajectory = None
    if opts.keep_trajectory:
        trajectory = np.column_stack([t, r, v, th])
        trajectory.setflags(write=False)
    return ArcResult(float(th_end), t_end, len(t) - 1, drift, trajectory)


def integrate_back(orbit, arc, opts=None):
    """Integrate backward in time from the apocenter reached by ``arc``.

    Returns the state ``(r, rdot, theta)`` at the first earlier apsis, which
    should be the starting pericenter.
    """
    opts = opts or IntegratorOptions()
    y0 = [orbit.r_plus, 0.0, arc.delta_theta]
    if arc.trajectory is not None:
        y0 = list(arc.trajectory[-1, 1:])
    # in reversed time rdot rises from zero and falls back to it at the pericenter
    sol = _integrate(orbit.law, y0, (arc.t_arc, -arc.t_arc), -1, opts)
    return tuple(float(x) for x in sol.y_events[0][0])


def export_trajectory(arc):
    """Rows (t, r, rdot, theta, x1, x2) at the integrator steps."""
    if arc.trajectory is None:
        raise StateError("trajectory was not retained; use keep_trajectory=True")
    t, r, v, th = arc.trajectory.T
    return np.column_stack([t, r, v, th, r * np.cos(th), r * np.sin(th)])
