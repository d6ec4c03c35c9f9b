"""Power-law central force model.

The potential is ``V(r) = -r**(-alpha) / alpha`` with ``alpha < 2``,
``alpha != 0``.  This module holds the force law, the effective potential
``V_eff(r) = V(r) + ell**2 / (2 r**2)``, the reduced potential obtained with
``rho = ell / r``::

    W(rho) = rho**2 / 2 - ell**(-alpha) / alpha * rho**alpha

and the conversions between energy, apsidal radii and eccentricity.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .errors import (
    DegenerateOrbitError,
    DomainError,
    InfeasibleApsidesError,
    UnboundedOrbitError,
)

log = logging.getLogger(__name__)

#: relative distance to the window infimum below which an orbit is circular
EPS_CIRC = 1e-12
_MAX_BRACKET_DOUBLINGS = 2000


# --- divided differences of power functions ---

def _expm1_ratio(p, u):
    """((1 + u)**p - 1) / u, accurate for small u; equals p at u = 0."""
    u = np.asarray(u, dtype=float)
    safe = np.where(u == 0.0, 1.0, u)
    out = np.expm1(p * np.log1p(safe)) / safe
    return np.where(u == 0.0, p, out)


def power_dd1(p, a, b):
    """First divided difference of ``x**p`` on ``[a, b]`` (derivative if a == b)."""
    a = np.asarray(a, dtype=float)
    return a ** (p - 1.0) * _expm1_ratio(p, (np.asarray(b, dtype=float) - a) / a)


def power_dd2(p, a, b, c, left=None, right=None):
    """Second divided difference of ``x**p`` on ``a <= b <= c``.

    ``left = b - a`` and ``right = c - b`` may be supplied when they are known
    more accurately than the floating-point differences.
    """
    a = np.asarray(a, dtype=float)
    c = np.asarray(c, dtype=float)
    b = np.asarray(b, dtype=float)
    if left is None:
        left = b - a
    if right is None:
        right = c - b
    f_ab = a ** (p - 1.0) * _expm1_ratio(p, np.asarray(left) / a)
    f_bc = c ** (p - 1.0) * _expm1_ratio(p, -np.asarray(right) / c)
    return (f_bc - f_ab) / (c - a)


# --- force law ---

@dataclass(frozen=True)
class ForceLaw:
    """Power-law central field with exponent ``alpha`` and angular momentum ``ell``."""

    alpha: float
    ell: float = 1.0

    def __post_init__(self):
        alpha = float(self.alpha)
        ell = float(self.ell)
        if not math.isfinite(alpha) or not math.isfinite(ell):
            raise DomainError(f"non-finite force law parameters ({alpha}, {ell})")
        if alpha == 0.0:
            raise DomainError("alpha = 0 (logarithmic potential) is not supported")
        if alpha >= 2.0:
            raise DomainError(f"alpha must be < 2 for bounded orbits, got {alpha}")
        if ell == 0.0:
            raise DomainError("ell must be non-zero")
        if ell < 0.0:
            log.info("ell=%g normalized to %g (motion is symmetric in ell)", ell, -ell)
            ell = -ell
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "ell", ell)


@dataclass(frozen=True)
class EnergyWindow:
    """Open interval ``(h_min, h_sup)`` of energies giving bounded, non-circular orbits."""

    h_min: float
    h_sup: float

    def __contains__(self, h):
        return self.h_min < h < self.h_sup

    def describe(self):
        sup = "+inf" if math.isinf(self.h_sup) else f"{self.h_sup:.17g}"
        return f"({self.h_min:.17g}, {sup})"


def effective_potential(law, r):
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("effective potential needs r > 0")
    out = -(r ** -law.alpha) / law.alpha + law.ell**2 / (2.0 * r * r)
    return out if out.ndim else float(out)


def _effective_potential_prime(law, r):
    return r ** (-law.alpha - 1.0) - law.ell**2 / r**3


class ReducedPotential(NamedTuple):
    W: float
    d1: float
    d2: float
    d3: float
    d4: float


def reduced_potential(law, rho):
    """W and its first four derivatives at ``rho``."""
    if rho <= 0:
        raise DomainError("reduced potential needs rho > 0")
    a = law.alpha
    c = law.ell ** (-a)
    W = 0.5 * rho * rho - c / a * rho**a
    d1 = rho - c * rho ** (a - 1.0)
    d2 = 1.0 - c * (a - 1.0) * rho ** (a - 2.0)
    d3 = -c * (a - 1.0) * (a - 2.0) * rho ** (a - 3.0)
    d4 = -c * (a - 1.0) * (a - 2.0) * (a - 3.0) * rho ** (a - 4.0)
    return ReducedPotential(W, d1, d2, d3, d4)


def circular_radius(law):
    return law.ell ** (2.0 / (2.0 - law.alpha))


def energy_window(law):
    h_min = float(effective_potential(law, circular_radius(law)))
    if law.alpha > 0:
        return EnergyWindow(h_min, 0.0)
    return EnergyWindow(h_min, math.inf)


def _check_energy(law, h):
    window = energy_window(law)
    if not math.isfinite(h):
        raise DomainError(f"energy must be finite, got {h}")
    if h >= window.h_sup:
        raise UnboundedOrbitError(
            f"h={h:.17g} gives an unbounded orbit; bounded window is {window.describe()}"
        )
    if h - window.h_min <= EPS_CIRC * abs(window.h_min):
        raise DegenerateOrbitError(
            f"h={h:.17g} is at or below the circular energy; window is {window.describe()}"
        )
    return window


def turning_points(law, h):
    """Apsidal radii ``(r_minus, r_plus)`` at energy ``h``.

    Each root is bracketed on its own side of the circular radius and solved
    with Brent's method, then given one Newton polish step.
    """
    _check_energy(law, h)
    r_star = circular_radius(law)

    def f(r):
        return float(effective_potential(law, r)) - h

    def solve(lo, hi):
        root = brentq(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
        slope = _effective_potential_prime(law, root)
        if slope != 0.0:
            polished = root - f(root) / slope
            if lo <= polished <= hi and abs(f(polished)) <= abs(f(root)):
                root = polished
        return root

    lo = r_star
    for _ in range(_MAX_BRACKET_DOUBLINGS):
        lo *= 0.5
        if f(lo) > 0:
            break
    else:
        raise DomainError(f"could not bracket the pericenter for h={h:.17g}")
    hi = r_star
    for _ in range(_MAX_BRACKET_DOUBLINGS):
        hi *= 2.0
        if f(hi) > 0:
            break
    else:
        raise UnboundedOrbitError(f"could not bracket the apocenter for h={h:.17g}")
    return solve(lo, r_star), solve(r_star, hi)


def d_turning_points_dh(law, h):
    """Energy derivatives of the apsidal radii (implicit function theorem)."""
    r_minus, r_plus = turning_points(law, h)
    a, ell2 = law.alpha, law.ell**2

    def deriv(r):
        return r ** (a + 3.0) / (r * r - ell2 * r**a)

    return deriv(r_minus), deriv(r_plus)


def apsides_to_invariants(alpha, r_minus, r_plus):
    """Energy and angular momentum ``(h, ell)`` of the orbit with apsides ``r_minus < r_plus``."""
    alpha = float(alpha)
    if alpha == 0.0 or alpha >= 2.0:
        raise DomainError(f"unsupported exponent alpha={alpha}")
    if not 0.0 < r_minus <= r_plus or not math.isfinite(r_plus):
        raise DomainError(f"need 0 < r_minus < r_plus < inf, got ({r_minus}, {r_plus})")
    if r_minus == r_plus:
        raise DegenerateOrbitError("r_minus == r_plus: circular orbit, apsides undefined")
    # ell^2 = 2 [r^-a / a] / [r^-2] as a ratio of divided differences on [r-, r+]
    num = float(power_dd1(-alpha, r_minus, r_plus)) / alpha
    den = float(power_dd1(-2.0, r_minus, r_plus))
    ell2 = 2.0 * num / den
    if not ell2 > 0.0 or not math.isfinite(ell2):
        raise InfeasibleApsidesError(f"apsides ({r_minus}, {r_plus}) give ell^2={ell2}")
    h = ell2 / (2.0 * r_minus**2) - r_minus**-alpha / alpha
    return h, math.sqrt(ell2)


def eccentricity(r_minus, r_plus):
    if not 0.0 < r_minus <= r_plus:
        raise DomainError(f"need 0 < r_minus <= r_plus, got ({r_minus}, {r_plus})")
    return (r_plus - r_minus) / (r_plus + r_minus)


class EnergyForEccentricity(NamedTuple):
    h: float
    circular: bool


def _scaled_apsides(law, e):
    """Apsides of the orbit of ``law`` with eccentricity ``e`` (0 < e < 1).

    Uses the scaling symmetry r -> s r, ell -> s**((2-alpha)/2) ell,
    h -> s**(-alpha) h of power-law fields.
    """
    ratio = (1.0 + e) / (1.0 - e)
    h1, ell1 = apsides_to_invariants(law.alpha, 1.0, ratio)
    s = (law.ell / ell1) ** (2.0 / (2.0 - law.alpha))
    return s, s * ratio, h1 * s**-law.alpha


def energy_for_eccentricity(law, e):
    """Energy of the orbit with eccentricity ``e``; ``e = 0`` returns the circular energy."""
    if not 0.0 <= e < 1.0:
        raise DomainError(f"eccentricity must lie in [0, 1), got {e}")
    if e == 0.0:
        return EnergyForEccentricity(energy_window(law).h_min, True)
    return EnergyForEccentricity(_scaled_apsides(law, e)[2], False)


@dataclass(frozen=True)
class BoundedOrbit:
    """Validated bounded orbit of ``law`` at energy ``h``."""

    law: ForceLaw
    h: float
    r_minus: float
    r_plus: float
    e: float = field(init=False)
    rho_minus: float = field(init=False)
    rho_plus: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.r_minus < self.r_plus:
            raise DegenerateOrbitError(
                f"apsides ({self.r_minus}, {self.r_plus}) do not bound a non-circular orbit"
            )
        object.__setattr__(self, "e", eccentricity(self.r_minus, self.r_plus))
        object.__setattr__(self, "rho_minus", self.law.ell / self.r_plus)
        object.__setattr__(self, "rho_plus", self.law.ell / self.r_minus)

    @classmethod
    def from_energy(cls, law, h):
        r_minus, r_plus = turning_points(law, h)
        return cls(law, float(h), r_minus, r_plus)

    @classmethod
    def from_eccentricity(cls, law, e):
        if not 0.0 <= e < 1.0:
            raise DomainError(f"eccentricity must lie in [0, 1), got {e}")
        if e == 0.0:
            raise DegenerateOrbitError(
                f"e=0 is the circular orbit; window is {energy_window(law).describe()}"
            )
        r_minus, r_plus, h = _scaled_apsides(law, e)
        return cls(law, h, r_minus, r_plus)
