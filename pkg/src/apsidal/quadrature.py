"""Apsidal angle by desingularized Gauss-Legendre quadrature.

Both turning points are simple zeros of ``h - W``, so with

    rho(t) = (rho_+ + rho_-)/2 - (rho_+ - rho_-)/2 * cos(t),   t in [0, pi]

the apsidal integral becomes ``int_0^pi dt / sqrt(g(rho(t)))`` where

    g(rho) = 2 (h - W(rho)) / ((rho - rho_-)(rho_+ - rho))

is smooth and positive on the closed interval.  Because ``W(rho_-) = W(rho_+) = h``,
``g`` is twice the second divided difference ``W[rho_-, rho, rho_+]``; it is
evaluated in that form so that no cancellation against ``h`` occurs near the
apsides or near circular orbits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError, IntegrandError
from .model import power_dd2


@dataclass(frozen=True)
class QuadratureOptions:
    node_count: int = 64
    refine_max: int = 6
    rel_tol: float = 1e-10

    def __post_init__(self):
        if int(self.node_count) != self.node_count or self.node_count < 8:
            raise DomainError(f"node_count must be an integer >= 8, got {self.node_count}")
        if int(self.refine_max) != self.refine_max or self.refine_max < 1:
            raise DomainError(f"refine_max must be a positive integer, got {self.refine_max}")
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol}")


@dataclass(frozen=True)
class ApsidalResult:
    theta: float
    err_estimate: float
    nodes_used: int


@lru_cache(maxsize=None)
def _nodes(n):
    """Gauss-Legendre nodes and weights mapped to [0, pi] as (t, half-angle sin^2, cos^2, w)."""
    x, w = np.polynomial.legendre.leggauss(n)
    t = 0.5 * math.pi * (x + 1.0)
    # sin^2(t/2) and cos^2(t/2) give rho - rho_- and rho_+ - rho without cancellation
    s2 = np.sin(0.5 * t) ** 2
    c2 = np.cos(0.5 * t) ** 2
    tables = (t, s2, c2, 0.5 * math.pi * w)
    for arr in tables:
        arr.setflags(write=False)
    return tables


def _reduced_g(orbit, left, right, rho):
    law = orbit.law
    a = law.alpha
    dd = power_dd2(a, orbit.rho_minus, rho, orbit.rho_plus, left=left, right=right)
    return 1.0 - 2.0 * law.ell ** (-a) / a * dd


def _radial_weight(orbit, left, right, r):
    """ell / (r**2 sqrt(G(r))) with G = 2 V_eff[r_-, r, r_+]."""
    law = orbit.law
    a = law.alpha
    G = (
        -2.0 / a * power_dd2(-a, orbit.r_minus, r, orbit.r_plus, left=left, right=right)
        + law.ell**2 * power_dd2(-2.0, orbit.r_minus, r, orbit.r_plus, left=left, right=right)
    )
    _check_positive(G, orbit)
    return law.ell / (r * r * np.sqrt(G))


def _check_positive(g, orbit):
    if not np.all(g > 0) or not np.all(np.isfinite(g)):
        raise IntegrandError(
            f"regularized integrand is not positive for alpha={orbit.law.alpha}, "
            f"h={orbit.h!r}; turning points are inconsistent"
        )


def regularized_integrand(orbit, rho):
    """g(rho) on ``[rho_-, rho_+]``; endpoint values are the one-sided limits."""
    lo, hi = orbit.rho_minus, orbit.rho_plus
    rho_arr = np.asarray(rho, dtype=float)
    if np.any(rho_arr < lo) or np.any(rho_arr > hi):
        raise DomainError(f"rho must lie in [{lo!r}, {hi!r}]")
    g = _reduced_g(orbit, rho_arr - lo, hi - rho_arr, rho_arr)
    return g if g.ndim else float(g)


def reduced_rule(orbit, n):
    """Apsidal angle from the reduced (Clairaut) form with an ``n``-point rule."""
    t, s2, c2, w = _nodes(n)
    span = orbit.rho_plus - orbit.rho_minus
    left, right = span * s2, span * c2
    rho = np.where(s2 <= c2, orbit.rho_minus + left, orbit.rho_plus - right)
    g = _reduced_g(orbit, left, right, rho)
    _check_positive(g, orbit)
    return float(np.dot(w, 1.0 / np.sqrt(g)))


def radial_rule(orbit, n):
    """Apsidal angle from the radial form with an ``n``-point rule."""
    t, s2, c2, w = _nodes(n)
    span = orbit.r_plus - orbit.r_minus
    left, right = span * s2, span * c2
    r = np.where(s2 <= c2, orbit.r_minus + left, orbit.r_plus - right)
    return float(np.dot(w, _radial_weight(orbit, left, right, r)))


def _refine(rule, orbit, opts):
    if opts is None:
        opts = QuadratureOptions()
    n = opts.node_count
    previous = rule(orbit, n)
    best = None
    for _ in range(opts.refine_max):
        n *= 2
        current = rule(orbit, n)
        err = abs(current - previous)
        best = ApsidalResult(current, err, n)
        if err < opts.rel_tol * abs(current):
            return best
        previous = current
    raise ConvergenceError(
        f"apsidal angle not converged after {n} nodes (last difference {best.err_estimate:.3g})",
        best=best,
    )


def apsidal_angle(orbit, opts=None):
    """Apsidal angle of ``orbit`` from the reduced oscillator integral."""
    return _refine(reduced_rule, orbit, opts)


def apsidal_angle_radial(orbit, opts=None):
    """Apsidal angle of ``orbit`` from the radial integral, same desingularization in r."""
    return _refine(radial_rule, orbit, opts)
