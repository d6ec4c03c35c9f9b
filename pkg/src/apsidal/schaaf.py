"""Monotonicity of the apsidal angle via Schaaf's period-function criterion.

The apsidal angle is the period of the oscillator ``rho'' + W'(rho) = 0``.
With ``z = phi(rho) = ell**alpha * rho**(2 - alpha)`` the three Schaaf test
functions of ``W`` factor through linear polynomials in ``z``:

    5 W'''^2 - 3 W'' W''''  = ell**(-2a) rho**(2a-6) P(z)
    W' W'''                 = ell**(-2a) rho**(2a-4) Q(z)
    W''                     = ell**(-a)  rho**(a-2)  R(z)

so every sign condition of the criterion reduces to sign checks of linear
polynomials on an interval, which endpoint evaluation decides exactly.
Exponents ``alpha < 0`` are handled through the duality
``(2 - alpha)(2 - alpha_hat) = 4``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import DomainError, UnsupportedExponentError
from .model import reduced_potential


class Verdict(str, enum.Enum):
    INCREASING = "Increasing"
    DECREASING = "Decreasing"
    INCONCLUSIVE = "Inconclusive"


class Route(str, enum.Enum):
    DIRECT = "Direct"
    DUALITY = "Duality"


def poly_P(alpha, z):
    a = alpha
    return (a - 2) * (a - 1) ** 2 * (2 * a - 1) + 3 * (a - 3) * (a - 2) * (a - 1) * z


def poly_Q(alpha, z):
    a = alpha
    return (a - 2) * (a - 1) - (a - 2) * (a - 1) * z


def poly_R(alpha, z):
    return -(alpha - 1) + z


def phi(law, rho):
    if rho <= 0:
        raise DomainError("phi needs rho > 0")
    return law.ell**law.alpha * rho ** (2.0 - law.alpha)


class PhiRange(NamedTuple):
    """Image ``(lower, upper)`` of the period-annulus projection ``(0, f)`` under phi."""

    lower: float
    upper: float
    f: float


def phi_range(law):
    a = law.alpha
    if not 0.0 < a < 2.0:
        raise UnsupportedExponentError(
            f"direct criterion needs alpha in (0, 2), got alpha={a}"
        )
    f = (2.0 * law.ell ** (-a) / a) ** (1.0 / (2.0 - a))
    return PhiRange(0.0, 2.0 / a, f)


@dataclass(frozen=True)
class TestFunctionSample:
    rho: float
    A: float
    B: float
    C: float

    __test__ = False  # keep pytest from collecting this as a test class


def test_functions(law, rho):
    """Schaaf test functions of W at ``rho`` from the analytic derivatives."""
    W = reduced_potential(law, rho)
    return TestFunctionSample(
        rho=rho,
        A=5.0 * W.d3**2 - 3.0 * W.d2 * W.d4,
        B=W.d1 * W.d3,
        C=W.d2,
    )


test_functions.__test__ = False


@dataclass(frozen=True)
class CriterionVerdict:
    """Outcome of the criterion with the values that decided it.

    ``p_endpoints`` holds ``(z, P(z))`` at both ends of the closure of
    ``{z in phi(J): R(z) >= 0}``; ``q_at_inflection`` is ``Q(alpha - 1)`` when
    ``alpha - 1`` lies inside ``phi(J)`` and ``None`` otherwise.  For the duality
    route the witness belongs to ``dual_alpha``.
    """

    alpha: float
    verdict: Verdict
    route: Route
    phi_interval: tuple
    l_interval: tuple
    p_endpoints: tuple
    q_at_inflection: Optional[float] = None
    dual_alpha: Optional[float] = None


def dual_exponent(alpha):
    if alpha == 2:
        raise DomainError("alpha = 2 has no dual exponent")
    return 2.0 - 4.0 / (2.0 - alpha)


def _classify_direct(alpha):
    lower, upper = 0.0, 2.0 / alpha
    # closure of L = {R > 0} and of {R >= 0}: both start at max(0, alpha - 1)
    z_lo = max(lower, alpha - 1.0)
    l_interval = (z_lo, upper)
    p_ends = ((z_lo, poly_P(alpha, z_lo)), (upper, poly_P(alpha, upper)))
    q_val = None
    if lower < alpha - 1.0 < upper:
        q_val = poly_Q(alpha, alpha - 1.0)

    decreasing = all(p < 0 for _, p in p_ends)
    increasing = all(p > 0 for _, p in p_ends) and (q_val is None or q_val < 0)
    if decreasing:
        verdict = Verdict.DECREASING
    elif increasing:
        verdict = Verdict.INCREASING
    else:
        verdict = Verdict.INCONCLUSIVE
    return verdict, (lower, upper), l_interval, p_ends, q_val


def classify(law):
    """Monotonicity verdict for the apsidal angle of ``law`` as a function of energy."""
    alpha = law.alpha
    if alpha == 0:
        raise UnsupportedExponentError("alpha = 0 is not supported")
    if alpha > 0:
        verdict, interval, l_int, p_ends, q_val = _classify_direct(alpha)
        return CriterionVerdict(alpha, verdict, Route.DIRECT, interval, l_int, p_ends, q_val)
    dual = dual_exponent(alpha)
    if not 0.0 < dual < 2.0:
        # only reachable through underflow for alpha extremely close to 0
        return CriterionVerdict(alpha, Verdict.INCONCLUSIVE, Route.DUALITY, (), (), (),
                                dual_alpha=dual)
    verdict, interval, l_int, p_ends, q_val = _classify_direct(dual)
    return CriterionVerdict(alpha, verdict, Route.DUALITY, interval, l_int, p_ends, q_val,
                            dual_alpha=dual)


def is_degenerate_exponent(alpha):
    """True for the two exponents whose apsidal angle is constant."""
    return math.isclose(alpha, 1.0, abs_tol=1e-12) or math.isclose(alpha, -2.0, abs_tol=1e-12)
