"""Sweeps over energy, near-circular limit probes and duality measurements."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import ApsidalError, DomainError
from .model import BoundedOrbit, ForceLaw
from .quadrature import apsidal_angle
from .schaaf import Verdict, classify, dual_exponent, is_degenerate_exponent

DEFAULT_POINTS = 20
DEFAULT_E_RANGE = (0.05, 0.9)
DEADBAND_FACTOR = 10.0
# floor for the error estimate, which can be exactly zero on converged rules
_ROUNDING_FLOOR = 8 * np.finfo(float).eps


class Measured(str, enum.Enum):
    INCREASING = "Increasing"
    DECREASING = "Decreasing"
    FLAT = "Flat"
    MIXED = "Mixed"


@dataclass(frozen=True)
class ScanRow:
    alpha: float
    ell: float
    h: float
    e: float
    r_minus: float
    r_plus: float
    theta: float
    theta_err: float
    dtheta_dh_fd: Optional[float] = None


@dataclass(frozen=True)
class ScanReport:
    rows: tuple
    verdict_measured: Measured
    verdict_predicted: object  # CriterionVerdict
    consistent: bool
    skipped: tuple = ()  # (grid value, message) for rows that could not be computed


def default_e_grid(points=DEFAULT_POINTS, e_from=DEFAULT_E_RANGE[0], e_to=DEFAULT_E_RANGE[1]):
    if points < 3:
        raise DomainError("a scan needs at least 3 points")
    return list(np.linspace(e_from, e_to, points))


def _row(orbit, opts):
    res = apsidal_angle(orbit, opts)
    return ScanRow(orbit.law.alpha, orbit.law.ell, orbit.h, orbit.e,
                   orbit.r_minus, orbit.r_plus, res.theta, res.err_estimate)


def _with_slopes(rows):
    out = list(rows[:1])
    for prev, row, nxt in zip(rows, rows[1:], rows[2:]):
        slope = (nxt.theta - prev.theta) / (nxt.h - prev.h)
        out.append(replace(row, dtheta_dh_fd=slope))
    out.append(rows[-1])
    return out


def _measure(rows):
    signs = []
    for prev, row, nxt in zip(rows, rows[1:], rows[2:]):
        step = nxt.theta - prev.theta
        band = DEADBAND_FACTOR * max(prev.theta_err, nxt.theta_err,
                                     _ROUNDING_FLOOR * abs(row.theta))
        signs.append(0 if abs(step) <= band else int(math.copysign(1, step)))
    if all(s == -1 for s in signs):
        return Measured.DECREASING
    if all(s == 1 for s in signs):
        return Measured.INCREASING
    if all(s == 0 for s in signs):
        return Measured.FLAT
    return Measured.MIXED


def is_consistent(alpha, measured, predicted):
    """Whether a measured monotonicity agrees with a criterion verdict.

    Flat is only acceptable for the two constant-angle exponents, and an
    inconclusive prediction accepts either strict direction.
    """
    if measured is Measured.MIXED:
        return False
    if measured is Measured.FLAT:
        return is_degenerate_exponent(alpha)
    if predicted.verdict is Verdict.INCONCLUSIVE:
        return not is_degenerate_exponent(alpha)
    return measured.value == predicted.verdict.value


def monotonicity_scan(law, grid=None, kind="e", opts=None):
    """Tabulate the apsidal angle over ``grid`` and compare its trend with ``classify``.

    ``kind`` is ``"e"`` (eccentricities) or ``"h"`` (energies).  Points that do
    not give a bounded orbit are reported in ``skipped``.
    """
    if kind not in ("e", "h"):
        raise DomainError(f"grid kind must be 'e' or 'h', got {kind!r}")
    if grid is None:
        grid, kind = default_e_grid(), "e"
    grid = list(grid)
    if not grid:
        raise DomainError("empty grid")

    rows, skipped = [], []
    for value in grid:
        try:
            if kind == "e":
                orbit = BoundedOrbit.from_eccentricity(law, value)
            else:
                orbit = BoundedOrbit.from_energy(law, value)
            rows.append(_row(orbit, opts))
        except DomainError as exc:
            skipped.append((value, str(exc)))
    rows.sort(key=lambda r: r.h)
    if len(rows) < 3:
        raise DomainError(f"only {len(rows)} valid grid points; a scan needs at least 3")
    for a, b in zip(rows, rows[1:]):
        if not a.h < b.h:
            raise DomainError(f"grid has repeated energy {a.h!r}")

    rows = _with_slopes(rows)
    predicted = classify(law)
    measured = _measure(rows)
    return ScanReport(tuple(rows), measured, predicted,
                      is_consistent(law.alpha, measured, predicted), tuple(skipped))


@dataclass(frozen=True)
class LimitProbe:
    alpha: float
    ell: float
    limit: float
    rows: tuple  # (e, theta, |theta - limit|)
    extrapolated: float
    shrinking: bool


def newton_limit_probe(alpha, ell, e_list, opts=None):
    """Apsidal angle at decreasing small eccentricities against pi / sqrt(2 - alpha)."""
    e_list = [float(e) for e in e_list]
    if not e_list:
        raise DomainError("empty eccentricity list")
    if any(not 1e-5 < e < 0.1 for e in e_list):
        raise DomainError("eccentricities must lie in (1e-5, 0.1)")
    if any(b >= a for a, b in zip(e_list, e_list[1:])):
        raise DomainError("eccentricities must be strictly decreasing")
    law = ForceLaw(alpha, ell)
    limit = math.pi / math.sqrt(2.0 - law.alpha)
    rows = []
    for e in e_list:
        theta = apsidal_angle(BoundedOrbit.from_eccentricity(law, e), opts).theta
        rows.append((e, theta, abs(theta - limit)))
    extrapolated = rows[-1][1]
    if len(rows) > 1:
        # leading correction is quadratic in e
        (e1, t1, _), (e2, t2, _) = rows[-2], rows[-1]
        extrapolated = (e1**2 * t2 - e2**2 * t1) / (e1**2 - e2**2)
    shrinking = all(b[2] < a[2] for a, b in zip(rows, rows[1:]))
    return LimitProbe(law.alpha, law.ell, limit, tuple(rows), extrapolated, shrinking)


@dataclass(frozen=True)
class DualityProbe:
    alpha: float
    dual_alpha: float
    ell: float
    reference: float  # (2 - alpha) / 2
    rows: tuple  # (e, theta_alpha, theta_dual, ratio)


def duality_probe(alpha, ell=1.0, e_list=(0.1, 0.01, 1e-3), opts=None):
    """Measured ratio theta(dual alpha) / theta(alpha) at matched eccentricities."""
    alpha = float(alpha)
    if not 0.5 < alpha < 2.0:
        raise DomainError(f"duality probe needs alpha in (1/2, 2), got {alpha}")
    dual = dual_exponent(alpha)
    law, dual_law = ForceLaw(alpha, ell), ForceLaw(dual, ell)
    rows = []
    for e in e_list:
        t = apsidal_angle(BoundedOrbit.from_eccentricity(law, e), opts).theta
        td = apsidal_angle(BoundedOrbit.from_eccentricity(dual_law, e), opts).theta
        rows.append((float(e), t, td, td / t))
    return DualityProbe(alpha, dual, law.ell, (2.0 - alpha) / 2.0, tuple(rows))


@dataclass
class SweepReport:
    cells: dict = field(default_factory=dict)  # (alpha, ell) -> ScanReport
    failures: dict = field(default_factory=dict)  # (alpha, ell) -> message

    @property
    def all_consistent(self):
        return not self.failures and all(c.consistent for c in self.cells.values())

    def ell_independent(self, alpha):
        verdicts = {c.verdict_measured for (a, _), c in self.cells.items() if a == alpha}
        return len(verdicts) == 1

    @property
    def alphas(self):
        return sorted({a for a, _ in list(self.cells) + list(self.failures)})


def theorem_sweep(alpha_list, ell_list, grid=None, opts=None):
    alpha_list, ell_list = list(alpha_list), list(ell_list)
    if not alpha_list or not ell_list:
        raise DomainError("theorem sweep needs non-empty alpha and ell lists")
    report = SweepReport()
    for alpha in alpha_list:
        for ell in ell_list:
            try:
                report.cells[(alpha, ell)] = monotonicity_scan(ForceLaw(alpha, ell), grid, opts=opts)
            except ApsidalError as exc:
                report.failures[(alpha, ell)] = str(exc)
    return report
