"""Estimating the exponential rate from revealed and stated data.

The revealed side regresses log visitation probability on distance.  The
stated side uses acceptance shares at a known extra cost: under the
exponential model each share equals ``exp(-rate * extra_cost)``, so the
weighted geometric mean of the shares pins down the rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import special

from .errors import (
    DegenerateDesignError,
    DegenerateGroupError,
    DomainError,
    InsufficientDataError,
    UnboundedWTPError,
)
from .model_core import ExponentialDemand

__all__ = [
    "BandObservation",
    "FitDiagnostics",
    "AcceptanceGroup",
    "StatedEstimate",
    "fit_exponential",
    "to_dollar_scale",
    "stated_rate_from_groups",
    "f_right_tail",
]


@dataclass(frozen=True)
class BandObservation:
    """Annual visit probability for residents of one distance band."""

    distance_midpoint: float
    visit_probability: float

    def __post_init__(self):
        if not self.distance_midpoint > 0:
            raise DomainError(f"distance_midpoint must be positive, got {self.distance_midpoint}")
        if not 0 < self.visit_probability < 1:
            raise DomainError(
                f"visit_probability must lie in (0, 1), got {self.visit_probability}"
            )


@dataclass(frozen=True)
class FitDiagnostics:
    r_squared: float
    f_statistic: float
    p_value: float
    n_points: int


@dataclass(frozen=True)
class AcceptanceGroup:
    """Respondents from one band asked about a common extra cost."""

    n_respondents: int
    n_accepting: int
    delta_cost: float

    def __post_init__(self):
        if self.n_respondents < 1:
            raise DomainError("n_respondents must be at least 1")
        if not 0 <= self.n_accepting <= self.n_respondents:
            raise DomainError(
                f"n_accepting={self.n_accepting} outside [0, {self.n_respondents}]"
            )
        if not self.delta_cost > 0:
            raise DomainError(f"delta_cost must be positive, got {self.delta_cost}")

    @property
    def acceptance_probability(self) -> float:
        return self.n_accepting / self.n_respondents


@dataclass(frozen=True)
class StatedEstimate:
    geometric_mean_acceptance: float
    mean_delta: float
    stated_mean_wtp: float
    n_total: int

    @property
    def rate_per_dollar(self) -> float:
        return 1.0 / self.stated_mean_wtp


def f_right_tail(f: float, d1: float, d2: float) -> float:
    """Upper tail ``P(F(d1, d2) > f)`` of the F distribution.

    Uses the identity ``P(F > f) = I_x(d2/2, d1/2)`` with
    ``x = d2 / (d2 + d1 f)``, where ``I`` is the regularized incomplete beta.
    """
    if not (d1 >= 1 and d2 >= 1):
        raise DomainError(f"degrees of freedom must be >= 1, got ({d1}, {d2})")
    if f < 0 or math.isnan(f):
        raise DomainError(f"F statistic must be non-negative, got {f}")
    if math.isinf(f):
        return 0.0
    x = d2 / (d2 + d1 * f)
    return float(special.betainc(d2 / 2.0, d1 / 2.0, x))


def fit_exponential(observations: Sequence[BandObservation]):
    """Fit ``p = A exp(-r x)`` by least squares on ``ln p`` against distance.

    Parameters
    ----------
    observations : sequence of BandObservation
        At least three bands with distinct midpoints.

    Returns
    -------
    model : ExponentialDemand
        Carries ``prefactor_a`` and ``rate_per_mile`` only.
    diagnostics : FitDiagnostics
        R-squared on the log scale and the F(1, n-2) test of the slope.

    Raises
    ------
    InsufficientDataError
        Fewer than three observations.
    DegenerateDesignError
        All midpoints equal.
    """
    if len(observations) < 3:
        raise InsufficientDataError(
            f"need at least 3 bands to fit, got {len(observations)}"
        )
    x = np.array([o.distance_midpoint for o in observations], dtype=float)
    p = np.array([o.visit_probability for o in observations], dtype=float)
    if np.any(p <= 0):
        raise DomainError("visit probabilities must be strictly positive")
    y = np.log(p)
    n = x.size

    xc = x - x.mean()
    yc = y - y.mean()
    sxx = float(xc @ xc)
    if sxx == 0.0 or sxx < 1e-300:
        raise DegenerateDesignError("distance midpoints have zero variance")
    syy = float(yc @ yc)
    sxy = float(xc @ yc)
    slope = sxy / sxx
    intercept = y.mean() - slope * x.mean()

    if slope >= 0:
        raise DomainError(
            f"fitted visitation does not decay with distance (slope {slope:.6g})"
        )

    if syy == 0.0:
        r_squared = 1.0
    else:
        r_squared = min(1.0, sxy * sxy / (sxx * syy))
    dof = n - 2
    if dof == 0 or r_squared == 1.0:
        f_stat = math.inf
        p_value = 0.0
    else:
        f_stat = r_squared / (1.0 - r_squared) * dof
        p_value = f_right_tail(f_stat, 1, dof)

    model = ExponentialDemand(prefactor_a=math.exp(intercept), rate_per_mile=-slope)
    return model, FitDiagnostics(r_squared, f_stat, p_value, n)


def to_dollar_scale(model: ExponentialDemand, schedule) -> ExponentialDemand:
    """Convert a distance-scale fit to dollars using ``schedule.cost_per_mile``."""
    if model.rate_per_mile is None:
        raise DomainError("model has no per-mile rate to convert")
    cost = schedule.cost_per_mile
    if not cost > 0:
        raise DomainError(f"cost_per_mile must be positive, got {cost}")
    return model.with_rate_per_dollar(model.rate_per_mile / cost)


def stated_rate_from_groups(
    groups: Sequence[AcceptanceGroup], mean_delta: Optional[float] = None
) -> StatedEstimate:
    """Mean stated WTP from acceptance shares at known extra costs.

    The weighted geometric mean of acceptance shares,
    ``G = exp(sum(n_i ln p_i) / N)``, equals ``exp(-rate * D)`` where ``D`` is
    the respondent-weighted mean extra cost, so the mean is ``D / -ln G``.
    The product is accumulated as a sum of logs.

    ``mean_delta`` replaces the weighted mean of the groups' costs when the
    cohort average is known directly.
    """
    if not groups:
        raise InsufficientDataError("no acceptance groups")
    log_sum = 0.0
    n_total = 0
    delta_sum = 0.0
    for i, g in enumerate(groups):
        if g.n_accepting == 0:
            raise DegenerateGroupError(
                f"group {i} ({g.n_respondents} respondents, extra cost {g.delta_cost}) "
                "has no acceptors",
                group_index=i,
            )
        log_sum += g.n_respondents * math.log(g.acceptance_probability)
        n_total += g.n_respondents
        delta_sum += g.n_respondents * g.delta_cost
    log_g = log_sum / n_total
    delta = delta_sum / n_total if mean_delta is None else float(mean_delta)
    if not delta > 0:
        raise DomainError(f"mean extra cost must be positive, got {delta}")
    if log_g == 0.0:
        raise UnboundedWTPError("every respondent accepted the extra cost")
    return StatedEstimate(
        geometric_mean_acceptance=math.exp(log_g),
        mean_delta=delta,
        stated_mean_wtp=delta / -log_g,
        n_total=n_total,
    )
