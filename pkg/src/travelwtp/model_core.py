"""Exponential expenditure distribution for travel demand.

The model treats the amount a resident spends on reaching a site as an
exponential random variable.  Rates are kept on two scales: per mile of
one-way distance (what a regression on distance returns) and per dollar of
travel expenditure (what every valuation needs).  The two are linked by an
effective cost per mile, see :func:`travelwtp.estimation.to_dollar_scale`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import DomainError

__all__ = [
    "ExponentialDemand",
    "density",
    "cdf",
    "survival",
    "conditional_increment_cdf",
    "mean_expenditure",
    "per_capita_rwtp",
    "discrete_exceedance",
]


@dataclass(frozen=True)
class ExponentialDemand:
    """Fitted visitation curve ``p(x) = prefactor_a * exp(-rate * x)``.

    Parameters
    ----------
    prefactor_a : float
        Level of the visitation curve at zero cost.
    rate_per_mile : float, optional
        Decay rate against one-way distance.
    rate_per_dollar : float, optional
        Decay rate against travel expenditure.  Unset until a cost schedule
        is applied to a distance-scale fit.
    """

    prefactor_a: float
    rate_per_mile: Optional[float] = None
    rate_per_dollar: Optional[float] = None

    def __post_init__(self):
        if not self.prefactor_a > 0:
            raise DomainError(f"prefactor_a must be positive, got {self.prefactor_a}")
        if self.rate_per_mile is None and self.rate_per_dollar is None:
            raise DomainError("at least one of rate_per_mile, rate_per_dollar is required")
        for name in ("rate_per_mile", "rate_per_dollar"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise DomainError(f"{name} must be positive, got {value}")

    @property
    def cost_per_mile(self) -> Optional[float]:
        """Effective dollars per mile implied by the two rates, if both are set."""
        if self.rate_per_mile is None or self.rate_per_dollar is None:
            return None
        return self.rate_per_mile / self.rate_per_dollar

    def with_rate_per_dollar(self, rate_per_dollar: float) -> "ExponentialDemand":
        return replace(self, rate_per_dollar=rate_per_dollar)


def _dollar_rate(model: ExponentialDemand) -> float:
    if model.rate_per_dollar is None:
        raise DomainError("model has no per-dollar rate; apply a cost schedule first")
    return model.rate_per_dollar


def _nonnegative(value, name):
    arr = np.asarray(value, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError(f"{name} must be non-negative, got {value}")
    return arr


def _out(arr):
    return float(arr) if arr.ndim == 0 else arr


def density(model: ExponentialDemand, w):
    """Probability density of expenditure ``w`` (dollars)."""
    lam = _dollar_rate(model)
    w = _nonnegative(w, "w")
    return _out(lam * np.exp(-lam * w))


def cdf(model: ExponentialDemand, w):
    """Probability that total expenditure is at most ``w`` dollars."""
    lam = _dollar_rate(model)
    w = _nonnegative(w, "w")
    return _out(-np.expm1(-lam * w))


def survival(model: ExponentialDemand, t):
    """Share of the population willing to pay ``t`` dollars or more."""
    lam = _dollar_rate(model)
    t = _nonnegative(t, "t")
    return _out(np.exp(-lam * t))


def conditional_increment_cdf(model: ExponentialDemand, x, z):
    """``P(X <= x + z | X >= x)`` as ``(S(x) - S(x + z)) / S(x)``.

    Equals ``cdf(model, z)`` for every ``x``; kept separate so the identity
    can be checked rather than assumed.  Differencing survival values keeps
    full relative precision where differencing CDF values near 1 would not.
    """
    s_x = survival(model, x)
    s_xz = survival(model, np.asarray(x, dtype=float) + np.asarray(z, dtype=float))
    return _out(np.asarray((s_x - s_xz) / s_x))


def mean_expenditure(model: ExponentialDemand) -> float:
    """Mean travel expenditure per visiting tourist, ``1 / rate``."""
    return 1.0 / _dollar_rate(model)


def per_capita_rwtp(model: ExponentialDemand) -> float:
    """Expected travel expenditure per resident of the general population.

    This is the integral of the visitation curve over all expenditures,
    ``prefactor_a / rate_per_dollar``.
    """
    return model.prefactor_a / _dollar_rate(model)


def discrete_exceedance(rate: float, portion: float, k: int, continue_prob=None) -> float:
    """Probability of spending at least ``k`` portions in the portion model.

    Each portion of size ``portion`` is spent independently with
    probability ``continue_prob`` (default ``exp(-rate * portion)``) until
    the first refusal.  The tail is obtained by summing the point masses
    ``p**j * (1 - p)`` for ``j < k`` and taking the complement, so it does
    not reuse the closed form.
    """
    if rate <= 0 or portion <= 0:
        raise DomainError("rate and portion must be positive")
    if k < 0:
        raise DomainError("k must be non-negative")
    p = np.exp(-rate * portion) if continue_prob is None else float(continue_prob)
    if not 0 < p < 1:
        raise DomainError(f"continue_prob must lie in (0, 1), got {p}")
    j = np.arange(k, dtype=float)
    point_masses = np.exp(j * np.log(p)) * (1.0 - p)
    return float(1.0 - np.sum(point_masses))
