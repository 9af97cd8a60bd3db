"""Aggregate revealed and stated WTP and reconcile them over a common period.

Revealed WTP is a stock: expected travel spending of the whole resident
population.  Stated WTP is a flow: per-visitor value times annual visitors.
The comparison puts the flow on the horizon over which the population
renews itself.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

from .errors import DomainError
from .model_core import ExponentialDemand, per_capita_rwtp

__all__ = [
    "DemographicParams",
    "Reconciliation",
    "ValuationReport",
    "revealed_total",
    "stated_total",
    "compound",
    "growth_factor",
    "turnover_years",
    "reconcile",
    "PERIODS",
]


@dataclass(frozen=True)
class DemographicParams:
    annual_growth_rate: float = 0.025
    mortality_rate: float = 0.013
    census_year: int = 2000
    survey_year: int = 2008
    total_population: float = 18_906_091

    def __post_init__(self):
        for name in ("annual_growth_rate", "mortality_rate"):
            rate = getattr(self, name)
            if not 0 < rate < 1:
                raise DomainError(f"{name} must lie in (0, 1), got {rate}")
        if self.survey_year < self.census_year:
            raise DomainError("survey_year precedes census_year")
        if not self.total_population > 0:
            raise DomainError("total_population must be positive")


def revealed_total(model: ExponentialDemand, demo: DemographicParams, time_multiplier: float = 1.2):
    """Population-wide revealed WTP, without and with the travel-time uplift.

    Returns ``(rwtp_total, rwtp_total_with_time)`` in dollars over the
    lifetime of the resident population.
    """
    if time_multiplier < 1:
        raise DomainError("time_multiplier must be at least 1")
    total = per_capita_rwtp(model) * demo.total_population
    return total, total * time_multiplier


def stated_total(swtp_per_visitor: float, annual_visitors: float) -> float:
    """Annual stated WTP in dollars."""
    if not (swtp_per_visitor > 0 and annual_visitors > 0):
        raise DomainError("per-visitor SWTP and annual visitors must be positive")
    return swtp_per_visitor * annual_visitors


def compound(rate: float, years: float) -> float:
    return (1.0 + rate) ** years


def growth_factor(demo: DemographicParams) -> float:
    """Population growth between the census and the survey year."""
    return compound(demo.annual_growth_rate, demo.survey_year - demo.census_year)


def turnover_years(demo: DemographicParams) -> float:
    """Years until arrivals (growth plus replacement of deaths) equal today's residents."""
    combined = demo.annual_growth_rate + demo.mortality_rate
    if not combined > 0:
        raise DomainError("combined growth and mortality rate must be positive")
    return math.log(2.0) / math.log1p(combined)


@dataclass(frozen=True)
class Reconciliation:
    swtp_over_turnover: float
    ratio_swtp_rwtp: float
    sd_fraction: float
    diff_in_sd_units: float


def reconcile(rwtp_total_with_time: float, swtp_annual: float, turnover: float) -> Reconciliation:
    """Compare revealed and stated totals over the turnover horizon.

    The dispersion figures follow the published heuristic: with both totals
    in millions of dollars, one "standard deviation" is
    ``sqrt(stated) / revealed`` and the gap ``|1 - ratio|`` is expressed in
    those units.  This is a reported convention, not a derived variance.
    """
    if not (rwtp_total_with_time > 0 and swtp_annual > 0 and turnover > 0):
        raise DomainError("reconcile inputs must be positive")
    over = swtp_annual * turnover
    ratio = over / rwtp_total_with_time
    sd_fraction = math.sqrt(over / 1e6) / (rwtp_total_with_time / 1e6)
    return Reconciliation(over, ratio, sd_fraction, abs(1.0 - ratio) / sd_fraction)


PERIODS = {
    "per_capita_rwtp": "lifetime, per resident",
    "rwtp_total": "lifetime of resident population",
    "rwtp_total_with_time": "lifetime of resident population",
    "swtp_per_visitor": "annual, per visitor",
    "swtp_annual": "annual",
    "turnover_years": "years",
    "swtp_over_turnover": "turnover period",
    "ratio_swtp_rwtp": "dimensionless",
    "sd_fraction": "dimensionless (dispersion heuristic, millions of dollars)",
    "diff_in_sd_units": "dimensionless (dispersion heuristic)",
}


@dataclass(frozen=True)
class ValuationReport:
    per_capita_rwtp: float
    rwtp_total: float
    rwtp_total_with_time: float
    swtp_per_visitor: float
    swtp_annual: float
    turnover_years: float
    swtp_over_turnover: float
    ratio_swtp_rwtp: float
    sd_fraction: float
    diff_in_sd_units: float
    growth_factor: Optional[float] = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        money = (self.per_capita_rwtp, self.rwtp_total, self.rwtp_total_with_time,
                 self.swtp_per_visitor, self.swtp_annual, self.swtp_over_turnover)
        if any(v < 0 for v in money):
            raise DomainError("monetary values must be non-negative")
        if not self.ratio_swtp_rwtp > 0:
            raise DomainError("ratio must be positive")

    @classmethod
    def build(cls, model, demo, swtp_per_visitor, annual_visitors,
              time_multiplier=1.2, turnover=None, metadata=None):
        """Run the full revealed/stated/reconcile chain into one report."""
        total, with_time = revealed_total(model, demo, time_multiplier)
        annual = stated_total(swtp_per_visitor, annual_visitors)
        horizon = turnover_years(demo) if turnover is None else turnover
        rec = reconcile(with_time, annual, horizon)
        meta = {"dispersion_method": "published dispersion heuristic: sqrt(stated, $M) / revealed ($M)"}
        meta.update(metadata or {})
        return cls(
            per_capita_rwtp=per_capita_rwtp(model),
            rwtp_total=total,
            rwtp_total_with_time=with_time,
            swtp_per_visitor=swtp_per_visitor,
            swtp_annual=annual,
            turnover_years=horizon,
            swtp_over_turnover=rec.swtp_over_turnover,
            ratio_swtp_rwtp=rec.ratio_swtp_rwtp,
            sd_fraction=rec.sd_fraction,
            diff_in_sd_units=rec.diff_in_sd_units,
            growth_factor=growth_factor(demo),
            metadata=meta,
        )

    def to_dict(self) -> dict:
        values = asdict(self)
        meta = values.pop("metadata")
        return {
            "values": values,
            "periods": dict(PERIODS),
            "metadata": meta,
        }

    def summary(self) -> str:
        lines = [
            f"per-capita RWTP             {self.per_capita_rwtp:14.6f} $ per resident",
            f"RWTP total                  {self.rwtp_total / 1e6:14.4f} $M (lifetime)",
            f"RWTP total with time value  {self.rwtp_total_with_time / 1e6:14.4f} $M (lifetime)",
            f"SWTP per visitor            {self.swtp_per_visitor:14.4f} $ per visitor-year",
            f"SWTP annual                 {self.swtp_annual:14.2f} $ per year",
            f"turnover period             {self.turnover_years:14.3f} years",
            f"SWTP over turnover          {self.swtp_over_turnover / 1e6:14.4f} $M",
            f"ratio SWTP / RWTP           {self.ratio_swtp_rwtp:14.4f}",
            f"sd fraction (heuristic)     {self.sd_fraction:14.4f}",
            f"difference in sd units      {self.diff_in_sd_units:14.4f}",
        ]
        if self.growth_factor is not None:
            lines.append(f"census-to-survey growth     {self.growth_factor:14.5f}")
        return "\n".join(lines)
