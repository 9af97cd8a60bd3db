"""Probabilistic travel-cost model for revealed and stated willingness to pay."""

from .errors import (
    ConfigError,
    DataFormatError,
    DegenerateDesignError,
    DegenerateGroupError,
    DomainError,
    InsufficientDataError,
    ScenarioError,
    TravelWTPError,
    UnboundedWTPError,
)
from .estimation import (
    AcceptanceGroup,
    BandObservation,
    FitDiagnostics,
    StatedEstimate,
    f_right_tail,
    fit_exponential,
    stated_rate_from_groups,
    to_dollar_scale,
)
from .ingestion import (
    Acceptance,
    CostSchedule,
    DayType,
    DistanceBandRecord,
    SeasonCalendar,
    SurveyResponse,
    acceptance_groups,
    band_observations,
    delta_cost,
    estimate_season_visitors,
    hourly_visitor_rates,
    read_population_csv,
    read_survey_csv,
    read_zip_distances,
    respondent_weight,
)
from .model_core import (
    ExponentialDemand,
    cdf,
    conditional_increment_cdf,
    density,
    discrete_exceedance,
    mean_expenditure,
    per_capita_rwtp,
    survival,
)
from .valuation import (
    DemographicParams,
    Reconciliation,
    ValuationReport,
    growth_factor,
    reconcile,
    revealed_total,
    stated_total,
    turnover_years,
)

__version__ = "0.1.0"
