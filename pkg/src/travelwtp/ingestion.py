"""Loading population and survey data and turning it into estimation inputs.

Input files are comma-separated with a header row.  Malformed rows raise
:class:`~travelwtp.errors.DataFormatError` carrying the file line number;
nothing is dropped silently.
"""

from __future__ import annotations

import csv
import enum
from collections import OrderedDict
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .errors import DataFormatError, DomainError, InsufficientDataError
from .estimation import AcceptanceGroup, BandObservation

__all__ = [
    "DistanceBandRecord",
    "DayType",
    "Acceptance",
    "SurveyResponse",
    "SeasonCalendar",
    "CostSchedule",
    "read_population_csv",
    "read_survey_csv",
    "read_zip_distances",
    "hourly_visitor_rates",
    "estimate_season_visitors",
    "respondent_weight",
    "band_observations",
    "delta_cost",
    "acceptance_groups",
]


@dataclass(frozen=True)
class DistanceBandRecord:
    band_low: float
    band_high: float
    population: float
    respondents: int

    def __post_init__(self):
        if not self.band_low < self.band_high:
            raise DomainError(f"band_low {self.band_low} must be below band_high {self.band_high}")
        if self.population < 0 or self.respondents < 0:
            raise DomainError("population and respondents must be non-negative")

    @property
    def midpoint(self) -> float:
        return (self.band_low + self.band_high) / 2.0

    @property
    def label(self) -> str:
        return f"{self.band_low:g}-{self.band_high:g}"

    def contains(self, distance: float) -> bool:
        return self.band_low <= distance < self.band_high


class DayType(enum.Enum):
    WEEKDAY = "weekday"
    WEEKEND = "weekend"
    HOLIDAY = "holiday"


class Acceptance(enum.Enum):
    YES = "yes"
    NO = "no"
    UNASKED = "unasked"


@dataclass(frozen=True)
class SurveyResponse:
    one_way_distance: float
    day_type: DayType
    visitors_seen: Optional[float] = None
    stay_hours: Optional[float] = None
    accepts_higher_cost: Acceptance = Acceptance.UNASKED
    at_rvf_site: bool = True

    def __post_init__(self):
        if self.one_way_distance < 0:
            raise DomainError("one_way_distance must be non-negative")
        if self.visitors_seen is not None and self.visitors_seen < 0:
            raise DomainError("visitors_seen must be non-negative")
        if self.stay_hours is not None and not self.stay_hours > 0:
            raise DomainError("stay_hours must be positive")


@dataclass(frozen=True)
class SeasonCalendar:
    weekday_count: float
    weekend_holiday_count: float
    active_hours_per_day: float

    def __post_init__(self):
        if min(self.weekday_count, self.weekend_holiday_count, self.active_hours_per_day) <= 0:
            raise DomainError("calendar counts and hours must be positive")


@dataclass(frozen=True)
class CostSchedule:
    """Unit costs of travel.

    ``cost_per_mile`` is ``effective_cost_per_mile`` when given, otherwise
    fuel cost per one-way mile times ``round_trip_multiplier``.  The time
    value multiplier is applied to totals and extra costs, not folded into
    the per-mile figure.
    """

    gas_price: float = 4.0
    fuel_economy: float = 20.8
    round_trip_multiplier: float = 1.0
    time_value_multiplier: float = 1.2
    effective_cost_per_mile: Optional[float] = None

    def __post_init__(self):
        if min(self.gas_price, self.fuel_economy, self.round_trip_multiplier) <= 0:
            raise DomainError("gas price, fuel economy and round-trip multiplier must be positive")
        if self.time_value_multiplier < 1:
            raise DomainError("time_value_multiplier must be at least 1")
        if self.effective_cost_per_mile is not None and not self.effective_cost_per_mile > 0:
            raise DomainError("effective_cost_per_mile must be positive")

    @property
    def cost_per_mile(self) -> float:
        if self.effective_cost_per_mile is not None:
            return self.effective_cost_per_mile
        return self.gas_price * self.round_trip_multiplier / self.fuel_economy


# --------------------------------------------------------------------------
# file readers


def _open_rows(path, required):
    path = Path(path)
    try:
        handle = path.open(newline="")
    except OSError as exc:
        raise DataFormatError(f"cannot open: {exc.strerror}", path=path) from exc
    with handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise DataFormatError("empty file", path=path, row=1)
        fields = [f.strip() for f in reader.fieldnames]
        reader.fieldnames = fields
        missing = [c for c in required if c not in fields]
        if missing:
            raise DataFormatError(f"missing columns {missing}", path=path, row=1)
        for row in reader:
            if None in row:
                raise DataFormatError("too many fields", path=path, row=reader.line_num)
            yield reader.line_num, {k: (v or "").strip() for k, v in row.items()}


def _number(text, column, path, line, allow_blank=False, integer=False):
    if text == "" or text.lower() == "none":
        if allow_blank:
            return None
        raise DataFormatError(f"column {column!r} is blank", path=path, row=line)
    try:
        value = float(text.replace(",", "")) if not integer else int(text.replace(",", ""))
    except ValueError:
        raise DataFormatError(f"column {column!r}: not a number: {text!r}", path=path, row=line)
    return value


def read_population_csv(path) -> List[DistanceBandRecord]:
    """Read ``band_low_miles, band_high_miles, population, respondents``.

    ``none`` or a blank cell in the population or respondents column reads
    as zero, matching bands with no residents.
    """
    cols = ("band_low_miles", "band_high_miles", "population", "respondents")
    bands = []
    for line, row in _open_rows(path, cols):
        low = _number(row["band_low_miles"], "band_low_miles", path, line)
        high = _number(row["band_high_miles"], "band_high_miles", path, line)
        pop = _number(row["population"], "population", path, line, allow_blank=True) or 0.0
        resp = _number(row["respondents"], "respondents", path, line, allow_blank=True, integer=True) or 0
        try:
            band = DistanceBandRecord(low, high, pop, resp)
        except DomainError as exc:
            raise DataFormatError(str(exc), path=path, row=line) from exc
        if bands and band.band_low < bands[-1].band_high:
            raise DataFormatError("bands overlap or are not sorted", path=path, row=line)
        bands.append(band)
    if not bands:
        raise DataFormatError("no data rows", path=path)
    return bands


def read_zip_distances(path) -> Dict[str, float]:
    table = {}
    for line, row in _open_rows(path, ("zip", "one_way_miles")):
        if not row["zip"]:
            raise DataFormatError("blank zip", path=path, row=line)
        table[row["zip"]] = _number(row["one_way_miles"], "one_way_miles", path, line)
    return table


def _parse_band_label(text):
    low, sep, high = text.replace("–", "-").partition("-")
    if not sep:
        raise ValueError(text)
    return (float(low) + float(high)) / 2.0


_ACCEPT = {"yes": Acceptance.YES, "y": Acceptance.YES, "1": Acceptance.YES,
           "no": Acceptance.NO, "n": Acceptance.NO, "0": Acceptance.NO,
           "": Acceptance.UNASKED, "unasked": Acceptance.UNASKED}
_FLAG = {"1": True, "0": False, "true": True, "false": False, "yes": True, "no": False}


def read_survey_csv(path, zip_distances: Optional[Dict[str, float]] = None) -> List[SurveyResponse]:
    """Read one survey response per row.

    Distance comes from the first non-blank of ``one_way_miles``, a ``zip``
    looked up in ``zip_distances``, or a ``band`` label such as ``10-50``
    (resolved to its midpoint).
    """
    cols = ("day_type", "visitors_seen", "stay_hours", "accepts_higher_cost", "at_rvf_site")
    out = []
    for line, row in _open_rows(path, cols):
        distance = None
        if row.get("one_way_miles"):
            distance = _number(row["one_way_miles"], "one_way_miles", path, line)
        elif row.get("zip") and zip_distances is not None:
            if row["zip"] not in zip_distances:
                raise DataFormatError(f"zip {row['zip']!r} not in distance table", path=path, row=line)
            distance = zip_distances[row["zip"]]
        elif row.get("band"):
            try:
                distance = _parse_band_label(row["band"])
            except ValueError:
                raise DataFormatError(f"bad band label {row['band']!r}", path=path, row=line)
        if distance is None:
            raise DataFormatError("no distance, zip, or band given", path=path, row=line)
        try:
            day = DayType(row["day_type"].lower())
        except ValueError:
            raise DataFormatError(f"unknown day_type {row['day_type']!r}", path=path, row=line)
        accept = _ACCEPT.get(row["accepts_higher_cost"].lower())
        if accept is None:
            raise DataFormatError(
                f"accepts_higher_cost must be yes/no/blank, got {row['accepts_higher_cost']!r}",
                path=path, row=line,
            )
        site = _FLAG.get(row["at_rvf_site"].lower())
        if site is None:
            raise DataFormatError(f"at_rvf_site must be 0/1, got {row['at_rvf_site']!r}", path=path, row=line)
        try:
            out.append(SurveyResponse(
                one_way_distance=distance,
                day_type=day,
                visitors_seen=_number(row["visitors_seen"], "visitors_seen", path, line, allow_blank=True),
                stay_hours=_number(row["stay_hours"], "stay_hours", path, line, allow_blank=True),
                accepts_higher_cost=accept,
                at_rvf_site=site,
            ))
        except DomainError as exc:
            raise DataFormatError(str(exc), path=path, row=line) from exc
    return out


# --------------------------------------------------------------------------
# visitor counting


def hourly_visitor_rates(responses: Sequence[SurveyResponse]):
    """Weekday and weekend visitors per hour, and the mean stay in hours.

    A day type's rate is the mean number of visitors seen per response
    divided by the mean stay.  Holiday counts are not used.
    """
    stays = [r.stay_hours for r in responses if r.stay_hours is not None]
    if not stays:
        raise InsufficientDataError("no stay durations reported")
    mean_stay = sum(stays) / len(stays)

    def rate(day):
        seen = [r.visitors_seen for r in responses
                if r.day_type is day and r.visitors_seen is not None]
        if not seen:
            raise InsufficientDataError(f"no {day.value} responses with visitor counts")
        return sum(seen) / len(seen) / mean_stay

    return rate(DayType.WEEKDAY), rate(DayType.WEEKEND), mean_stay


def estimate_season_visitors(responses: Sequence[SurveyResponse], calendar: SeasonCalendar) -> float:
    """Visitors over a season; holidays are counted at the weekend rate."""
    weekday, weekend, _ = hourly_visitor_rates(responses)
    return calendar.active_hours_per_day * (
        calendar.weekday_count * weekday + calendar.weekend_holiday_count * weekend
    )


def respondent_weight(season_visitors: float, n_respondents: int) -> float:
    """Season visitors represented by each respondent."""
    if n_respondents < 1:
        raise DomainError("need at least one respondent")
    if season_visitors < 0:
        raise DomainError("season_visitors must be non-negative")
    return season_visitors / n_respondents


def band_observations(bands: Sequence[DistanceBandRecord], weight: float) -> List[BandObservation]:
    """Visit probability per band: weighted respondents over band population.

    Bands without respondents are skipped.
    """
    if not weight > 0:
        raise DomainError(f"weight must be positive, got {weight}")
    out = []
    for band in bands:
        if band.respondents == 0:
            continue
        if band.population <= 0:
            raise DomainError(f"band {band.label} has respondents but no population")
        out.append(BandObservation(band.midpoint, band.respondents * weight / band.population))
    return out


# --------------------------------------------------------------------------
# stated-preference groups


def delta_cost(one_way_distance: float, price_increase: float, schedule: CostSchedule) -> float:
    """Extra cost of one visit after a fuel price rise, time value included."""
    if not (one_way_distance > 0 and price_increase > 0):
        raise DomainError("distance and price increase must be positive")
    return (
        one_way_distance
        * schedule.round_trip_multiplier
        * price_increase
        / schedule.fuel_economy
        * schedule.time_value_multiplier
    )


def acceptance_groups(
    responses: Sequence[SurveyResponse],
    bands: Sequence[DistanceBandRecord],
    price_increase: float,
    schedule: CostSchedule,
    min_distance: float = 10.0,
    max_distance: float = 290.0,
    delta_from: str = "midpoint",
) -> List[AcceptanceGroup]:
    """Group on-site answers to the higher-cost question by distance band.

    Only responses interviewed at the site, with a yes/no answer, and with
    ``min_distance < distance < max_distance`` are used.  ``delta_from``
    selects whether a group's extra cost uses the band midpoint
    (``"midpoint"``) or the mean over its respondents' own distances
    (``"respondent"``).
    """
    if delta_from not in ("midpoint", "respondent"):
        raise DomainError(f"delta_from must be 'midpoint' or 'respondent', got {delta_from!r}")
    kept = [
        r for r in responses
        if r.at_rvf_site
        and r.accepts_higher_cost is not Acceptance.UNASKED
        and min_distance < r.one_way_distance < max_distance
    ]
    if not kept:
        raise InsufficientDataError("no responses pass the stated-preference filter")

    grouped: "OrderedDict[int, list]" = OrderedDict((i, []) for i in range(len(bands)))
    for r in kept:
        for i, band in enumerate(bands):
            if band.contains(r.one_way_distance):
                grouped[i].append(r)
                break
        else:
            raise DomainError(f"distance {r.one_way_distance} falls in no band")

    groups = []
    for i, members in grouped.items():
        if not members:
            continue
        yes = sum(r.accepts_higher_cost is Acceptance.YES for r in members)
        if delta_from == "midpoint":
            delta = delta_cost(bands[i].midpoint, price_increase, schedule)
        else:
            delta = sum(delta_cost(r.one_way_distance, price_increase, schedule)
                        for r in members) / len(members)
        groups.append(AcceptanceGroup(len(members), yes, delta))
    return groups
