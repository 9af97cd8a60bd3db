"""Flat ``key = value`` run configuration.

One setting per line, ``#`` starts a comment.  Units are part of the key
name.  Relative paths resolve against the directory of the config file.
Unknown keys are rejected so that a misspelt setting cannot silently fall
back to its default.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional, Tuple

from .errors import ConfigError, DomainError
from .ingestion import CostSchedule, SeasonCalendar
from .simulator import STATED_GROUP_SIZES, TABLE1_LAYOUT, SyntheticScenario
from .valuation import DemographicParams

__all__ = ["parse_config", "load_config", "RunConfig", "SimulationConfig", "DATA_DIR"]

DATA_DIR = Path(__file__).resolve().parent / "data"


def parse_config(text: str, source: str = "<config>") -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"{source}:{lineno}: expected key = value")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        values[key] = value.strip()
    return values


def load_config(path) -> Tuple[dict, Path]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    return parse_config(text, str(path)), path.resolve().parent


def _floats(text):
    return tuple(float(v) for v in text.replace(";", ",").split(",") if v.strip())


# key -> (attribute, converter)
_RUN_KEYS = {
    "population_csv": ("population_csv", "path"),
    "survey_csv": ("survey_csv", "path"),
    "zip_distance_csv": ("zip_distance_csv", "path"),
    "gas_price_dollars_per_gallon": ("gas_price", float),
    "fuel_economy_miles_per_gallon": ("fuel_economy", float),
    "round_trip_multiplier": ("round_trip_multiplier", float),
    "time_value_multiplier": ("time_value_multiplier", float),
    "effective_cost_per_mile_dollars": ("effective_cost_per_mile", float),
    "price_increase_dollars_per_gallon": ("price_increase", float),
    "weekday_count_days": ("weekday_count", float),
    "weekend_holiday_count_days": ("weekend_holiday_count", float),
    "active_hours_per_day": ("active_hours_per_day", float),
    "season_visitors_override": ("season_visitors_override", float),
    "respondents_for_weight": ("respondents_for_weight", int),
    "annual_growth_rate_fraction": ("annual_growth_rate", float),
    "mortality_rate_fraction": ("mortality_rate", float),
    "census_year": ("census_year", int),
    "survey_year": ("survey_year", int),
    "total_population_residents": ("total_population", float),
    "stated_min_distance_miles": ("stated_min_distance", float),
    "stated_max_distance_miles": ("stated_max_distance", float),
    "delta_from": ("delta_from", str),
    "delta_cost_override_dollars": ("delta_cost_override", float),
    "published_prefactor": ("published_prefactor", float),
    "published_rate_per_dollar": ("published_rate_per_dollar", float),
    "published_swtp_per_visitor_dollars": ("published_swtp_per_visitor", float),
    "output_dir": ("output_dir", "path"),
    "report_format": ("report_format", str),
}


@dataclass
class RunConfig:
    population_csv: Optional[Path] = None
    survey_csv: Optional[Path] = None
    zip_distance_csv: Optional[Path] = None
    gas_price: float = 4.0
    fuel_economy: float = 20.8
    round_trip_multiplier: float = 1.0
    time_value_multiplier: float = 1.2
    effective_cost_per_mile: Optional[float] = 0.5
    price_increase: float = 1.0
    weekday_count: float = 75
    weekend_holiday_count: float = 29
    active_hours_per_day: float = 10
    season_visitors_override: Optional[float] = None
    respondents_for_weight: Optional[int] = None
    annual_growth_rate: float = 0.025
    mortality_rate: float = 0.013
    census_year: int = 2000
    survey_year: int = 2008
    total_population: float = 18_906_091
    stated_min_distance: float = 10.0
    stated_max_distance: float = 290.0
    delta_from: str = "midpoint"
    delta_cost_override: Optional[float] = None
    published_prefactor: Optional[float] = None
    published_rate_per_dollar: Optional[float] = None
    published_swtp_per_visitor: Optional[float] = None
    output_dir: Optional[Path] = None
    report_format: str = "text"

    @classmethod
    def from_mapping(cls, values: dict, base_dir: Path = Path(".")) -> "RunConfig":
        kwargs = {}
        for key, text in values.items():
            if key not in _RUN_KEYS:
                raise ConfigError(f"unknown config key {key!r}")
            attr, conv = _RUN_KEYS[key]
            if text == "":
                kwargs[attr] = None
                continue
            try:
                if conv == "path":
                    p = Path(text)
                    kwargs[attr] = p if p.is_absolute() else (base_dir / p)
                else:
                    kwargs[attr] = conv(text)
            except ValueError:
                raise ConfigError(f"{key}: cannot parse {text!r}")
        cfg = cls(**kwargs)
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        values, base = load_config(path)
        return cls.from_mapping(values, base)

    def validate(self):
        if self.report_format not in ("text", "structured"):
            raise ConfigError("report_format must be 'text' or 'structured'")
        for name in ("population_csv", "survey_csv", "zip_distance_csv"):
            p = getattr(self, name)
            if p is not None and not Path(p).exists():
                raise ConfigError(f"{name}: file not found: {p}")
        try:
            self.cost_schedule()
            self.calendar()
            self.demographics()
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc

    def cost_schedule(self) -> CostSchedule:
        return CostSchedule(
            gas_price=self.gas_price,
            fuel_economy=self.fuel_economy,
            round_trip_multiplier=self.round_trip_multiplier,
            time_value_multiplier=self.time_value_multiplier,
            effective_cost_per_mile=self.effective_cost_per_mile,
        )

    def calendar(self) -> SeasonCalendar:
        return SeasonCalendar(self.weekday_count, self.weekend_holiday_count, self.active_hours_per_day)

    def demographics(self) -> DemographicParams:
        return DemographicParams(
            annual_growth_rate=self.annual_growth_rate,
            mortality_rate=self.mortality_rate,
            census_year=self.census_year,
            survey_year=self.survey_year,
            total_population=self.total_population,
        )

    def as_dict(self) -> dict:
        return {f.name: (str(v) if isinstance(v, Path) else v)
                for f in fields(self) for v in [getattr(self, f.name)]}


@dataclass
class SimulationConfig:
    """Scenario file for ``simulate``: truth, layout, and replication plan."""

    scenario: SyntheticScenario
    mode: str = "revealed"
    replications: int = 10_000
    workers: int = 1
    group_sizes: Tuple[int, ...] = STATED_GROUP_SIZES
    group_deltas: Tuple[float, ...] = field(default_factory=lambda: (4.7831196,) * 6)

    @property
    def groups(self):
        return tuple(zip(self.group_sizes, self.group_deltas))

    @classmethod
    def from_mapping(cls, values: dict) -> "SimulationConfig":
        v = dict(values)
        known = {
            "true_rate_per_dollar", "true_prefactor", "band_midpoints_miles",
            "band_populations_residents", "effective_cost_per_mile_dollars",
            "price_increase_dollars_per_gallon", "seed", "sampling_fraction",
            "band_half_width_miles", "generator", "mode", "replications", "workers",
            "group_sizes", "group_delta_dollars",
        }
        unknown = set(v) - known
        if unknown:
            raise ConfigError(f"unknown scenario keys {sorted(unknown)}")
        try:
            mids = _floats(v["band_midpoints_miles"]) if "band_midpoints_miles" in v else None
            pops = _floats(v["band_populations_residents"]) if "band_populations_residents" in v else None
            if mids is None and pops is None:
                layout = TABLE1_LAYOUT
            elif mids is None or pops is None or len(mids) != len(pops):
                raise ConfigError("band_midpoints_miles and band_populations_residents must pair up")
            else:
                layout = tuple(zip(mids, pops))
            scenario = SyntheticScenario(
                true_rate_per_dollar=float(v["true_rate_per_dollar"]),
                true_prefactor=float(v.get("true_prefactor", "0.02")),
                band_layout=layout,
                cost_schedule=CostSchedule(
                    effective_cost_per_mile=float(v.get("effective_cost_per_mile_dollars", "0.5"))
                ),
                price_increase=float(v.get("price_increase_dollars_per_gallon", "1.0")),
                seed=int(v.get("seed", "0")),
                sampling_fraction=float(v.get("sampling_fraction", "1.0")),
                band_half_width=float(v.get("band_half_width_miles", "20")),
                generator=v.get("generator", "philox"),
            )
            sizes = tuple(int(x) for x in _floats(v["group_sizes"])) if "group_sizes" in v else STATED_GROUP_SIZES
            if "group_delta_dollars" in v:
                deltas = _floats(v["group_delta_dollars"])
                if len(deltas) == 1:
                    deltas = deltas * len(sizes)
            else:
                deltas = (4.7831196,) * len(sizes)
            if len(deltas) != len(sizes):
                raise ConfigError("group_sizes and group_delta_dollars must pair up")
            cfg = cls(
                scenario=scenario,
                mode=v.get("mode", "revealed"),
                replications=int(v.get("replications", "10000")),
                workers=int(v.get("workers", "1")),
                group_sizes=sizes,
                group_deltas=deltas,
            )
        except KeyError as exc:
            raise ConfigError(f"missing scenario key {exc.args[0]!r}")
        except ValueError as exc:
            raise ConfigError(f"bad scenario value: {exc}")
        if cfg.mode not in ("revealed", "stated", "joint"):
            raise ConfigError("mode must be revealed, stated or joint")
        return cfg

    @classmethod
    def from_file(cls, path) -> "SimulationConfig":
        values, _ = load_config(path)
        return cls.from_mapping(values)
