"""Stage composition shared by the command line and the demos.

Every stage returns a plain ``dict`` report so it can be dumped to JSON
unchanged.
"""

from __future__ import annotations

import math
from typing import Optional

from .config import DATA_DIR, RunConfig
from .errors import ConfigError
from .estimation import fit_exponential, stated_rate_from_groups, to_dollar_scale
from .ingestion import (
    acceptance_groups,
    band_observations,
    hourly_visitor_rates,
    read_population_csv,
    read_survey_csv,
    read_zip_distances,
    respondent_weight,
)
from .model_core import ExponentialDemand, per_capita_rwtp
from .valuation import (
    ValuationReport,
    growth_factor,
    reconcile,
    revealed_total,
    stated_total,
    turnover_years,
)

__all__ = [
    "SANMARCOS_CONFIG",
    "load_survey",
    "season_visitors",
    "fit_stage",
    "rwtp_stage",
    "swtp_stage",
    "reconcile_stage",
    "replicate_paper",
    "HEADLINES",
]

SANMARCOS_CONFIG = DATA_DIR / "sanmarcos.cfg"


def load_survey(cfg: RunConfig):
    if cfg.survey_csv is None:
        return None
    zips = read_zip_distances(cfg.zip_distance_csv) if cfg.zip_distance_csv else None
    return read_survey_csv(cfg.survey_csv, zips)


def season_visitors(cfg: RunConfig, responses=None) -> dict:
    """Season visitor total: the documented counting procedure and the value in use."""
    out = {}
    if responses:
        weekday, weekend, stay = hourly_visitor_rates(responses)
        cal = cfg.calendar()
        out.update(
            weekday_rate_per_hour=weekday,
            weekend_rate_per_hour=weekend,
            mean_stay_hours=stay,
            procedure_season_visitors=cal.active_hours_per_day
            * (cal.weekday_count * weekday + cal.weekend_holiday_count * weekend),
        )
    if cfg.season_visitors_override is not None:
        out["season_visitors"] = cfg.season_visitors_override
        out["season_visitors_source"] = "override"
    elif "procedure_season_visitors" in out:
        out["season_visitors"] = out["procedure_season_visitors"]
        out["season_visitors_source"] = "counting procedure"
    else:
        raise ConfigError("need survey_csv or season_visitors_override for the visitor total")
    return out


def _weight_respondents(cfg, responses):
    if cfg.respondents_for_weight is not None:
        return cfg.respondents_for_weight
    if responses:
        return sum(r.at_rvf_site for r in responses)
    raise ConfigError("need respondents_for_weight or a survey file")


def fit_stage(cfg: RunConfig, responses=None) -> dict:
    if cfg.population_csv is None:
        raise ConfigError("population_csv is required")
    if responses is None:
        responses = load_survey(cfg)
    bands = read_population_csv(cfg.population_csv)
    visitors = season_visitors(cfg, responses)
    n_resp = _weight_respondents(cfg, responses)
    weight = respondent_weight(visitors["season_visitors"], n_resp)
    obs = band_observations(bands, weight)
    model, diag = fit_exponential(obs)
    model = to_dollar_scale(model, cfg.cost_schedule())
    return {
        "visitors": visitors,
        "respondents_for_weight": n_resp,
        "respondent_weight": weight,
        "observations": [
            {"distance_midpoint_miles": o.distance_midpoint, "visit_probability": o.visit_probability}
            for o in obs
        ],
        "excluded_bands": [b.label for b in bands if b.respondents == 0],
        "model": {
            "prefactor_a": model.prefactor_a,
            "rate_per_mile": model.rate_per_mile,
            "rate_per_dollar": model.rate_per_dollar,
            "cost_per_mile_dollars": cfg.cost_schedule().cost_per_mile,
            "mean_expenditure_dollars": 1.0 / model.rate_per_dollar,
        },
        "diagnostics": {
            "r_squared": diag.r_squared,
            "f_statistic": diag.f_statistic,
            "p_value": diag.p_value,
            "n_points": diag.n_points,
        },
    }


def _model_from(fit) -> ExponentialDemand:
    m = fit["model"]
    return ExponentialDemand(m["prefactor_a"], m["rate_per_mile"], m["rate_per_dollar"])


def rwtp_stage(cfg: RunConfig, fit: Optional[dict] = None) -> dict:
    fit = fit if fit is not None else fit_stage(cfg)
    demo = cfg.demographics()
    model = _model_from(fit)
    total, with_time = revealed_total(model, demo, cfg.time_value_multiplier)
    out = {
        "fit": fit,
        "fitted": {
            "per_capita_rwtp": per_capita_rwtp(model),
            "rwtp_total": total,
            "rwtp_total_with_time": with_time,
        },
        "total_population": demo.total_population,
        "time_value_multiplier": cfg.time_value_multiplier,
        "growth_factor": growth_factor(demo),
    }
    if cfg.published_prefactor is not None and cfg.published_rate_per_dollar is not None:
        pub = ExponentialDemand(cfg.published_prefactor, rate_per_dollar=cfg.published_rate_per_dollar)
        p_total, p_with_time = revealed_total(pub, demo, cfg.time_value_multiplier)
        out["published_constants"] = {
            "prefactor_a": pub.prefactor_a,
            "rate_per_dollar": pub.rate_per_dollar,
            "per_capita_rwtp": per_capita_rwtp(pub),
            "rwtp_total": p_total,
            "rwtp_total_with_time": p_with_time,
        }
    return out


def swtp_stage(cfg: RunConfig, responses=None, visitors: Optional[dict] = None) -> dict:
    if responses is None:
        responses = load_survey(cfg)
    if not responses:
        raise ConfigError("survey_csv is required for the stated side")
    if cfg.population_csv is None:
        raise ConfigError("population_csv is required to define the distance bands")
    bands = read_population_csv(cfg.population_csv)
    groups = acceptance_groups(
        responses, bands, cfg.price_increase, cfg.cost_schedule(),
        min_distance=cfg.stated_min_distance, max_distance=cfg.stated_max_distance,
        delta_from=cfg.delta_from,
    )
    est = stated_rate_from_groups(groups, mean_delta=cfg.delta_cost_override)
    groups_delta = sum(g.n_respondents * g.delta_cost for g in groups) / est.n_total
    visitors = visitors if visitors is not None else season_visitors(cfg, responses)
    annual = stated_total(est.stated_mean_wtp, visitors["season_visitors"])
    out = {
        "groups": [
            {"n_respondents": g.n_respondents, "n_accepting": g.n_accepting,
             "acceptance_probability": g.acceptance_probability, "delta_cost": g.delta_cost}
            for g in groups
        ],
        "n_total": est.n_total,
        "n_accepting_total": sum(g.n_accepting for g in groups),
        "geometric_mean_acceptance": est.geometric_mean_acceptance,
        "groups_mean_delta": groups_delta,
        "mean_delta": est.mean_delta,
        "mean_delta_source": "override" if cfg.delta_cost_override is not None else "groups",
        "stated_mean_wtp": est.stated_mean_wtp,
        "stated_rate_per_dollar": est.rate_per_dollar,
        "season_visitors": visitors["season_visitors"],
        "swtp_annual": annual,
    }
    if cfg.published_swtp_per_visitor is not None:
        out["published_swtp_per_visitor"] = cfg.published_swtp_per_visitor
        out["published_swtp_annual"] = stated_total(cfg.published_swtp_per_visitor, visitors["season_visitors"])
    return out


def reconcile_stage(cfg: RunConfig) -> dict:
    """The whole chain: fit, revealed totals, stated totals, reconciliation."""
    responses = load_survey(cfg)
    fit = fit_stage(cfg, responses)
    rwtp = rwtp_stage(cfg, fit)
    swtp = swtp_stage(cfg, responses, fit["visitors"])
    demo = cfg.demographics()
    report = ValuationReport.build(
        _model_from(fit), demo, swtp["stated_mean_wtp"], swtp["season_visitors"],
        time_multiplier=cfg.time_value_multiplier,
        metadata={"chain": "fitted revealed model and computed stated mean"},
    )
    out = {"rwtp": rwtp, "swtp": swtp, "valuation": report.to_dict()}
    pub = rwtp.get("published_constants")
    if pub is not None and "published_swtp_annual" in swtp:
        rec = reconcile(pub["rwtp_total_with_time"], swtp["published_swtp_annual"], turnover_years(demo))
        out["published_inputs_reconciliation"] = {
            "rwtp_total_with_time": pub["rwtp_total_with_time"],
            "swtp_annual": swtp["published_swtp_annual"],
            "turnover_years": turnover_years(demo),
            "swtp_over_turnover": rec.swtp_over_turnover,
            "ratio_swtp_rwtp": rec.ratio_swtp_rwtp,
            "sd_fraction": rec.sd_fraction,
            "diff_in_sd_units": rec.diff_in_sd_units,
        }
    return out


# (name, path into the replicate report, published value, tolerance, relative?)
HEADLINES = (
    ("weekday visitors per hour", ("rwtp", "fit", "visitors", "weekday_rate_per_hour"), 29.3, 0.1, False),
    ("weekend visitors per hour", ("rwtp", "fit", "visitors", "weekend_rate_per_hour"), 93.0, 0.2, False),
    ("counting-procedure season visitors", ("rwtp", "fit", "visitors", "procedure_season_visitors"), 48945.0, 10.0, False),
    ("visitors per respondent", ("rwtp", "fit", "respondent_weight"), 454.4186, 1e-4, False),
    ("fit r_squared", ("rwtp", "fit", "diagnostics", "r_squared"), 0.87734, 0.002, False),
    ("fit F-test p-value", ("rwtp", "fit", "diagnostics", "p_value"), 0.00589, 0.0005, False),
    ("rate per mile", ("rwtp", "fit", "model", "rate_per_mile"), 0.013565, 2e-4, False),
    ("prefactor", ("rwtp", "fit", "model", "prefactor_a"), 0.0211, 3e-4, False),
    ("rate per dollar", ("rwtp", "fit", "model", "rate_per_dollar"), 0.0271286, 3e-4, False),
    ("per-capita RWTP (published A, rate)", ("rwtp", "published_constants", "per_capita_rwtp"), 0.77946254901, 1e-9, False),
    ("RWTP total (published A, rate)", ("rwtp", "published_constants", "rwtp_total"), 14.737e6, 0.01e6, False),
    ("RWTP total with time (published A, rate)", ("rwtp", "published_constants", "rwtp_total_with_time"), 17.684e6, 0.01e6, False),
    ("geometric mean acceptance", ("swtp", "geometric_mean_acceptance"), 0.6673615, 1e-6, False),
    ("SWTP per visitor (computed)", ("swtp", "stated_mean_wtp"), 11.83, 0.01, False),
    ("SWTP per visitor vs published 11.9729166", ("swtp", "stated_mean_wtp"), 11.9729166, 0.02, True),
    ("annual SWTP vs published 935,803.16", ("swtp", "swtp_annual"), 935803.16, 0.02, True),
    ("growth factor census to survey", ("rwtp", "growth_factor"), 1.21840, 1e-4, False),
    ("turnover years", ("valuation", "values", "turnover_years"), 18.58, 0.05, False),
    ("SWTP over turnover", ("valuation", "values", "swtp_over_turnover"), 17.41e6, 0.35e6, False),
    ("ratio SWTP / RWTP", ("valuation", "values", "ratio_swtp_rwtp"), 0.985, 0.02, False),
    ("sd fraction (dispersion heuristic)", ("valuation", "values", "sd_fraction"), 0.236, 0.003, False),
    ("difference in sd units", ("valuation", "values", "diff_in_sd_units"), 0.065, 0.01, False),
)


def _lookup(report, path):
    node = report
    for key in path:
        node = node[key]
    return node


def headline_checks(report: dict) -> list:
    checks = []
    for name, path, target, tol, relative in HEADLINES:
        value = _lookup(report, path)
        err = abs(value - target) / abs(target) if relative else abs(value - target)
        checks.append({
            "name": name,
            "value": value,
            "target": target,
            "tolerance": tol,
            "tolerance_kind": "relative" if relative else "absolute",
            "within_tolerance": bool(err <= tol and math.isfinite(value)),
        })
    return checks


def replicate_paper(config_path=SANMARCOS_CONFIG) -> dict:
    """Run the San Marcos study end to end from the shipped fixtures."""
    cfg = RunConfig.from_file(config_path)
    report = reconcile_stage(cfg)
    report["headlines"] = headline_checks(report)
    return report
