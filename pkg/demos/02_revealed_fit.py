"""
Revealed WTP from distance bands
================================

Respondent counts per distance band, weighted up to season visitors and
divided by band population, give visit probabilities.  A log-linear fit
against distance gives the decay rate.
"""

# %%
from travelwtp import (
    CostSchedule,
    DemographicParams,
    band_observations,
    fit_exponential,
    per_capita_rwtp,
    read_population_csv,
    respondent_weight,
    revealed_total,
    to_dollar_scale,
)
from travelwtp.config import DATA_DIR

bands = read_population_csv(DATA_DIR / "sanmarcos_table1.csv")
weight = respondent_weight(78_160, 172)
obs = band_observations(bands, weight)
for o in obs:
    print(f"{o.distance_midpoint:5.0f} mi  p = {o.visit_probability:.6f}")

# %%
model, diag = fit_exponential(obs)
print(f"rate per mile {model.rate_per_mile:.6f}, prefactor {model.prefactor_a:.6f}")
print(f"R^2 {diag.r_squared:.5f}, F {diag.f_statistic:.2f}, p {diag.p_value:.5f}")

# %%
# 50 cents per mile of one-way distance puts the rate on a dollar scale.
model = to_dollar_scale(model, CostSchedule(effective_cost_per_mile=0.5))
print("rate per dollar", model.rate_per_dollar)
print("per-capita RWTP", per_capita_rwtp(model))
total, with_time = revealed_total(model, DemographicParams(), time_multiplier=1.2)
print(f"RWTP {total / 1e6:.3f} $M, with travel time {with_time / 1e6:.3f} $M")
