"""Monte-Carlo data from a known exponential model.

Each replication draws from its own generator, seeded from
``(seed, replication, stream)``, so results do not depend on execution
order or on how replications are split across workers.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .errors import (
    DegenerateGroupError,
    DomainError,
    InsufficientDataError,
    ScenarioError,
    TravelWTPError,
    UnboundedWTPError,
)
from .estimation import AcceptanceGroup, fit_exponential, stated_rate_from_groups, to_dollar_scale
from .ingestion import CostSchedule, DistanceBandRecord, band_observations
from .model_core import per_capita_rwtp

__all__ = [
    "SyntheticScenario",
    "GENERATORS",
    "make_generator",
    "simulate_visits",
    "simulate_acceptances",
    "run_revealed",
    "run_stated",
    "run_joint",
    "summarize",
    "MonteCarloSummary",
    "write_replications_csv",
    "TABLE1_LAYOUT",
    "STATED_GROUP_SIZES",
]

# San Marcos distance-band midpoints (miles) and 2000 census populations.
TABLE1_LAYOUT = (
    (30.0, 3_435_123),
    (110.0, 1_594_679),
    (150.0, 4_095_308),
    (190.0, 3_096_034),
    (230.0, 4_918_126),
    (270.0, 1_766_821),
)
STATED_GROUP_SIZES = (121, 14, 14, 9, 5, 4)

VISITS_STREAM = 0
ACCEPT_STREAM = 1

GENERATORS = {
    "philox": np.random.Philox,
    "pcg64": np.random.PCG64,
}


def make_generator(seed: int, replication: int, stream: int, kind: str = "philox"):
    try:
        bitgen = GENERATORS[kind]
    except KeyError:
        raise ScenarioError(f"unknown generator {kind!r}; choose from {sorted(GENERATORS)}")
    return np.random.Generator(bitgen(np.random.SeedSequence([seed, replication, stream])))


def describe_generator(kind: str) -> str:
    return f"numpy.random.{GENERATORS[kind].__name__}(SeedSequence([seed, replication, stream]))"


@dataclass(frozen=True)
class SyntheticScenario:
    """Ground truth for a simulation run.

    ``sampling_fraction`` is the chance that a visiting resident appears as
    a respondent; ingestion then weights each respondent by its inverse.
    """

    true_rate_per_dollar: float
    true_prefactor: float
    band_layout: Tuple[Tuple[float, float], ...] = TABLE1_LAYOUT
    cost_schedule: CostSchedule = field(default_factory=lambda: CostSchedule(effective_cost_per_mile=0.5))
    price_increase: float = 1.0
    seed: int = 0
    sampling_fraction: float = 1.0
    band_half_width: float = 20.0
    generator: str = "philox"

    def __post_init__(self):
        if not (self.true_rate_per_dollar > 0 and self.true_prefactor > 0):
            raise ScenarioError("true rate and prefactor must be positive")
        if not self.band_layout:
            raise ScenarioError("band layout is empty")
        if not 0 < self.sampling_fraction <= 1:
            raise ScenarioError("sampling_fraction must lie in (0, 1]")
        if self.generator not in GENERATORS:
            raise ScenarioError(f"unknown generator {self.generator!r}")
        object.__setattr__(self, "band_layout", tuple((float(m), float(p)) for m, p in self.band_layout))

    @property
    def true_rate_per_mile(self) -> float:
        return self.true_rate_per_dollar * self.cost_schedule.cost_per_mile

    @property
    def true_per_capita_rwtp(self) -> float:
        return self.true_prefactor / self.true_rate_per_dollar

    def band_probabilities(self) -> np.ndarray:
        mids = np.array([m for m, _ in self.band_layout])
        return self.true_prefactor * np.exp(-self.true_rate_per_mile * mids)


def simulate_visits(scenario: SyntheticScenario, replication: int = 0) -> List[DistanceBandRecord]:
    """Draw respondent counts per band, ``Binomial(population, p_j * fraction)``."""
    probs = scenario.band_probabilities()
    if np.any(probs >= 1):
        raise ScenarioError("visit probability reaches 1 at some band")
    rng = make_generator(scenario.seed, replication, VISITS_STREAM, scenario.generator)
    pops = np.array([int(round(p)) for _, p in scenario.band_layout], dtype=np.int64)
    counts = rng.binomial(pops, probs * scenario.sampling_fraction)
    h = scenario.band_half_width
    return [
        DistanceBandRecord(mid - h, mid + h, float(pop), int(c))
        for (mid, _), pop, c in zip(scenario.band_layout, pops, counts)
    ]


def simulate_acceptances(
    scenario: SyntheticScenario,
    groups: Sequence[Tuple[int, float]],
    replication: int = 0,
) -> List[AcceptanceGroup]:
    """Draw how many in each ``(n_i, delta_i)`` group accept the extra cost."""
    n = np.array([g[0] for g in groups], dtype=np.int64)
    delta = np.array([g[1] for g in groups], dtype=float)
    if np.any(delta <= 0):
        raise DomainError("extra costs must be positive")
    p = np.exp(-scenario.true_rate_per_dollar * delta)
    rng = make_generator(scenario.seed, replication, ACCEPT_STREAM, scenario.generator)
    k = rng.binomial(n, p)
    return [AcceptanceGroup(int(ni), int(ki), float(di)) for ni, ki, di in zip(n, k, delta)]


# --------------------------------------------------------------------------
# replication drivers


def _revealed_one(scenario, replication):
    row = {"replication": replication, "status": "ok"}
    try:
        records = simulate_visits(scenario, replication)
        obs = band_observations(records, 1.0 / scenario.sampling_fraction)
        model, diag = fit_exponential(obs)
        model = to_dollar_scale(model, scenario.cost_schedule)
    except InsufficientDataError:
        row["status"] = "insufficient_bands"
        return row
    except TravelWTPError as exc:
        row["status"] = type(exc).__name__
        return row
    row.update(
        prefactor_a=model.prefactor_a,
        rate_per_mile=model.rate_per_mile,
        rate_per_dollar=model.rate_per_dollar,
        per_capita_rwtp=per_capita_rwtp(model),
        r_squared=diag.r_squared,
    )
    return row


def _stated_one(scenario, groups, replication):
    row = {"replication": replication, "status": "ok"}
    try:
        est = stated_rate_from_groups(simulate_acceptances(scenario, groups, replication))
    except DegenerateGroupError:
        row["status"] = "zero_acceptors"
        return row
    except UnboundedWTPError:
        row["status"] = "all_accept"
        return row
    row.update(
        geometric_mean_acceptance=est.geometric_mean_acceptance,
        mean_delta=est.mean_delta,
        stated_mean_wtp=est.stated_mean_wtp,
        stated_rate_per_dollar=est.rate_per_dollar,
    )
    return row


def _chunk(task, args, indices):
    return [task(*args, i) for i in indices]


def _drive(task, args, n_replications, workers):
    if n_replications < 1:
        raise ScenarioError("need at least one replication")
    indices = list(range(n_replications))
    if workers <= 1:
        rows = _chunk(task, args, indices)
    else:
        chunks = [indices[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_chunk, [task] * workers, [args] * workers, chunks)
            rows = [r for part in parts for r in part]
    return sorted(rows, key=lambda r: r["replication"])


def run_revealed(scenario: SyntheticScenario, n_replications: int, workers: int = 1) -> List[dict]:
    """Simulate, weight, fit and rescale once per replication."""
    return _drive(_revealed_one, (scenario,), n_replications, workers)


def run_stated(scenario, groups, n_replications, workers=1) -> List[dict]:
    """Simulate acceptances and invert the geometric-mean identity per replication.

    Replications where a group has no acceptors, or everyone accepts, are
    kept as rows with a non-``ok`` status and no estimate.
    """
    return _drive(_stated_one, (scenario, tuple(groups)), n_replications, workers)


def _joint_one(scenario, groups, replication):
    from .valuation import reconcile

    rev = _revealed_one(scenario, replication)
    st = _stated_one(scenario, groups, replication)
    row = {"replication": replication, "status": rev["status"] if rev["status"] != "ok" else st["status"]}
    if row["status"] == "ok":
        # mean expenditure on both sides over a unit horizon
        revealed_mean = 1.0 / rev["rate_per_dollar"]
        rec = reconcile(revealed_mean, st["stated_mean_wtp"], 1.0)
        row.update(
            revealed_mean_wtp=revealed_mean,
            stated_mean_wtp=st["stated_mean_wtp"],
            ratio_swtp_rwtp=rec.ratio_swtp_rwtp,
        )
    return row


def run_joint(scenario, groups, n_replications, workers=1) -> List[dict]:
    """Revealed and stated estimates from the same truth, and their ratio."""
    return _drive(_joint_one, (scenario, tuple(groups)), n_replications, workers)


@dataclass(frozen=True)
class MonteCarloSummary:
    quantity: str
    truth: float
    n_used: int
    n_excluded: int
    mean: float
    sd: float
    standard_error: float

    @property
    def bias(self) -> float:
        return self.mean - self.truth

    @property
    def relative_bias(self) -> float:
        return self.bias / self.truth

    @property
    def z_score(self) -> float:
        return self.bias / self.standard_error if self.standard_error > 0 else math.inf


def summarize(rows: Sequence[dict], quantity: str, truth: float) -> MonteCarloSummary:
    values = np.array([r[quantity] for r in rows if r["status"] == "ok"], dtype=float)
    if values.size < 2:
        raise InsufficientDataError(f"fewer than two usable replications for {quantity}")
    sd = float(values.std(ddof=1))
    return MonteCarloSummary(
        quantity=quantity,
        truth=truth,
        n_used=int(values.size),
        n_excluded=len(rows) - int(values.size),
        mean=float(values.mean()),
        sd=sd,
        standard_error=sd / math.sqrt(values.size),
    )


def write_replications_csv(rows: Sequence[dict], path) -> None:
    """One row per replication; floats written with ``repr`` for exact round trips."""
    columns = []
    for r in rows:
        for k in r:
            if k not in columns:
                columns.append(k)
    with open(path, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
