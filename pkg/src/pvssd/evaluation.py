"""Monte-Carlo evaluation of sample-size decisions.

Experiments draw datasets of a given size from a source (a fixed true
parameter, the prior predictive, or an empirical dataset), compute the
posterior variance for each, and count how often it meets a bound.

Randomness is organised in independent substreams keyed by
``(seed, cell key, chunk index)`` with a fixed chunk size, so results do not
depend on thread count or scheduling. For parametric sources only sufficient
statistics are simulated; empirical sources are resampled observation by
observation.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import InsufficientDataError, InvalidInputError, SSDError
from .ingest import Dataset
from .models import TrueParameter, hyper_from_marginal_moments
from .moments import moment_pair
from .ssd import CriterionSpec, vpvc_sample_size

CHUNK = 4096
DEFAULT_REPLICATES = 1000
_MAX_BLOCK = 2_000_000


@dataclass(frozen=True)
class DataSource:
    kind: str
    truth: Optional[TrueParameter] = None
    dataset: Optional[Dataset] = None
    replace: bool = True

    def __post_init__(self):
        if self.kind == "truth" and self.truth is None:
            raise InvalidInputError("truth source needs a true parameter")
        if self.kind == "empirical" and self.dataset is None:
            raise InvalidInputError("empirical source needs a dataset")
        if self.kind not in ("truth", "empirical", "prior"):
            raise InvalidInputError(f"unknown source kind {self.kind!r}")

    @classmethod
    def from_truth(cls, truth: TrueParameter) -> "DataSource":
        return cls("truth", truth=truth)

    @classmethod
    def empirical(cls, dataset: Dataset, replace: bool = True) -> "DataSource":
        return cls("empirical", dataset=dataset, replace=replace)

    @classmethod
    def prior_predictive(cls) -> "DataSource":
        return cls("prior")

    def describe(self) -> str:
        if self.kind == "truth":
            return f"truth:{self.truth}"
        if self.kind == "empirical":
            return f"empirical:{self.dataset.label}:{'with' if self.replace else 'without'}-replacement"
        return "prior-predictive"


@dataclass(frozen=True)
class EvaluationReport:
    replicates: int
    successes: int
    rate: float
    std_error: float
    seed: int
    n_used: int
    epsilon: Optional[float]
    k: Optional[float]

    @classmethod
    def from_counts(cls, successes, replicates, seed, n, epsilon=None, k=None):
        rate = successes / replicates
        return cls(
            replicates=int(replicates),
            successes=int(successes),
            rate=rate,
            std_error=math.sqrt(rate * (1.0 - rate) / replicates),
            seed=int(seed),
            n_used=int(n),
            epsilon=epsilon,
            k=k,
        )


def substream(seed: int, key: Sequence[int]) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def _u2_chunk(model, source: DataSource, n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    if source.kind == "truth":
        params = model.truth_params(source.truth, size)
        return model.posterior_variance_stats(n, *model.simulate_stats(n, params, rng))
    if source.kind == "prior":
        params = model.sample_prior(rng, size)
        return model.posterior_variance_stats(n, *model.simulate_stats(n, params, rng))

    ds = source.dataset
    if ds.family != model.family:
        raise InvalidInputError(f"dataset family {ds.family!r} does not match model family {model.family!r}")
    if not source.replace and ds.n < n:
        raise InsufficientDataError(f"dataset {ds.label!r} has {ds.n} values, fewer than n = {n}")
    out = np.empty(size)
    rows = max(1, _MAX_BLOCK // n)
    for start in range(0, size, rows):
        m = min(rows, size - start)
        if source.replace:
            idx = rng.integers(0, ds.n, (m, n))
        else:
            idx = np.stack([rng.choice(ds.n, n, replace=False) for _ in range(m)])
        out[start : start + m] = model.posterior_variance_stats(n, *model.batch_stats(ds.values[idx]))
    return out


def posterior_variance_draws(
    model, source: DataSource, n: int, replicates: int, seed: int, key: Sequence[int] = (0,)
) -> np.ndarray:
    """``replicates`` posterior variances from datasets of size ``n``."""
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    if replicates < 1:
        raise InvalidInputError(f"replicates must be >= 1, got {replicates}")
    out = np.empty(replicates)
    for j, start in enumerate(range(0, replicates, CHUNK)):
        size = min(CHUNK, replicates - start)
        out[start : start + size] = _u2_chunk(model, source, n, size, substream(seed, (*key, j)))
    return out


def success_rate(
    model,
    spec: CriterionSpec,
    source: DataSource,
    n: int,
    replicates: int = DEFAULT_REPLICATES,
    seed: int = 0,
    key: Sequence[int] = (0,),
) -> EvaluationReport:
    """Fraction of datasets of size ``n`` with posterior variance strictly below eps^2."""
    u2 = posterior_variance_draws(model, source, n, replicates, seed, key)
    hits = int(np.count_nonzero(u2 < spec.epsilon**2))
    return EvaluationReport.from_counts(hits, replicates, seed, n, spec.epsilon, spec.k)


def coverage_probability(
    model, n: int, k: float, replicates: int = DEFAULT_REPLICATES, seed: int = 0, key: Sequence[int] = (0,)
) -> EvaluationReport:
    """Prior-predictive probability that ``u_n^2 <= mean_n + k*sd_n``."""
    bound = moment_pair(model, n).lhs(k)
    u2 = posterior_variance_draws(model, DataSource.prior_predictive(), n, replicates, seed, key)
    hits = int(np.count_nonzero(u2 <= bound))
    return EvaluationReport.from_counts(hits, replicates, seed, n, None, k)


def exceedance_curve(
    model,
    truth: TrueParameter,
    k_values: Sequence[float],
    n_values: Sequence[int],
    replicates: int = DEFAULT_REPLICATES,
    seed: int = 0,
    common_random_numbers: bool = True,
) -> list[dict]:
    """``P(u_n^2 > mean_n + k*sd_n)`` under the true sampling law, one row
    per (n, k). With common random numbers every k at a given n is
    evaluated on the same draws."""
    source = DataSource.from_truth(truth)
    rows = []
    for i, n in enumerate(n_values):
        mp = moment_pair(model, n)
        shared = posterior_variance_draws(model, source, n, replicates, seed, (i,)) if common_random_numbers else None
        for j, k in enumerate(k_values):
            u2 = shared if shared is not None else posterior_variance_draws(model, source, n, replicates, seed, (i, j))
            bound = mp.lhs(k)
            p = float(np.count_nonzero(u2 > bound)) / replicates
            rows.append(
                {
                    "n": int(n),
                    "k": float(k),
                    "bound": bound,
                    "exceedance": p,
                    "std_error": math.sqrt(p * (1.0 - p) / replicates),
                    "replicates": replicates,
                    "seed": seed,
                }
            )
    return rows


def coefficient_of_variation_true(
    model, truth: TrueParameter, n: int, replicates: int, seed: int = 0, key: Sequence[int] = (0,)
) -> float:
    """Monte-Carlo sd/mean of the posterior variance under the true sampling law."""
    u2 = posterior_variance_draws(model, DataSource.from_truth(truth), n, replicates, seed, key)
    return float(u2.std(ddof=1) / u2.mean())


# ---------------------------------------------------------------------------
# hyperparameter grids
# ---------------------------------------------------------------------------

AXIS_NAMES = {
    "poisson": ("mean", "sd"),
    "bernoulli": ("mean", "sd"),
    "normal": ("mean_s2", "sd_s2", "sd_mu", "mean_mu"),
}


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    steps: int

    def __post_init__(self):
        if self.steps < 1:
            raise InvalidInputError(f"axis {self.name!r}: steps must be >= 1")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise InvalidInputError(f"axis {self.name!r}: bounds must be finite")

    @property
    def values(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([self.lo])
        return np.linspace(self.lo, self.hi, self.steps)


@dataclass(frozen=True)
class GridCell:
    index: int
    coords: dict
    model: object = None
    error: Optional[str] = None


@dataclass
class GridSweep:
    """A rectangle of prior hyperparameters in marginal-moment form.

    Cells are ordered axis1-major. ``outputs`` holds one row dict per cell
    once an experiment has been run.
    """

    family: str
    axis1: Axis
    axis2: Axis
    fixed: dict = field(default_factory=dict)
    cells: list = field(default_factory=list)
    outputs: list = field(default_factory=list)

    def __post_init__(self):
        names = AXIS_NAMES.get(self.family)
        if names is None:
            raise InvalidInputError(f"unknown family {self.family!r}")
        for ax in (self.axis1, self.axis2):
            if ax.name not in names:
                raise InvalidInputError(f"axis {ax.name!r} is not a marginal moment of {self.family} (choose from {names})")
        if self.axis1.name == self.axis2.name:
            raise InvalidInputError("grid axes must differ")
        if not self.cells:
            self.cells = self._build()

    def _build(self) -> list:
        cells = []
        for v1 in self.axis1.values:
            for v2 in self.axis2.values:
                coords = {**self.fixed, self.axis1.name: float(v1), self.axis2.name: float(v2)}
                try:
                    model = hyper_from_marginal_moments(self.family, **coords)
                    cells.append(GridCell(len(cells), coords, model))
                except (SSDError, TypeError) as exc:
                    cells.append(GridCell(len(cells), coords, None, str(exc)))
        return cells


def _map(fn: Callable, items: Sequence, threads: int) -> list:
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _base_row(grid: GridSweep, cell: GridCell) -> dict:
    return {grid.axis1.name: cell.coords[grid.axis1.name], grid.axis2.name: cell.coords[grid.axis2.name]}


def sweep_sample_sizes(grid: GridSweep, spec: CriterionSpec, threads: int = 1) -> list[dict]:
    def run(cell: GridCell) -> dict:
        row = _base_row(grid, cell)
        if cell.model is None:
            return {**row, "n": None, "reason": cell.error}
        try:
            return {**row, "n": vpvc_sample_size(cell.model, spec).n, "reason": ""}
        except SSDError as exc:
            return {**row, "n": None, "reason": str(exc)}

    grid.outputs = _map(run, grid.cells, threads)
    return grid.outputs


def success_grid(
    grid: GridSweep,
    spec: CriterionSpec,
    source: DataSource,
    replicates: int = DEFAULT_REPLICATES,
    seed: int = 0,
    threads: int = 1,
    key_prefix: Sequence[int] = (),
) -> list[dict]:
    """Solve the criterion in every cell, then evaluate its success rate."""

    def run(cell: GridCell) -> dict:
        row = _base_row(grid, cell)
        if cell.model is None:
            return {**row, "n": None, "rate": None, "std_error": None, "reason": cell.error}
        try:
            n = vpvc_sample_size(cell.model, spec).n
            rep = success_rate(cell.model, spec, source, n, replicates, seed, (*key_prefix, cell.index))
        except SSDError as exc:
            return {**row, "n": None, "rate": None, "std_error": None, "reason": str(exc)}
        return {**row, "n": n, "rate": rep.rate, "std_error": rep.std_error, "replicates": replicates, "seed": seed, "reason": ""}

    grid.outputs = _map(run, grid.cells, threads)
    return grid.outputs


def coverage_grid(
    grid: GridSweep,
    spec: CriterionSpec,
    replicates: int = DEFAULT_REPLICATES,
    seed: int = 0,
    threads: int = 1,
) -> list[dict]:
    """Prior-predictive coverage of ``mean + k*sd`` at the VPVC size of each cell."""

    def run(cell: GridCell) -> dict:
        row = _base_row(grid, cell)
        if cell.model is None:
            return {**row, "n": None, "rate": None, "std_error": None, "reason": cell.error}
        try:
            n = vpvc_sample_size(cell.model, spec).n
        except SSDError as exc:
            return {**row, "n": None, "rate": None, "std_error": None, "reason": str(exc)}
        rep = coverage_probability(cell.model, n, spec.k, replicates, seed, (cell.index,))
        return {**row, "n": n, "rate": rep.rate, "std_error": rep.std_error, "replicates": replicates, "seed": seed, "reason": ""}

    grid.outputs = _map(run, grid.cells, threads)
    return grid.outputs


def epsilon_sweep(
    grid: GridSweep,
    source: DataSource,
    k: float,
    epsilons: Sequence[float],
    replicates: int = DEFAULT_REPLICATES,
    seed: int = 0,
    threads: int = 1,
) -> dict[float, list[dict]]:
    """Success-rate grids for a decreasing sequence of epsilon values."""
    if any(b >= a for a, b in zip(epsilons, epsilons[1:])):
        raise InvalidInputError("epsilon list must be strictly decreasing")
    out = {}
    for i, eps in enumerate(epsilons):
        rows = success_grid(grid, CriterionSpec(eps, k), source, replicates, seed, threads, key_prefix=(i,))
        out[eps] = [{**r, "epsilon": eps} for r in rows]
    return out


def transition_fraction(rows: Sequence[dict], lo: float = 0.2, hi: float = 0.8) -> float:
    """Share of evaluated cells whose success rate lies in ``[lo, hi]``."""
    rates = [r["rate"] for r in rows if r.get("rate") is not None]
    if not rates:
        return float("nan")
    return sum(lo <= r <= hi for r in rates) / len(rates)
