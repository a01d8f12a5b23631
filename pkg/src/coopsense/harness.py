"""Monte-Carlo sweeps over the simulation setting, CSV output and plots.

Seed discipline: run ``r`` of every grid point draws its scenario from seed
``base_seed + r``; the greedy and random baselines of that run use the
streams ``[base_seed + r, 1]`` and ``[base_seed + r, 2]``. Per-channel
capacities and SU budgets are drawn once per grid point and held fixed
across its runs. Their streams, ``[base_seed, FIXED_STREAM, 0]`` for gamma
and ``[base_seed, FIXED_STREAM, 1]`` for budgets, are shared by all grid
points, so neighbouring points differ only in the swept parameter: a vary-N
point adds SUs to the previous point's network rather than redrawing it.
"""

from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .algorithms import compute_mu, greedy_baseline, mwm_assign, random_baseline
from .scenarios import GenConfig, draw_budgets, draw_gamma, generate

log = logging.getLogger(__name__)

KINDS = ("vary-N", "vary-lmax", "vary-gamma-range")
FIXED_STREAM = 0xF1
CSV_COLUMNS = (
    "swept_value",
    "mwm_mean",
    "mwm_std",
    "greedy_mean",
    "greedy_std",
    "random_mean",
    "random_std",
    "upper_bound",
    "mu_mean",
)

DEFAULT_GRIDS = {
    "vary-N": (4, 8, 12, 16, 20),
    "vary-lmax": (1, 2, 3, 4, 5),
    # upper end u of gamma ~ U[1, u]
    "vary-gamma-range": (1, 2, 3, 4, 5),
}


class SweepError(RuntimeError):
    """An evaluation failed; the message names the grid point and run."""


@dataclass(frozen=True)
class SweepSpec:
    kind: str
    grid: tuple = ()
    runs: int = 100
    base_seed: int = 0
    config: GenConfig = field(default_factory=GenConfig)
    workers: int = 1

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown sweep kind {self.kind!r}; expected one of {KINDS}")
        grid = tuple(self.grid) or DEFAULT_GRIDS[self.kind]
        object.__setattr__(self, "grid", grid)
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        for value in grid:
            self.config_for(value)  # validates every grid point up front

    def config_for(self, value) -> GenConfig:
        if self.kind == "vary-N":
            return self.config.replace(n=int(value))
        if self.kind == "vary-lmax":
            return self.config.replace(l_max=int(value))
        return self.config.replace(gamma_range=(self.config.gamma_range[0], float(value)))

    def label(self, value) -> str:
        if self.kind == "vary-gamma-range":
            lo = self.config.gamma_range[0]
            return f"[{lo:g},{float(value):g}]"
        return str(int(value))

    @property
    def axis_name(self) -> str:
        return {"vary-N": "N", "vary-lmax": "l_max", "vary-gamma-range": "gamma range"}[self.kind]


def default_spec(kind: str, **overrides) -> SweepSpec:
    """The fixed parameters of each published sweep: M=20, l_max=3 or N=8, gamma ~ U[1,3]."""
    config = GenConfig(m=20, n=8, l_max=3, gamma_range=(1.0, 3.0))
    return SweepSpec(kind=kind, config=overrides.pop("config", config), **overrides)


@dataclass(frozen=True)
class SweepRow:
    swept_value: str
    mwm_mean: float
    mwm_std: float
    greedy_mean: float
    greedy_std: float
    random_mean: float
    random_std: float
    upper_bound: float
    mu_mean: float
    guarantee_mean: float  # mean of (mu / 2) * upper bound

    def csv_fields(self) -> list[str]:
        return [self.swept_value] + [repr(float(getattr(self, c))) for c in CSV_COLUMNS[1:]]


def evaluate_run(config: GenConfig, gamma: np.ndarray, budgets: np.ndarray, seed: int) -> tuple:
    """One simulation run: (mwm, greedy, random, upper bound, mu)."""
    scenario = generate(config.replace(seed=seed), gamma=gamma, budgets=budgets)
    mwm = mwm_assign(scenario).value
    greedy = greedy_baseline(scenario, np.random.default_rng([seed, 1])).value
    rand = random_baseline(scenario, np.random.default_rng([seed, 2])).value
    return mwm, greedy, rand, scenario.upper_bound(), compute_mu(scenario).mu


def _evaluate_point(args: tuple) -> np.ndarray:
    config, gamma, budgets, seeds, label = args
    out = []
    for seed in seeds:
        try:
            out.append(evaluate_run(config, gamma, budgets, seed))
        except Exception as exc:
            raise SweepError(f"grid point {label}, scenario seed {seed}: {exc}") from exc
    return np.array(out)


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    jobs = []
    for value in spec.grid:
        config = spec.config_for(value)
        gamma = draw_gamma(config, np.random.default_rng([spec.base_seed, FIXED_STREAM, 0]))
        budgets = draw_budgets(config, np.random.default_rng([spec.base_seed, FIXED_STREAM, 1]))
        seeds = [spec.base_seed + r for r in range(spec.runs)]
        jobs.append((config, gamma, budgets, seeds, spec.label(value)))

    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            results = list(pool.map(_evaluate_point, jobs))
    else:
        results = [_evaluate_point(job) for job in jobs]

    rows = []
    for job, data in zip(jobs, results):
        mwm, greedy, rand, ub, mu = data.T
        rows.append(
            SweepRow(
                swept_value=job[-1],
                mwm_mean=float(np.mean(mwm)),
                mwm_std=float(np.std(mwm)),
                greedy_mean=float(np.mean(greedy)),
                greedy_std=float(np.std(greedy)),
                random_mean=float(np.mean(rand)),
                random_std=float(np.std(rand)),
                upper_bound=float(np.mean(ub)),
                mu_mean=float(np.mean(mu)),
                guarantee_mean=float(np.mean(mu / 2.0 * ub)),
            )
        )
        log.info("%s %s: mwm=%.4f greedy=%.4f random=%.4f bound=%.4f",
                 spec.kind, job[-1], rows[-1].mwm_mean, rows[-1].greedy_mean,
                 rows[-1].random_mean, rows[-1].upper_bound)
    return rows


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.csv_fields())
    return buf.getvalue()


def plot_rows(rows: Sequence[SweepRow], title: str = "", xlabel: str = ""):
    """Figure with the three algorithm means and the upper bound."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    x = np.arange(len(rows))
    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    series = [
        ("MWM", "mwm_mean", "mwm_std", "o-"),
        ("Greedy", "greedy_mean", "greedy_std", "s--"),
        ("Random", "random_mean", "random_std", "^:"),
    ]
    for name, mean, std, style in series:
        ax.errorbar(x, [getattr(r, mean) for r in rows], yerr=[getattr(r, std) for r in rows],
                    fmt=style, capsize=3, label=name)
    ax.plot(x, [r.upper_bound for r in rows], "k-.", label="Upper bound")
    ax.set_xticks(x, [r.swept_value for r in rows])
    ax.set_xlabel(xlabel)
    ax.set_ylabel("System throughput")
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    return fig


def emit(rows: Sequence[SweepRow], out_dir: str | Path, name: str = "sweep",
         xlabel: str = "", plot: bool = True) -> list[Path]:
    """Write ``<name>.csv`` and ``<name>.png`` into ``out_dir``."""
    if not rows:
        raise ValueError("nothing to emit")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{name}.csv"
    csv_path.write_text(rows_to_csv(rows), encoding="utf-8")
    paths = [csv_path]
    if plot:
        import matplotlib.pyplot as plt

        fig = plot_rows(rows, title=name, xlabel=xlabel)
        png_path = out / f"{name}.png"
        fig.savefig(png_path, dpi=120, metadata={"Software": None})
        plt.close(fig)
        paths.append(png_path)
    return paths


def spec_from_dict(data: dict, kind: Optional[str] = None) -> SweepSpec:
    """Build a spec from a flat mapping of SweepSpec and GenConfig fields."""
    data = dict(data)
    kind = kind or data.pop("kind", None)
    data.pop("kind", None)
    if kind is None:
        raise ValueError("sweep kind missing")
    sweep_keys = {"grid", "runs", "base_seed", "workers"}
    sweep = {k: data.pop(k) for k in list(data) if k in sweep_keys}
    base = default_spec(kind).config
    unknown = set(data) - set(base.__dataclass_fields__)
    if unknown:
        raise ValueError(f"unknown config fields: {sorted(unknown)}")
    if "seed" in data:
        raise ValueError("use base_seed for sweeps; per-run seeds are derived from it")
    return SweepSpec(kind=kind, config=base.replace(**data), **sweep)
