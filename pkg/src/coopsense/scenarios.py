"""Random scenario generation, Product-Partition reduction instances, and the
scenario file format."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from .sensing import COIN_FLIP, Channel, Scenario, SuProfile

FORMAT_NAME = "coopsense-scenario"
FORMAT_VERSION = 1

# stand-in sensing model constants
MISS_FLOOR = 0.05
MISS_SPAN = 0.45
FALSE_ALARM_RANGE = (0.05, 0.15)


class ScenarioFormatError(ValueError):
    """Malformed or incompatible scenario file."""


@dataclass(frozen=True)
class GenConfig:
    """Parameters of the random simulation setting."""

    m: int = 20
    n: int = 8
    l_max: int = 3
    area_side: float = 100.0
    power_range: tuple[float, float] = (1.0, 10.0)
    t_c: float = 0.2
    gamma_range: tuple[float, float] = (1.0, 3.0)
    sensing_range: float = 50.0
    kappa: float = 250.0
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "power_range", tuple(float(x) for x in self.power_range))
        object.__setattr__(self, "gamma_range", tuple(float(x) for x in self.gamma_range))
        if self.m < 1 or self.n < 1:
            raise ValueError(f"need m, n >= 1, got m={self.m}, n={self.n}")
        if not 1 <= self.l_max <= self.m:
            raise ValueError(f"l_max must lie in [1, m={self.m}], got {self.l_max}")
        for name in ("power_range", "gamma_range"):
            lo, hi = getattr(self, name)
            if not lo <= hi:
                raise ValueError(f"{name} is empty: [{lo}, {hi}]")
        if self.gamma_range[0] < 0 or self.power_range[0] <= 0:
            raise ValueError("gamma must be >= 0 and power > 0")
        if self.area_side <= 0 or self.sensing_range < 0 or self.kappa <= 0:
            raise ValueError("area_side and kappa must be positive, sensing_range nonnegative")
        if not 0.0 <= self.t_c < 1.0:
            raise ValueError(f"t_c must lie in [0, 1), got {self.t_c}")

    def replace(self, **changes: Any) -> "GenConfig":
        return GenConfig(**{**asdict(self), **changes})


def _streams(seed: int) -> dict[str, np.random.Generator]:
    # one independent stream per quantity, so overriding one draw never shifts the others
    names = ("pu_pos", "power", "pi0", "gamma", "su_pos", "budget", "pf")
    children = np.random.SeedSequence(seed).spawn(len(names))
    return {name: np.random.default_rng(child) for name, child in zip(names, children)}


def draw_gamma(config: GenConfig, rng: np.random.Generator) -> np.ndarray:
    lo, hi = config.gamma_range
    return rng.uniform(lo, hi, size=config.m)


def draw_budgets(config: GenConfig, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(1, config.l_max, size=config.n, endpoint=True)


def error_probabilities(
    distance: np.ndarray, power: np.ndarray, config: GenConfig, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Stand-in sensing model: misdetection grows with d^2 / (kappa * power),
    false alarm is uniform in [0.05, 0.15], out-of-range pairs flip coins.

    ``distance`` is (N, M); ``power`` is (M,).
    """
    q = np.minimum(1.0, distance**2 / (config.kappa * power[None, :]))
    pm = MISS_FLOOR + MISS_SPAN * q
    pf = rng.uniform(*FALSE_ALARM_RANGE, size=distance.shape)
    out = distance > config.sensing_range
    pm[out] = COIN_FLIP
    pf[out] = COIN_FLIP
    return pf, pm


def generate(
    config: GenConfig,
    gamma: Optional[Sequence[float]] = None,
    budgets: Optional[Sequence[int]] = None,
) -> Scenario:
    """Draw a scenario; deterministic in ``config.seed``.

    ``gamma`` and ``budgets`` override the per-scenario draws (the sweeps hold
    them fixed across runs).
    """
    s = _streams(config.seed)
    side = config.area_side
    pu_pos = s["pu_pos"].uniform(0.0, side, size=(config.m, 2))
    power = s["power"].uniform(*config.power_range, size=config.m)
    pi0 = s["pi0"].uniform(0.0, 1.0, size=config.m)
    gamma = draw_gamma(config, s["gamma"]) if gamma is None else np.asarray(gamma, dtype=float)
    su_pos = s["su_pos"].uniform(0.0, side, size=(config.n, 2))
    budgets = draw_budgets(config, s["budget"]) if budgets is None else np.asarray(budgets, dtype=int)
    if gamma.shape != (config.m,) or budgets.shape != (config.n,):
        raise ValueError("gamma/budgets overrides have the wrong length")

    distance = np.linalg.norm(su_pos[:, None, :] - pu_pos[None, :, :], axis=2)
    pf, pm = error_probabilities(distance, power, config, s["pf"])
    out = distance > config.sensing_range

    channels = tuple(Channel(k, float(pi0[k]), float(gamma[k]), config.t_c) for k in range(config.m))
    sus = tuple(
        SuProfile(
            i,
            int(budgets[i]),
            tuple(pf[i].tolist()),
            tuple(pm[i].tolist()),
            frozenset(np.flatnonzero(out[i]).tolist()),
        )
        for i in range(config.n)
    )
    return Scenario(channels, sus, config.t_c)


@dataclass(frozen=True)
class ReductionInstance:
    """Two-channel instance encoding a Product Partition question.

    P_m^i = a_i / 10^r, P_f = 0, theta1 = theta2, one channel per SU.
    """

    a: tuple[int, ...]
    r: int
    theta: float
    scenario: Scenario = field(repr=False)

    @property
    def pm(self) -> tuple[float, ...]:
        return tuple(float(x) for x in self.scenario.pm[:, 0])

    def product_sum(self, first: Sequence[int]) -> Fraction:
        """prod_{S_1} P_m + prod_{S \\ S_1} P_m, computed exactly from the integers."""
        first = set(first)
        scale = Fraction(10) ** self.r
        p1 = math.prod(Fraction(self.a[i]) / scale for i in first)
        p2 = math.prod(Fraction(self.a[i]) / scale for i in range(len(self.a)) if i not in first)
        return p1 + p2

    def closed_form(self, first: Sequence[int]) -> float:
        """System throughput of the split (first, rest) from the product formula."""
        t1 = float(self.scenario.theta1[0])
        t2 = float(self.scenario.theta2[0])
        first = set(first)
        pm = self.scenario.pm[:, 0]
        p1 = math.prod(float(pm[i]) for i in first)
        p2 = math.prod(float(pm[i]) for i in range(len(self.a)) if i not in first)
        return (t1 + t2 * (1.0 - p1)) + (t1 + t2 * (1.0 - p2))


def reduction_instance(a: Sequence[int], theta: float = 0.4, t_c: float = 0.2) -> ReductionInstance:
    """Build the two-channel subproblem for integers ``a``.

    pi0 = theta / (1 - t_c) and gamma = theta / (1 - pi0) make theta1 = theta2
    = theta (up to rounding), which requires 0 <= theta < 1 - t_c.
    """
    a = tuple(int(x) for x in a)
    if not a or min(a) < 1:
        raise ValueError("reduction needs a nonempty list of positive integers")
    if not 0.0 <= theta < 1.0 - t_c:
        raise ValueError(f"theta must lie in [0, {1.0 - t_c}) for t_c={t_c}")
    r = 0
    while max(a) > 10**r:
        r += 1
    pm = [x / 10**r for x in a]
    pi0 = theta / (1.0 - t_c)
    gamma = theta / (1.0 - pi0)
    channels = tuple(Channel(k, pi0, gamma, t_c) for k in range(2))
    sus = tuple(SuProfile(i, 1, (0.0, 0.0), (p, p)) for i, p in enumerate(pm))
    return ReductionInstance(a, r, theta, Scenario(channels, sus, t_c))


# -- file format -------------------------------------------------------------


def scenario_to_dict(scenario: Scenario) -> dict:
    return {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "t_c": scenario.t_c,
        "channels": [{"index": c.index, "pi0": c.pi0, "gamma": c.gamma} for c in scenario.channels],
        "sus": [
            {
                "index": su.index,
                "budget": su.budget,
                "pf": list(su.pf),
                "pm": list(su.pm),
                "out_of_range": sorted(su.out_of_range),
            }
            for su in scenario.sus
        ],
    }


def save(scenario: Scenario, path: str | Path) -> None:
    # json renders floats with repr(), the shortest string that round-trips exactly
    text = json.dumps(scenario_to_dict(scenario), indent=2)
    Path(path).write_text(text + "\n", encoding="utf-8")


def _get(obj: Any, key: str, where: str) -> Any:
    if not isinstance(obj, dict):
        raise ScenarioFormatError(f"{where}: expected an object")
    if key not in obj:
        raise ScenarioFormatError(f"{where}.{key}: missing field")
    return obj[key]


def _number(value: Any, where: str, lo: float, hi: float, hi_open: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioFormatError(f"{where}: expected a number, got {value!r}")
    value = float(value)
    if not (lo <= value and (value < hi if hi_open else value <= hi)):
        bracket = ")" if hi_open else "]"
        raise ScenarioFormatError(f"{where}: {value!r} outside [{lo}, {hi}{bracket}")
    return value


def _integer(value: Any, where: str, lo: int, hi: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioFormatError(f"{where}: expected an integer, got {value!r}")
    if not lo <= value <= hi:
        raise ScenarioFormatError(f"{where}: {value} outside [{lo}, {hi}]")
    return value


def _list(value: Any, where: str) -> list:
    if not isinstance(value, list):
        raise ScenarioFormatError(f"{where}: expected a list")
    return value


def scenario_from_dict(data: Any) -> Scenario:
    fmt = _get(data, "format", "scenario")
    if fmt != FORMAT_NAME:
        raise ScenarioFormatError(f"scenario.format: expected {FORMAT_NAME!r}, got {fmt!r}")
    version = _get(data, "version", "scenario")
    if version != FORMAT_VERSION:
        raise ScenarioFormatError(
            f"scenario.version: unsupported format version {version!r} (this build reads {FORMAT_VERSION})"
        )
    t_c = _number(_get(data, "t_c", "scenario"), "scenario.t_c", 0.0, 1.0, hi_open=True)
    raw_channels = _list(_get(data, "channels", "scenario"), "scenario.channels")
    raw_sus = _list(_get(data, "sus", "scenario"), "scenario.sus")
    m = len(raw_channels)
    if m < 1 or not raw_sus:
        raise ScenarioFormatError("scenario: needs at least one channel and one SU")

    channels = []
    for k, raw in enumerate(raw_channels):
        where = f"channels[{k}]"
        _integer(_get(raw, "index", where), f"{where}.index", k, k)
        pi0 = _number(_get(raw, "pi0", where), f"{where}.pi0", 0.0, 1.0)
        gamma = _number(_get(raw, "gamma", where), f"{where}.gamma", 0.0, math.inf)
        channels.append(Channel(k, pi0, gamma, t_c))

    sus = []
    for i, raw in enumerate(raw_sus):
        where = f"sus[{i}]"
        _integer(_get(raw, "index", where), f"{where}.index", i, i)
        budget = _integer(_get(raw, "budget", where), f"{where}.budget", 0, m)
        probs = {}
        for name in ("pf", "pm"):
            values = _list(_get(raw, name, where), f"{where}.{name}")
            if len(values) != m:
                raise ScenarioFormatError(f"{where}.{name}: expected {m} entries, got {len(values)}")
            probs[name] = tuple(_number(v, f"{where}.{name}[{k}]", 0.0, 1.0) for k, v in enumerate(values))
        out = raw.get("out_of_range", [])
        out = [_integer(k, f"{where}.out_of_range[{j}]", 0, m - 1) for j, k in enumerate(_list(out, f"{where}.out_of_range"))]
        for k in out:
            if probs["pf"][k] != COIN_FLIP or probs["pm"][k] != COIN_FLIP:
                raise ScenarioFormatError(f"{where}.out_of_range: channel {k} must have pf = pm = 0.5")
        sus.append(SuProfile(i, budget, probs["pf"], probs["pm"], frozenset(out)))
    return Scenario(tuple(channels), tuple(sus), t_c)


def load(path: str | Path) -> Scenario:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return scenario_from_dict(data)
    except ScenarioFormatError as exc:
        raise ScenarioFormatError(f"{path}: {exc}") from None


def config_from_dict(data: dict) -> GenConfig:
    known = {f.name for f in fields(GenConfig)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown generator fields: {sorted(unknown)}")
    return GenConfig(**data)
