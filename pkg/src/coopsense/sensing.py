"""Domain types and exact per-channel throughput under optimal Bayesian fusion.

Channel ``k`` sensed by a set of SUs is worth::

    U_k(S) = sum_y max(theta1(k) * P(y | idle), theta2(k) * P(y | busy))

where ``y`` ranges over every joint binary report of the SUs in ``S``. An
empty set means no sensing at all, so only the PU side survives and the
channel is worth ``theta2(k)``.

SU and channel indices are zero-based throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

#: Largest sensing set evaluated by exhaustive enumeration (2**20 outcomes).
ENUMERATION_GUARD = 20

#: Error probabilities reported by an SU outside a PU's sensing range.
COIN_FLIP = 0.5


class SetTooLargeError(ValueError):
    """Raised when a sensing set exceeds the enumeration guard."""


class InfeasibleAssignmentError(ValueError):
    """Raised when an SU senses more channels than its budget allows."""


def _check_probability(value: float, name: str) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return value


@dataclass(frozen=True)
class Channel:
    """One PU channel. ``theta1``/``theta2`` are always derived, never stored."""

    index: int
    pi0: float
    gamma: float
    t_c: float = 0.0

    def __post_init__(self) -> None:
        _check_probability(self.pi0, f"channels[{self.index}].pi0")
        if not self.gamma >= 0.0:
            raise ValueError(f"channels[{self.index}].gamma must be >= 0, got {self.gamma!r}")
        if not 0.0 <= self.t_c < 1.0:
            raise ValueError(f"t_c must lie in [0, 1), got {self.t_c!r}")

    @property
    def theta1(self) -> float:
        """Idle-side weight: SU throughput when the channel is free."""
        return (1.0 - self.t_c) * self.pi0

    @property
    def theta2(self) -> float:
        """Busy-side weight: PU throughput when the channel is protected."""
        return self.gamma * (1.0 - self.pi0)


@dataclass(frozen=True)
class SuProfile:
    index: int
    budget: int
    pf: tuple[float, ...]
    pm: tuple[float, ...]
    out_of_range: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "pf", tuple(float(p) for p in self.pf))
        object.__setattr__(self, "pm", tuple(float(p) for p in self.pm))
        object.__setattr__(self, "out_of_range", frozenset(int(k) for k in self.out_of_range))
        where = f"sus[{self.index}]"
        if len(self.pf) != len(self.pm):
            raise ValueError(f"{where}: pf and pm lengths differ ({len(self.pf)} vs {len(self.pm)})")
        if int(self.budget) != self.budget or not 0 <= self.budget <= len(self.pf):
            raise ValueError(f"{where}.budget must be an integer in [0, {len(self.pf)}], got {self.budget!r}")
        for k, (f, m) in enumerate(zip(self.pf, self.pm)):
            _check_probability(f, f"{where}.pf[{k}]")
            _check_probability(m, f"{where}.pm[{k}]")
        for k in self.out_of_range:
            if not 0 <= k < len(self.pf):
                raise ValueError(f"{where}.out_of_range: channel {k} does not exist")
            if self.pf[k] != COIN_FLIP or self.pm[k] != COIN_FLIP:
                raise ValueError(f"{where}: out-of-range channel {k} must report pf = pm = 0.5")


@dataclass(frozen=True)
class Scenario:
    """A full problem instance: M channels, N SUs and the control-slot fraction.

    Dense numpy views (``pf``, ``pm`` of shape (N, M), ``theta1``, ``theta2``,
    ``budgets``) are built once at construction for the algorithms.
    """

    channels: tuple[Channel, ...]
    sus: tuple[SuProfile, ...]
    t_c: float

    pf: np.ndarray = field(init=False, repr=False, compare=False)
    pm: np.ndarray = field(init=False, repr=False, compare=False)
    theta1: np.ndarray = field(init=False, repr=False, compare=False)
    theta2: np.ndarray = field(init=False, repr=False, compare=False)
    budgets: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "channels", tuple(self.channels))
        object.__setattr__(self, "sus", tuple(self.sus))
        if not self.channels:
            raise ValueError("a scenario needs at least one channel")
        if not self.sus:
            raise ValueError("a scenario needs at least one SU")
        if not 0.0 <= self.t_c < 1.0:
            raise ValueError(f"t_c must lie in [0, 1), got {self.t_c!r}")
        m = len(self.channels)
        for k, ch in enumerate(self.channels):
            if ch.index != k:
                raise ValueError(f"channels[{k}] carries index {ch.index}")
            if ch.t_c != self.t_c:
                raise ValueError(f"channels[{k}].t_c={ch.t_c!r} disagrees with scenario t_c={self.t_c!r}")
        for i, su in enumerate(self.sus):
            if su.index != i:
                raise ValueError(f"sus[{i}] carries index {su.index}")
            if len(su.pf) != m:
                raise ValueError(f"sus[{i}] has {len(su.pf)} error probabilities, expected {m}")

        def frozen(a: np.ndarray) -> np.ndarray:
            a.setflags(write=False)
            return a

        object.__setattr__(self, "pf", frozen(np.array([su.pf for su in self.sus], dtype=float)))
        object.__setattr__(self, "pm", frozen(np.array([su.pm for su in self.sus], dtype=float)))
        object.__setattr__(self, "theta1", frozen(np.array([c.theta1 for c in self.channels])))
        object.__setattr__(self, "theta2", frozen(np.array([c.theta2 for c in self.channels])))
        object.__setattr__(self, "budgets", frozen(np.array([su.budget for su in self.sus], dtype=int)))

    @classmethod
    def from_arrays(
        cls,
        pi0: Sequence[float],
        gamma: Sequence[float],
        pf: Sequence[Sequence[float]],
        pm: Sequence[Sequence[float]],
        budgets: Sequence[int],
        t_c: float = 0.0,
    ) -> "Scenario":
        channels = tuple(Channel(k, float(p), float(g), t_c) for k, (p, g) in enumerate(zip(pi0, gamma)))
        sus = []
        for i, (f, m, b) in enumerate(zip(pf, pm, budgets)):
            f, m = tuple(map(float, f)), tuple(map(float, m))
            coin = frozenset(k for k in range(len(f)) if f[k] == COIN_FLIP and m[k] == COIN_FLIP)
            sus.append(SuProfile(i, int(b), f, m, coin))
        return cls(channels, tuple(sus), float(t_c))

    @property
    def m(self) -> int:
        return len(self.channels)

    @property
    def n(self) -> int:
        return len(self.sus)

    @property
    def l_max(self) -> int:
        return int(self.budgets.max())

    def upper_bound(self) -> float:
        """Sum of theta1 + theta2: every channel perfectly sensed."""
        return float(np.sum(self.theta1 + self.theta2))


@dataclass(frozen=True)
class Assignment:
    """Sensing sets S_1..S_M, one frozenset of SU indices per channel."""

    sets: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sets", tuple(frozenset(int(i) for i in s) for s in self.sets))

    @classmethod
    def empty(cls, m: int) -> "Assignment":
        return cls(tuple(frozenset() for _ in range(m)))

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[int]]) -> "Assignment":
        return cls(tuple(frozenset(s) for s in sets))

    def load(self, i: int) -> int:
        """Number of channels SU ``i`` senses."""
        return sum(i in s for s in self.sets)

    def validate(self, scenario: Scenario) -> None:
        if len(self.sets) != scenario.m:
            raise ValueError(f"assignment has {len(self.sets)} sets for {scenario.m} channels")
        for k, s in enumerate(self.sets):
            bad = [i for i in s if not 0 <= i < scenario.n]
            if bad:
                raise ValueError(f"channel {k} lists unknown SU {bad[0]}")
        for su in scenario.sus:
            used = self.load(su.index)
            if used > su.budget:
                raise InfeasibleAssignmentError(
                    f"SU {su.index} senses {used} channels but its budget is {su.budget}"
                )

    def is_feasible(self, scenario: Scenario) -> bool:
        try:
            self.validate(scenario)
        except ValueError:
            return False
        return True


@dataclass(frozen=True)
class ObservationOutcome:
    """One joint report ``y`` (ordered by ascending SU index) and its likelihoods."""

    y: tuple[int, ...]
    likelihood_idle: float
    likelihood_busy: float


def _members(su_set: Iterable[int], guard: int) -> list[int]:
    members = sorted(set(int(i) for i in su_set))
    if len(members) > guard:
        raise SetTooLargeError(
            f"set too large for exhaustive evaluation: {len(members)} SUs > guard {guard}"
        )
    return members


def _half_tables(pf: np.ndarray, pm: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # bit j of the outcome index is the report of the j-th member
    idle = np.ones(1)
    busy = np.ones(1)
    for f, m in zip(pf, pm):
        idle = np.concatenate((idle * (1.0 - f), idle * f))
        busy = np.concatenate((busy * m, busy * (1.0 - m)))
    return idle, busy


def _likelihood_tables(pf: np.ndarray, pm: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = len(pf)
    if n <= 8:
        return _half_tables(pf, pm)
    h = n // 2
    lo_idle, lo_busy = _half_tables(pf[:h], pm[:h])
    hi_idle, hi_busy = _half_tables(pf[h:], pm[h:])
    return np.outer(hi_idle, lo_idle).ravel(), np.outer(hi_busy, lo_busy).ravel()


def likelihoods(
    su_set: Iterable[int], k: int, scenario: Scenario, guard: int = ENUMERATION_GUARD
) -> Iterator[ObservationOutcome]:
    """Yield every joint report of ``su_set`` on channel ``k`` with P(y|idle), P(y|busy)."""
    members = _members(su_set, guard)
    if not members:
        raise ValueError("likelihoods need a nonempty SU set")
    idle, busy = _likelihood_tables(scenario.pf[members, k], scenario.pm[members, k])
    n = len(members)
    for idx in range(1 << n):
        y = tuple((idx >> j) & 1 for j in range(n))
        yield ObservationOutcome(y, float(idle[idx]), float(busy[idx]))


def channel_throughput(
    su_set: Iterable[int], k: int, scenario: Scenario, guard: int = ENUMERATION_GUARD
) -> float:
    """U_k(S): SU plus PU throughput on channel ``k`` under the optimal fusion rule."""
    members = _members(su_set, guard)
    theta1 = float(scenario.theta1[k])
    theta2 = float(scenario.theta2[k])
    if not members:
        return theta2
    idle, busy = _likelihood_tables(scenario.pf[members, k], scenario.pm[members, k])
    return float(np.sum(np.maximum(theta1 * idle, theta2 * busy)))


def fusion_decisions(
    su_set: Iterable[int], k: int, scenario: Scenario, guard: int = ENUMERATION_GUARD
) -> dict[tuple[int, ...], int]:
    """Diagnostic view of the fusion rule: report vector -> 1 (occupied) or 0 (idle).

    Ties go to "occupied".
    """
    theta1 = float(scenario.theta1[k])
    theta2 = float(scenario.theta2[k])
    return {
        o.y: int(theta2 * o.likelihood_busy >= theta1 * o.likelihood_idle)
        for o in likelihoods(su_set, k, scenario, guard)
    }


def single_su_throughput(i: int, k: int, scenario: Scenario) -> float:
    """Closed form of U_k({s_i}) from the two possible reports."""
    theta1 = float(scenario.theta1[k])
    theta2 = float(scenario.theta2[k])
    f = float(scenario.pf[i, k])
    m = float(scenario.pm[i, k])
    return max(theta1 * (1.0 - f), theta2 * m) + max(theta1 * f, theta2 * (1.0 - m))


def single_su_matrix(scenario: Scenario) -> np.ndarray:
    """U_k({s_i}) for every SU i (rows) and channel k (columns)."""
    t1 = scenario.theta1[None, :]
    t2 = scenario.theta2[None, :]
    f, m = scenario.pf, scenario.pm
    return np.maximum(t1 * (1.0 - f), t2 * m) + np.maximum(t1 * f, t2 * (1.0 - m))


def system_throughput(
    assignment: Assignment, scenario: Scenario, guard: int = ENUMERATION_GUARD
) -> float:
    """Sum of channel throughputs; rejects infeasible assignments."""
    assignment.validate(scenario)
    return float(sum(channel_throughput(s, k, scenario, guard) for k, s in enumerate(assignment.sets)))
