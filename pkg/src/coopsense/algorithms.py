"""Sensing-assignment algorithms: matching-based assignment, the M_Gdy bound
construction, the greedy and random baselines, and an exhaustive oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from .matching import max_weight_matching_matrix
from .sensing import (
    ENUMERATION_GUARD,
    Assignment,
    Scenario,
    channel_throughput,
    single_su_matrix,
    system_throughput,
)

#: Default cap on the number of feasible assignments the oracle enumerates.
BRUTE_FORCE_CAP = 2_000_000


class SearchTooLargeError(ValueError):
    """Raised when an exhaustive search would exceed its cap."""


@dataclass(frozen=True)
class CopyGraph:
    """Complete bipartite graph between SU copies (rows) and channels (columns).

    ``copies[r] = (i, j)`` names the j-th copy of SU i; all copies of SU i
    share one weight row.
    """

    copies: tuple[tuple[int, int], ...]
    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != len(self.copies):
            raise ValueError("weights must have one row per copy")
        if w.size and w.min() < 0:
            raise ValueError("edge weights must be nonnegative")
        rows_of: dict[int, int] = {}
        for r, (i, _) in enumerate(self.copies):
            first = rows_of.setdefault(i, r)
            if not np.array_equal(w[r], w[first]):
                raise ValueError(f"copies of SU {i} carry different weights")
        object.__setattr__(self, "weights", w)

    @classmethod
    def build(
        cls, scenario: Scenario, weighting: str = "throughput", single: Optional[np.ndarray] = None
    ) -> "CopyGraph":
        """Edge weights ``U_k({s_i})`` ("throughput") or ``U_k({s_i}) - theta2(k)`` ("gain").

        "gain" is the throughput added over leaving the channel unsensed. It
        ranks perfect matchings exactly like "throughput" but stays correct
        when there are fewer copies than channels.
        """
        if single is None:
            single = single_su_matrix(scenario)
        if weighting == "gain":
            # U_k({s_i}) >= theta2(k); clip rounding residue below zero
            single = np.maximum(single - scenario.theta2[None, :], 0.0)
        elif weighting != "throughput":
            raise ValueError(f"unknown weighting {weighting!r}")
        copies = tuple((su.index, j) for su in scenario.sus for j in range(su.budget))
        rows = [i for i, _ in copies]
        weights = single[rows] if rows else np.zeros((0, scenario.m))
        return cls(copies, weights)


def max_weight_matching(graph: CopyGraph) -> set[tuple[tuple[int, int], int]]:
    """Matched edges as ``((su, copy), channel)`` pairs of maximum total weight."""
    edges = max_weight_matching_matrix(graph.weights)
    return {(graph.copies[r], k) for r, k in edges}


@dataclass(frozen=True)
class FillStep:
    su: int
    copy: int
    channel: Optional[int]  # None: the copy was discarded
    gain: float


@dataclass(frozen=True)
class MwmTrace:
    weighting: str
    matching_weight: float
    matching_value: float
    fill_steps: tuple[FillStep, ...]
    filled_value: float
    fallback_channel: Optional[int]
    fallback_value: float
    branch: str  # "matching" or "single-channel"


@dataclass(frozen=True)
class AlgoResult:
    assignment: Assignment
    value: float
    trace: object = field(default=None, compare=False)


@dataclass(frozen=True)
class BoundReport:
    """Quantities behind the mu/2 guarantee.

    ``groups[i]`` is C_i sorted by descending U_k^0 and ``top[i]`` its first
    min(l_i, r_i) channels. ``lam``/``rho`` hold NaN for SUs with an empty
    group; those SUs do not enter ``mu``.
    """

    u0: np.ndarray
    ustar: np.ndarray
    groups: tuple[tuple[int, ...], ...]
    top: tuple[tuple[int, ...], ...]
    lam: np.ndarray
    rho: np.ndarray
    mu: float
    guarantee: float

    def as_dict(self) -> dict:
        return {
            "u0": self.u0.tolist(),
            "ustar": self.ustar.tolist(),
            "groups": [list(g) for g in self.groups],
            "top": [list(t) for t in self.top],
            "group_sizes": [len(g) for g in self.groups],
            "lambda": [None if np.isnan(x) else float(x) for x in self.lam],
            "rho": [None if np.isnan(x) else float(x) for x in self.rho],
            "mu": self.mu,
            "guarantee": self.guarantee,
        }


def mwm_assign(scenario: Scenario, weighting: str = "gain") -> AlgoResult:
    """Matching-based assignment with greedy fill-in and a single-channel fallback.

    Unmatched copies are placed in ascending (SU, copy) order on the channel
    with the largest marginal gain; a copy whose SU already senses every
    channel is dropped. The result is the better of that assignment and all
    sensing SUs on the single best channel.
    """
    graph = CopyGraph.build(scenario, weighting)
    edges = max_weight_matching_matrix(graph.weights)

    sets: list[set[int]] = [set() for _ in range(scenario.m)]
    matched_rows = set()
    for r, k in edges:
        sets[k].add(graph.copies[r][0])
        matched_rows.add(r)
    matching_weight = float(sum(graph.weights[r, k] for r, k in edges))
    current = [channel_throughput(s, k, scenario) for k, s in enumerate(sets)]
    matching_value = float(sum(current))

    # copies are already in ascending (SU, copy) order
    steps = []
    for r, (i, j) in enumerate(graph.copies):
        if r in matched_rows:
            continue
        best_k, best_gain, best_value = None, -np.inf, 0.0
        for k in range(scenario.m):
            if i in sets[k]:
                continue
            value = channel_throughput(sets[k] | {i}, k, scenario)
            gain = value - current[k]
            if gain > best_gain:
                best_k, best_gain, best_value = k, gain, value
        if best_k is None:
            steps.append(FillStep(i, j, None, 0.0))
            continue
        sets[best_k].add(i)
        current[best_k] = best_value
        steps.append(FillStep(i, j, best_k, best_gain))
    filled = Assignment.from_sets(sets)
    filled_value = system_throughput(filled, scenario)

    sensing = [su.index for su in scenario.sus if su.budget >= 1]
    base = float(np.sum(scenario.theta2))
    fallback_channel, fallback_value = None, base
    if sensing:
        gains = [channel_throughput(sensing, k, scenario) - float(scenario.theta2[k]) for k in range(scenario.m)]
        fallback_channel = int(np.argmax(gains))
        fallback = Assignment.from_sets(
            sensing if k == fallback_channel else () for k in range(scenario.m)
        )
        fallback_value = system_throughput(fallback, scenario)

    if fallback_channel is not None and fallback_value > filled_value:
        chosen, value, branch = fallback, fallback_value, "single-channel"
    else:
        chosen, value, branch = filled, filled_value, "matching"
    trace = MwmTrace(
        weighting=weighting,
        matching_weight=matching_weight,
        matching_value=matching_value,
        fill_steps=tuple(steps),
        filled_value=filled_value,
        fallback_channel=fallback_channel,
        fallback_value=fallback_value,
        branch=branch,
    )
    return AlgoResult(chosen, value, trace)


def _mgdy_structure(scenario: Scenario, single: np.ndarray):
    u0 = single.min(axis=0)
    ustar = single.max(axis=0)
    owner = np.argmax(single, axis=0)  # first maximum: lowest SU index
    groups = []
    top = []
    for su in scenario.sus:
        members = [k for k in range(scenario.m) if owner[k] == su.index]
        members.sort(key=lambda k: (-u0[k], k))
        groups.append(tuple(members))
        top.append(tuple(members[: min(su.budget, len(members))]))
    return u0, ustar, tuple(groups), tuple(top)


def _bound_report(scenario: Scenario, single: np.ndarray) -> BoundReport:
    u0, ustar, groups, top = _mgdy_structure(scenario, single)
    lam = np.full(scenario.n, np.nan)
    rho = np.full(scenario.n, np.nan)
    for su in scenario.sus:
        i, group = su.index, groups[su.index]
        if not group:
            continue
        lam[i] = min(su.budget, len(group)) / len(group)
        ratios = [ustar[k] / u0[k] for k in top[i] if u0[k] > 0]
        # no sensed channel (l_i = 0) or only degenerate ones: lam * (rho - 1) = 0
        rho[i] = min(ratios) if ratios else 1.0
    terms = [lam[i] * (rho[i] - 1.0) for i in range(scenario.n) if not np.isnan(lam[i])]
    mu = 1.0 + min(terms)
    return BoundReport(u0, ustar, groups, top, lam, rho, float(mu), float(mu / 2.0))


def compute_mu(scenario: Scenario) -> BoundReport:
    """mu = 1 + min_i lambda_i (rho_i - 1) over SUs owning at least one channel."""
    return _bound_report(scenario, single_su_matrix(scenario))


def mgdy_assign(scenario: Scenario) -> tuple[AlgoResult, BoundReport]:
    """The greedy matching used to lower-bound the matching-based algorithm."""
    single = single_su_matrix(scenario)
    report = _bound_report(scenario, single)
    sets: list[set[int]] = [set() for _ in range(scenario.m)]
    remaining = [int(b) for b in scenario.budgets]
    for i, channels in enumerate(report.top):
        for k in channels:
            sets[k].add(i)
        remaining[i] -= len(channels)
    for k in range(scenario.m):
        if sets[k]:
            continue
        donor = next((i for i, left in enumerate(remaining) if left > 0), None)
        if donor is None:
            break
        sets[k].add(donor)
        remaining[donor] -= 1
    assignment = Assignment.from_sets(sets)
    return AlgoResult(assignment, system_throughput(assignment, scenario)), report


def greedy_baseline(scenario: Scenario, rng: np.random.Generator) -> AlgoResult:
    """Round-based greedy: PUs in a fresh random order each round take their
    best-ranked (lowest P_m + P_f) SU that still has budget.

    Stops after the first round in which no copy could be placed.
    """
    score = scenario.pm + scenario.pf
    prefs = [np.argsort(score[:, k], kind="stable").tolist() for k in range(scenario.m)]
    remaining = [int(b) for b in scenario.budgets]
    sets: list[set[int]] = [set() for _ in range(scenario.m)]
    rounds = 0
    while True:
        placed = 0
        for k in rng.permutation(scenario.m).tolist():
            pick = next((i for i in prefs[k] if remaining[i] > 0 and i not in sets[k]), None)
            if pick is None:
                continue
            sets[k].add(pick)
            remaining[pick] -= 1
            placed += 1
        rounds += 1
        if placed == 0:
            break
    assignment = Assignment.from_sets(sets)
    return AlgoResult(assignment, system_throughput(assignment, scenario), {"rounds": rounds})


def random_baseline(scenario: Scenario, rng: np.random.Generator) -> AlgoResult:
    """Shuffle all SU copies, drop each on a uniformly random channel it is not on yet."""
    copies = [su.index for su in scenario.sus for _ in range(su.budget)]
    order = rng.permutation(len(copies)).tolist()
    sets: list[set[int]] = [set() for _ in range(scenario.m)]
    skipped = 0
    for r in order:
        i = copies[r]
        eligible = [k for k in range(scenario.m) if i not in sets[k]]
        if not eligible:
            skipped += 1
            continue
        sets[eligible[int(rng.integers(len(eligible)))]].add(i)
    assignment = Assignment.from_sets(sets)
    return AlgoResult(assignment, system_throughput(assignment, scenario), {"skipped": skipped})


def _channel_subsets(m: int, budget: int) -> list[int]:
    """Bitmasks of every channel subset of size <= budget."""
    masks = []
    for size in range(min(budget, m) + 1):
        for combo in combinations(range(m), size):
            masks.append(sum(1 << k for k in combo))
    return masks


def search_size(scenario: Scenario) -> int:
    """Number of feasible assignments the oracle would enumerate."""
    total = 1
    for su in scenario.sus:
        total *= len(_channel_subsets(scenario.m, su.budget))
    return total


def brute_force_opt(
    scenario: Scenario, cap: int = BRUTE_FORCE_CAP, chunk: int = 1 << 18
) -> AlgoResult:
    """Optimal assignment by enumerating every SU's channel subset of size <= l_i."""
    size = search_size(scenario)
    if size > cap:
        raise SearchTooLargeError(f"{size} feasible assignments exceed the search cap {cap}")
    active = [su.index for su in scenario.sus if su.budget >= 1]
    n_act = len(active)
    if n_act > ENUMERATION_GUARD:
        raise SearchTooLargeError(f"{n_act} sensing SUs exceed the enumeration guard")

    # table[k, mask]: U_k of the active SUs selected by mask
    table = np.empty((scenario.m, 1 << n_act))
    for mask in range(1 << n_act):
        members = [active[b] for b in range(n_act) if mask >> b & 1]
        for k in range(scenario.m):
            table[k, mask] = channel_throughput(members, k, scenario)

    options = [np.array(_channel_subsets(scenario.m, scenario.budgets[i]), dtype=np.int64) for i in active]
    radices = [len(o) for o in options]
    best_value, best_index = -np.inf, 0
    for start in range(0, size, chunk):
        idx = np.arange(start, min(start + chunk, size), dtype=np.int64)
        rest = idx.copy()
        chan_masks = np.zeros((scenario.m, idx.size), dtype=np.int64)
        for b, (opts, radix) in enumerate(zip(options, radices)):
            picked = opts[rest % radix]
            rest //= radix
            for k in range(scenario.m):
                chan_masks[k] |= ((picked >> k) & 1) << b
        values = np.zeros(idx.size)
        for k in range(scenario.m):
            values += table[k, chan_masks[k]]
        pos = int(np.argmax(values))
        if values[pos] > best_value:
            best_value, best_index = float(values[pos]), int(idx[pos])

    sets: list[set[int]] = [set() for _ in range(scenario.m)]
    rest = best_index
    for i, opts, radix in zip(active, options, radices):
        picked = int(opts[rest % radix])
        rest //= radix
        for k in range(scenario.m):
            if picked >> k & 1:
                sets[k].add(i)
    assignment = Assignment.from_sets(sets)
    return AlgoResult(assignment, system_throughput(assignment, scenario), {"searched": size})
