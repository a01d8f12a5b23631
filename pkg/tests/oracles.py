"""Independent reference computations used as test oracles.

Plain-Python enumerations that share no code with the package under test.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def throughput_oracle(theta1, theta2, pf, pm):
    """U_k(S) by enumerating every report vector with explicit products."""
    if not pf:
        return theta2
    total = 0.0
    for y in itertools.product((0, 1), repeat=len(pf)):
        idle = 1.0
        busy = 1.0
        for yi, f, m in zip(y, pf, pm):
            idle *= f if yi else 1.0 - f
            busy *= 1.0 - m if yi else m
        total += max(theta1 * idle, theta2 * busy)
    return total


def matching_oracle(weights):
    """Best total weight over all matchings, weights >= 0.

    With nonnegative weights some optimum saturates the smaller side, so it is
    enough to try every injection of the smaller side into the larger one.
    """
    w = np.asarray(weights, dtype=float)
    if w.shape[0] > w.shape[1]:
        w = w.T
    rows, cols = w.shape
    if rows == 0:
        return 0.0
    best = 0.0
    for perm in itertools.permutations(range(cols), rows):
        best = max(best, math.fsum(w[r, c] for r, c in enumerate(perm)))
    return best


def scenario_value_oracle(sets, scenario):
    return sum(
        throughput_oracle(
            float(scenario.theta1[k]),
            float(scenario.theta2[k]),
            [float(scenario.pf[i, k]) for i in sorted(s)],
            [float(scenario.pm[i, k]) for i in sorted(s)],
        )
        for k, s in enumerate(sets)
    )


def assignment_oracle(scenario):
    """OPT by looping over every SU's channel subset of size <= budget."""
    m = scenario.m
    choices = []
    for su in scenario.sus:
        opts = [c for size in range(su.budget + 1) for c in itertools.combinations(range(m), size)]
        choices.append(opts)
    best = -math.inf
    for pick in itertools.product(*choices):
        sets = [set() for _ in range(m)]
        for i, chans in enumerate(pick):
            for k in chans:
                sets[k].add(i)
        best = max(best, scenario_value_oracle(sets, scenario))
    return best
