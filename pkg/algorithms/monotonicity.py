#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import dataclasses
from typing import Tuple

import numpy as np

from algorithms.registry import FLOAT_ALGORITHMS, FRACTIONAL, run_algorithm
from components.logging import LogLevel, log


@dataclasses.dataclass(frozen=True)
class MonotonicityViolation:
    item: str
    seq1: Tuple[str, ...]
    seq2: Tuple[str, ...]
    buyers: Tuple[str, ...]
    y_new1: dict
    y_new2: dict


def levels_around(trace, item_id):
    """(y_old, y_new) for every buyer around the processing of the last item."""
    record = trace.record(item_id)
    y_new = dict(trace.final_levels)
    y_old = dict(y_new)
    for i in record.before:
        y_old[i] = record.before[i]
    return y_old, y_new


def _dominated(a, b, tolerance):
    return [i for i in a if a[i] > b[i] + tolerance]


def probe_allocation_monotonicity(algo, inst, trials, seed, policy=None, g=None):
    """
    Looks for pairs of item sequences [seq1, j], [seq2, j] where seq1 is a
    random sub-sequence of seq2, the levels before j are ordered
    y_old(seq1) <= y_old(seq2), but the levels after j are not. Pairs whose
    prior levels are not ordered say nothing and are passed over.
    """
    if algo not in FRACTIONAL:
        raise ValueError("Monotonicity is probed on fractional algorithms %s, not %r" % (FRACTIONAL, algo))
    tolerance = 1e-12 if algo in FLOAT_ALGORITHMS else 0
    violations = []
    if trials <= 0 or not inst.items:
        return violations

    rng = np.random.default_rng(seed)
    ids = [i.id for i in inst.items]
    compared = 0
    for _ in range(trials):
        j = ids[rng.integers(len(ids))]
        others = [ids[k] for k in rng.permutation(len(ids)) if ids[k] != j]
        seq2 = [o for o in others if rng.random() < 0.5]
        seq1 = [o for o in seq2 if rng.random() < 0.5]

        _, trace1 = run_algorithm(algo, inst.restricted(seq1 + [j]), g=g, policy=policy)
        _, trace2 = run_algorithm(algo, inst.restricted(seq2 + [j]), g=g, policy=policy)
        old1, new1 = levels_around(trace1, j)
        old2, new2 = levels_around(trace2, j)
        if _dominated(old1, old2, tolerance):
            continue
        compared += 1
        bad = _dominated(new1, new2, tolerance)
        if bad:
            violations.append(MonotonicityViolation(j, tuple(seq1), tuple(seq2), tuple(sorted(bad)), new1, new2))

    log("%s: %s comparable pairs out of %s trials, %s violations" % (algo, compared, trials, len(violations)), level=LogLevel.Debug, category="probe_allocation_monotonicity")
    return violations
