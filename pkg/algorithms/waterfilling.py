#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import itertools
from fractions import Fraction

from algorithms.base import TraceRecorder, require_kind
from components.logging import LogLevel, log
from components.models import InstanceKind


def water_filling(inst):
    """
    Fractional matching that pours each arriving item into its neighbours
    with the lowest water level. The continuous process is simulated event
    by event: the lowest set rises together until it meets the next level,
    reaches 1, or the item runs out. Everything stays an exact Fraction.
    """
    require_kind(inst, "water_filling", InstanceKind.MATCHING)
    recorder = TraceRecorder("water-filling", inst)

    for item in inst.ordered_items():
        levels = {e.buyer: recorder.levels[e.buyer] for e in item.active_edges if recorder.levels[e.buyer] < 1}
        allocated = {i: Fraction(0) for i in levels}
        mass = Fraction(1)
        while mass > 0 and levels:
            low = min(levels.values())
            lowest = [i for i, y in levels.items() if y == low]
            ceiling = min([y for y in levels.values() if y > low] + [Fraction(1)])
            needed = (ceiling - low) * len(lowest)
            rise = ceiling - low if needed <= mass else mass / len(lowest)
            for i in lowest:
                levels[i] += rise
                allocated[i] += rise
            mass -= rise * len(lowest)
            levels = {i: y for i, y in levels.items() if y < 1}
        recorder.record(item, allocated)

    alloc, trace = recorder.finish()
    log("water-filling primal %s over %s items" % (alloc.value(), len(inst.items)), level=LogLevel.Debug, category="water_filling")
    return alloc, trace


def check_max_min(trace, steps=12, max_neighbours=3):
    """
    For every item with at most max_neighbours neighbours, tries every split
    of the item's mass on a grid and reports items where some split would
    have left a higher minimum neighbour level than the run did.
    """
    inst = trace.instance
    problems = []
    for r in trace.records:
        neighbours = sorted(r.before)
        if not neighbours or len(neighbours) > max_neighbours:
            continue
        achieved = min(r.after[i] for i in neighbours)
        mass = r.mass
        for parts in itertools.product(range(steps + 1), repeat=len(neighbours)):
            if sum(parts) != steps:
                continue
            trial = {i: r.before[i] + mass * Fraction(p, steps) for i, p in zip(neighbours, parts)}
            if any(trial[i] > inst.budgets[i] for i in neighbours):
                continue
            if min(trial.values()) > achieved:
                problems.append("item %s: split %s reaches min level %s > %s" % (r.item, parts, min(trial.values()), achieved))
                break
    return problems
