#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

from algorithms.base import TraceRecorder, require_kind
from components.gfunction import g_exponential
from components.logging import LogLevel, log
from components.models import InstanceKind


class ConvergenceError(Exception):
    pass


def virtual_level(g, bid, normalized):
    return bid * (g.g(normalized) - 1.0)


def normalized_level_at(g, bid, v):
    """The normalized level at which a buyer bidding `bid` has virtual level v."""
    return g.level_for(v / bid + 1.0)


def _fill_targets(g, current, bids, v):
    return {i: max(current[i], min(1.0, normalized_level_at(g, bids[i], v))) for i in current}


def _mass(current, bids, budgets, targets):
    return sum(budgets[i] * (targets[i] - current[i]) / bids[i] for i in current)


def virtual_water_filling(inst, g=None, tolerance=1e-12, max_iterations=200):
    """
    Each arriving item goes to the neighbours with the lowest virtual level
    b_ij (g(y_i / B_i) - 1), raising their virtual levels together. All the
    buyers fed by one item end at a common virtual level v (or stay above
    it), so the item is placed by bisecting on v until exactly one unit of
    mass is used, or every neighbour is full. Levels are floats.
    """
    require_kind(inst, "virtual_water_filling", InstanceKind.ONBAP)
    g = g or g_exponential()
    recorder = TraceRecorder("virtual-wf", inst)

    for item in inst.ordered_items():
        current, bids, budgets = {}, {}, {}
        for e in item.active_edges:
            budget = inst.budgets[e.buyer]
            if budget == 0:
                continue
            y = float(recorder.levels[e.buyer] / budget)
            if virtual_level(g, float(e.bid), y) < 0:
                current[e.buyer] = y
                bids[e.buyer] = float(e.bid)
                budgets[e.buyer] = float(budget)
        if not current:
            recorder.record(item, {})
            continue

        chosen = _fill_targets(g, current, bids, 0.0)
        scale = 1.0
        total = _mass(current, bids, budgets, chosen)
        if total > 1.0:
            lo = min(virtual_level(g, bids[i], current[i]) for i in current)
            hi = 0.0
            for _ in range(max_iterations):
                if hi - lo <= tolerance:
                    break
                mid = (lo + hi) / 2
                if _mass(current, bids, budgets, _fill_targets(g, current, bids, mid)) < 1.0:
                    lo = mid
                else:
                    hi = mid
            else:
                raise ConvergenceError("Bisection on the virtual level of item %s did not converge in %s iterations" % (item.id, max_iterations))
            chosen = _fill_targets(g, current, bids, hi)
            scale = 1.0 / _mass(current, bids, budgets, chosen)

        allocated, targets = {}, {}
        for i in current:
            rise = (chosen[i] - current[i]) * scale
            if rise <= 0:
                continue
            allocated[i] = budgets[i] * rise / bids[i]
            targets[i] = budgets[i] * min(1.0, current[i] + rise)
        recorder.record(item, allocated, targets=targets)

    alloc, trace = recorder.finish()
    log("virtual water-filling primal %s over %s items" % (float(alloc.value()), len(inst.items)), level=LogLevel.Debug, category="virtual_water_filling")
    return alloc, trace
