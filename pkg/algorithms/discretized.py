#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

# Step-by-step versions of the water-filling algorithms: every item is cut
# into chunks of size eps and each chunk goes to the single lowest buyer.
# They converge to the continuous processes as eps -> 0 and serve as
# independent oracles for the event-driven and bisection implementations.

from components.gfunction import g_exponential


def _discretized(inst, eps, key):
    budgets = {b.id: float(b.budget) for b in inst.buyers}
    levels = {b.id: 0.0 for b in inst.buyers}
    x = {}
    for item in inst.ordered_items():
        mass = 1.0
        while mass > 1e-15:
            open_edges = [e for e in item.active_edges if levels[e.buyer] < budgets[e.buyer] - 1e-15]
            if not open_edges:
                break
            e = min(open_edges, key=lambda e: (key(e, levels[e.buyer] / budgets[e.buyer]), e.buyer))
            w = float(e.weight)
            chunk = min(eps, mass, (budgets[e.buyer] - levels[e.buyer]) / w)
            levels[e.buyer] += w * chunk
            x[(e.buyer, item.id)] = x.get((e.buyer, item.id), 0.0) + chunk
            mass -= chunk
    return x, levels


def discretized_water_filling(inst, eps=1e-4):
    return _discretized(inst, eps, lambda e, normalized: normalized)


def discretized_virtual_water_filling(inst, g=None, eps=1e-4):
    g = g or g_exponential()
    return _discretized(inst, eps, lambda e, normalized: float(e.bid) * (g.g(normalized) - 1.0))
