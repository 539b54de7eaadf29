#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

from fractions import Fraction

from components.models import Allocation, InstanceError, ItemRecord, RunTrace
from components.utilities import FrozenDict


def require_kind(inst, algorithm, *kinds):
    if inst.kind not in kinds:
        raise InstanceError("%s runs on %s instances, not %s" % (algorithm, " or ".join(k.value for k in kinds), inst.kind.value))


class TraceRecorder:
    """
    Accumulates x, the buyers' water levels and one ItemRecord per processed
    item. Levels start as exact zeros; float allocations turn them into
    floats as they come in.
    """

    def __init__(self, algorithm, inst):
        self.algorithm = algorithm
        self.inst = inst
        self.levels = {b.id: Fraction(0) for b in inst.buyers}
        self.x = {}
        self.records = []

    def remaining(self, buyer_id):
        return self.inst.budgets[buyer_id] - self.levels[buyer_id]

    def normalized(self, buyer_id):
        budget = self.inst.budgets[buyer_id]
        return Fraction(1) if budget == 0 else self.levels[buyer_id] / budget

    def record(self, item, allocated, skipped=False, max_bidder=None, targets=None):
        """
        allocated maps buyer -> x_ij for this item. targets, when given, are
        the exact levels the algorithm computed for the buyers it fed; they
        replace level + w x so float round-off does not push a buyer past
        its budget.
        """
        before = {e.buyer: self.levels[e.buyer] for e in item.active_edges}
        delta = Fraction(0)
        nonzero = {}
        for buyer, amount in allocated.items():
            if amount == 0:
                continue
            e = item.edge(buyer)
            nonzero[buyer] = amount
            self.x[(buyer, item.id)] = amount
            self.levels[buyer] = targets[buyer] if targets else self.levels[buyer] + e.weight * amount
            delta += e.bid * amount
        after = {i: self.levels[i] for i in before}
        self.records.append(ItemRecord(item.id, len(self.records), FrozenDict(before), FrozenDict(after),
                                       FrozenDict(nonzero), delta, skipped, max_bidder))

    def finish(self):
        alloc = Allocation(self.inst, self.x)
        trace = RunTrace(self.algorithm, self.inst, tuple(self.records), FrozenDict(self.levels))
        return alloc, trace


def check_greedy(trace, tolerance=0, max_bid=False):
    """
    Lists the items where the run was not greedy: some item mass was left
    unallocated although a neighbour still had budget. With max_bid, mass
    going to a buyer while a strictly higher bidder still had budget is
    reported too.
    """
    inst = trace.instance
    problems = []
    for r in trace.records:
        item = inst.item(r.item)
        open_after = [e for e in item.active_edges if r.after[e.buyer] < inst.budgets[e.buyer] - tolerance]
        if r.mass < 1 - tolerance and open_after:
            problems.append("item %s left %s unallocated while %s had budget" % (r.item, 1 - r.mass, sorted(e.buyer for e in open_after)))
        if max_bid and open_after and r.allocated:
            best_open = max(e.bid for e in open_after)
            for buyer in r.allocated:
                if item.edge(buyer).bid < best_open:
                    problems.append("item %s went to %s while a higher bidder had budget" % (r.item, buyer))
    return problems
