#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

from fractions import Fraction

from algorithms.base import TraceRecorder, require_kind
from components.logging import LogLevel, log
from components.models import InstanceError, InstanceKind, RandomTape, TapeKind


def priority_order(inst, priorities):
    """
    Buyers from highest to lowest priority. priorities is an explicit list
    (highest first), an int seed for a fresh U tape, or a U tape itself;
    on a tape a smaller U means a higher priority.
    """
    if isinstance(priorities, RandomTape):
        priorities.require(TapeKind.U, [b.id for b in inst.buyers])
        return sorted(priorities.values, key=lambda i: (priorities.values[i], i))
    if isinstance(priorities, int) and not isinstance(priorities, bool):
        return priority_order(inst, RandomTape.for_buyers(inst, priorities))
    order = list(priorities)
    if sorted(order) != sorted(b.id for b in inst.buyers):
        raise InstanceError("ranking priorities must list every buyer exactly once")
    return order


def ranking(inst, priorities=0):
    """Matches each arriving item to its highest-priority unmatched neighbour, if any."""
    require_kind(inst, "ranking", InstanceKind.MATCHING)
    order = priority_order(inst, priorities)
    rank = {b: n for n, b in enumerate(order)}
    recorder = TraceRecorder("ranking", inst)

    for item in inst.ordered_items():
        free = [e.buyer for e in item.active_edges if recorder.remaining(e.buyer) > 0]
        if free:
            recorder.record(item, {min(free, key=lambda i: rank[i]): Fraction(1)})
        else:
            recorder.record(item, {})

    alloc, trace = recorder.finish()
    log("ranking primal %s with priorities %s" % (alloc.value(), order), level=LogLevel.Debug2, category="ranking")
    return alloc, trace
