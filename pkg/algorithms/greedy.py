#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import zlib
from fractions import Fraction

import numpy as np

from algorithms.base import TraceRecorder, require_kind
from components.logging import LogLevel, log
from components.models import InstanceKind


class TiePolicy:
    """
    Orders buyers that tie on the bid. order() gets the arriving item, the
    tied candidates and the buyers' normalized levels, and must depend on
    nothing else.
    """
    name = "abstract"

    def order(self, item, candidates, levels):
        assert False, "Subclass should implement this function"

    def __repr__(self):
        return "%s(%s)" % (self.__class__.__name__, self.name)


class GlobalOrderPolicy(TiePolicy):
    """One fixed buyer order for every item; None means the instance's buyer list order."""
    name = "global"

    def __init__(self, buyer_order=None):
        self.buyer_order = list(buyer_order) if buyer_order is not None else None
        self.rank = {b: n for n, b in enumerate(self.buyer_order)} if buyer_order is not None else {}

    def order(self, item, candidates, levels):
        return sorted(candidates, key=lambda i: (self.rank.get(i, len(self.rank)), i))

    def bind(self, inst):
        if self.buyer_order is None:
            self.rank = dict(inst.buyer_rank)
        return self


class PerItemOrderPolicy(TiePolicy):
    """
    A different fixed buyer order for every item: either given explicitly
    as item -> list of buyers, or drawn per item from
    default_rng([seed, crc32(item id)]) so it does not depend on arrival.
    """

    def __init__(self, seed=None, orders=None):
        assert (seed is None) != (orders is None), "PerItemOrderPolicy needs exactly one of seed or orders"
        self.seed = seed
        self.orders = orders
        self.name = "per-item:%s" % seed if seed is not None else "per-item"

    def _ranking(self, item):
        if self.orders is not None:
            return {b: n for n, b in enumerate(self.orders.get(item.id, []))}
        neighbours = sorted(e.buyer for e in item.edges)
        rng = np.random.default_rng([self.seed, zlib.crc32(item.id.encode("utf-8"))])
        return {neighbours[k]: n for n, k in enumerate(rng.permutation(len(neighbours)))}

    def order(self, item, candidates, levels):
        rank = self._ranking(item)
        return sorted(candidates, key=lambda i: (rank.get(i, len(rank)), i))


class FullerFirstPolicy(TiePolicy):
    """Prefers the buyer with the higher normalized level. Not allocation-monotone."""
    name = "fuller-first"

    def order(self, item, candidates, levels):
        return sorted(candidates, key=lambda i: (-levels[i], i))


def tie_policy_from_string(text):
    if text in (None, "", "global"):
        return GlobalOrderPolicy()
    if text == "fuller-first":
        return FullerFirstPolicy()
    if text.startswith("per-item:"):
        try:
            return PerItemOrderPolicy(seed=int(text[len("per-item:"):]))
        except ValueError:
            pass
    raise ValueError("Unknown tie policy %r; expected global, per-item:SEED or fuller-first" % text)


def _ranked_candidates(inst, recorder, item, policy, open_only):
    candidates = [e for e in item.active_edges if not open_only or recorder.remaining(e.buyer) > 0]
    levels = {e.buyer: recorder.normalized(e.buyer) for e in candidates}
    result = []
    for bid in sorted(set(e.bid for e in candidates), reverse=True):
        tied = [e.buyer for e in candidates if e.bid == bid]
        result.extend(policy.order(item, tied, levels))
    return result


def greedy_fractional(inst, policy=None):
    """
    Feeds each item to the highest bidder that still has budget, moving on
    to the next one (ties ordered by the policy) when that budget runs out,
    until the item is used up or no neighbour has budget left.
    """
    require_kind(inst, "greedy_fractional", InstanceKind.MATCHING, InstanceKind.ONBAP)
    policy = policy or GlobalOrderPolicy()
    if isinstance(policy, GlobalOrderPolicy):
        policy.bind(inst)
    recorder = TraceRecorder("greedy", inst)

    for item in inst.ordered_items():
        mass = Fraction(1)
        allocated = {}
        for buyer in _ranked_candidates(inst, recorder, item, policy, open_only=True):
            if mass == 0:
                break
            e = item.edge(buyer)
            amount = min(mass, recorder.remaining(buyer) / e.weight)
            allocated[buyer] = amount
            mass -= amount
        recorder.record(item, allocated)

    alloc, trace = recorder.finish()
    log("greedy (%s) primal %s" % (policy.name, alloc.value()), level=LogLevel.Debug, category="greedy_fractional")
    return alloc, trace


def i_greedy(inst, order=None):
    """
    Integral greedy: the item goes whole to the highest bidder whose budget
    is not exhausted (ties by the fixed buyer order) if the bid fits in
    what is left of that budget; otherwise the item is skipped.
    """
    require_kind(inst, "i_greedy", InstanceKind.ONBAP)
    policy = GlobalOrderPolicy(order).bind(inst)
    recorder = TraceRecorder("i-greedy", inst)

    for item in inst.ordered_items():
        ranked = _ranked_candidates(inst, recorder, item, policy, open_only=True)
        if not ranked:
            recorder.record(item, {})
            continue
        best = ranked[0]
        if item.edge(best).bid <= recorder.remaining(best):
            recorder.record(item, {best: Fraction(1)}, max_bidder=best)
        else:
            recorder.record(item, {}, skipped=True, max_bidder=best)

    alloc, trace = recorder.finish()
    log("i-greedy primal %s, skipped %s" % (alloc.value(), trace.skipped()), level=LogLevel.Debug, category="i_greedy")
    return alloc, trace
