#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import re
from fractions import Fraction

from components.instanceprovider import validate_instance
from components.models import Buyer, Edge, InstanceError, InstanceKind, Item

# One buyer with budget 1 and k bundles arriving in index order. Bundle t
# holds 2^t items, each bidding 1 with weight 2^-t, so the whole budget
# spent on bundle t is worth 2^t. An online algorithm must decide how much
# budget to keep for bundles that may never come (their bids drop to 0).

BUYER = "b1"
_BUNDLE = re.compile(r"^bundle(\d+)-(\d+)$")


def bundle_of(item_id):
    m = _BUNDLE.match(item_id)
    if not m:
        raise InstanceError("%s is not a hard-instance item id" % item_id)
    return int(m.group(1))


def gen_hard_instance(k):
    if k < 1:
        raise InstanceError("The hard instance needs k >= 1 bundles, got %s" % k)
    items = []
    for t in range(k):
        weight = Fraction(1, 2 ** t)
        for m in range(2 ** t):
            items.append(Item("bundle%s-%s" % (t, m), (Edge(BUYER, Fraction(1), weight),)))
    return validate_instance(InstanceKind.ONGAP, (Buyer(BUYER, Fraction(1)),), tuple(items), tuple(i.id for i in items))


def bundle_count(inst):
    return max(bundle_of(i.id) for i in inst.items) + 1


def truncate_hard_instance(inst, s):
    """Zeroes the bids of bundles after s, leaving weights alone; the optimum becomes 2^s."""
    k = bundle_count(inst)
    if not 0 <= s < k:
        raise InstanceError("Truncation index %s is outside 0..%s" % (s, k - 1))
    items = []
    for item in inst.items:
        if bundle_of(item.id) > s:
            items.append(Item(item.id, tuple(Edge(e.buyer, Fraction(0), e.weight) for e in item.edges)))
        else:
            items.append(item)
    return validate_instance(InstanceKind.ONGAP, inst.buyers, tuple(items), inst.arrival)


def bundle_masses(inst, alloc):
    """c_t = sum of w x over bundle t: the share of the budget spent on it."""
    c = [Fraction(0)] * bundle_count(inst)
    for (i, j), v in alloc.x.items():
        c[bundle_of(j)] += inst.edge(i, j).weight * v
    return c


def truncation_ratios(inst, alloc):
    """
    For a run on the full instance, what the same decisions earn on each
    truncation relative to its optimum: sum_{t<=s} c_t 2^(t-s). An online
    algorithm cannot tell the truncations apart before they end.
    """
    c = bundle_masses(inst, alloc)
    return [sum(c[t] * Fraction(2) ** (t - s) for t in range(s + 1)) for s in range(len(c))]
