#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

from algorithms.greedy import i_greedy
from components.models import DualSolution, InstanceError, InstanceKind, TapeError, TapeKind
from components.utilities import FrozenDict


def _check_order(trace, tape):
    inst = trace.instance
    tape.require(TapeKind.Z, [i.id for i in inst.items])
    if tuple(trace.order) != tape.arrival_order():
        raise TapeError("The run's arrival order %s is not the order induced by the Z tape %s" % (list(trace.order), list(tape.arrival_order())))


def _random_order_dual(builder, trace, tape, g, deleted=()):
    inst = trace.instance
    alpha = {b.id: 0.0 for b in inst.buyers}
    beta = {item.id: 0.0 for item in inst.items}
    for r in trace.records:
        if r.item in deleted:
            continue
        gz = g.g(tape.values[r.item])
        gain = 0.0
        for i, amount in r.allocated.items():
            e = inst.edge(i, r.item)
            value = float(e.bid) * float(amount)
            gain += value
            alpha[i] += value * (1.0 - gz) / float(inst.budgets[i])
        beta[r.item] = gain * gz
    return alpha, beta


def build_dual_random_order(trace, tape, g):
    """
    alpha_i grows by b x (1 - g(Z_j)) / B_i for every unit given to buyer i
    and beta_j = (sum_i b x) g(Z_j). Needs the run whose arrival order was
    sorted by this Z tape.
    """
    _check_order(trace, tape)
    alpha, beta = _random_order_dual("random-order", trace, tape, g)
    return DualSolution("random-order", trace.instance, FrozenDict(alpha), FrozenDict(beta))


def igreedy_skip_credit(trace, g):
    """F times the top neighbouring bid, summed over the items I-greedy skipped."""
    inst = trace.instance
    return sum(g.F * float(max(e.bid for e in inst.item(j).active_edges)) for j in trace.skipped())


def igreedy_factor(inst):
    return 1.0 + float(inst.max_bid_to_budget)


def igreedy_dual_for_trace(trace, tape, g):
    _check_order(trace, tape)
    inst = trace.instance
    skipped = set(trace.skipped())
    alpha, beta = _random_order_dual("igreedy", trace, tape, g, deleted=skipped)
    for j in skipped:
        beta[j] = g.F * float(max(e.bid for e in inst.item(j).active_edges))
    return DualSolution("igreedy", inst, FrozenDict(alpha), FrozenDict(beta))


def build_dual_igreedy(inst, tape, g, order=None):
    """
    Runs I-greedy in the order the Z tape induces, builds the random-order
    dual on the run with the skipped items deleted, and gives each skipped
    item beta_j = F * (its largest bid). Returns the dual with the factor
    1 + max b/B by which its objective may exceed I-greedy's.
    """
    if inst.kind != InstanceKind.ONBAP:
        raise InstanceError("igreedy duals are built on onbap instances")
    tape.require(TapeKind.Z, [i.id for i in inst.items])
    _, trace = i_greedy(inst.with_arrival(tape.arrival_order()), order)
    return igreedy_dual_for_trace(trace, tape, g), igreedy_factor(inst)
