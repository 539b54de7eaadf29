#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

from fractions import Fraction

import networkx as nx
from networkx.algorithms import flow

from components.logging import LogLevel, log, logEntryExitNoArgs
from components.models import Allocation, InstanceKind, InstanceError
from components.providerbase import BaseProvider, INeedsLoggingProvider
from components.simplex import LinearProgram, LpStatus, solve_lp
from components.utilities import Memoize, MemoizeImpl


def offline_lp(inst):
    """
    The primal LP of an instance: one variable per positive-bid edge,
    maximize sum b x subject to sum_j w x <= B per buyer and sum_i x <= 1
    per item. Returns the LP and the (buyer, item) key of each variable.
    """
    keys = []
    objective = []
    for item in inst.items:
        for e in item.active_edges:
            keys.append((e.buyer, item.id))
            objective.append(e.bid)
    lp = LinearProgram(objective, maximize=True, names=["x[%s,%s]" % k for k in keys])

    for buyer in inst.buyers:
        row = [Fraction(0)] * len(keys)
        used = False
        for n, (i, j) in enumerate(keys):
            if i == buyer.id:
                row[n] = inst.edge(i, j).weight
                used = True
        if used:
            lp.add_constraint(row, '<=', buyer.budget)

    for item in inst.items:
        row = [Fraction(1) if j == item.id else Fraction(0) for (_, j) in keys]
        if any(row):
            lp.add_constraint(row, '<=', Fraction(1))
    return lp, keys


def offline_opt(inst):
    """Exact optimum of the instance's primal LP, with an optimal allocation."""
    lp, keys = offline_lp(inst)
    if not keys:
        return Fraction(0), Allocation.empty(inst)
    solution = solve_lp(lp)
    # x = 0 is always feasible and the item rows bound every variable
    assert solution.status == LpStatus.OPTIMAL, "The offline LP cannot be %s" % solution.status.value
    alloc = Allocation(inst, {k: v for k, v in zip(keys, solution.x)})
    log("OPT = %s over %s edges" % (solution.value, len(keys)), level=LogLevel.Debug, category="offline_opt")
    return solution.value, alloc


def factor_revealing_lp(k):
    """
    max alpha s.t. sum_t c_t <= 1 and alpha <= sum_{t<=s} c_t 2^(t-s) for
    every s < k. The optimum bounds the ratio any online algorithm can
    guarantee on the k-bundle hard family.
    """
    if k < 1:
        raise ValueError("factor_revealing_lp needs k >= 1, got %s" % k)
    # variables: c_0 .. c_{k-1}, alpha
    lp = LinearProgram([Fraction(0)] * k + [Fraction(1)], maximize=True,
                       names=["c%s" % t for t in range(k)] + ["alpha"])
    lp.add_constraint([Fraction(1)] * k + [Fraction(0)], '<=', Fraction(1))
    for s in range(k):
        row = [-Fraction(2) ** (t - s) if t <= s else Fraction(0) for t in range(k)] + [Fraction(1)]
        lp.add_constraint(row, '<=', Fraction(0))
    solution = solve_lp(lp)
    assert solution.status == LpStatus.OPTIMAL
    return solution.value, solution.x[:k]


def max_flow_matching_value(inst):
    """Maximum matching size through a unit-capacity flow network."""
    if inst.kind != InstanceKind.MATCHING:
        raise InstanceError("max_flow_matching_value needs a matching instance")
    network = nx.DiGraph()
    network.add_node("source")
    network.add_node("sink")
    for buyer in inst.buyers:
        network.add_edge(("buyer", buyer.id), "sink", capacity=1)
    for item in inst.items:
        network.add_edge("source", ("item", item.id), capacity=1)
        for e in item.active_edges:
            network.add_edge(("item", item.id), ("buyer", e.buyer), capacity=1)
    return Fraction(flow.maximum_flow_value(network, "source", "sink"))


class SolverProvider(BaseProvider, INeedsLoggingProvider):
    def __init__(self, config):
        self.config = config

    @logEntryExitNoArgs
    @Memoize
    def offline_opt(self, inst):
        return offline_opt(inst)

    def _reset(self):
        self.logger.log("Offline optimum cache: %s hits, %s misses" % (MemoizeImpl.hits, MemoizeImpl.misses), level=LogLevel.Debug)

    def factor_revealing_lp(self, k):
        alpha, c = factor_revealing_lp(k)
        self.logger.log("Factor-revealing LP for k=%s: alpha*=%s" % (k, alpha), level=LogLevel.Info)
        return alpha, c
