#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

from components.models import DualSolution, InstanceError, InstanceKind
from components.utilities import FrozenDict


def _closing_level(record):
    # 1 when the item was not used up or raised nobody
    if record.mass < 1 or not record.increased:
        return 1.0
    return float(min(record.after[i] for i in record.increased))


def build_dual_bounded_degree(trace, g):
    """
    Deterministic dual for a water-filling run: alpha_i = G(y_i)/F on the
    final level and beta_j = 1 - G(l_j)/F on the level l_j item j filled
    its buyers to. Feasible outright. The sum of squared per-item gains is
    carried as the quadratic correction of the degree-dependent bound.
    """
    inst = trace.instance
    if inst.kind != InstanceKind.MATCHING:
        raise InstanceError("bounded-degree duals are built on matching runs")
    alpha = {i: g.G(float(y)) / g.F for i, y in trace.final_levels.items()}
    beta = {item.id: 0.0 for item in inst.items}
    for r in trace.records:
        beta[r.item] = 1.0 - g.G(_closing_level(r)) / g.F
    correction = sum(float(r.delta_primal) ** 2 for r in trace.records)
    return DualSolution("bounded-degree", inst, FrozenDict(alpha), FrozenDict(beta), correction)


def band1_bound(primal, correction, d, g):
    """primal/F - g'(0)/(2dF) * sum (delta primal)^2; the dual never exceeds it."""
    if d == 0:
        return float(primal) / g.F
    return float(primal) / g.F - g.g_prime(0.0) / (2.0 * d * g.F) * correction


def band2_holds(primal, correction, tolerance=1e-12):
    """sum (delta primal)^2 >= primal / 4."""
    return correction >= float(primal) / 4.0 - tolerance


def bounded_degree_bound(d, g):
    """The ratio primal/dual is at least 1 / (1/F - g'(0)/(8dF)) when every item has degree <= d."""
    return 1.0 / (1.0 / g.F - g.g_prime(0.0) / (8.0 * d * g.F))
