#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

from components.models import DualSolution, ExpectedDual, InstanceError, InstanceKind, TapeKind
from components.utilities import FrozenDict


def _normalized(inst, buyer_id, level):
    budget = inst.budgets[buyer_id]
    return 1.0 if budget == 0 else float(level / budget)


def _threshold_dual(builder, trace, tape, g):
    """
    alpha_i = g(U_i) once buyer i's normalized level has passed U_i, else 0,
    updated as each item is processed; beta_j takes the rest of the item's
    primal gain, so the dual objective tracks the primal exactly.
    """
    inst = trace.instance
    tape.require(TapeKind.U, [b.id for b in inst.buyers])
    alpha = {b.id: 0.0 for b in inst.buyers}
    beta = {}
    for r in trace.records:
        spent = 0.0
        for i in r.increased:
            u = tape.values[i]
            new = g.g(u) if u <= _normalized(inst, i, r.after[i]) else 0.0
            spent += float(inst.budgets[i]) * (new - alpha[i])
            alpha[i] = new
        beta[r.item] = float(r.delta_primal) - spent
    for item in inst.items:
        beta.setdefault(item.id, 0.0)
    return DualSolution(builder, inst, FrozenDict(alpha), FrozenDict(beta))


def _threshold_expectation(builder, trace, g):
    inst = trace.instance
    alpha = {i: g.G(_normalized(inst, i, y)) for i, y in trace.final_levels.items()}
    beta = {item.id: 0.0 for item in inst.items}
    for r in trace.records:
        spent = sum(float(inst.budgets[i]) * (g.G(_normalized(inst, i, r.after[i])) - g.G(_normalized(inst, i, r.before[i]))) for i in r.increased)
        beta[r.item] = float(r.delta_primal) - spent
    return ExpectedDual.closed_form(builder, inst, alpha, beta)


def build_dual_wf_worst(trace, tape, g):
    """The randomized dual for water-filling, and for RANKING when its priorities come from the same U tape."""
    if trace.instance.kind != InstanceKind.MATCHING:
        raise InstanceError("wf-worst duals are built on matching runs")
    return _threshold_dual("wf-worst", trace, tape, g)


def expected_dual_wf_worst(trace, g):
    """E[alpha_i] = G(final level); E[beta_j] = gain minus the G-increments of the buyers j raised."""
    if trace.instance.kind != InstanceKind.MATCHING:
        raise InstanceError("wf-worst duals are built on matching runs")
    return _threshold_expectation("wf-worst", trace, g)


def build_dual_vwf_worst(trace, tape, g):
    """The same threshold rule on normalized levels, with beta_j = gain - sum B_i delta alpha_i."""
    return _threshold_dual("vwf-worst", trace, tape, g)


def expected_dual_vwf_worst(trace, g):
    return _threshold_expectation("vwf-worst", trace, g)
