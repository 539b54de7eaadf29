#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import dataclasses
from enum import Enum, unique
from fractions import Fraction
from functools import cached_property
from typing import Optional, Tuple

import numpy as np

from components.utilities import FrozenDict


class InstanceError(Exception):
    pass


class InfeasibleAllocationError(Exception):
    pass


class TapeError(Exception):
    pass


@unique
class InstanceKind(Enum):
    MATCHING = "matching"
    ONBAP = "onbap"
    ONGAP = "ongap"


@unique
class TapeKind(Enum):
    U = "U"
    Z = "Z"


class FieldState:
    """
    cached_property entries live in __dict__; keep them out of pickles so the
    pickled form (the Memoize key) does not depend on what was accessed.
    """

    def __getstate__(self):
        return {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}

    def __setstate__(self, state):
        for k, v in state.items():
            object.__setattr__(self, k, v)


# ====================================================================
# The market
#
#   buyers (offline, budget B_i)    items (online, arrive in `arrival` order)
#        b1 ----------------------- j1      edge: bid b_ij (value),
#        b2 ----------------------- j1            weight w_ij (budget use)
#        b2 ----------------------- j2
#
# Matching is OnBAP with B = b = w = 1, and OnBAP is OnGAP with w = b, so
# a buyer's water level is always sum_j w_ij x_ij and the value sum b_ij x_ij.
# ====================================================================

@dataclasses.dataclass(frozen=True)
class Buyer:
    id: str
    budget: Fraction


@dataclasses.dataclass(frozen=True)
class Edge:
    buyer: str
    bid: Fraction
    weight: Fraction


@dataclasses.dataclass(frozen=True)
class Item(FieldState):
    id: str
    edges: Tuple[Edge, ...]

    @cached_property
    def active_edges(self):
        # Zero-bid edges can never carry value, so no algorithm allocates on them
        return tuple(e for e in self.edges if e.bid > 0)

    def edge(self, buyer_id):
        for e in self.edges:
            if e.buyer == buyer_id:
                return e
        return None


@dataclasses.dataclass(frozen=True)
class Instance(FieldState):
    kind: InstanceKind
    buyers: Tuple[Buyer, ...]
    items: Tuple[Item, ...]
    arrival: Tuple[str, ...]
    warnings: Tuple[str, ...] = dataclasses.field(default=(), compare=False)

    @cached_property
    def budgets(self):
        return {b.id: b.budget for b in self.buyers}

    @cached_property
    def item_map(self):
        return {i.id: i for i in self.items}

    @cached_property
    def buyer_rank(self):
        return {b.id: n for n, b in enumerate(self.buyers)}

    def item(self, item_id):
        return self.item_map[item_id]

    def edge(self, buyer_id, item_id):
        return self.item_map[item_id].edge(buyer_id)

    def edges(self):
        """Yields (buyer id, item id, Edge) for every edge, items in list order."""
        for item in self.items:
            for e in item.edges:
                yield e.buyer, item.id, e

    def ordered_items(self):
        return [self.item_map[j] for j in self.arrival]

    @cached_property
    def max_degree(self):
        return max([len(i.active_edges) for i in self.items], default=0)

    @cached_property
    def max_bid_to_budget(self):
        ratios = [e.bid / self.budgets[e.buyer] for _, _, e in self.edges() if self.budgets[e.buyer] > 0]
        return max(ratios, default=Fraction(0))

    def with_arrival(self, order):
        order = tuple(order)
        if sorted(order) != sorted(self.arrival):
            raise InstanceError("arrival must be a permutation of the item ids")
        return dataclasses.replace(self, arrival=order)

    def restricted(self, order):
        """The sub-instance made of the items in `order`, arriving in that order."""
        order = tuple(order)
        if len(set(order)) != len(order) or any(j not in self.item_map for j in order):
            raise InstanceError("restricted order must list distinct existing item ids")
        keep = set(order)
        return dataclasses.replace(self, items=tuple(i for i in self.items if i.id in keep), arrival=order)


class Allocation:
    """
    A fractional assignment x[(buyer, item)] for an instance. Values are
    Fractions from the exact algorithms and floats from the others.
    """

    def __init__(self, instance, x):
        self.instance = instance
        self.x = FrozenDict({k: v for k, v in x.items() if v != 0})

    @staticmethod
    def empty(instance):
        return Allocation(instance, {})

    def get(self, buyer_id, item_id):
        return self.x.get((buyer_id, item_id), 0)

    @cached_property
    def levels(self):
        levels = {b.id: Fraction(0) for b in self.instance.buyers}
        for (i, j), amount in self.x.items():
            levels[i] = levels[i] + self.instance.edge(i, j).weight * amount
        return FrozenDict(levels)

    def level(self, buyer_id):
        return self.levels[buyer_id]

    def normalized_level(self, buyer_id):
        budget = self.instance.budgets[buyer_id]
        if budget == 0:
            return Fraction(1)
        return self.levels[buyer_id] / budget

    def item_mass(self, item_id):
        return sum((v for (i, j), v in self.x.items() if j == item_id), Fraction(0))

    def value(self):
        return sum((self.instance.edge(i, j).bid * v for (i, j), v in self.x.items()), Fraction(0))

    def is_integral(self):
        return all(v == 1 for v in self.x.values())

    def violations(self, tolerance=0):
        problems = []
        for (i, j), v in self.x.items():
            if self.instance.edge(i, j) is None:
                problems.append("x[%s,%s] is not on an edge" % (i, j))
            elif v < 0:
                problems.append("x[%s,%s] = %s is negative" % (i, j, v))
        if problems:
            return problems
        for item in self.instance.items:
            mass = self.item_mass(item.id)
            if mass > 1 + tolerance:
                problems.append("item %s allocated mass %s > 1" % (item.id, mass))
        for buyer in self.instance.buyers:
            if self.levels[buyer.id] > buyer.budget + tolerance:
                problems.append("buyer %s spent %s > budget %s" % (buyer.id, self.levels[buyer.id], buyer.budget))
        return problems

    def scaled(self, factor):
        return Allocation(self.instance, {k: v * factor for k, v in self.x.items()})

    def __repr__(self):
        return "Allocation(%s)" % dict(self.x)


@dataclasses.dataclass(frozen=True)
class ItemRecord:
    """What happened while one item was processed."""
    item: str
    rank: int
    before: FrozenDict        # buyer -> level y_old, for every active neighbour
    after: FrozenDict         # buyer -> level y_new (the critical levels Y^c)
    allocated: FrozenDict     # buyer -> x_ij, non-zero entries only
    delta_primal: object
    skipped: bool = False
    max_bidder: Optional[str] = None

    @property
    def increased(self):
        return frozenset(i for i in self.after if self.after[i] > self.before[i])

    @property
    def mass(self):
        return sum(self.allocated.values(), Fraction(0))


@dataclasses.dataclass(frozen=True)
class RunTrace(FieldState):
    algorithm: str
    instance: Instance
    records: Tuple[ItemRecord, ...]
    final_levels: FrozenDict

    @property
    def order(self):
        return tuple(r.item for r in self.records)

    @cached_property
    def record_map(self):
        return {r.item: r for r in self.records}

    def record(self, item_id):
        return self.record_map[item_id]

    def critical_level(self, buyer_id, item_id):
        return self.record_map[item_id].after[buyer_id]

    def primal(self):
        return sum((r.delta_primal for r in self.records), Fraction(0))

    def skipped(self):
        return [r.item for r in self.records if r.skipped]


@dataclasses.dataclass(frozen=True)
class DualSolution:
    """
    A realized (alpha, beta). The dual constraint of edge (i, j) is
    w_ij alpha_i + beta_j >= b_ij, which is alpha_i + beta_j >= 1 for
    matching and b_ij alpha_i + beta_j >= b_ij for OnBAP.
    """
    builder: str
    instance: Instance
    alpha: FrozenDict
    beta: FrozenDict
    quadratic_correction: float = 0.0

    def objective(self):
        budgets = self.instance.budgets
        return sum(float(budgets[i]) * a for i, a in self.alpha.items()) + sum(self.beta.values())

    def lhs(self, buyer_id, item_id):
        e = self.instance.edge(buyer_id, item_id)
        return float(e.weight) * self.alpha[buyer_id] + self.beta[item_id]

    def slack(self, buyer_id, item_id):
        return self.lhs(buyer_id, item_id) - float(self.instance.edge(buyer_id, item_id).bid)

    def negative_betas(self):
        return sorted(j for j, b in self.beta.items() if b < 0)


@dataclasses.dataclass(frozen=True)
class RandomTape:
    kind: TapeKind
    values: FrozenDict
    seed: Optional[int] = None
    trial: Optional[int] = None

    def __post_init__(self):
        for k, v in self.values.items():
            if not 0 <= v <= 1:
                raise TapeError("tape value %s for %s is outside [0,1]" % (v, k))

    @staticmethod
    def draw(kind, ids, seed, trial=None):
        rng = np.random.default_rng(seed if trial is None else [seed, trial])
        draws = rng.random(len(ids))
        return RandomTape(kind, FrozenDict(zip(ids, (float(d) for d in draws))), seed, trial)

    @staticmethod
    def for_buyers(instance, seed, trial=None):
        return RandomTape.draw(TapeKind.U, [b.id for b in instance.buyers], seed, trial)

    @staticmethod
    def for_items(instance, seed, trial=None):
        return RandomTape.draw(TapeKind.Z, [i.id for i in instance.items], seed, trial)

    def arrival_order(self):
        if self.kind != TapeKind.Z:
            raise TapeError("Only a Z tape induces an arrival order")
        # Equal Z values are a probability-zero event; the item id keeps it deterministic
        return tuple(sorted(self.values, key=lambda j: (self.values[j], j)))

    def require(self, kind, ids):
        if self.kind != kind:
            raise TapeError("Expected a %s tape, got a %s tape" % (kind.value, self.kind.value))
        if set(self.values) != set(ids):
            raise TapeError("Tape ids %s do not match %s" % (sorted(self.values), sorted(ids)))


@dataclasses.dataclass(frozen=True)
class ExpectedDual:
    """
    E[alpha], E[beta] and the per-edge E[w alpha + beta], either in closed
    form over the U tape or estimated from sampled tapes (with standard
    errors).
    """
    builder: str
    instance: Instance
    alpha: FrozenDict
    beta: FrozenDict
    edge_lhs: FrozenDict
    edge_se: FrozenDict
    mode: str
    trials: Optional[int] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if self.mode == "closed_form":
            assert all(se == 0 for se in self.edge_se.values()), "closed-form expectations carry no standard error"
        elif self.mode == "monte_carlo":
            assert self.trials is not None and self.trials >= 1, "Monte Carlo expectations need at least one trial"

    def objective(self):
        budgets = self.instance.budgets
        return sum(float(budgets[i]) * a for i, a in self.alpha.items()) + sum(self.beta.values())

    @staticmethod
    def closed_form(builder, instance, alpha, beta):
        lhs = {}
        for i, j, e in instance.edges():
            if e.bid > 0:
                lhs[(i, j)] = float(e.weight) * alpha[i] + beta[j]
        return ExpectedDual(builder, instance, FrozenDict(alpha), FrozenDict(beta), FrozenDict(lhs),
                            FrozenDict({k: 0.0 for k in lhs}), "closed_form")
