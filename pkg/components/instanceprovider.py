#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import json
from fractions import Fraction

from components.logging import LogLevel, log, logEntryExit
from components.models import Allocation, Buyer, Edge, InfeasibleAllocationError, Instance, InstanceError, InstanceKind, Item
from components.providerbase import BaseProvider, INeedsLoggingProvider
from components.utilities import format_rational, parse_rational

# The canonical instance document. Omitted budget -> 1, bid -> 1,
# weight -> bid, arrival -> item list order. Numbers may be JSON numbers
# or "p/q" strings.
#
# {
#   "kind": "onbap",
#   "buyers": [{"id": "b1", "budget": 2}, {"id": "b2"}],
#   "items": [
#     {"id": "j1", "edges": [{"buyer": "b1", "bid": "3/2"}, {"buyer": "b2"}]}
#   ],
#   "arrival": ["j1"]
# }


def _number(value, what):
    try:
        result = parse_rational(value)
    except (ValueError, ZeroDivisionError, TypeError):
        raise InstanceError("%s is not a number: %r" % (what, value))
    if result < 0:
        raise InstanceError("%s must be nonnegative, got %s" % (what, result))
    return result


def _require_keys(obj, keys, what):
    if not isinstance(obj, dict):
        raise InstanceError("%s must be an object" % what)
    for k in keys:
        if k not in obj:
            raise InstanceError("%s is missing the '%s' key" % (what, k))


def parse_instance(doc):
    """Builds a validated Instance from an already-decoded JSON document."""
    _require_keys(doc, ['kind', 'buyers', 'items'], "Instance document")
    try:
        kind = InstanceKind(doc['kind'])
    except ValueError:
        raise InstanceError("Unknown instance kind %r; expected one of %s" % (doc['kind'], [k.value for k in InstanceKind]))

    buyers = []
    for b in doc['buyers']:
        _require_keys(b, ['id'], "Buyer")
        buyers.append(Buyer(str(b['id']), _number(b.get('budget', 1), "Budget of buyer %s" % b['id'])))

    items = []
    for i in doc['items']:
        _require_keys(i, ['id', 'edges'], "Item")
        edges = []
        for e in i['edges']:
            _require_keys(e, ['buyer'], "Edge of item %s" % i['id'])
            bid = _number(e.get('bid', 1), "Bid of (%s, %s)" % (e['buyer'], i['id']))
            weight = _number(e['weight'], "Weight of (%s, %s)" % (e['buyer'], i['id'])) if 'weight' in e else bid
            edges.append(Edge(str(e['buyer']), bid, weight))
        items.append(Item(str(i['id']), tuple(edges)))

    if 'arrival' in doc and doc['arrival'] is not None:
        arrival = tuple(str(j) for j in doc['arrival'])
    else:
        arrival = tuple(i.id for i in items)

    return validate_instance(kind, tuple(buyers), tuple(items), arrival)


def validate_instance(kind, buyers, items, arrival):
    """
    Checks the structural invariants and the per-kind rules, raising
    InstanceError naming the violated rule. Soft problems are returned as
    warnings on the instance.
    """
    buyer_ids = [b.id for b in buyers]
    if len(set(buyer_ids)) != len(buyer_ids):
        raise InstanceError("Buyer ids must be unique")
    item_ids = [i.id for i in items]
    if len(set(item_ids)) != len(item_ids):
        raise InstanceError("Item ids must be unique")
    if sorted(arrival) != sorted(item_ids):
        raise InstanceError("arrival must be a permutation of the item ids")

    budgets = {b.id: b.budget for b in buyers}
    warnings = []
    for item in items:
        seen = set()
        for e in item.edges:
            if e.buyer not in budgets:
                raise InstanceError("Item %s has an edge to unknown buyer %s" % (item.id, e.buyer))
            if e.buyer in seen:
                raise InstanceError("Item %s has two edges to buyer %s" % (item.id, e.buyer))
            seen.add(e.buyer)

            if kind == InstanceKind.MATCHING:
                if e.bid not in (0, 1) or e.weight != 1:
                    raise InstanceError("Matching instances require bid = weight = 1 on every edge; (%s, %s) has bid %s weight %s" % (e.buyer, item.id, e.bid, e.weight))
            elif kind == InstanceKind.ONBAP:
                if e.weight != e.bid:
                    raise InstanceError("OnBAP instances require weight = bid on every edge; (%s, %s) has bid %s weight %s" % (e.buyer, item.id, e.bid, e.weight))
                if e.bid > budgets[e.buyer]:
                    warnings.append("b_ij <= B_i violated on (%s, %s): bid %s > budget %s" % (e.buyer, item.id, e.bid, budgets[e.buyer]))
            elif kind == InstanceKind.ONGAP:
                if e.bid > 0 and e.weight > e.bid:
                    raise InstanceError("OnGAP instances require w <= b on every edge; (%s, %s) has bid %s weight %s" % (e.buyer, item.id, e.bid, e.weight))

    if kind == InstanceKind.MATCHING:
        for b in buyers:
            if b.budget != 1:
                raise InstanceError("Matching instances require every budget to be 1; buyer %s has %s" % (b.id, b.budget))

    for w in warnings:
        log(w, level=LogLevel.Warning, category="validate_instance")

    return Instance(kind, buyers, items, tuple(arrival), tuple(warnings))


def load_instance(text):
    try:
        doc = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as e:
        raise InstanceError("Could not parse the instance document: %s" % e)
    return parse_instance(doc)


def instance_to_dict(inst):
    return {
        'kind': inst.kind.value,
        'buyers': [{'id': b.id, 'budget': format_rational(b.budget)} for b in inst.buyers],
        'items': [{'id': i.id, 'edges': [{'buyer': e.buyer, 'bid': format_rational(e.bid), 'weight': format_rational(e.weight)} for e in i.edges]} for i in inst.items],
        'arrival': list(inst.arrival)
    }


def dump_instance(inst):
    return json.dumps(instance_to_dict(inst), indent=2)


def primal_value(inst, alloc, tolerance=0):
    """sum of b_ij x_ij over the allocation, after checking it is feasible for inst."""
    if alloc.instance.items != inst.items or alloc.instance.buyers != inst.buyers:
        raise InfeasibleAllocationError("The allocation belongs to a different instance")
    problems = alloc.violations(tolerance)
    if problems:
        raise InfeasibleAllocationError("; ".join(problems))
    return alloc.value()


def allocation_from_dict(inst, doc):
    x = {}
    for entry in doc:
        _require_keys(entry, ['buyer', 'item', 'x'], "Allocation entry")
        x[(str(entry['buyer']), str(entry['item']))] = _number(entry['x'], "x[%s,%s]" % (entry['buyer'], entry['item']))
    return Allocation(inst, x)


def allocation_to_dict(alloc):
    result = []
    for (i, j), v in sorted(alloc.x.items()):
        result.append({'buyer': i, 'item': j, 'x': format_rational(v) if isinstance(v, (int, Fraction)) else float(v)})
    return result


class InstanceProvider(BaseProvider, INeedsLoggingProvider):
    def __init__(self, config):
        self.config = config

    @logEntryExit
    def load(self, path):
        with open(path, "r") as f:
            inst = load_instance(f.read())
        self.logger.log("Loaded %s instance from %s: %s buyers, %s items" % (inst.kind.value, path, len(inst.buyers), len(inst.items)), level=LogLevel.Info)
        for w in inst.warnings:
            self.logger.log(w, level=LogLevel.Warning)
        return inst

    def save(self, inst, path):
        with open(path, "w") as f:
            f.write(dump_instance(inst))
        self.logger.log("Wrote instance to %s" % path, level=LogLevel.Debug)
