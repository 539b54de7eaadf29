#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import math
from fractions import Fraction

import numpy as np

from components.instanceprovider import validate_instance
from components.models import Buyer, Edge, InstanceKind, Item
from ongap.hardinstance import gen_hard_instance


class GeneratorError(Exception):
    pass


# family -> (required params, optional params with defaults)
FAMILIES = {
    'triangular': (['n'], {}),
    'complete': (['n', 'm'], {}),
    'random_matching': (['n', 'm', 'p'], {}),
    'random_onbap': (['n', 'm', 'p'], {'bid_min': Fraction(1, 4), 'bid_max': Fraction(1), 'budget_min': Fraction(1), 'budget_max': Fraction(3), 'cap': 1}),
    'random_ongap': (['n', 'm', 'p'], {'weight_min': Fraction(1, 4), 'weight_max': Fraction(1), 'eta_max': Fraction(4), 'budget_min': Fraction(1), 'budget_max': Fraction(3)}),
    'ongap_hard': (['k'], {}),
}

# Random rationals are drawn on this grid
DENOMINATOR = 4


def parse_params(text):
    """'n=5,m=5,p=1/2' -> {'n': 5, 'm': 5, 'p': Fraction(1, 2)}"""
    params = {}
    if not text:
        return params
    for part in text.split(","):
        if "=" not in part:
            raise GeneratorError("Generator parameter %r is not of the form name=value" % part)
        name, value = part.split("=", 1)
        try:
            params[name.strip()] = Fraction(value.strip())
        except ValueError:
            raise GeneratorError("Generator parameter %s has a non-numeric value %r" % (name, value))
    return params


def _check(family, params):
    if family not in FAMILIES:
        raise GeneratorError("Unknown family %r; expected one of %s" % (family, sorted(FAMILIES)))
    required, optional = FAMILIES[family]
    for name in required:
        if name not in params:
            raise GeneratorError("Family %s needs the parameter %s" % (family, name))
    for name in params:
        if name not in required and name not in optional:
            raise GeneratorError("Family %s does not take the parameter %s" % (family, name))
    result = dict(optional)
    result.update(params)
    for name in ('n', 'm', 'k'):
        if name in result and (result[name] != int(result[name]) or result[name] < 1):
            raise GeneratorError("%s must be a positive integer, got %s" % (name, result[name]))
    if 'p' in result and not 0 <= result['p'] <= 1:
        raise GeneratorError("p must lie in [0, 1], got %s" % result['p'])
    for low, high in (('bid_min', 'bid_max'), ('budget_min', 'budget_max'), ('weight_min', 'weight_max')):
        if low in result and not 0 < result[low] <= result[high]:
            raise GeneratorError("Need 0 < %s <= %s, got %s and %s" % (low, high, result[low], result[high]))
    if 'eta_max' in result and result['eta_max'] < 1:
        raise GeneratorError("eta_max must be at least 1, got %s" % result['eta_max'])
    return result


def _rational(rng, low, high):
    """A uniform draw from the multiples of 1/DENOMINATOR in [low, high]."""
    lo = math.ceil(low * DENOMINATOR)
    hi = math.floor(high * DENOMINATOR)
    if hi < lo:
        raise GeneratorError("No multiple of 1/%s lies in [%s, %s]" % (DENOMINATOR, low, high))
    return Fraction(int(rng.integers(lo, hi + 1)), DENOMINATOR)


def _buyers(n, budgets=None):
    return tuple(Buyer("b%s" % (i + 1), budgets[i] if budgets else Fraction(1)) for i in range(n))


def _unit_edges(buyer_ids):
    return tuple(Edge(b, Fraction(1), Fraction(1)) for b in buyer_ids)


def _finish(kind, buyers, items):
    return validate_instance(kind, buyers, tuple(items), tuple(i.id for i in items))


def gen_family(family, params=None, seed=0):
    """Builds an instance of a named family; the same (family, params, seed) always gives the same instance."""
    p = _check(family, params or {})
    rng = np.random.default_rng(seed)

    if family == 'ongap_hard':
        return gen_hard_instance(int(p['k']))

    if family == 'triangular':
        n = int(p['n'])
        items = [Item("j%s" % j, _unit_edges(["b%s" % i for i in range(j, n + 1)])) for j in range(1, n + 1)]
        return _finish(InstanceKind.MATCHING, _buyers(n), items)

    n, m = int(p['n']), int(p['m'])
    if family == 'complete':
        items = [Item("j%s" % (j + 1), _unit_edges(["b%s" % (i + 1) for i in range(n)])) for j in range(m)]
        return _finish(InstanceKind.MATCHING, _buyers(n), items)

    edge_draws = rng.random((m, n)) < float(p['p'])

    if family == 'random_matching':
        items = [Item("j%s" % (j + 1), _unit_edges(["b%s" % (i + 1) for i in range(n) if edge_draws[j][i]])) for j in range(m)]
        return _finish(InstanceKind.MATCHING, _buyers(n), items)

    budgets = [_rational(rng, p['budget_min'], p['budget_max']) for _ in range(n)]
    items = []
    for j in range(m):
        edges = []
        for i in range(n):
            if not edge_draws[j][i]:
                continue
            if family == 'random_onbap':
                bid = _rational(rng, p['bid_min'], p['bid_max'])
                if p['cap']:
                    bid = min(bid, budgets[i])
                edges.append(Edge("b%s" % (i + 1), bid, bid))
            else:
                weight = _rational(rng, p['weight_min'], p['weight_max'])
                bid = weight * _rational(rng, 1, p['eta_max'])
                edges.append(Edge("b%s" % (i + 1), bid, weight))
        items.append(Item("j%s" % (j + 1), tuple(edges)))
    kind = InstanceKind.ONBAP if family == 'random_onbap' else InstanceKind.ONGAP
    return _finish(kind, _buyers(n, budgets), items)


def gen_corpus(family, params, count, seed=0):
    return [gen_family(family, params, [seed, k]) for k in range(count)]
