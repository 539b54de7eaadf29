#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

from algorithms.greedy import greedy_fractional, i_greedy
from algorithms.ranking import ranking
from algorithms.virtualwaterfilling import virtual_water_filling
from algorithms.waterfilling import water_filling
from components.gfunction import g_exponential

ALGORITHMS = ['water-filling', 'virtual-wf', 'greedy', 'i-greedy', 'ranking']

FRACTIONAL = ['water-filling', 'virtual-wf', 'greedy']

# Exact algorithms produce Fractions; the rest need a float tolerance
FLOAT_ALGORITHMS = ['virtual-wf']


def run_algorithm(name, inst, g=None, policy=None, priorities=0):
    """
    Runs an algorithm by its CLI name. Only names cross process
    boundaries, so worker tasks call this rather than holding functions.
    """
    if name == 'water-filling':
        return water_filling(inst)
    if name == 'virtual-wf':
        return virtual_water_filling(inst, g or g_exponential())
    if name == 'greedy':
        return greedy_fractional(inst, policy)
    if name == 'i-greedy':
        return i_greedy(inst, policy.buyer_order if policy is not None and hasattr(policy, 'buyer_order') else None)
    if name == 'ranking':
        return ranking(inst, priorities)
    raise ValueError("Unknown algorithm %r; expected one of %s" % (name, ALGORITHMS))
