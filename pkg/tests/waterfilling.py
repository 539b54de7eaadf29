#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import sys
import math
import unittest
from fractions import Fraction

sys.path.append(".")
sys.path.append("..")

from algorithms.base import check_greedy
from algorithms.discretized import discretized_virtual_water_filling, discretized_water_filling
from algorithms.virtualwaterfilling import normalized_level_at, virtual_level, virtual_water_filling
from algorithms.waterfilling import check_max_min, water_filling
from components.generators import gen_family
from components.gfunction import g_exponential
from components.instanceprovider import instance_to_dict, load_instance, parse_instance
from components.models import InstanceError
from components.offline import max_flow_matching_value, offline_opt

F = 1 - math.exp(-1)


def as_onbap(inst):
    doc = instance_to_dict(inst)
    doc['kind'] = 'onbap'
    return parse_instance(doc)


class TestWaterFilling(unittest.TestCase):
    def testSingleEdge(self):
        alloc, trace = water_filling(gen_family('triangular', {'n': 1}))
        self.assertEqual(alloc.get('b1', 'j1'), 1)
        self.assertEqual(trace.final_levels['b1'], 1)

    def testEvenSplit(self):
        alloc, _ = water_filling(gen_family('complete', {'n': 2, 'm': 1}))
        self.assertEqual(alloc.get('b1', 'j1'), Fraction(1, 2))
        self.assertEqual(alloc.get('b2', 'j1'), Fraction(1, 2))

    def testTriangular(self):
        inst = gen_family('triangular', {'n': 2})
        alloc, trace = water_filling(inst)
        half = Fraction(1, 2)
        self.assertEqual(dict(alloc.x), {('b1', 'j1'): half, ('b2', 'j1'): half, ('b2', 'j2'): half})
        self.assertEqual(alloc.value(), Fraction(3, 2))
        self.assertEqual(alloc.value() / offline_opt(inst)[0], Fraction(3, 4))

        self.assertEqual(trace.order, ('j1', 'j2'))
        self.assertEqual(trace.record('j1').increased, frozenset(['b1', 'b2']))
        self.assertEqual(trace.critical_level('b2', 'j1'), half)
        self.assertEqual(trace.critical_level('b2', 'j2'), 1)
        self.assertEqual(trace.record('j2').delta_primal, half)
        self.assertEqual(trace.primal(), Fraction(3, 2))

    def testRatioDecreasesTowardsF(self):
        previous = None
        for n in range(2, 9):
            inst = gen_family('triangular', {'n': n})
            ratio = water_filling(inst)[0].value() / offline_opt(inst)[0]
            self.assertGreaterEqual(float(ratio), F)
            if previous is not None:
                self.assertLess(ratio, previous)
            previous = ratio

        for n in (10, 25):
            inst = gen_family('triangular', {'n': n})
            ratio = float(water_filling(inst)[0].value() / max_flow_matching_value(inst))
            self.assertGreaterEqual(ratio, F)
            self.assertLessEqual(ratio, F + 0.05)

    def testDiscretizedOracle(self):
        inst = gen_family('triangular', {'n': 10})
        x, _ = discretized_water_filling(inst, eps=1e-4)
        self.assertAlmostEqual(sum(x.values()), float(water_filling(inst)[0].value()), delta=1e-2)

    def testProperties(self):
        corpus = [gen_family('random_matching', {'n': 4, 'm': 6, 'p': Fraction(1, 2)}, seed) for seed in range(10)]
        corpus.append(gen_family('triangular', {'n': 4}))
        for inst in corpus:
            alloc, trace = water_filling(inst)
            self.assertEqual(alloc.violations(), [])
            self.assertEqual(check_greedy(trace), [])
            self.assertEqual(check_max_min(trace), [])
            for buyer in inst.buyers:
                levels = [r.after[buyer.id] for r in trace.records if buyer.id in r.after]
                self.assertEqual(levels, sorted(levels))

    def testWrongKind(self):
        with self.assertRaises(InstanceError):
            water_filling(gen_family('random_onbap', {'n': 2, 'm': 2, 'p': 1}))


class TestVirtualWaterFilling(unittest.TestCase):
    def testMatchesWaterFillingOnUnitInstances(self):
        for inst in [gen_family('triangular', {'n': 4}), gen_family('random_matching', {'n': 4, 'm': 5, 'p': Fraction(1, 2)}, 3)]:
            exact, _ = water_filling(inst)
            approx, _ = virtual_water_filling(as_onbap(inst))
            keys = set(exact.x) | set(approx.x)
            for k in keys:
                self.assertAlmostEqual(float(exact.get(*k)), float(approx.get(*k)), delta=1e-10)

    def testBreakpoint(self):
        g = g_exponential()
        # b2 (bid 2) is fed alone until its virtual level meets b1's starting one
        breakpoint = normalized_level_at(g, 2.0, virtual_level(g, 1.0, 0.0))
        self.assertAlmostEqual(breakpoint, 1 + math.log((1 + math.exp(-1)) / 2), places=12)
        self.assertAlmostEqual(breakpoint, 0.6201, places=4)

        inst = load_instance('{"kind":"onbap","buyers":[{"id":"b1"},{"id":"b2"}],'
                             '"items":[{"id":"j1","edges":[{"buyer":"b1","bid":1},{"buyer":"b2","bid":2}]}]}')
        alloc, trace = virtual_water_filling(inst, g)
        y1 = float(alloc.normalized_level('b1'))
        y2 = float(alloc.normalized_level('b2'))
        self.assertGreater(y2, breakpoint)
        self.assertAlmostEqual(virtual_level(g, 1.0, y1), virtual_level(g, 2.0, y2), delta=1e-9)
        self.assertAlmostEqual(float(alloc.item_mass('j1')), 1.0, delta=1e-9)

        x, _ = discretized_virtual_water_filling(inst, g, eps=1e-5)
        self.assertAlmostEqual(x[('b1', 'j1')], float(alloc.get('b1', 'j1')), delta=1e-3)
        self.assertAlmostEqual(x[('b2', 'j1')], float(alloc.get('b2', 'j1')), delta=1e-3)

    def testFeasibleAndCompetitive(self):
        for seed in range(10):
            inst = gen_family('random_onbap', {'n': 3, 'm': 6, 'p': Fraction(3, 5)}, seed)
            alloc, trace = virtual_water_filling(inst)
            self.assertEqual(alloc.violations(1e-12), [])
            self.assertEqual(check_greedy(trace, 1e-9), [])
            opt = offline_opt(inst)[0]
            if opt > 0:
                self.assertGreaterEqual(float(alloc.value()) / float(opt), F - 1e-9)

    def testFullBuyersAreSkipped(self):
        inst = load_instance('{"kind":"onbap","buyers":[{"id":"b1"}],'
                             '"items":[{"id":"j1","edges":[{"buyer":"b1"}]},{"id":"j2","edges":[{"buyer":"b1"}]}]}')
        alloc, trace = virtual_water_filling(inst)
        self.assertAlmostEqual(float(alloc.get('b1', 'j1')), 1.0, delta=1e-12)
        self.assertEqual(alloc.get('b1', 'j2'), 0)
        self.assertEqual(trace.record('j2').mass, 0)


if __name__ == '__main__':
    unittest.main(verbosity=0)
