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

from algorithms.greedy import GlobalOrderPolicy, PerItemOrderPolicy
from components.generators import gen_family
from components.instanceprovider import load_instance
from components.logging import SimpleLoggerConfig
from components.reports import CSV_COLUMNS, ReportError, to_csv, to_json
from components.workers import WorkerProvider
from experiments.ratio import PermutationOverflowError, parse_order_mode, run_random_order

SINGLE = '{"kind":"matching","buyers":[{"id":"b1"}],"items":[{"id":"j1","edges":[{"buyer":"b1"}]}]}'

# greedy wins both items when j1 comes first and one when j2 does
ORDER_MATTERS = ('{"kind":"matching","buyers":[{"id":"b1"},{"id":"b2"}],'
                 '"items":[{"id":"j1","edges":[{"buyer":"b1"}]},{"id":"j2","edges":[{"buyer":"b1"},{"buyer":"b2"}]}]}')

GENERAL = {'seed': 0, 'trials': 10}


class TestOrderModes(unittest.TestCase):
    def testParse(self):
        self.assertEqual(parse_order_mode('fixed', 10), ('fixed', None))
        self.assertEqual(parse_order_mode('all', 10), ('all', None))
        self.assertEqual(parse_order_mode('sample', 10), ('sample', 10))
        self.assertEqual(parse_order_mode('sample:25', 10), ('sample', 25))
        for bad in ['sample:0', 'sample:x', 'random', None]:
            with self.assertRaises(ValueError):
                parse_order_mode(bad, 10)


class TestRandomOrder(unittest.TestCase):
    def testSingleEdge(self):
        report = run_random_order(load_instance(SINGLE), 'greedy', 'all', GENERAL)
        self.assertEqual(report.mean_ratio, 1)
        self.assertEqual(report.min_ratio, 1)
        self.assertEqual(report.trials, 1)

    def testFixed(self):
        report = run_random_order(load_instance(ORDER_MATTERS), 'greedy', 'fixed', GENERAL, name="order")
        self.assertEqual(report.values, [2])
        self.assertEqual(report.seed, None)
        self.assertEqual(report.std_err, 0.0)

    def testAllPermutations(self):
        report = run_random_order(load_instance(ORDER_MATTERS), 'greedy', 'all', GENERAL, policy=GlobalOrderPolicy())
        self.assertEqual(report.opt, 2)
        self.assertEqual(sorted(report.values), [1, 2])
        self.assertEqual(report.mean_ratio, Fraction(3, 4))
        self.assertEqual(report.min_ratio, Fraction(1, 2))
        self.assertEqual(report.max_ratio, 1)
        self.assertEqual(report.std_err, 0.0)

    def testWaterFillingAllPermutations(self):
        inst = gen_family('triangular', {'n': 3})
        report = run_random_order(inst, 'water-filling', 'all', GENERAL)
        self.assertEqual(report.trials, 6)
        self.assertTrue(Fraction(1, 2) <= report.min_ratio <= report.mean_ratio <= 1)

    def testGreedyBeatsOneMinusOneOverE(self):
        for seed in range(4):
            inst = gen_family('random_matching', {'n': 3, 'm': 5, 'p': Fraction(1, 2)}, seed)
            reversed_orders = {item.id: sorted((e.buyer for e in item.edges), reverse=True) for item in inst.items}
            policies = [None, PerItemOrderPolicy(seed=seed), PerItemOrderPolicy(seed=seed + 11),
                        PerItemOrderPolicy(orders=reversed_orders)]
            for policy in policies:
                report = run_random_order(inst, 'greedy', 'all', GENERAL, policy=policy)
                self.assertEqual(report.trials, 120)
                self.assertGreaterEqual(float(report.mean_ratio), 1 - math.exp(-1) - 1e-9, policy)

    def testOverflow(self):
        with self.assertRaises(PermutationOverflowError):
            run_random_order(gen_family('complete', {'n': 1, 'm': 10}), 'greedy', 'all', GENERAL)

    def testSampled(self):
        inst = load_instance(ORDER_MATTERS)
        report = run_random_order(inst, 'greedy', 'sample:200', {'seed': 5, 'trials': 1})
        self.assertEqual(report.trials, 200)
        self.assertEqual(report.seed, 5)
        self.assertGreater(report.std_err, 0.0)
        self.assertTrue(Fraction(1, 2) < report.mean_ratio < 1)
        again = run_random_order(inst, 'greedy', 'sample', {'seed': 5, 'trials': 200})
        self.assertEqual(again.values, report.values)

    def testSameResultWithWorkers(self):
        inst = gen_family('random_matching', {'n': 3, 'm': 4, 'p': Fraction(1, 2)}, 2)
        workers = WorkerProvider({'max': 2})
        workers.update_config(SimpleLoggerConfig)
        serial = run_random_order(inst, 'water-filling', 'sample:1200', GENERAL)
        parallel = run_random_order(inst, 'water-filling', 'sample:1200', GENERAL, workers=workers)
        self.assertEqual(serial.values, parallel.values)
        self.assertEqual(serial.std_err, parallel.std_err)


class TestReports(unittest.TestCase):
    def testCsv(self):
        report = run_random_order(load_instance(ORDER_MATTERS), 'greedy', 'all', GENERAL, name="order")
        lines = to_csv([report]).splitlines()
        self.assertEqual(lines[0], ",".join(CSV_COLUMNS))
        self.assertEqual(lines[1], "order,greedy,all,2,2,0.75,0.5,0.0,0")
        with self.assertRaises(ReportError):
            to_csv([{'opt': 1}])

    def testJson(self):
        report = run_random_order(load_instance(ORDER_MATTERS), 'greedy', 'all', GENERAL, name="order")
        text = to_json([report])
        self.assertTrue('"mean_ratio": "3/4"' in text)
        self.assertTrue('"count": 2' in text)


if __name__ == '__main__':
    unittest.main(verbosity=0)
