#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import sys
import unittest
from fractions import Fraction

sys.path.append(".")
sys.path.append("..")

from components.gfunction import g_exponential
from components.generators import gen_family
from components.instanceprovider import load_instance
from components.logging import SimpleLoggerConfig
from components.workers import WorkerProvider, chunk_ranges
from dualfit.certificate import COMPATIBLE, IGREEDY_MAX_BID_TO_BUDGET, CertificateError, check_certificate

SINGLE = '{"kind":"matching","buyers":[{"id":"b1"}],"items":[{"id":"j1","edges":[{"buyer":"b1"}]}]}'

SKIP = ('{"kind":"onbap","buyers":[{"id":"b1","budget":1}],'
        '"items":[{"id":"j1","edges":[{"buyer":"b1","bid":"3/5"}]},{"id":"j2","edges":[{"buyer":"b1","bid":"3/5"}]}]}')

# every bid is at most a quarter of its buyer's budget
SMALL_BIDS = {'n': 3, 'm': 5, 'p': Fraction(3, 5), 'bid_min': Fraction(1, 4), 'bid_max': Fraction(1, 2),
              'budget_min': Fraction(2), 'budget_max': Fraction(3)}


class TestClosedForm(unittest.TestCase):
    def testWaterFilling(self):
        for n in (1, 2, 5):
            report = check_certificate(gen_family('triangular', {'n': n}), 'water-filling', 'wf-worst')
            self.assertEqual(report.mode, 'closed_form')
            self.assertTrue(report.passed, report.to_dict())
            self.assertLessEqual(report.property1_residual, 1e-9)

    def testVirtualWaterFilling(self):
        for seed in range(5):
            inst = gen_family('random_onbap', {'n': 3, 'm': 5, 'p': Fraction(3, 5)}, seed)
            report = check_certificate(inst, 'virtual-wf', 'vwf-worst')
            self.assertTrue(report.passed, report.to_dict())

    def testReportDocument(self):
        doc = check_certificate(gen_family('triangular', {'n': 2}), 'water-filling', 'wf-worst').to_dict()
        self.assertEqual(doc['builder'], 'wf-worst')
        self.assertEqual(doc['mode'], 'closed_form')
        self.assertEqual(len(doc['edges']), 3)
        self.assertTrue(all(e['pass'] for e in doc['edges']))
        self.assertTrue(doc['passed'])
        self.assertTrue('property1' in doc['checks'])


class TestMonteCarlo(unittest.TestCase):
    def testWaterFillingSampled(self):
        inst = gen_family('triangular', {'n': 2})
        report = check_certificate(inst, 'water-filling', 'wf-worst', trials=400, seed=3, closed_form=False)
        self.assertEqual(report.mode, 'monte_carlo')
        self.assertEqual(report.expected.trials, 400)
        self.assertTrue(report.passed, report.to_dict())

    def testRankingSampled(self):
        report = check_certificate(load_instance(SINGLE), 'ranking', 'wf-worst', trials=50)
        self.assertTrue(report.passed)
        self.assertAlmostEqual(report.edges[0].mean_slack, 1 - report.F, places=12)

    def testRandomOrder(self):
        report = check_certificate(load_instance(SINGLE), 'greedy', 'random-order', trials=100)
        self.assertTrue(report.passed)
        self.assertLess(report.edges[0].se, 1e-9)

        report = check_certificate(gen_family('triangular', {'n': 3}), 'greedy', 'random-order', trials=200, seed=1)
        self.assertTrue(report.checks['property1']['pass'])

    def testIGreedy(self):
        report = check_certificate(load_instance(SKIP), 'i-greedy', 'igreedy', trials=100)
        self.assertTrue(report.checks['property1']['pass'])
        self.assertAlmostEqual(report.checks['igreedy_factor']['factor'], 1.6, places=12)
        self.assertTrue(report.checks['igreedy_factor']['informational'])
        self.assertFalse(report.checks['igreedy_regime']['pass'])

    def testIGreedySmallBids(self):
        for seed in range(8):
            inst = gen_family('random_onbap', SMALL_BIDS, seed)
            self.assertLessEqual(inst.max_bid_to_budget, IGREEDY_MAX_BID_TO_BUDGET)
            report = check_certificate(inst, 'i-greedy', 'igreedy', trials=3000)
            self.assertTrue(report.checks['igreedy_regime']['pass'])
            self.assertTrue(report.passed, report.to_dict())

    def testRandomOrderOnBap(self):
        for seed in range(10):
            inst = gen_family('random_onbap', {'n': 3, 'm': 5, 'p': Fraction(3, 5)}, seed)
            report = check_certificate(inst, 'greedy', 'random-order', trials=4000)
            self.assertEqual(report.mode, 'monte_carlo')
            self.assertTrue(report.passed, report.to_dict())

    def testSameResultWithWorkers(self):
        inst = gen_family('triangular', {'n': 3})
        self.assertEqual(len(chunk_ranges(1200)), 3)
        workers = WorkerProvider({'max': 2})
        workers.update_config(SimpleLoggerConfig)
        serial = check_certificate(inst, 'greedy', 'random-order', trials=1200, seed=9)
        parallel = check_certificate(inst, 'greedy', 'random-order', trials=1200, seed=9, workers=workers)
        self.assertEqual(serial.to_dict(), parallel.to_dict())


class TestBoundedDegree(unittest.TestCase):
    def testDeterministic(self):
        for inst in [load_instance(SINGLE), gen_family('triangular', {'n': 2})]:
            report = check_certificate(inst, 'water-filling', 'bounded-degree')
            self.assertEqual(report.mode, 'deterministic')
            self.assertTrue(report.passed, report.to_dict())
            self.assertTrue(report.checks['band1']['pass'])
            self.assertTrue(report.checks['band2']['pass'])

    def testLowDegreeCorpus(self):
        g = g_exponential()
        degrees = set()
        for n in (1, 2, 3):
            for seed in range(6):
                inst = gen_family('random_matching', {'n': n, 'm': 5, 'p': Fraction(2, 3)}, seed)
                report = check_certificate(inst, 'water-filling', 'bounded-degree', g=g)
                if inst.max_degree == 0:
                    continue
                degrees.add(inst.max_degree)
                self.assertTrue(all(e.passed for e in report.edges), report.to_dict())
                self.assertTrue(report.checks['band1']['pass'], report.to_dict())
                self.assertGreater(report.checks['ratio']['value'], g.F)
        self.assertEqual(degrees, {1, 2, 3})


class TestErrors(unittest.TestCase):
    def testIncompatible(self):
        inst = gen_family('triangular', {'n': 2})
        self.assertFalse(('greedy', 'wf-worst') in COMPATIBLE)
        with self.assertRaises(CertificateError):
            check_certificate(inst, 'greedy', 'wf-worst')
        with self.assertRaises(CertificateError):
            check_certificate(inst, 'greedy', 'random-order', closed_form=True)
        with self.assertRaises(CertificateError):
            check_certificate(inst, 'greedy', 'random-order', trials=0)


if __name__ == '__main__':
    unittest.main(verbosity=0)
