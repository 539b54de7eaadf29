#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import sys
import pickle
import unittest
from fractions import Fraction

sys.path.append(".")
sys.path.append("..")

from components.instanceprovider import allocation_from_dict, allocation_to_dict, dump_instance, load_instance, primal_value
from components.models import Allocation, InfeasibleAllocationError, InstanceError, InstanceKind, RandomTape, TapeError, TapeKind
from components.utilities import FrozenDict, floor_log2, format_rational, parse_rational

TRIANGULAR = """
{"kind": "matching",
 "buyers": [{"id": "b1"}, {"id": "b2"}],
 "items": [{"id": "j1", "edges": [{"buyer": "b1"}, {"buyer": "b2"}]},
           {"id": "j2", "edges": [{"buyer": "b2"}]}]}
"""


class TestLoadInstance(unittest.TestCase):
    def testDefaults(self):
        inst = load_instance('{"kind":"matching","buyers":[{"id":"b1"}],"items":[{"id":"j1","edges":[{"buyer":"b1"}]}]}')
        self.assertEqual(inst.kind, InstanceKind.MATCHING)
        self.assertEqual(inst.budgets, {'b1': 1})
        e = inst.edge('b1', 'j1')
        self.assertEqual((e.bid, e.weight), (1, 1))
        self.assertEqual(inst.arrival, ('j1',))
        self.assertEqual(inst.warnings, ())

    def testExactNumbers(self):
        inst = load_instance('{"kind":"onbap","buyers":[{"id":"b1","budget":0.1}],"items":[{"id":"j1","edges":[{"buyer":"b1","bid":"1/30"}]}]}')
        self.assertEqual(inst.budgets['b1'], Fraction(1, 10))
        self.assertEqual(inst.edge('b1', 'j1').weight, Fraction(1, 30))

    def testOnbapBidAboveBudgetWarns(self):
        inst = load_instance('{"kind":"onbap","buyers":[{"id":"b1","budget":1}],"items":[{"id":"j1","edges":[{"buyer":"b1","bid":2}]}]}')
        self.assertEqual(len(inst.warnings), 1)
        self.assertTrue("b_ij <= B_i violated" in inst.warnings[0])

    def testOngapWeightAboveBidFails(self):
        with self.assertRaises(InstanceError) as context:
            load_instance('{"kind":"ongap","buyers":[{"id":"b1"}],"items":[{"id":"j1","edges":[{"buyer":"b1","bid":1,"weight":2}]}]}')
        self.assertTrue("w <= b" in str(context.exception))

    def testOngapZeroBidEdgeIsAllowed(self):
        inst = load_instance('{"kind":"ongap","buyers":[{"id":"b1"}],"items":[{"id":"j1","edges":[{"buyer":"b1","bid":0,"weight":1}]}]}')
        self.assertEqual(inst.item('j1').active_edges, ())

    def testValidationErrors(self):
        bad = [
            'not json',
            '{"kind":"auction","buyers":[],"items":[]}',
            '{"kind":"matching","buyers":[{"id":"b1"},{"id":"b1"}],"items":[]}',
            '{"kind":"matching","buyers":[{"id":"b1"}],"items":[{"id":"j1","edges":[]},{"id":"j1","edges":[]}]}',
            '{"kind":"matching","buyers":[{"id":"b1"}],"items":[{"id":"j1","edges":[{"buyer":"b9"}]}]}',
            '{"kind":"matching","buyers":[{"id":"b1"}],"items":[{"id":"j1","edges":[{"buyer":"b1"},{"buyer":"b1"}]}]}',
            '{"kind":"matching","buyers":[{"id":"b1","budget":2}],"items":[]}',
            '{"kind":"matching","buyers":[{"id":"b1"}],"items":[{"id":"j1","edges":[{"buyer":"b1","bid":2}]}]}',
            '{"kind":"matching","buyers":[{"id":"b1"}],"items":[{"id":"j1","edges":[]}],"arrival":["j1","j2"]}',
            '{"kind":"onbap","buyers":[{"id":"b1"}],"items":[{"id":"j1","edges":[{"buyer":"b1","bid":1,"weight":"1/2"}]}]}',
            '{"kind":"onbap","buyers":[{"id":"b1","budget":-1}],"items":[]}',
            '{"kind":"onbap","buyers":[{"id":"b1","budget":"x"}],"items":[]}',
            '{"kind":"onbap","buyers":[{}],"items":[]}',
        ]
        for doc in bad:
            with self.assertRaises(InstanceError, msg=doc):
                load_instance(doc)

    def testRoundTrip(self):
        inst = load_instance(TRIANGULAR)
        self.assertEqual(load_instance(dump_instance(inst)), inst)

        onbap = load_instance('{"kind":"onbap","buyers":[{"id":"b1","budget":"5/2"}],"items":[{"id":"j1","edges":[{"buyer":"b1","bid":"3/4"}]},{"id":"j2","edges":[]}],"arrival":["j2","j1"]}')
        again = load_instance(dump_instance(onbap))
        self.assertEqual(again, onbap)
        self.assertEqual(again.arrival, ('j2', 'j1'))

    def testReorderAndRestrict(self):
        inst = load_instance(TRIANGULAR)
        self.assertEqual(inst.with_arrival(['j2', 'j1']).arrival, ('j2', 'j1'))
        with self.assertRaises(InstanceError):
            inst.with_arrival(['j1'])
        sub = inst.restricted(['j2'])
        self.assertEqual([i.id for i in sub.items], ['j2'])
        self.assertEqual(sub.buyers, inst.buyers)
        with self.assertRaises(InstanceError):
            inst.restricted(['j3'])

    def testPickleIgnoresCachedValues(self):
        a = load_instance(TRIANGULAR)
        b = load_instance(TRIANGULAR)
        a.budgets, a.item_map, a.max_degree
        self.assertEqual(pickle.dumps(a, 4), pickle.dumps(b, 4))
        self.assertEqual(pickle.loads(pickle.dumps(a, 4)), a)


class TestPrimalValue(unittest.TestCase):
    def testValues(self):
        inst = load_instance(TRIANGULAR)
        self.assertEqual(primal_value(inst, Allocation.empty(inst)), 0)
        half = Fraction(1, 2)
        alloc = Allocation(inst, {('b1', 'j1'): half, ('b2', 'j1'): half, ('b2', 'j2'): half})
        self.assertEqual(primal_value(inst, alloc), Fraction(3, 2))

        single = load_instance('{"kind":"matching","buyers":[{"id":"b1"}],"items":[{"id":"j1","edges":[{"buyer":"b1"}]}]}')
        self.assertEqual(primal_value(single, Allocation(single, {('b1', 'j1'): 1})), 1)

    def testInfeasible(self):
        inst = load_instance(TRIANGULAR)
        with self.assertRaises(InfeasibleAllocationError):
            primal_value(inst, Allocation(inst, {('b1', 'j1'): 1, ('b2', 'j1'): Fraction(1, 2)}))
        with self.assertRaises(InfeasibleAllocationError):
            primal_value(inst, Allocation(inst, {('b2', 'j1'): 1, ('b2', 'j2'): 1}))
        with self.assertRaises(InfeasibleAllocationError):
            primal_value(inst, Allocation(inst, {('b1', 'j2'): 1}))

    def testAllocationDocuments(self):
        inst = load_instance(TRIANGULAR)
        alloc = allocation_from_dict(inst, [{'buyer': 'b1', 'item': 'j1', 'x': '1/2'}, {'buyer': 'b2', 'item': 'j2', 'x': 1}])
        self.assertEqual(alloc.get('b1', 'j1'), Fraction(1, 2))
        self.assertEqual(allocation_to_dict(alloc), [{'buyer': 'b1', 'item': 'j1', 'x': '1/2'}, {'buyer': 'b2', 'item': 'j2', 'x': 1}])
        self.assertEqual(alloc.normalized_level('b2'), 1)
        self.assertFalse(alloc.is_integral())


class TestRandomTape(unittest.TestCase):
    def testReproducible(self):
        inst = load_instance(TRIANGULAR)
        self.assertEqual(RandomTape.for_items(inst, 3, 5), RandomTape.for_items(inst, 3, 5))
        self.assertNotEqual(RandomTape.for_items(inst, 3, 5).values, RandomTape.for_items(inst, 3, 6).values)
        tape = RandomTape.for_buyers(inst, 11)
        self.assertEqual(tape.kind, TapeKind.U)
        self.assertTrue(all(0 <= v <= 1 for v in tape.values.values()))

    def testArrivalOrder(self):
        tape = RandomTape(TapeKind.Z, FrozenDict({'j1': 0.9, 'j2': 0.1, 'j3': 0.1}))
        self.assertEqual(tape.arrival_order(), ('j2', 'j3', 'j1'))
        with self.assertRaises(TapeError):
            RandomTape(TapeKind.U, FrozenDict({'b1': 0.5})).arrival_order()

    def testValidation(self):
        with self.assertRaises(TapeError):
            RandomTape(TapeKind.U, FrozenDict({'b1': 1.5}))
        tape = RandomTape(TapeKind.U, FrozenDict({'b1': 0.5}))
        with self.assertRaises(TapeError):
            tape.require(TapeKind.U, ['b1', 'b2'])
        with self.assertRaises(TapeError):
            tape.require(TapeKind.Z, ['b1'])


class TestUtilities(unittest.TestCase):
    def testRationals(self):
        self.assertEqual(parse_rational("3/4"), Fraction(3, 4))
        self.assertEqual(parse_rational(0.1), Fraction(1, 10))
        self.assertEqual(parse_rational(2), 2)
        with self.assertRaises(ValueError):
            parse_rational(True)
        self.assertEqual(format_rational(Fraction(4, 2)), 2)
        self.assertEqual(format_rational(Fraction(2, 6)), "1/3")

    def testFloorLog2(self):
        self.assertEqual(floor_log2(1), 0)
        self.assertEqual(floor_log2(Fraction(7, 2)), 1)
        self.assertEqual(floor_log2(4), 2)
        self.assertEqual(floor_log2(Fraction(1023, 1)), 9)

    def testFrozenDict(self):
        d = FrozenDict({'a': 1})
        with self.assertRaises(TypeError):
            d['a'] = 2
        self.assertEqual(pickle.loads(pickle.dumps(d)), d)
        self.assertEqual(hash(d), hash(FrozenDict({'a': 1})))


if __name__ == '__main__':
    unittest.main(verbosity=0)
