#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import sys
import math
import unittest

sys.path.append(".")
sys.path.append("..")

from components.gfunction import GFunction, g_exponential, get_g


def _linear(x):
    return x


def _linear_G(t):
    return t * t / 2


def _one(x):
    return 1.0


class TestGFunction(unittest.TestCase):
    def testExponential(self):
        g = g_exponential()
        self.assertEqual(g.g(1.0), 1.0)
        self.assertAlmostEqual(g.G(1.0), 1 - math.exp(-1), places=12)
        self.assertAlmostEqual(g.F, 0.6321205588, places=10)
        self.assertAlmostEqual(g.G(0.37) + 1 - g.g(0.37) - g.F, 0.0, places=15)

    def testResidualOnGrid(self):
        g = g_exponential()
        self.assertLessEqual(g.residual(10000), 1e-12)
        self.assertTrue(g.is_monotone())
        self.assertEqual(g.validate(), [])

    def testInverse(self):
        g = g_exponential()
        for t in [0.0, 0.25, 0.6201, 1.0]:
            self.assertAlmostEqual(g.level_for(g.g(t)), t, places=12)
        self.assertEqual(g.level_for(0.0), 0.0)
        self.assertEqual(g.level_for(2.0), 1.0)

    def testBisectionInverse(self):
        # No closed-form inverse: level_for bisects
        linear = GFunction("linear", _linear, _linear_G, 0.5, _one)
        self.assertAlmostEqual(linear.level_for(0.3), 0.3, places=12)
        # G(t) + 1 - g(t) = t^2/2 + 1 - t is not constant
        problems = linear.validate()
        self.assertEqual(len(problems), 1)
        self.assertTrue("exceeds" in problems[0])

    def testRegistry(self):
        self.assertEqual(get_g("exponential").name, "exponential")
        with self.assertRaises(ValueError):
            get_g("quadratic")


if __name__ == '__main__':
    unittest.main(verbosity=0)
