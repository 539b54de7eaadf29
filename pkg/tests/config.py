#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import os
import sys
import tempfile
import unittest
from fractions import Fraction

sys.path.append(".")
sys.path.append("..")

from components.config import DEFAULT_GENERAL, ConfigError, ExperimentConfig
from components.generators import gen_family
from components.logging import LogLevel, describe, render


def write_temp(text):
    fd, path = tempfile.mkstemp(suffix=".yml")
    with os.fdopen(fd, "w") as f:
        f.write(text)
    return path


class TestExperimentConfig(unittest.TestCase):
    def testDefaults(self):
        config = ExperimentConfig().validate()
        self.assertEqual(config.general, DEFAULT_GENERAL)
        self.assertEqual(config.as_dictionary()['Logging'], {'local': True, 'level': 3})
        # the defaults themselves are never modified
        config.general['seed'] = 4
        self.assertEqual(DEFAULT_GENERAL['seed'], 0)

    def testYaml(self):
        path = write_temp("General:\n  seed: 12\n  trials: 300\nWorkers:\n  max: 2\nLogging:\n  level: 5\n")
        try:
            config = ExperimentConfig.from_yaml(path).validate()
        finally:
            os.remove(path)
        self.assertEqual(config.general['seed'], 12)
        self.assertEqual(config.general['trials'], 300)
        self.assertEqual(config.general['format'], 'json')
        self.assertEqual(config.as_dictionary()['Workers'], {'max': 2})
        self.assertEqual(config.as_dictionary()['Logging'], {'local': True, 'level': 5})

    def testOverrides(self):
        config = ExperimentConfig({'General': {'seed': 3}})
        overridden = config.with_overrides(seed=None, trials=50, out="report.json")
        self.assertEqual(overridden.general['seed'], 3)
        self.assertEqual(overridden.general['trials'], 50)
        self.assertEqual(overridden.general['out'], "report.json")
        self.assertEqual(config.general['trials'], 10000)

    def testTolerancesBecomeFloats(self):
        config = ExperimentConfig({'General': {'tolerance': 0, 'mc_sigmas': "2.5"}}).validate()
        self.assertEqual(config.general['tolerance'], 0.0)
        self.assertEqual(config.general['mc_sigmas'], 2.5)

    def testInvalid(self):
        bad = [
            {'General': {'colour': 'blue'}},
            {'General': {'seed': -1}},
            {'General': {'seed': 1.5}},
            {'General': {'trials': 0}},
            {'General': {'trials': True}},
            {'General': {'tolerance': 'tight'}},
            {'General': {'mc_sigmas': -3}},
            {'General': {'format': 'xml'}},
            {'General': {'g': 'quadratic'}},
            {'Workers': {'max': 0}},
            {'Logging': {'level': 'verbose'}},
            {'Logging': {'level': 9}},
        ]
        for dictionary in bad:
            with self.assertRaises(ConfigError, msg=str(dictionary)):
                ExperimentConfig(dictionary).validate()
        with self.assertRaises(ConfigError):
            ExperimentConfig({'General': [1, 2]})

    def testLogLevelNames(self):
        config = ExperimentConfig({'Logging': {'level': 'Debug'}}).validate()
        self.assertEqual(config.as_dictionary()['Logging']['level'], 5)
        self.assertEqual(LogLevel.parse("error"), LogLevel.Error)
        self.assertEqual(LogLevel.parse("4"), LogLevel.Info)

    def testRendering(self):
        self.assertEqual(render(Fraction(3, 4)), "3/4")
        self.assertEqual(render(Fraction(2)), "2")
        self.assertEqual(describe(gen_family('triangular', {'n': 3})), "<matching instance: 3 buyers, 3 items>")
        self.assertTrue(describe("x" * 300).endswith("..."))

    def testBadYaml(self):
        for text in ["General: [unclosed\n", "- just\n- a list\n"]:
            path = write_temp(text)
            try:
                with self.assertRaises(ConfigError):
                    ExperimentConfig.from_yaml(path)
            finally:
                os.remove(path)


if __name__ == '__main__':
    unittest.main(verbosity=0)
