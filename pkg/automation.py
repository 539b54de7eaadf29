#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import sys
import time

from algorithms.virtualwaterfilling import ConvergenceError
from components.config import ConfigError, ExperimentConfig
from components.generators import GeneratorError
from components.instanceprovider import InstanceProvider
from components.logging import LoggingProvider, SimpleLogger, LogLevel, VERSION
from components.models import InfeasibleAllocationError, InstanceError, TapeError
from components.offline import SolverProvider
from components.reports import ReportError, ReportProvider
from components.simplex import LpError
from components.workers import WorkerProvider
from dualfit.certificate import CertificateError
from experiments.certify import DualRunner
from experiments.generate import GenRunner
from experiments.ongap import FrlpRunner, OnGapRunner
from experiments.primal import OptRunner, RunRunner
from experiments.ratio import PermutationOverflowError, RatioRunner
from ongap.bucketing import BucketError

DEFAULT_OBJECTS = {
    'Logging': LoggingProvider,
    'Workers': WorkerProvider,
    'Solver': SolverProvider,
    'Instance': InstanceProvider,
    'Report': ReportProvider,
    'RunRunner': RunRunner,
    'OptRunner': OptRunner,
    'DualRunner': DualRunner,
    'RatioRunner': RatioRunner,
    'GenRunner': GenRunner,
    'FrlpRunner': FrlpRunner,
    'OnGapRunner': OnGapRunner
}

# Errors caused by what the user asked for rather than by a bug
INPUT_ERRORS = (InstanceError, InfeasibleAllocationError, TapeError, ConfigError, GeneratorError,
                PermutationOverflowError, CertificateError, BucketError, ReportError, LpError,
                ConvergenceError, ValueError, OSError)


class AllocationHarness:
    def __init__(self, config_dictionary={}, object_dictionary={}):
        def _getOrImpl(dictionary, name, default):
            return dictionary[name] if name in dictionary else default

        def _getObjOr(name):
            assert(name in DEFAULT_OBJECTS)
            return _getOrImpl(object_dictionary, name, DEFAULT_OBJECTS[name])

        def _getConfigOr(name):
            result = _getOrImpl(self.config_dictionary, name, {})
            result.update({'General': self.config_dictionary['General']})
            return result

        def getOr(name):
            return _getObjOr(name)(_getConfigOr(name))

        # Pre-initialize this with a print-based logger for validation error output.
        self.logger = SimpleLogger()
        self.config_dictionary = self._validate(config_dictionary)

        """
        Providers are initialized in phases, as utility providers may need
        each other.

        Step 1: Instantiate the utility providers (logging, workers, solver)
        Step 2: Build the additional_config that hands them to each other
        Step 3: Call update_config on the utility providers
        Step 4: Switch to the configured logger
        Step 5: Instantiate the functionality providers (instances, reports)
        Step 6: Call update_config on them too
        Step 7: Expose every provider as a member variable
        Step 8: Create the experiment runners. They take no configuration of
                their own but can be mocked through the object_dictionary.
        """
        # Step 1
        self.provider_dictionary = {
            'loggingProvider': getOr('Logging'),
            'workerProvider': getOr('Workers'),
            'solverProvider': getOr('Solver')
        }
        # Step 2
        additional_config = {
            'LoggingProvider': self.provider_dictionary['loggingProvider'],
            'WorkerProvider': self.provider_dictionary['workerProvider'],
            'SolverProvider': self.provider_dictionary['solverProvider'],
            'General': self.config_dictionary['General']
        }
        # Step 3
        self.runOnProviders(lambda x: x.update_config(additional_config))

        # Step 4
        self.logger = self.provider_dictionary['loggingProvider']

        try:
            # Step 5
            self.provider_dictionary.update({
                'instanceProvider': getOr('Instance'),
                'reportProvider': getOr('Report'),
            })
            # Step 6
            self.runOnProviders(lambda x: x.update_config(additional_config))
            # Step 7
            self.__dict__.update(self.provider_dictionary)

            # Step 8
            self.experimentRunners = {
                'run': _getObjOr('RunRunner')(self.provider_dictionary, self.config_dictionary),
                'opt': _getObjOr('OptRunner')(self.provider_dictionary, self.config_dictionary),
                'dual': _getObjOr('DualRunner')(self.provider_dictionary, self.config_dictionary),
                'ratio': _getObjOr('RatioRunner')(self.provider_dictionary, self.config_dictionary),
                'gen': _getObjOr('GenRunner')(self.provider_dictionary, self.config_dictionary),
                'frlp': _getObjOr('FrlpRunner')(self.provider_dictionary, self.config_dictionary),
                'ongap': _getObjOr('OnGapRunner')(self.provider_dictionary, self.config_dictionary)
            }
        except Exception as e:
            self.logger.log_exception(e)
            raise(e)

    def runOnProviders(self, func):
        for v in self.provider_dictionary.values():
            func(v)

    def _validate(self, config_dictionary):
        # Only the print-based logger exists here, so nothing reaches Sentry.
        if 'General' not in config_dictionary:
            self.logger.log("'General' is a required config dictionary to supply.", level=LogLevel.Fatal)
            raise ConfigError("'General' is a required config dictionary to supply.")

        try:
            return ExperimentConfig(config_dictionary).validate().as_dictionary()
        except ConfigError as e:
            self.logger.log("Invalid configuration: %s" % e, level=LogLevel.Fatal)
            raise

    def run(self, command, args):
        """Runs one CLI command and returns its exit code."""
        if command not in self.experimentRunners:
            raise ValueError("Unknown command %r; expected one of %s" % (command, sorted(self.experimentRunners)))
        start_time = time.time()
        python_version = sys.version.replace("\n", " ")
        self.logger.log("Running onlinealloc {0} on Python {1}".format(VERSION, python_version), level=LogLevel.Debug)
        try:
            self.experimentRunners[command].check_format()
            code = self.experimentRunners[command].process(args)
            self.logger.log("%s finished in %.2fs with exit code %s" % (command, time.time() - start_time, code), level=LogLevel.Debug)
            return code
        except INPUT_ERRORS as e:
            self.logger.log("%s: %s" % (e.__class__.__name__, e), level=LogLevel.Error)
            raise
        except Exception as e:
            self.logger.log("Caught an exception while running %s" % command, level=LogLevel.Error)
            self.logger.log_exception(e)
            raise
        finally:
            self.runOnProviders(lambda x: x.reset())
            self.logger.clear_context()
