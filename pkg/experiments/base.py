#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import os
import copy
import functools

from algorithms.greedy import tie_policy_from_string
from components.gfunction import get_g
from components.logging import LogLevel
from components.reports import ReportError

# Exit codes shared by every runner
SUCCESS = 0
INPUT_ERROR = 1
CHECK_FAILED = 2


def instance_id(path):
    return os.path.splitext(os.path.basename(path))[0] if path else "instance"


class BaseExperimentRunner:
    """
    Runners turn one CLI command into provider calls and a report. They keep
    no state between commands beyond the providers they were handed.
    """

    # Report formats the command can write
    formats = ['json']

    def __init__(self, provider_dictionary, config_dictionary):
        self.__dict__.update(provider_dictionary)
        self.logger = copy.deepcopy(self.loggingProvider)
        self.logger.log = functools.partial(self.logger.log, category=self.__class__.mro()[0].__name__)
        self.config = config_dictionary

    @property
    def general(self):
        return self.config['General']

    def _g(self):
        return get_g(self.general['g'])

    def _policy(self, args):
        tie = getattr(args, 'tie', None)
        return tie_policy_from_string(tie) if tie else None

    def _load(self, args):
        path = getattr(args, 'instance', None)
        if not path:
            raise ValueError("--instance is required for %s" % args.command)
        inst = self.instanceProvider.load(path)
        self.logger.set_context(instance_id(path))
        return inst

    def check_format(self):
        if self.general['format'] not in self.formats:
            raise ReportError("%s reports can only be written as %s, not %s" % (
                self.__class__.__name__, " or ".join(self.formats), self.general['format']))

    def _emit(self, payload, fmt=None):
        return self.reportProvider.write(payload, self.general['out'], fmt or self.general['format'])

    def _verdict(self, passed, what):
        if passed:
            self.logger.log("%s passed" % what, level=LogLevel.Info)
            return SUCCESS
        self.logger.log("%s failed" % what, level=LogLevel.Error)
        return CHECK_FAILED
