#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

from components.generators import gen_family, parse_params
from components.instanceprovider import dump_instance
from components.logging import LogLevel, logEntryExit
from experiments.base import BaseExperimentRunner, SUCCESS


class GenRunner(BaseExperimentRunner):
    """`gen`: writes one generated instance as canonical JSON."""

    @logEntryExit
    def process(self, args):
        inst = gen_family(args.family, parse_params(args.params), self.general['seed'])
        self.logger.log("Generated %s(%s) with seed %s: %s buyers, %s items" % (
            args.family, args.params or "", self.general['seed'], len(inst.buyers), len(inst.items)), level=LogLevel.Info)
        if self.general['out']:
            self.instanceProvider.save(inst, self.general['out'])
        else:
            print(dump_instance(inst), flush=True)
        return SUCCESS
