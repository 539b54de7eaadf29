#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

from algorithms.base import check_greedy
from algorithms.registry import FLOAT_ALGORITHMS, FRACTIONAL, run_algorithm
from components.instanceprovider import allocation_to_dict, primal_value
from components.logging import LogLevel, logEntryExit
from components.models import InstanceKind
from components.offline import max_flow_matching_value
from experiments.base import BaseExperimentRunner, SUCCESS

# Feasibility slack for float algorithms
FLOAT_TOLERANCE = 1e-12


class RunRunner(BaseExperimentRunner):
    """`run`: one algorithm on one instance, measured against the offline optimum."""

    @logEntryExit
    def process(self, args):
        inst = self._load(args)
        algo = args.algo or 'water-filling'
        alloc, trace = run_algorithm(algo, inst, g=self._g(), policy=self._policy(args), priorities=self.general['seed'])

        tolerance = FLOAT_TOLERANCE if algo in FLOAT_ALGORITHMS else 0
        value = primal_value(inst, alloc, tolerance)
        opt, _ = self.solverProvider.offline_opt(inst)
        ratio = 1 if opt == 0 else value / opt
        self.logger.log("%s earned %s against OPT %s (ratio %.6f)" % (algo, float(value), opt, float(ratio)), level=LogLevel.Info)

        report = {
            'kind': inst.kind.value,
            'algo': algo,
            'value': value,
            'opt': opt,
            'ratio': ratio,
            'allocation': allocation_to_dict(alloc),
            'skipped': list(trace.skipped()),
            'warnings': list(inst.warnings),
        }
        checks = {'ratio_at_most_one': float(ratio) <= 1 + FLOAT_TOLERANCE}
        if algo in FRACTIONAL:
            problems = check_greedy(trace, tolerance)
            report['greedy_violations'] = problems
            checks['greedy'] = not problems
        report['checks'] = checks
        self._emit(report)
        return self._verdict(all(checks.values()), "%s run checks" % algo)


class OptRunner(BaseExperimentRunner):
    """`opt`: the exact offline optimum and an optimal allocation."""

    @logEntryExit
    def process(self, args):
        inst = self._load(args)
        opt, alloc = self.solverProvider.offline_opt(inst)
        report = {'opt': opt, 'allocation': allocation_to_dict(alloc)}
        if inst.kind == InstanceKind.MATCHING:
            flow = max_flow_matching_value(inst)
            report['max_flow'] = flow
            self._emit(report)
            return self._verdict(flow == opt, "Max-flow cross-check")
        self._emit(report)
        return SUCCESS
