#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import math
import itertools

from algorithms.registry import run_algorithm
from components.logging import LogLevel, log, logEntryExit
from components.models import RandomTape
from components.offline import offline_opt
from components.reports import FORMATS, RatioReport
from components.workers import CHUNK_SIZE, chunk_ranges, serial_map
from experiments.base import BaseExperimentRunner, instance_id

# 9! = 362880 runs is the most an all-permutations report will do
MAX_PERMUTATION_ITEMS = 9

RATIO_SLACK = 1e-12


class PermutationOverflowError(Exception):
    pass


def parse_order_mode(mode, default_trials):
    """'fixed' | 'all' | 'sample' | 'sample:N' -> (kind, trials or None)"""
    if mode in ('fixed', 'all'):
        return mode, None
    if mode == 'sample':
        return 'sample', default_trials
    if mode and mode.startswith('sample:'):
        try:
            n = int(mode[len('sample:'):])
        except ValueError:
            n = 0
        if n >= 1:
            return 'sample', n
    raise ValueError("Unknown order mode %r; expected fixed, all or sample:N with N >= 1" % mode)


def _ratio_chunk(task):
    """
    ALG values for one chunk: either an explicit list of arrival orders, or
    the sampled trials [start, stop), each ordered by its own Z tape.
    """
    inst, algo, g, policy, seed, orders, start, stop = task
    if orders is None:
        orders = [RandomTape.for_items(inst, seed, t).arrival_order() for t in range(start, stop)]
    return [run_algorithm(algo, inst.with_arrival(o), g=g, policy=policy, priorities=seed)[0].value() for o in orders]


def _sample_se(ratios):
    n = len(ratios)
    if n < 2:
        return 0.0
    floats = [float(r) for r in ratios]
    mean = math.fsum(floats) / n
    variance = math.fsum((r - mean) ** 2 for r in floats) / (n - 1)
    return math.sqrt(variance / n)


def run_random_order(inst, algo, mode, general, solver=None, workers=None, policy=None, g=None, name="instance"):
    """
    Competitive ratio of `algo` on `inst` under the arrival model `mode`:
    the instance's own order, the exact average over every permutation, or
    an average over sampled Z tapes. `general` supplies seed and trials.
    """
    seed = general.get('seed', 0)
    kind, trials = parse_order_mode(mode, general.get('trials', 1))
    opt = solver.offline_opt(inst)[0] if solver is not None else offline_opt(inst)[0]
    mapper = workers.map if workers is not None else serial_map

    if kind == 'fixed':
        tasks = [(inst, algo, g, policy, seed, [inst.arrival], 0, 1)]
    elif kind == 'all':
        if len(inst.items) > MAX_PERMUTATION_ITEMS:
            raise PermutationOverflowError("All-permutations mode is limited to %s items; %s has %s (%s orders)" % (
                MAX_PERMUTATION_ITEMS, name, len(inst.items), math.factorial(len(inst.items))))
        orders = list(itertools.permutations(inst.arrival))
        tasks = [(inst, algo, g, policy, seed, orders[start:stop], start, stop) for start, stop in chunk_ranges(len(orders), CHUNK_SIZE)]
    else:
        tasks = [(inst, algo, g, policy, seed, None, start, stop) for start, stop in chunk_ranges(trials, CHUNK_SIZE)]

    values = [v for chunk in mapper(_ratio_chunk, tasks) for v in chunk]
    ratios = [1 if opt == 0 else v / opt for v in values]
    mean_ratio = sum(ratios) / len(ratios)
    report = RatioReport(name, algo, mode, len(values), opt, values, mean_ratio, min(ratios),
                         _sample_se(ratios) if kind == 'sample' else 0.0, seed if kind != 'fixed' else None)

    worst = max(float(r) for r in ratios)
    if worst > 1 + RATIO_SLACK:
        log("%s beat the offline optimum on %s: ratio %s" % (algo, name, worst), level=LogLevel.Error, category="run_random_order")
    log("%s on %s (%s): mean ratio %.6f over %s orders" % (algo, name, mode, float(mean_ratio), len(values)), level=LogLevel.Debug, category="run_random_order")
    return report


class RatioRunner(BaseExperimentRunner):
    """`ratio`: competitive ratio under the fixed, all-permutations or sampled arrival models."""

    formats = FORMATS

    @logEntryExit
    def process(self, args):
        inst = self._load(args)
        report = run_random_order(inst, args.algo or 'greedy', args.order or 'fixed', self.general,
                                  solver=self.solverProvider, workers=self.workerProvider,
                                  policy=self._policy(args), g=self._g(), name=instance_id(args.instance))
        self._emit([report])
        return self._verdict(float(report.max_ratio) <= 1 + RATIO_SLACK, "Ratio sanity check")
