#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import os
from concurrent.futures import ProcessPoolExecutor

from components.logging import LogLevel
from components.providerbase import BaseProvider, INeedsExperimentSettings, INeedsLoggingProvider

# Monte Carlo work is cut into chunks of this many trials whatever the
# worker count, and chunks are reduced in order, so sums come out the same.
CHUNK_SIZE = 500


def chunk_ranges(trials, size=CHUNK_SIZE):
    return [(start, min(start + size, trials)) for start in range(0, trials, size)]


def worker_count(config_max=None):
    counts = [os.cpu_count() or 1]
    if config_max:
        counts.append(int(config_max))
    if 'ALLOC_WORKERS' in os.environ:
        counts.append(int(os.environ['ALLOC_WORKERS']))
    return max(1, min(counts))


def serial_map(func, tasks):
    return [func(t) for t in tasks]


class WorkerProvider(BaseProvider, INeedsLoggingProvider, INeedsExperimentSettings):
    """
    Keeps one process pool per command run: created on first use, shut
    down when the harness resets its providers.
    """

    def __init__(self, config):
        self.count = worker_count(config.get('max', None))
        self.executor = None

    def _update_config(self, config):
        self.logger.log("Using %s worker process(es); %s trials run as %s chunks of at most %s" % (
            self.count, self.trials, len(chunk_ranges(self.trials)), CHUNK_SIZE), level=LogLevel.Debug)

    def _reset(self):
        if self.executor is not None:
            self.executor.shutdown(wait=True)
            self.executor = None

    def map(self, func, tasks):
        """Applies func to every task; results come back in task order. func must be picklable."""
        tasks = list(tasks)
        if self.count <= 1 or len(tasks) <= 1:
            return serial_map(func, tasks)
        if self.executor is None:
            self.executor = ProcessPoolExecutor(max_workers=self.count)
        self.logger.log("Fanning %s tasks out to %s workers" % (len(tasks), self.count), level=LogLevel.Debug2)
        return list(self.executor.map(func, tasks))
