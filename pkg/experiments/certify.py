#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

from components.logging import LogLevel, logEntryExit
from dualfit.certificate import BUILDERS, CertificateError, check_certificate
from experiments.base import BaseExperimentRunner

# The algorithm each builder certifies when --algo is not given
DEFAULT_ALGORITHM = {
    'wf-worst': 'water-filling',
    'vwf-worst': 'virtual-wf',
    'random-order': 'greedy',
    'bounded-degree': 'water-filling',
    'igreedy': 'i-greedy',
}


class DualRunner(BaseExperimentRunner):
    """`dual`: builds a dual certificate and reports both dual-fitting properties."""

    @logEntryExit
    def process(self, args):
        builder = args.builder
        if builder not in BUILDERS:
            raise CertificateError("--builder must be one of %s, got %r" % (BUILDERS, builder))
        algo = args.algo or DEFAULT_ALGORITHM[builder]
        inst = self._load(args)

        report = check_certificate(inst, algo, builder, trials=self.general['trials'], seed=self.general['seed'],
                                   g=self._g(), policy=self._policy(args), workers=self.workerProvider,
                                   tolerance=self.general['tolerance'], mc_sigmas=self.general['mc_sigmas'])
        for e in report.failures():
            self.logger.log("Edge (%s, %s) short by %s (se %s)" % (e.buyer, e.item, -e.mean_slack, e.se), level=LogLevel.Warning)
        regime = report.checks.get('igreedy_regime')
        if regime and not regime['pass']:
            self.logger.log("Largest bid/budget share is %s, above %s: the I-greedy dual may fail edge checks" % (regime['value'], regime['bound']), level=LogLevel.Warning)
        for name, check in report.checks.items():
            if not check['pass'] and not check.get('informational', False):
                self.logger.log("Check %s failed: %s" % (name, check), level=LogLevel.Warning)

        self._emit(report.to_dict())
        return self._verdict(report.passed, "%s certificate for %s" % (builder, algo))
