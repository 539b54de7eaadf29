#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

from fractions import Fraction

from components.logging import LogLevel, logEntryExit
from experiments.base import BaseExperimentRunner
from ongap.bucketing import INNER_ALGORITHMS, bucketize, ongap_derandomized, ongap_guarantee, ongap_randomized
from ongap.hardinstance import gen_hard_instance, truncate_hard_instance, truncation_ratios


def adversary_report(k, inner, g=None, policy=None, solver=None):
    """
    Runs the derandomized wrapper on every truncation of the k-bundle hard
    instance and on the full instance. No algorithm keeps more than 2/k on
    all truncations, so `min_ratio` must stay at or below that.
    """
    full = gen_hard_instance(k)
    per_truncation = []
    for s in range(k):
        inst = truncate_hard_instance(full, s)
        opt = solver.offline_opt(inst)[0] if solver is not None else Fraction(2) ** s
        value = ongap_derandomized(inst, inner, g, policy).value()
        per_truncation.append(value / opt)
    prefix = truncation_ratios(full, ongap_derandomized(full, inner, g, policy))
    return {
        'k': k,
        'inner': inner,
        'truncated_ratios': per_truncation,
        'min_ratio': min(per_truncation),
        'prefix_ratios': prefix,
        'min_prefix_ratio': min(prefix),
        'bound': Fraction(2, k),
    }


class OnGapRunner(BaseExperimentRunner):
    """`ongap`: the bucketing wrapper on an OnGAP instance, or the hard-instance adversary with --k."""

    @logEntryExit
    def process(self, args):
        inner = args.algo or 'virtual-wf'
        if inner not in INNER_ALGORITHMS:
            raise ValueError("--algo for ongap must be one of %s, got %r" % (INNER_ALGORITHMS, inner))
        g, policy = self._g(), self._policy(args)
        tolerance = self.general['tolerance']

        if getattr(args, 'instance', None):
            inst = self._load(args)
        elif getattr(args, 'k', None):
            inst = gen_hard_instance(args.k)
            self.logger.set_context("hard-k%s" % args.k)
        else:
            raise ValueError("ongap needs --instance or --k")

        partition = bucketize(inst)
        opt, _ = self.solverProvider.offline_opt(inst)
        derandomized = ongap_derandomized(inst, inner, g, policy).value()
        randomized, bucket = ongap_randomized(inst, inner, self.general['seed'], g, policy)
        guarantee = ongap_guarantee(inst, g.F)
        self.logger.log("Wrapper over %s buckets earned %s of OPT %s" % (partition.count, float(derandomized), opt), level=LogLevel.Info)

        report = {
            'inner': inner,
            'eta': partition.eta,
            'buckets': partition.count,
            'opt': opt,
            'derandomized_value': derandomized,
            'randomized_bucket': bucket,
            'randomized_value': randomized.value(),
            'guarantee': guarantee,
            'guarantee_holds': float(derandomized) >= guarantee * float(opt) - tolerance,
        }
        passed = report['guarantee_holds']
        if getattr(args, 'k', None) and not getattr(args, 'instance', None):
            adversary = adversary_report(args.k, inner, g, policy, self.solverProvider)
            adversary['holds'] = float(adversary['min_ratio']) <= float(adversary['bound']) + tolerance
            report['adversary'] = adversary
            passed = passed and adversary['holds']

        self._emit(report)
        return self._verdict(passed, "OnGAP wrapper checks")


class FrlpRunner(BaseExperimentRunner):
    """`frlp`: solves the factor-revealing LP for k bundles."""

    @logEntryExit
    def process(self, args):
        if not args.k or args.k < 1:
            raise ValueError("frlp needs --k >= 1")
        alpha, c = self.solverProvider.factor_revealing_lp(args.k)
        print("alpha_star=%s" % alpha, flush=True)
        if self.general['out']:
            self.reportProvider.write({'k': args.k, 'alpha_star': alpha, 'c': list(c), 'bound': Fraction(2, args.k)},
                                      self.general['out'], self.general['format'])
        return self._verdict(alpha <= Fraction(2, args.k), "alpha* <= 2/k")
