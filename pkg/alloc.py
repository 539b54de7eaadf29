#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import sys
import argparse

from algorithms.registry import ALGORITHMS
from automation import AllocationHarness, INPUT_ERRORS
from components.config import ExperimentConfig
from components.generators import FAMILIES
from components.reports import FORMATS
from dualfit.certificate import BUILDERS
from experiments.base import INPUT_ERROR

COMMANDS = {
    'run': "run one algorithm and compare it with the offline optimum",
    'opt': "solve the offline LP exactly",
    'dual': "build a dual certificate and check both dual-fitting properties",
    'ratio': "measure the competitive ratio under an arrival model",
    'gen': "generate an instance from a named family",
    'frlp': "solve the factor-revealing LP for k bundles",
    'ongap': "run the OnGAP bucketing wrapper",
}


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with 1 like every other input error."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(INPUT_ERROR, "%s: error: %s\n" % (self.prog, message))


def build_parser():
    parser = ArgumentParser(prog="alloc", description="Online allocation algorithms and their dual certificates")
    subparsers = parser.add_subparsers(dest='command', metavar="{%s}" % ",".join(COMMANDS), parser_class=ArgumentParser)
    subparsers.required = True

    for name, help_text in COMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text, description=help_text)
        sub.add_argument('--config', help="YAML file with the harness configuration")
        sub.add_argument('--seed', type=int, help="Master seed")
        sub.add_argument('--trials', type=int, help="Monte Carlo trials")
        sub.add_argument('--out', help="Write the report here instead of stdout")
        sub.add_argument('--format', choices=FORMATS, help="Report format")

        if name in ('run', 'opt', 'dual', 'ratio', 'ongap'):
            sub.add_argument('--instance', required=(name != 'ongap'), help="Instance JSON file")
        if name in ('run', 'dual', 'ratio', 'ongap'):
            sub.add_argument('--algo', choices=ALGORITHMS, help="Algorithm (the inner algorithm for ongap)")
            sub.add_argument('--tie', help="Tie policy: global, per-item:SEED or fuller-first")
        if name == 'dual':
            sub.add_argument('--builder', choices=BUILDERS, required=True, help="Dual builder")
        if name == 'ratio':
            sub.add_argument('--order', default='fixed', help="Arrival model: fixed, all or sample:N")
        if name in ('frlp', 'ongap'):
            sub.add_argument('--k', type=int, required=(name == 'frlp'), help="Number of bundles")
        if name == 'gen':
            sub.add_argument('--family', choices=sorted(FAMILIES), required=True, help="Instance family")
            sub.add_argument('--params', default="", help="Family parameters, e.g. n=5,m=5,p=1/2")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code

    try:
        config = ExperimentConfig.from_yaml(args.config) if args.config else ExperimentConfig()
        config = config.with_overrides(seed=args.seed, trials=args.trials, out=args.out, format=args.format)
        harness = AllocationHarness(config.as_dictionary())
        return harness.run(args.command, args)
    except INPUT_ERRORS as e:
        print("%s: error: %s" % (parser.prog, e), file=sys.stderr)
        return INPUT_ERROR
    except Exception:
        # Already passed to log_exception by the harness
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
