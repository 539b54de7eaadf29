#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import io
import csv
import json
import dataclasses
from fractions import Fraction
from typing import List, Optional

import numpy as np

from components.logging import LogLevel
from components.providerbase import BaseProvider, INeedsLoggingProvider
from components.utilities import FrozenDict, format_rational

CSV_COLUMNS = ['instance', 'algo', 'order_mode', 'trials', 'opt', 'mean_ratio', 'min_ratio', 'std_err', 'seed']

FORMATS = ['json', 'csv']


class ReportError(Exception):
    pass


@dataclasses.dataclass
class RatioReport:
    instance: str
    algo: str
    order_mode: str
    trials: int
    opt: Fraction
    values: List
    mean_ratio: object
    min_ratio: object
    std_err: float
    seed: Optional[int]

    @property
    def count(self):
        return len(self.values)

    @property
    def max_ratio(self):
        return max(1 if self.opt == 0 else v / self.opt for v in self.values)

    def to_row(self):
        return [self.instance, self.algo, self.order_mode, self.trials, format_rational(self.opt),
                repr(float(self.mean_ratio)), repr(float(self.min_ratio)), repr(float(self.std_err)),
                "" if self.seed is None else self.seed]

    def to_dict(self):
        return {
            'instance': self.instance,
            'algo': self.algo,
            'order_mode': self.order_mode,
            'trials': self.trials,
            'opt': self.opt,
            'mean_ratio': self.mean_ratio,
            'min_ratio': self.min_ratio,
            'std_err': self.std_err,
            'seed': self.seed,
            'count': self.count
        }


def _jsonable(value):
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, FrozenDict):
        return dict(value)
    if hasattr(value, 'to_dict'):
        return value.to_dict()
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError("Cannot put %r in a report" % (value,))


def to_json(payload):
    return json.dumps(payload, indent=2, default=_jsonable) + "\n"


def to_csv(reports):
    if not all(isinstance(r, RatioReport) for r in reports):
        raise ReportError("Only ratio reports can be written as CSV")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        writer.writerow(r.to_row())
    return buf.getvalue()


class ReportProvider(BaseProvider, INeedsLoggingProvider):
    def __init__(self, config):
        self.config = config

    def render(self, payload, fmt='json'):
        if fmt not in FORMATS:
            raise ReportError("Unknown report format %r; expected one of %s" % (fmt, FORMATS))
        if fmt == 'csv':
            return to_csv(payload if isinstance(payload, list) else [payload])
        return to_json(payload)

    def write(self, payload, out=None, fmt='json'):
        """Writes a report to `out`, or prints it when no path is given."""
        text = self.render(payload, fmt)
        if out:
            with open(out, "w") as f:
                f.write(text)
            self.logger.log("Wrote %s report to %s" % (fmt, out), level=LogLevel.Info)
        else:
            print(text, end="", flush=True)
        return text
