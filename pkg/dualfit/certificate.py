#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import math
import dataclasses
from fractions import Fraction
from typing import List, Optional

from algorithms.ranking import ranking
from algorithms.registry import run_algorithm
from components.gfunction import g_exponential
from components.logging import LogLevel, log
from components.models import ExpectedDual, RandomTape
from components.utilities import FrozenDict
from components.workers import chunk_ranges, serial_map
from dualfit.boundeddegree import band1_bound, band2_holds, bounded_degree_bound, build_dual_bounded_degree
from dualfit.randomorder import build_dual_random_order, igreedy_dual_for_trace, igreedy_factor, igreedy_skip_credit
from dualfit.worstcase import build_dual_vwf_worst, build_dual_wf_worst, expected_dual_vwf_worst, expected_dual_wf_worst


class CertificateError(Exception):
    pass


BUILDERS = ['wf-worst', 'vwf-worst', 'random-order', 'bounded-degree', 'igreedy']

# (algorithm, builder) -> how the expectation can be taken
COMPATIBLE = {
    ('water-filling', 'wf-worst'): 'closed_form',
    ('ranking', 'wf-worst'): 'monte_carlo',
    ('virtual-wf', 'vwf-worst'): 'closed_form',
    ('water-filling', 'vwf-worst'): 'closed_form',
    ('greedy', 'random-order'): 'monte_carlo',
    ('water-filling', 'random-order'): 'monte_carlo',
    ('water-filling', 'bounded-degree'): 'deterministic',
    ('i-greedy', 'igreedy'): 'monte_carlo',
}

U_BUILDERS = ['wf-worst', 'vwf-worst']

# I-greedy duals are only known to be feasible in expectation when no bid
# exceeds this share of its buyer's budget
IGREEDY_MAX_BID_TO_BUDGET = Fraction(1, 4)


@dataclasses.dataclass
class EdgeVerdict:
    buyer: str
    item: str
    mean_slack: float
    se: float
    required: float
    passed: bool

    def to_dict(self):
        return {'buyer': self.buyer, 'item': self.item, 'mean_slack': self.mean_slack,
                'se': self.se, 'required': self.required, 'pass': self.passed}


@dataclasses.dataclass
class FeasibilityReport:
    builder: str
    algo: str
    F: float
    mode: str
    trials: int
    seed: int
    property1_residual: float
    edges: List[EdgeVerdict]
    checks: dict
    expected: Optional[ExpectedDual] = None

    @property
    def passed(self):
        return all(e.passed for e in self.edges) and all(c['pass'] for c in self.checks.values() if not c.get('informational', False))

    def failures(self):
        return [e for e in self.edges if not e.passed]

    def to_dict(self):
        return {
            'builder': self.builder,
            'algo': self.algo,
            'F': self.F,
            'mode': self.mode,
            'trials': self.trials,
            'seed': self.seed,
            'property1_residual': self.property1_residual,
            'edges': [e.to_dict() for e in self.edges],
            'checks': self.checks,
            'passed': self.passed
        }


def _build(builder, trace, tape, g):
    if builder == 'wf-worst':
        return build_dual_wf_worst(trace, tape, g)
    if builder == 'vwf-worst':
        return build_dual_vwf_worst(trace, tape, g)
    if builder == 'random-order':
        return build_dual_random_order(trace, tape, g)
    if builder == 'igreedy':
        return igreedy_dual_for_trace(trace, tape, g)
    raise CertificateError("%s is not a sampled builder" % builder)


def _active_edges(inst):
    return [(i, j, e) for i, j, e in inst.edges() if e.bid > 0]


def _certificate_chunk(task):
    """
    Runs trials [start, stop) of a Monte Carlo certificate and returns plain
    partial sums; one tape per trial from default_rng([seed, trial]).
    """
    inst, algo, builder, seed, start, stop, g, policy, fixed_trace = task
    edges = _active_edges(inst)
    sums = {
        'n': 0, 'objective': 0.0, 'primal': 0.0, 'residual': 0.0, 'negative_betas': 0, 'factor_violations': 0,
        'lhs': {(i, j): 0.0 for i, j, _ in edges}, 'lhs_sq': {(i, j): 0.0 for i, j, _ in edges},
        'alpha': {b.id: 0.0 for b in inst.buyers}, 'beta': {item.id: 0.0 for item in inst.items},
    }
    runs = {}
    factor = igreedy_factor(inst) if builder == 'igreedy' else None
    for trial in range(start, stop):
        if builder in U_BUILDERS:
            tape = RandomTape.for_buyers(inst, seed, trial)
            if algo == 'ranking':
                key = tuple(sorted(tape.values, key=lambda i: (tape.values[i], i)))
                if key not in runs:
                    runs[key] = ranking(inst, list(key))[1]
                trace = runs[key]
            else:
                trace = fixed_trace
        else:
            tape = RandomTape.for_items(inst, seed, trial)
            key = tape.arrival_order()
            if key not in runs:
                runs[key] = run_algorithm(algo, inst.with_arrival(key), g=g, policy=policy)[1]
            trace = runs[key]

        dual = _build(builder, trace, tape, g)
        primal = float(trace.primal())
        objective = dual.objective()
        credit = igreedy_skip_credit(trace, g) if builder == 'igreedy' else 0.0
        sums['n'] += 1
        sums['objective'] += objective
        sums['primal'] += primal
        sums['residual'] = max(sums['residual'], abs(objective - credit - primal))
        sums['negative_betas'] += len(dual.negative_betas())
        if factor is not None and objective > factor * primal + 1e-12:
            sums['factor_violations'] += 1
        for i, a in dual.alpha.items():
            sums['alpha'][i] += a
        for j, b in dual.beta.items():
            sums['beta'][j] += b
        for i, j, _ in edges:
            v = dual.lhs(i, j)
            sums['lhs'][(i, j)] += v
            sums['lhs_sq'][(i, j)] += v * v
    return sums


def _reduce(partials):
    total = partials[0]
    for p in partials[1:]:
        for k in ('n', 'objective', 'primal', 'negative_betas', 'factor_violations'):
            total[k] += p[k]
        total['residual'] = max(total['residual'], p['residual'])
        for k in ('lhs', 'lhs_sq', 'alpha', 'beta'):
            for key, v in p[k].items():
                total[k][key] += v
    return total


def _standard_error(total, total_sq, n):
    if n < 2:
        return 0.0
    mean = total / n
    variance = max(0.0, (total_sq - n * mean * mean) / (n - 1))
    return math.sqrt(variance / n)


def check_certificate(inst, algo, builder, trials=10000, seed=0, g=None, policy=None, closed_form=None,
                      workers=None, tolerance=1e-9, mc_sigmas=3.0):
    """
    Checks the two dual-fitting properties for an algorithm and a dual
    builder on one instance: the dual objective equals the primal on every
    realization, and every edge constraint holds in expectation once the
    dual is divided by F. Expectations are in closed form where the builder
    has one (unless closed_form=False), otherwise over `trials` sampled
    tapes. workers, if given, is a WorkerProvider for the sampled trials.
    """
    g = g or g_exponential()
    if (algo, builder) not in COMPATIBLE:
        raise CertificateError("Builder %s cannot certify %s runs; compatible pairs are %s" % (builder, algo, sorted(COMPATIBLE)))
    native = COMPATIBLE[(algo, builder)]
    if closed_form and native != 'closed_form':
        raise CertificateError("Builder %s has no closed-form expectation for %s" % (builder, algo))
    mode = native if native != 'closed_form' or closed_form is not False else 'monte_carlo'
    if mode == 'monte_carlo' and (trials is None or trials < 1):
        raise CertificateError("A Monte Carlo certificate needs trials >= 1, got %s" % trials)

    if mode == 'deterministic':
        return _deterministic_report(inst, algo, builder, g, seed, tolerance)

    fixed_trace = None
    if builder in U_BUILDERS and algo != 'ranking':
        fixed_trace = run_algorithm(algo, inst, g=g, policy=policy)[1]

    if mode == 'closed_form':
        return _closed_form_report(inst, algo, builder, fixed_trace, g, seed, tolerance)

    tasks = [(inst, algo, builder, seed, start, stop, g, policy, fixed_trace) for start, stop in chunk_ranges(trials)]
    mapper = workers.map if workers is not None else serial_map
    total = _reduce(mapper(_certificate_chunk, tasks))
    n = total['n']

    edges = []
    lhs_means, ses = {}, {}
    for i, j, e in _active_edges(inst):
        required = g.F * float(e.bid)
        mean = total['lhs'][(i, j)] / n
        se = _standard_error(total['lhs'][(i, j)], total['lhs_sq'][(i, j)], n)
        lhs_means[(i, j)], ses[(i, j)] = mean, se
        slack = mean - required
        edges.append(EdgeVerdict(i, j, slack, se, required, slack >= -(mc_sigmas * se + tolerance)))

    expected = ExpectedDual(builder, inst, FrozenDict({i: v / n for i, v in total['alpha'].items()}),
                            FrozenDict({j: v / n for j, v in total['beta'].items()}),
                            FrozenDict(lhs_means), FrozenDict(ses), 'monte_carlo', trials, seed)
    checks = {
        'property1': {'value': total['residual'], 'pass': total['residual'] <= tolerance},
        'negative_betas': {'value': total['negative_betas'], 'pass': True, 'informational': True},
    }
    if builder == 'igreedy':
        mean_objective, mean_primal = total['objective'] / n, total['primal'] / n
        factor = igreedy_factor(inst)
        checks['igreedy_factor'] = {'value': mean_objective, 'bound': factor * mean_primal, 'factor': factor,
                                    'realization_violations': total['factor_violations'],
                                    'pass': mean_objective <= factor * mean_primal + tolerance, 'informational': True}
        ratio = inst.max_bid_to_budget
        checks['igreedy_regime'] = {'value': ratio, 'bound': IGREEDY_MAX_BID_TO_BUDGET,
                                    'pass': ratio <= IGREEDY_MAX_BID_TO_BUDGET, 'informational': True}

    report = FeasibilityReport(builder, algo, g.F, mode, trials, seed, total['residual'], edges, checks, expected)
    log("%s/%s on %s trials: %s" % (algo, builder, trials, "pass" if report.passed else "FAIL"), level=LogLevel.Debug, category="check_certificate")
    return report


def _closed_form_report(inst, algo, builder, trace, g, seed, tolerance):
    expected = expected_dual_wf_worst(trace, g) if builder == 'wf-worst' else expected_dual_vwf_worst(trace, g)
    realized = _build(builder, trace, RandomTape.for_buyers(inst, seed), g)
    primal = float(trace.primal())
    residual = max(abs(realized.objective() - primal), abs(expected.objective() - primal))

    edges = []
    for i, j, e in _active_edges(inst):
        required = g.F * float(e.bid)
        slack = expected.edge_lhs[(i, j)] - required
        edges.append(EdgeVerdict(i, j, slack, 0.0, required, slack >= -tolerance))
    checks = {
        'property1': {'value': residual, 'pass': residual <= tolerance},
        'nonnegative_expectations': {'value': min(list(expected.alpha.values()) + list(expected.beta.values()) + [0.0]),
                                     'pass': all(v >= -tolerance for v in list(expected.alpha.values()) + list(expected.beta.values()))},
        'negative_betas': {'value': len(realized.negative_betas()), 'pass': True, 'informational': True},
    }
    return FeasibilityReport(builder, algo, g.F, 'closed_form', 0, seed, residual, edges, checks, expected)


def _deterministic_report(inst, algo, builder, g, seed, tolerance):
    _, trace = run_algorithm(algo, inst, g=g)
    dual = build_dual_bounded_degree(trace, g)
    primal = float(trace.primal())
    objective = dual.objective()
    d = inst.max_degree

    edges = []
    for i, j, e in _active_edges(inst):
        required = float(e.bid)
        slack = dual.lhs(i, j) - required
        edges.append(EdgeVerdict(i, j, slack, 0.0, required, slack >= -tolerance))
    bound = band1_bound(primal, dual.quadratic_correction, d, g)
    checks = {
        'property1': {'value': objective - primal, 'pass': True, 'informational': True},
        'band1': {'value': objective, 'bound': bound, 'pass': objective <= bound + tolerance},
        'band2': {'value': dual.quadratic_correction, 'bound': primal / 4.0, 'pass': band2_holds(primal, dual.quadratic_correction), 'informational': True},
    }
    if d > 0 and objective > 0:
        checks['ratio'] = {'value': primal / objective, 'bound': bounded_degree_bound(d, g),
                           'pass': primal / objective >= bounded_degree_bound(d, g) - tolerance, 'informational': True}
    return FeasibilityReport(builder, algo, g.F, 'deterministic', 0, seed, abs(objective - primal), edges, checks)
