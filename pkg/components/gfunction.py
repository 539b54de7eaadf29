#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import math
import dataclasses
from typing import Callable, Optional

import numpy as np


@dataclasses.dataclass(frozen=True)
class GFunction:
    """
    A non-decreasing g on [0,1] with g(1) = 1, its antiderivative G and the
    constant F such that G(t) + 1 - g(t) = F for every t. F is the ratio the
    dual-fitting certificates establish.

    The callables must be module-level functions so a GFunction can be sent
    to worker processes.
    """
    name: str
    g: Callable[[float], float]
    G: Callable[[float], float]
    F: float
    g_prime: Callable[[float], float]
    # inverse(u) = the t in [0,1] with g(t) = u, clamped to the ends
    inverse: Optional[Callable[[float], float]] = None

    def residual(self, points=10000):
        grid = np.linspace(0.0, 1.0, points)
        return max(abs(self.G(t) + 1.0 - self.g(t) - self.F) for t in grid)

    def is_monotone(self, points=10000):
        values = [self.g(t) for t in np.linspace(0.0, 1.0, points)]
        return all(a <= b for a, b in zip(values, values[1:]))

    def validate(self, tolerance=1e-12, points=10000):
        problems = []
        if abs(self.g(1.0) - 1.0) > tolerance:
            problems.append("g(1) = %s, expected 1" % self.g(1.0))
        if not self.is_monotone(points):
            problems.append("g is not non-decreasing on the sampled grid")
        r = self.residual(points)
        if r > tolerance:
            problems.append("max |G(t) + 1 - g(t) - F| = %s exceeds %s" % (r, tolerance))
        return problems

    def level_for(self, u, tolerance=1e-15, max_iterations=200):
        """Solves g(t) = u on [0,1], by the closed form when there is one."""
        if self.inverse is not None:
            return self.inverse(u)
        if u <= self.g(0.0):
            return 0.0
        if u >= self.g(1.0):
            return 1.0
        lo, hi = 0.0, 1.0
        for _ in range(max_iterations):
            mid = (lo + hi) / 2
            if self.g(mid) < u:
                lo = mid
            else:
                hi = mid
            if hi - lo <= tolerance:
                break
        return hi


def _exp_g(x):
    return math.exp(x - 1.0)


def _exp_G(t):
    return math.exp(t - 1.0) - math.exp(-1.0)


def _exp_inverse(u):
    if u <= math.exp(-1.0):
        return 0.0
    if u >= 1.0:
        return 1.0
    return 1.0 + math.log(u)


def g_exponential():
    # g' = g for the exponential
    return GFunction("exponential", _exp_g, _exp_G, 1.0 - math.exp(-1.0), _exp_g, _exp_inverse)


G_FUNCTIONS = {
    'exponential': g_exponential
}


def get_g(name):
    if name not in G_FUNCTIONS:
        raise ValueError("Unknown g-function %r; expected one of %s" % (name, sorted(G_FUNCTIONS)))
    return G_FUNCTIONS[name]()
