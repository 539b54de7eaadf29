#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import pickle
import functools
from collections.abc import Mapping
from fractions import Fraction


class FrozenDict(Mapping):
    """
    A read-only mapping. Unlike types.MappingProxyType it pickles, which we
    need because instances, traces and duals are shipped to worker processes.
    """

    __slots__ = ('_data',)

    def __init__(self, *args, **kwargs):
        object.__setattr__(self, '_data', dict(*args, **kwargs))

    def __setattr__(self, name, value):
        raise AttributeError("FrozenDict is read-only")

    def __getitem__(self, key):
        return self._data[key]

    def __iter__(self):
        return iter(self._data)

    def __len__(self):
        return len(self._data)

    def __eq__(self, other):
        if isinstance(other, FrozenDict):
            return self._data == other._data
        if isinstance(other, Mapping):
            return self._data == dict(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._data.items()))

    def __repr__(self):
        return "FrozenDict(%r)" % self._data

    def __reduce__(self):
        return (FrozenDict, (self._data,))


def parse_rational(value):
    """
    Parses a JSON number or a "p/q" string exactly. Floats are routed through
    their decimal repr so 0.1 becomes 1/10 and not the binary approximation.
    """
    if isinstance(value, bool):
        raise ValueError("Booleans are not numbers: %r" % value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError("Could not parse %r as a rational number" % (value,))


def format_rational(value):
    """Integers stay numbers; everything else becomes an exact "p/q" string."""
    value = Fraction(value)
    if value.denominator == 1:
        return value.numerator
    return "%s/%s" % (value.numerator, value.denominator)


def floor_log2(value):
    """Exact floor(log2(value)) for a rational value >= 1, without floating point."""
    value = Fraction(value)
    assert value >= 1, "floor_log2 is only defined here for values >= 1, got %s" % value
    return (value.numerator // value.denominator).bit_length() - 1


# MemoizeImpl is a class that can memoize complex arguments using pickle
# It is meant to be used on Class members and excludes the first (self) argument
class MemoizeImpl:
    misses = 0
    hits = 0

    def __init__(self, fn):
        self.fn = fn
        self.memo = {}

    def __call__(self, *args, **kwds):
        key = pickle.dumps(args[1:], 4) + pickle.dumps(kwds, 4)
        if key not in self.memo:
            MemoizeImpl.misses += 1
            self.memo[key] = self.fn(*args, **kwds)
        else:
            MemoizeImpl.hits += 1

        return self.memo[key]


# Memoize is a decorator that allows you to use functools.wraps
# with a class-based decorator (MemoizeImpl)
# This is needed so that the @logEntryExit decorator will work
# and find e.g. __qualname__ (because @wraps populated it)
def Memoize(func):
    memoized = MemoizeImpl(func)

    @functools.wraps(func)
    def helper(*args, **kwargs):
        return memoized(*args, **kwargs)

    return helper
