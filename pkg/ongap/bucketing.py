#!/usr/bin/env python3

# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.

import dataclasses
from fractions import Fraction

import numpy as np

from algorithms.registry import run_algorithm
from components.logging import LogLevel, log
from components.models import Allocation, Edge, Instance, InstanceError, InstanceKind, Item
from components.utilities import FrozenDict, floor_log2

# Inner algorithms must accept an onbap instance
INNER_ALGORITHMS = ['virtual-wf', 'greedy', 'i-greedy']


class BucketError(Exception):
    pass


@dataclasses.dataclass(frozen=True)
class BucketPartition:
    """
    Edges grouped by s = floor(log2(b/w)), so 2^s <= b/w < 2^(s+1) inside
    bucket s, with the surrogate bid 2^s w >= b/2 on every edge.
    """
    instance: Instance
    eta: Fraction
    bucket_of: FrozenDict    # (buyer, item) -> s
    surrogate: FrozenDict    # (buyer, item) -> 2^s w

    @property
    def count(self):
        return floor_log2(self.eta) + 1

    def edges_in(self, s):
        return sorted(k for k, v in self.bucket_of.items() if v == s)


def bucketize(inst):
    if inst.kind != InstanceKind.ONGAP:
        raise InstanceError("bucketize runs on ongap instances, not %s" % inst.kind.value)
    bucket_of, surrogate = {}, {}
    eta = Fraction(1)
    for i, j, e in inst.edges():
        if e.bid == 0:
            continue
        if e.weight == 0:
            raise BucketError("Edge (%s, %s) has a positive bid and zero weight, so b/w is unbounded" % (i, j))
        ratio = e.bid / e.weight
        s = floor_log2(ratio)
        bucket_of[(i, j)] = s
        surrogate[(i, j)] = Fraction(2) ** s * e.weight
        eta = max(eta, ratio)
    return BucketPartition(inst, eta, FrozenDict(bucket_of), FrozenDict(surrogate))


def bucket_instance(partition, s):
    """The onbap instance of bucket s: only its edges, with bids = weights = w."""
    inst = partition.instance
    keep = set(partition.edges_in(s))
    items = tuple(Item(item.id, tuple(Edge(e.buyer, e.weight, e.weight) for e in item.edges if (e.buyer, item.id) in keep))
                  for item in inst.items)
    return Instance(InstanceKind.ONBAP, inst.buyers, items, inst.arrival)


def _run_bucket(inst, partition, s, inner, g, policy):
    if inner not in INNER_ALGORITHMS:
        raise ValueError("Unknown inner algorithm %r; expected one of %s" % (inner, INNER_ALGORITHMS))
    alloc, _ = run_algorithm(inner, bucket_instance(partition, s), g=g, policy=policy)
    return Allocation(inst, dict(alloc.x))


def ongap_randomized(inst, inner='virtual-wf', seed=0, g=None, policy=None):
    """Runs inner on one bucket chosen uniformly by default_rng(seed)."""
    partition = bucketize(inst)
    s = int(np.random.default_rng(seed).integers(partition.count))
    alloc = _run_bucket(inst, partition, s, inner, g, policy)
    log("OnGAP wrapper picked bucket %s of %s, value %s" % (s, partition.count, float(alloc.value())), level=LogLevel.Debug, category="ongap_randomized")
    return alloc, s


def bucket_runs(inst, inner='virtual-wf', g=None, policy=None):
    partition = bucketize(inst)
    return [_run_bucket(inst, partition, s, inner, g, policy) for s in range(partition.count)]


def ongap_derandomized(inst, inner='virtual-wf', g=None, policy=None):
    """The unweighted average of the allocations of every bucket; empty buckets count as zero."""
    runs = bucket_runs(inst, inner, g, policy)
    x = {}
    for alloc in runs:
        for key, v in alloc.x.items():
            x[key] = x.get(key, 0) + v
    return Allocation(inst, {k: v / len(runs) for k, v in x.items()})


def ongap_guarantee(inst, c):
    """c / (2 (1 + floor(log2 eta))): the ratio the wrapper keeps from a c-competitive inner algorithm."""
    return c / (2 * bucketize(inst).count)
