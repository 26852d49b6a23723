"""k-core computation, low-degree sets, expansion, and the simulated matcher."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import kernels
from .graphs import Graph, PartialMatching, intersect
from .sampling import CorrelatedFamily


@dataclass(frozen=True)
class CoreResult:
    """Members of the k-core: the unique maximal subset whose induced subgraph
    has minimum degree >= k."""

    members: np.ndarray  # sorted node ids
    k: int

    @property
    def size(self) -> int:
        return int(self.members.size)


def core_peel(g: Graph, k: int) -> CoreResult:
    """Peel nodes of current degree < k until none remain; O(n + |E|)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    indptr, indices = g.indptr, g.indices
    alive = kernels.core_peel_mask(g.n, indptr, indices, k)
    return CoreResult(members=np.flatnonzero(alive).astype(np.int64), k=k)


def core_mask(g: Graph, k: int) -> np.ndarray:
    """Boolean membership mask of the k-core."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return kernels.core_peel_mask(g.n, g.indptr, g.indices, k)


def low_degree_set(g: Graph, r: int) -> np.ndarray:
    """Sorted ids of all nodes with degree <= r."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    return np.flatnonzero(g.degrees() <= r).astype(np.int64)


def luczak_expand(g: Graph, u0) -> np.ndarray:
    """Closure of u0 under absorbing outside nodes with >= 3 neighbors inside.

    The result is the unique fixed point of the monotone absorption rule
    and does not depend on processing order.  Returns sorted node ids.
    """
    member = np.zeros(g.n, dtype=np.bool_)
    u0 = np.asarray(list(u0) if not isinstance(u0, np.ndarray) else u0, dtype=np.int64)
    if u0.size:
        if (u0 < 0).any() or (u0 >= g.n).any():
            raise ValueError("u0 contains node ids out of range")
        member[u0] = True
    out = kernels.expand_mask(g.n, g.indptr, g.indices, member)
    return np.flatnonzero(out).astype(np.int64)


def simulated_kcore_match(family: CorrelatedFamily, i: int, j: int, k: int) -> PartialMatching:
    """Simulation-only stand-in for the pairwise k-core estimator.

    Uses the ground truth: computes the k-core of the true intersection
    graph of the aligned children i and j, and returns the (always
    correct) matching restricted to that core, expressed in the observed
    graphs' labelings.  Never use this as a real estimator; the genuine
    estimator maximizes the core size over all permutations and is only
    available for tiny n in :mod:`graphalign.oracle`.
    """
    if not 1 <= i < j <= family.m:
        raise ValueError("need child indices 1 <= i < j <= m")
    inter = intersect(family.children_aligned[i - 1], family.children_aligned[j - 1])
    members = core_peel(inter, k).members
    src = family.truth_to(i).apply(members)
    dst = family.truth_to(j).apply(members)
    return PartialMatching.from_arrays(src, dst)


def write_core_members(core: CoreResult, path: str | os.PathLike):
    """Companion file to the edge-list format: header ``n <count>``, then one
    sorted member id per line."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"n {core.size}\n")
        for v in core.members:
            fh.write(f"{int(v)}\n")
