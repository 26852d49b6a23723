"""Pairwise matching assembly, transitive-closure boosting, and scoring.

The pairwise table holds a partial matching for every unordered pair of
graphs.  Boosting extends each pair by following matched labels across
intermediate graphs: a node is matched between graphs i and j after
closure exactly when j is reachable from i in the per-node graph whose
vertices are the m graphs and whose edges are the pairs currently
matching the node.  Traversal is bidirectional (matchings are injective,
so inverses are well-defined) and level-synchronous BFS with neighbor
order g1 < ... < gm; the first image found wins and any later
disagreement is counted as a conflict.  With ground-truth-consistent
inputs the conflict count is zero and closure output stays correct.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .graphs import MatchProfile, PartialMatching
from .kcore import core_mask, simulated_kcore_match
from .sampling import CorrelatedFamily


class PairwiseMatchings:
    """Partial matchings for all m(m-1)/2 unordered pairs, observed labels."""

    def __init__(self, n: int, m: int, table: dict[tuple[int, int], PartialMatching]):
        expected = {(i, j) for i in range(1, m + 1) for j in range(i + 1, m + 1)}
        if set(table) != expected:
            raise ValueError("table must contain every pair {i,j} with 1 <= i < j <= m")
        self.n = n
        self.m = m
        self.table = dict(table)

    def __getitem__(self, pair: tuple[int, int]) -> PartialMatching:
        return self.table[pair]

    def pairs(self):
        return sorted(self.table)

    def to_tensor(self) -> np.ndarray:
        """(m, m, n) tensor of ordered matchings, -1 where undefined."""
        M = np.full((self.m, self.m, self.n), -1, dtype=np.int64)
        for (i, j), pm in self.table.items():
            for s, t in pm.items():
                M[i - 1, j - 1, s] = t
                M[j - 1, i - 1, t] = s
        return M


def pairwise_match_all(family: CorrelatedFamily, matcher: str = "simulated",
                       k: int = 1, brute_cap: int = 8) -> PairwiseMatchings:
    """Fill the pairwise table with the chosen matcher.

    ``simulated`` uses the ground-truth k-core shortcut; ``bruteforce``
    runs the exact estimator over all n! permutations and refuses
    n > ``brute_cap``.
    """
    table: dict[tuple[int, int], PartialMatching] = {}
    if matcher == "simulated":
        for i in range(1, family.m + 1):
            for j in range(i + 1, family.m + 1):
                table[(i, j)] = simulated_kcore_match(family, i, j, k)
    elif matcher == "bruteforce":
        if family.n > brute_cap:
            raise ValueError(
                f"brute-force estimator limited to n <= {brute_cap}, got n = {family.n}")
        from .oracle import kcore_estimator_bruteforce

        for i in range(1, family.m + 1):
            for j in range(i + 1, family.m + 1):
                _, match = kcore_estimator_bruteforce(
                    family.observed[i - 1], family.observed[j - 1], k)
                table[(i, j)] = match
    else:
        raise ValueError(f"unknown matcher {matcher!r}")
    return PairwiseMatchings(family.n, family.m, table)


@dataclass
class PairStats:
    matched_pre: float
    matched_post: float
    correct_pre: float | None = None
    correct_post: float | None = None


@dataclass
class ClosureOutput:
    """Result of boosting: extended pairs, the graph-1 profile, and stats."""

    n: int
    m: int
    table: PairwiseMatchings
    extended_tensor: np.ndarray  # ordered (m, m, n) closure results
    pair_extended: dict[tuple[int, int], PartialMatching]
    profile: MatchProfile
    conflicts: int
    stats: dict[tuple[int, int], PairStats] = field(default_factory=dict)


def transitive_close(pm: PairwiseMatchings, n: int | None = None,
                     m: int | None = None) -> ClosureOutput:
    """Extend every pairwise matching by transitive closure."""
    if n is not None and n != pm.n:
        raise ValueError("n does not match the pairwise table")
    if m is not None and m != pm.m:
        raise ValueError("m does not match the pairwise table")
    M = pm.to_tensor()
    ext, conflicts = kernels.closure(M)
    pair_extended = {}
    stats = {}
    for i, j in pm.pairs():
        arr = ext[i - 1, j - 1]
        pair_extended[(i, j)] = PartialMatching.from_array(arr)
        stats[(i, j)] = PairStats(
            matched_pre=len(pm[(i, j)]) / pm.n if pm.n else 0.0,
            matched_post=int((arr >= 0).sum()) / pm.n if pm.n else 0.0,
        )
    profile = MatchProfile(pm.m, [pair_extended[(1, j)] for j in range(2, pm.m + 1)])
    return ClosureOutput(n=pm.n, m=pm.m, table=pm, extended_tensor=ext,
                         pair_extended=pair_extended, profile=profile,
                         conflicts=conflicts, stats=stats)


def build_transitivity_graph(pm: PairwiseMatchings | None, family: CorrelatedFamily,
                             v: int, variant: str = "observed",
                             k: int | None = None) -> np.ndarray:
    """Adjacency bitmasks of the m-vertex transitivity graph of node v.

    ``observed`` puts an edge {g_i, g_j} when v's label in graph i lies in
    the domain of the pairwise matching; ``ground_truth`` when v is in the
    k-core of the true intersection graph of children i and j (requires
    ``k``).  ``v`` is an aligned (graph 1) label; the family's hidden
    permutations carry it into each observed labeling.
    """
    m = family.m
    masks = np.zeros(m, dtype=np.int64)
    if variant == "observed":
        if pm is None:
            raise ValueError("observed variant needs the pairwise table")
        for i in range(1, m + 1):
            label_i = family.truth_to(i)(v)
            for j in range(i + 1, m + 1):
                if label_i in pm[(i, j)]:
                    masks[i - 1] |= 1 << (j - 1)
                    masks[j - 1] |= 1 << (i - 1)
    elif variant == "ground_truth":
        if k is None:
            raise ValueError("ground_truth variant needs k")
        from .graphs import intersect

        for i in range(1, m + 1):
            for j in range(i + 1, m + 1):
                inter = intersect(family.children_aligned[i - 1],
                                  family.children_aligned[j - 1])
                if core_mask(inter, k)[v]:
                    masks[i - 1] |= 1 << (j - 1)
                    masks[j - 1] |= 1 << (i - 1)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return masks


def is_connected(masks: np.ndarray) -> bool:
    """Connectivity of an m-vertex graph given adjacency bitmasks."""
    m = masks.size
    if m <= 1:
        return True
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        b = frontier
        while b:
            v = (b & -b).bit_length() - 1
            b &= b - 1
            nxt |= int(masks[v])
        frontier = nxt & ~seen
        seen |= nxt
    return seen == (1 << m) - 1


@dataclass
class ScoreReport:
    per_pair: dict[tuple[int, int], PairStats]
    mean_matched_pre: float
    mean_matched_post: float
    exact_all: bool
    conflicts: int


def _truth_arrays(family_or_truth, n: int, m: int):
    if isinstance(family_or_truth, CorrelatedFamily):
        return {(i, j): family_or_truth.truth_between(i, j).mapping
                for i in range(1, m + 1) for j in range(i + 1, m + 1)}
    perms = list(family_or_truth)  # pi*_{1k} for k = 2..m
    if len(perms) != m - 1:
        raise ValueError("need m-1 ground-truth permutations")
    idmap = np.arange(n, dtype=np.int64)
    to_obs = [idmap] + [p.mapping for p in perms]
    inv = [np.argsort(a).astype(np.int64) for a in to_obs]
    return {(i, j): to_obs[j - 1][inv[i - 1]]
            for i in range(1, m + 1) for j in range(i + 1, m + 1)}


def score(out: ClosureOutput, truth) -> ScoreReport:
    """Matched and correct fractions per pair, plus the exact-recovery flag.

    ``truth`` is a CorrelatedFamily or the sequence of hidden permutations
    pi*_{1k}.  Correct fractions are None when the domain is empty.
    """
    tmaps = _truth_arrays(truth, out.n, out.m)
    per_pair = {}
    for (i, j), st in out.stats.items():
        tij = tmaps[(i, j)]
        pre = out.table[(i, j)]
        post = out.pair_extended[(i, j)]
        correct_pre = None
        if len(pre):
            good = sum(1 for s, t in pre.items() if tij[s] == t)
            correct_pre = good / len(pre)
        correct_post = None
        if len(post):
            good = sum(1 for s, t in post.items() if tij[s] == t)
            correct_post = good / len(post)
        per_pair[(i, j)] = PairStats(st.matched_pre, st.matched_post,
                                     correct_pre, correct_post)
    exact_all = True
    for j in range(2, out.m + 1):
        entry = out.profile.to_graph(j)
        arr = entry.to_array(out.n)
        if (arr < 0).any() or not np.array_equal(arr, tmaps[(1, j)]):
            exact_all = False
            break
    pairs = sorted(per_pair)
    mean_pre = float(np.mean([per_pair[p].matched_pre for p in pairs])) if pairs else 0.0
    mean_post = float(np.mean([per_pair[p].matched_post for p in pairs])) if pairs else 0.0
    return ScoreReport(per_pair=per_pair, mean_matched_pre=mean_pre,
                       mean_matched_post=mean_post, exact_all=exact_all,
                       conflicts=out.conflicts)


def _eliminate_one(matching: PartialMatching, n: int) -> PartialMatching:
    # exactly one unmatched source and one unused target: forced assignment
    if len(matching) != n - 1:
        return matching
    total = n * (n - 1) // 2
    src = total - sum(matching.pairs.keys()) if n > 1 else 0
    tgt = total - sum(matching.pairs.values()) if n > 1 else 0
    pairs = matching.pairs
    pairs[src] = tgt
    return PartialMatching(pairs)


def complete_by_elimination(profile: MatchProfile, n: int) -> MatchProfile:
    """Fill any profile entry missing exactly one source/target pair."""
    return MatchProfile(profile.m, [_eliminate_one(pm, n) for pm in profile.matchings])


def apply_elimination(out: ClosureOutput) -> ClosureOutput:
    """Apply the single-missing-node rule to every extended pair."""
    pair_extended = {}
    stats = {}
    ext = out.extended_tensor.copy()
    for (i, j), pm in out.pair_extended.items():
        filled = _eliminate_one(pm, out.n)
        pair_extended[(i, j)] = filled
        if filled is not pm:
            arr = filled.to_array(out.n)
            ext[i - 1, j - 1] = arr
            inv = np.full(out.n, -1, dtype=np.int64)
            dom = np.flatnonzero(arr >= 0)
            inv[arr[dom]] = dom
            ext[j - 1, i - 1] = inv
        stats[(i, j)] = PairStats(
            matched_pre=out.stats[(i, j)].matched_pre,
            matched_post=len(filled) / out.n if out.n else 0.0,
        )
    profile = MatchProfile(out.m, [pair_extended[(1, j)] for j in range(2, out.m + 1)])
    return ClosureOutput(n=out.n, m=out.m, table=out.table, extended_tensor=ext,
                         pair_extended=pair_extended, profile=profile,
                         conflicts=out.conflicts, stats=stats)
