"""Desk-scale brute-force references and closed-form evaluators.

Everything here is an independent check path: factorial/exponential
enumerations capped at tiny sizes, exact rational distributions, and
bound formulas evaluated in log space.  These routines are deliberately
simple and slow; the production pipeline never calls them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graphs import Graph, PartialMatching, Permutation
from .sampling import CorrelatedFamily

MLE_N_CAP = 7
MLE_M_CAP = 3
KCORE_N_CAP = 8


# ---------------------------------------------------------------------------
# bitmask helpers for tiny graphs


def _edge_bits(g: Graph) -> int:
    """Edge set as one integer: bit i*n+j set for every edge (i < j)."""
    bits = 0
    for k in g.edge_keys:
        bits |= 1 << int(k)
    return bits


def _relabel_bits(g: Graph, perm: tuple[int, ...]) -> int:
    n = g.n
    bits = 0
    for key in g.edge_keys:
        i, j = divmod(int(key), n)
        u, v = perm[i], perm[j]
        if u > v:
            u, v = v, u
        bits |= 1 << (u * n + v)
    return bits


def _adj_rows(g: Graph) -> list[int]:
    rows = [0] * g.n
    for key in g.edge_keys:
        i, j = divmod(int(key), g.n)
        rows[i] |= 1 << j
        rows[j] |= 1 << i
    return rows


def _core_size_bitmask(rows: list[int], n: int, k: int) -> int:
    alive = (1 << n) - 1
    changed = True
    while changed:
        changed = False
        b = alive
        while b:
            v = (b & -b).bit_length() - 1
            b &= b - 1
            if (rows[v] & alive).bit_count() < k:
                alive &= ~(1 << v)
                changed = True
    return alive


# ---------------------------------------------------------------------------
# Appendix-A maximum likelihood (minimum union edges)


def mle_bruteforce(graphs: list[Graph], n_cap: int = MLE_N_CAP,
                   m_cap: int = MLE_M_CAP, i_understand: bool = False):
    """All permutation profiles minimizing the union edge count.

    Enumerates (n!)^(m-1) profiles, so n and m are capped; pass
    ``i_understand=True`` to override the caps.  Returns
    ``(min_union_edges, profiles)`` where each profile is a tuple of
    Permutations (pi_12, ..., pi_1m).
    """
    m = len(graphs)
    if m < 2:
        raise ValueError("need at least two graphs")
    n = graphs[0].n
    if any(g.n != n for g in graphs):
        raise ValueError("graphs must share a node count")
    if not i_understand and (n > n_cap or m > m_cap):
        raise ValueError(
            f"mle_bruteforce capped at n <= {n_cap}, m <= {m_cap}; "
            "pass i_understand=True to override")
    perms = list(itertools.permutations(range(n)))
    base = _edge_bits(graphs[0])
    relabeled = [[_relabel_bits(g, p) for p in perms] for g in graphs[1:]]
    best = None
    argmins: list[tuple[Permutation, ...]] = []
    for combo in itertools.product(range(len(perms)), repeat=m - 1):
        bits = base
        for gi, pi in enumerate(combo):
            bits |= relabeled[gi][pi]
        count = bits.bit_count()
        if best is None or count < best:
            best = count
            argmins = [combo]
        elif count == best:
            argmins.append(combo)
    profiles = [tuple(Permutation(np.array(perms[pi], dtype=np.int64), validate=False)
                      for pi in combo) for combo in argmins]
    return best, profiles


# ---------------------------------------------------------------------------
# exact pairwise k-core estimator (tiny n)


def kcore_estimator_bruteforce(g1: Graph, g2: Graph, k: int,
                               n_cap: int = KCORE_N_CAP, i_understand: bool = False):
    """Exhaustive k-core estimator over all n! alignments of g2 onto g1.

    Maximizes |core_k(g1 /\\ relabel(g2, sigma))| over permutations sigma
    (ties broken by the lexicographically smallest sigma) and returns
    ``(max_core_size, matching)`` where the matching maps g1 labels to g2
    labels, restricted to the winning core.
    """
    n = g1.n
    if g2.n != n:
        raise ValueError("graphs must share a node count")
    if not i_understand and n > n_cap:
        raise ValueError(
            f"kcore_estimator_bruteforce capped at n <= {n_cap}; "
            "pass i_understand=True to override")
    rows1 = _adj_rows(g1)
    edges2 = [divmod(int(key), n) for key in g2.edge_keys]
    best_size = -1
    best_alive = 0
    best_sigma: tuple[int, ...] | None = None
    for sigma in itertools.permutations(range(n)):
        rows = [0] * n
        for i, j in edges2:
            u, v = sigma[i], sigma[j]
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        for v in range(n):
            rows[v] &= rows1[v]
        alive = _core_size_bitmask(rows, n, k)
        size = alive.bit_count()
        if size > best_size:
            best_size = size
            best_alive = alive
            best_sigma = sigma
    inv = [0] * n
    for src, dst in enumerate(best_sigma):
        inv[dst] = src
    pairs = {}
    b = best_alive
    while b:
        v = (b & -b).bit_length() - 1
        b &= b - 1
        pairs[v] = inv[v]
    return best_size, PartialMatching(pairs)


# ---------------------------------------------------------------------------
# Appendix-B second moment bound on isolated-node pairs


def isolated_stats(g: Graph) -> tuple[int, int]:
    """(K, N): the number of isolated nodes and of unordered pairs of them."""
    K = int((g.degrees() == 0).sum())
    return K, K * (K - 1) // 2


@dataclass(frozen=True)
class SecondMomentInputs:
    n: int
    degrees: np.ndarray
    p_max: float


@dataclass(frozen=True)
class SecondMomentBound:
    primary: float          # proof-supported exponent (4n-2) p_max^2 + 6 p_max
    stated: float           # exponent as stated, (2n-4) p_max^2 + 6 p_max
    mu: float


def second_moment_bound(inp: SecondMomentInputs) -> SecondMomentBound:
    """Lower bound on P(at least two isolated nodes).

    The statement and the proof disagree on the exponent ((2n-4) vs
    (4n-2) times p_max^2); both are evaluated and the smaller,
    proof-supported value is the primary one.
    """
    d = np.asarray(inp.degrees, dtype=np.float64)
    terms = np.exp(-d)
    mu = float(terms.sum())
    ratio = (mu * mu - 2.0 * mu * float(terms.max())) / (4.0 * (mu * mu + mu + 1.0))
    stated = math.exp(-(2.0 * inp.n - 4.0) * inp.p_max ** 2 - 6.0 * inp.p_max) * ratio
    proof = math.exp(-(4.0 * inp.n - 2.0) * inp.p_max ** 2 - 6.0 * inp.p_max) * ratio
    return SecondMomentBound(primary=max(0.0, proof), stated=max(0.0, stated), mu=mu)


# ---------------------------------------------------------------------------
# Appendix-C conditional cut-cost distribution


def _check_cut_args(m: int, l: int, b: int):
    if m < 2:
        raise ValueError("need m >= 2")
    if not 1 <= l <= m // 2:
        raise ValueError(f"cut size l must satisfy 1 <= l <= floor(m/2), got {l}")
    if not 0 <= b <= m:
        raise ValueError("b must be in 0..m")


def cut_prob(m: int, l: int, b: int, t) -> Fraction:
    """P(T_l > t | B = b) for T_l = (X_1+..+X_l)(X_{l+1}+..+X_m), X iid Bern.

    Exact for every real t: conditioned on B = b the set of ones is
    uniform over the C(m, b) placements, so the survival function is the
    hypergeometric sum over split counts i with i*(b-i) > t.  On
    0 <= t < b-1 this collapses to the closed form
    (C(m,b) - C(m-l,b) - C(l,b)) / C(m,b).
    """
    _check_cut_args(m, l, b)
    total = math.comb(m, b)
    hits = 0
    for i in range(max(0, b - (m - l)), min(l, b) + 1):
        if i * (b - i) > t:
            hits += math.comb(l, i) * math.comb(m - l, b - i)
    return Fraction(hits, total)


def cut_prob_closed_form(m: int, l: int, b: int) -> Fraction:
    """The closed-form value valid on 0 <= t < b - 1 (b >= 2)."""
    _check_cut_args(m, l, b)

    def comb0(a, k):
        return math.comb(a, k) if 0 <= k <= a else 0

    return Fraction(comb0(m, b) - comb0(m - l, b) - comb0(l, b), math.comb(m, b))


def cut_prob_enumerated(m: int, l: int, b: int, t) -> Fraction:
    """Independent reference: enumerate all 2^m indicator strings."""
    _check_cut_args(m, l, b)
    hits = 0
    total = 0
    for bits in range(1 << m):
        if bits.bit_count() != b:
            continue
        total += 1
        left = (bits & ((1 << l) - 1)).bit_count()
        if left * (b - left) > t:
            hits += 1
    return Fraction(hits, total)


def dominance_check(m: int, b: int) -> bool:
    """Closed-form stochastic ordering of T_l across l for every threshold.

    Scans all integer t from -1 to floor(m/2)*ceil(m/2), the full support
    of any T_l (a superset of the spec'd -1..m window).
    """
    if not 0 <= b <= m:
        raise ValueError("b must be in 0..m")
    ls = range(1, m // 2 + 1)
    t_max = (m // 2) * ((m + 1) // 2)
    for l1, l2 in itertools.combinations(ls, 2):
        for t in range(-1, t_max + 1):
            if cut_prob(m, l1, b, t) > cut_prob(m, l2, b, t):
                return False
    return True


@dataclass(frozen=True)
class DominanceReport:
    thresholds: np.ndarray
    survival_low: np.ndarray   # empirical survival of c_v(U_l1)
    survival_high: np.ndarray  # empirical survival of c_v(U_l2)
    tolerance: np.ndarray      # 3 * pooled standard error per threshold
    ok: bool
    max_violation: float
    samples: int
    parent_degree: int
    r_constant: float | None = None


def empirical_dominance(family: CorrelatedFamily, v: int, l1: int, l2: int,
                        samples: int, seed: int = 0, k: int | None = None,
                        alpha: float | None = None) -> DominanceReport:
    """Monte Carlo check of the cut-cost ordering at a fixed node.

    Resamples the m children over node v's parent edges and compares the
    empirical survival functions of the cut costs c_v(U_l1) and c_v(U_l2)
    with a 3-standard-error tolerance.
    """
    m = family.m
    if not 1 <= l1 < l2 <= m // 2:
        raise ValueError("need 1 <= l1 < l2 <= floor(m/2)")
    deg = family.parent.degree(v)
    s = family.spec.s
    rng = np.random.Generator(np.random.PCG64(seed))
    x = rng.random((samples, m, deg)) < s

    def cost(l):
        left = x[:, :l, :].sum(axis=1)
        right = x[:, l:, :].sum(axis=1)
        return (left * right).sum(axis=1)

    c1 = cost(l1)
    c2 = cost(l2)
    t_max = int(max(c1.max(), c2.max()))
    ts = np.arange(0, t_max + 1)
    s1 = np.array([(c1 > t).mean() for t in ts])
    s2 = np.array([(c2 > t).mean() for t in ts])
    se = np.sqrt((s1 * (1 - s1) + s2 * (1 - s2)) / samples)
    tol = 3.0 * se
    violation = s1 - s2 - tol
    max_violation = float(violation.max())
    r_constant = None
    if k is not None and alpha is not None:
        r_constant = (m * m / 4.0) * (k + 2.0 / alpha)
    return DominanceReport(thresholds=ts, survival_low=s1, survival_high=s2,
                           tolerance=tol, ok=bool((violation <= 0).all()),
                           max_violation=max_violation, samples=samples,
                           parent_degree=deg, r_constant=r_constant)


# ---------------------------------------------------------------------------
# concentration bound evaluators


def chernoff_upper(np_: float, delta: float, form: str = "upper") -> float:
    """Chernoff bounds for a sum of independent Bernoullis with mean np_.

    form="upper":       P(X >= (1+delta) np) <= (e^d / (1+d)^(1+d))^np, d > 0
    form="upper_large": P(X >= (1+delta) np) <= 2^(-(1+d) np),          d > 5
    form="lower":       P(X <= (1-delta) np) <= (e^-d / (1-d)^(1-d))^np, d in (0,1)
    """
    if np_ < 0:
        raise ValueError("np must be nonnegative")
    if form == "upper":
        if delta <= 0:
            raise ValueError("upper form needs delta > 0")
        return math.exp(np_ * (delta - (1.0 + delta) * math.log1p(delta)))
    if form == "upper_large":
        if delta <= 5:
            raise ValueError("upper_large form needs delta > 5")
        return math.exp(-(1.0 + delta) * np_ * math.log(2.0))
    if form == "lower":
        if not 0.0 < delta < 1.0:
            raise ValueError("lower form needs delta in (0, 1)")
        return math.exp(np_ * (-delta - (1.0 - delta) * math.log(1.0 - delta)))
    raise ValueError(f"unknown form {form!r}")


def poissonized_lower_tail(ex: float, t: float) -> float:
    """P(X <= t) <= exp(-EX/2 + (t/2) log(e EX / t)) for t < EX.

    At t = 0 the second term is read as 0 (the (1/0)^0 = 1 convention).
    """
    if ex <= 0:
        raise ValueError("EX must be positive")
    if t < 0 or t >= ex:
        raise ValueError("need 0 <= t < EX")
    if t == 0:
        return math.exp(-ex / 2.0)
    return math.exp(-ex / 2.0 + (t / 2.0) * math.log(math.e * ex / t))


def mgf_triple(p: float, t: float) -> tuple[float, float, float]:
    """MGFs at t of Bern(p), Pois(p), and 2*Pois(p/2); always ordered <=."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    mx = 1.0 + p * (math.exp(t) - 1.0)
    my = math.exp(p * (math.exp(t) - 1.0))
    mz = math.exp(p * (math.exp(2.0 * t) - 1.0) / 2.0)
    return mx, my, mz
