"""Parameter-matrix models and the correlated-family subsampling sampler.

A model is described declaratively by :class:`ModelSpec` and realized as
a :class:`ParameterMatrix`: a probability oracle ``prob(i, j)`` plus the
expected-degree vector ``d_i = sum_{j != i} p_ij`` and ``p_max``, with an
efficient parent-graph sampler per model family (geometric skipping for
ER/SBM, a uniform spatial grid for RGG).

A family of m correlated graphs is produced by sampling one parent graph
from P, keeping each parent edge independently with probability ``s`` in
each of the m children, and hiding the correspondence of children 2..m
behind uniform random permutations.  All randomness is derived from
``spec.seed`` via the substream scheme in :mod:`graphalign.seeding`
(tags: parent, child k, permutation k, latent), so equal specs produce
bit-identical families.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import kernels
from .graphs import Graph, Permutation, relabel, write_edge_list
from .seeding import TAG_CHILD, TAG_LATENT, TAG_PARENT, TAG_PERM, rng_from

KINDS = ("er", "sbm", "rgg", "clg", "dense", "anchor")


@dataclass(frozen=True)
class ModelSpec:
    """Declarative description of a parameter matrix and subsampling setup."""

    n: int
    kind: str
    params: dict
    s: float
    m: int
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "kind": self.kind,
            "params": self.params,
            "s": self.s,
            "m": self.m,
            "seed": self.seed,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ModelSpec":
        missing = [f for f in ("n", "kind", "params", "s", "m", "seed") if f not in doc]
        if missing:
            raise ValueError(f"model spec missing fields: {', '.join(missing)}")
        spec = cls(
            n=int(doc["n"]),
            kind=str(doc["kind"]).lower(),
            params=dict(doc["params"]),
            s=float(doc["s"]),
            m=int(doc["m"]),
            seed=int(doc["seed"]),
        )
        validate_spec(spec)
        return spec

    def save(self, path):
        with open(path, "w", encoding="ascii") as fh:
            json.dump(self.to_json_dict(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "ModelSpec":
        with open(path, "r", encoding="ascii") as fh:
            return cls.from_json_dict(json.load(fh))


def validate_spec(spec: ModelSpec):
    if spec.n < 0:
        raise ValueError("field n: must be nonnegative")
    if spec.kind not in KINDS:
        raise ValueError(f"field kind: unknown model kind {spec.kind!r}")
    if not 0.0 < spec.s <= 1.0:
        raise ValueError("field s: subsampling probability must be in (0, 1]")
    if spec.m < 2:
        raise ValueError("field m: need at least two graphs")


# ---------------------------------------------------------------------------
# low-level sampling helpers


def bernoulli_indices(rng: np.random.Generator, count: int, p: float) -> np.ndarray:
    """Indices in [0, count) each kept independently with probability p.

    Geometric skipping: O(expected hits) draws instead of O(count).
    Output is sorted ascending.
    """
    count = int(count)
    if count <= 0 or p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(count, dtype=np.int64)
    chunks = []
    pos = -1
    while True:
        est = int((count - pos - 1) * p * 1.05) + 16
        gaps = rng.geometric(p, size=est).astype(np.int64)
        idx = pos + np.cumsum(gaps)
        last = int(idx[-1])
        if last >= count:
            chunks.append(idx[idx < count])
            break
        chunks.append(idx)
        pos = last
    return np.concatenate(chunks)


def tri_unrank(t: np.ndarray, g: int) -> tuple[np.ndarray, np.ndarray]:
    """Map linear indices of the i<j triangle over g nodes back to (i, j)."""
    t = np.asarray(t, dtype=np.int64)
    if t.size == 0:
        return t, t.copy()
    b = 2.0 * g - 1.0
    i = np.floor((b - np.sqrt(b * b - 8.0 * t)) / 2.0).astype(np.int64)
    i = np.clip(i, 0, g - 2)
    # float guess is within +-1; two integer correction passes pin it down
    for _ in range(2):
        i -= (i * (2 * g - i - 1) // 2 > t) & (i > 0)
    for _ in range(2):
        i += ((i + 1) * (2 * g - i - 2) // 2 <= t) & (i < g - 2)
    j = t - i * (2 * g - i - 1) // 2 + i + 1
    return i, j


def _row_bernoulli_keys(rng, n, row_probs: Callable[[int], np.ndarray]) -> np.ndarray:
    """Parent keys for explicit-probability rows (O(n^2) draws, O(n) memory)."""
    chunks = []
    for i in range(n - 1):
        mask = rng.random(n - 1 - i) < row_probs(i)
        js = np.flatnonzero(mask)
        if js.size:
            chunks.append(i * n + (js + i + 1))
    if not chunks:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(chunks)


# ---------------------------------------------------------------------------
# parameter matrices


class ParameterMatrix:
    """Probability oracle p(i, j) with degree sums and an efficient sampler."""

    kind = "abstract"

    def __init__(self, n: int):
        self.n = n
        self.p_max = 0.0
        self.degrees = np.zeros(n, dtype=np.float64)
        self.latent: dict = {}

    def prob(self, i: int, j: int) -> float:
        raise NotImplementedError

    def sample_parent_keys(self, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError


class ERMatrix(ParameterMatrix):
    kind = "er"

    def __init__(self, n: int, p: float):
        super().__init__(n)
        if not 0.0 <= p <= 1.0:
            raise ValueError("param p: probability must be in [0, 1]")
        self.p = float(p)
        self.p_max = self.p if n > 1 else 0.0
        self.degrees = np.full(n, (n - 1) * self.p, dtype=np.float64)

    def prob(self, i, j):
        return 0.0 if i == j else self.p

    def sample_parent_keys(self, rng):
        t = bernoulli_indices(rng, self.n * (self.n - 1) // 2, self.p)
        i, j = tri_unrank(t, self.n)
        return i * self.n + j


class SBMMatrix(ParameterMatrix):
    kind = "sbm"

    def __init__(self, n: int, sizes: list[int], q: np.ndarray):
        super().__init__(n)
        sizes = [int(x) for x in sizes]
        if sum(sizes) != n or any(x <= 0 for x in sizes):
            raise ValueError("param sizes: community sizes must be positive and sum to n")
        q = np.asarray(q, dtype=np.float64)
        M = len(sizes)
        if q.shape != (M, M):
            raise ValueError("param q: table must be M x M")
        if not np.allclose(q, q.T):
            raise ValueError("param q: table must be symmetric")
        if (q < 0).any() or (q > 1).any():
            raise ValueError("param q: probabilities must be in [0, 1]")
        self.sizes = sizes
        self.q = q
        self.offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
        self.block_of = np.repeat(np.arange(M, dtype=np.int64), sizes)
        sz = np.asarray(sizes, dtype=np.float64)
        per_block = q @ sz - np.diag(q)  # j != i removes one node of own block
        self.degrees = per_block[self.block_of]
        self.p_max = float(q.max()) if n > 1 and M > 0 else 0.0
        self.latent = {"assignment": self.block_of}

    @classmethod
    def balanced(cls, n: int, M: int, q: np.ndarray) -> "SBMMatrix":
        """Contiguous blocks whose sizes differ by at most one."""
        base, rem = divmod(n, M)
        sizes = [base + 1] * rem + [base] * (M - rem)
        return cls(n, sizes, q)

    def prob(self, i, j):
        if i == j:
            return 0.0
        return float(self.q[self.block_of[i], self.block_of[j]])

    def sample_parent_keys(self, rng):
        n = self.n
        M = len(self.sizes)
        chunks = []
        for a in range(M):
            lo_a = int(self.offsets[a])
            ga = self.sizes[a]
            for b in range(a, M):
                p = float(self.q[a, b])
                if a == b:
                    t = bernoulli_indices(rng, ga * (ga - 1) // 2, p)
                    if t.size:
                        i, j = tri_unrank(t, ga)
                        chunks.append((i + lo_a) * n + (j + lo_a))
                else:
                    lo_b = int(self.offsets[b])
                    gb = self.sizes[b]
                    t = bernoulli_indices(rng, ga * gb, p)
                    if t.size:
                        i = t // gb + lo_a
                        j = t % gb + lo_b
                        chunks.append(i * n + j)
        if not chunks:
            return np.empty(0, dtype=np.int64)
        keys = np.concatenate(chunks)
        keys.sort()
        return keys


class RGGMatrix(ParameterMatrix):
    """Random geometric graph on the unit square, dimension fixed to 2."""

    kind = "rgg"

    def __init__(self, n: int, p: float, r: float, points: np.ndarray):
        super().__init__(n)
        if not 0.0 <= p <= 1.0:
            raise ValueError("param p: probability must be in [0, 1]")
        if r <= 0:
            raise ValueError("param r: radius must be positive")
        points = np.asarray(points, dtype=np.float64)
        if points.shape != (n, 2):
            raise ValueError("points must have shape (n, 2)")
        self.p = float(p)
        self.r = float(r)
        self.points = points
        ncell = max(1, int(1.0 / r)) if r < 1.0 else 1
        cell_x = np.minimum((points[:, 0] * ncell).astype(np.int64), ncell - 1)
        cell_y = np.minimum((points[:, 1] * ncell).astype(np.int64), ncell - 1)
        cell = cell_y * ncell + cell_x
        order = np.argsort(cell, kind="stable").astype(np.int64)
        cell_start = np.searchsorted(cell[order], np.arange(ncell * ncell + 1)).astype(np.int64)
        self.candidate_keys = kernels.rgg_candidate_keys(
            n,
            np.ascontiguousarray(points[order, 0]),
            np.ascontiguousarray(points[order, 1]),
            order,
            cell_start,
            ncell,
            self.r,
        )
        within = np.zeros(n, dtype=np.int64)
        if self.candidate_keys.size:
            within += np.bincount(self.candidate_keys // n, minlength=n)
            within += np.bincount(self.candidate_keys % n, minlength=n)
        self.n_r = within + 1  # r-neighborhood count, self included
        self.degrees = self.p * within.astype(np.float64)
        self.p_max = self.p if self.candidate_keys.size else 0.0
        self.latent = {"points": points, "n_r": self.n_r}

    def prob(self, i, j):
        if i == j:
            return 0.0
        d = self.points[i] - self.points[j]
        return self.p if float(d @ d) <= self.r * self.r else 0.0

    def sample_parent_keys(self, rng):
        keep = rng.random(self.candidate_keys.size) < self.p
        return self.candidate_keys[keep]


class CLGMatrix(ParameterMatrix):
    kind = "clg"

    def __init__(self, n: int, weights: np.ndarray):
        super().__init__(n)
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != (n,):
            raise ValueError("param weights: need one weight per node")
        if (w <= 0).any():
            raise ValueError("param weights: weights must be positive")
        total = float(w.sum())
        if (w > math.sqrt(total) + 1e-12).any():
            raise ValueError("param weights: require w_i <= sqrt(sum of weights)")
        self.w = w
        self.total = total
        self.degrees = w * (total - w) / total
        if n > 1:
            top2 = np.partition(w, n - 2)[-2:]
            self.p_max = float(top2[0] * top2[1] / total)
        self.latent = {"weights": w}

    def prob(self, i, j):
        if i == j:
            return 0.0
        return float(self.w[i] * self.w[j] / self.total)

    def sample_parent_keys(self, rng):
        w = self.w
        total = self.total
        return _row_bernoulli_keys(rng, self.n, lambda i: w[i] * w[i + 1:] / total)


class DenseMatrix(ParameterMatrix):
    kind = "dense"

    def __init__(self, n: int, P: np.ndarray):
        super().__init__(n)
        P = np.asarray(P, dtype=np.float64)
        if P.shape != (n, n):
            raise ValueError("param P: matrix must be n x n")
        if not np.allclose(P, P.T):
            raise ValueError("param P: matrix must be symmetric")
        if np.diag(P).any():
            raise ValueError("param P: diagonal must be zero")
        if (P < 0).any() or (P > 1).any():
            raise ValueError("param P: probabilities must be in [0, 1]")
        self.P = P
        self.degrees = P.sum(axis=1)
        self.p_max = float(P.max()) if n > 1 else 0.0

    def prob(self, i, j):
        return float(self.P[i, j])

    def sample_parent_keys(self, rng):
        P = self.P
        return _row_bernoulli_keys(rng, self.n, lambda i: P[i, i + 1:])


class AnchorMatrix(ParameterMatrix):
    """P = p_max times the adjacency matrix of a sampled anchor graph ER(n, q)."""

    kind = "anchor"

    def __init__(self, n: int, p_max: float, q: float, anchor: Graph):
        super().__init__(n)
        if not 0.0 <= p_max <= 1.0:
            raise ValueError("param p_max: probability must be in [0, 1]")
        if not 0.0 <= q <= 1.0:
            raise ValueError("param q: probability must be in [0, 1]")
        self.scale = float(p_max)
        self.q = float(q)
        self.anchor = anchor
        self.degrees = self.scale * anchor.degrees().astype(np.float64)
        self.p_max = self.scale if anchor.edge_count else 0.0
        self.latent = {"anchor": anchor}

    def prob(self, i, j):
        return self.scale if self.anchor.has_edge(i, j) else 0.0

    def sample_parent_keys(self, rng):
        keep = rng.random(self.anchor.edge_count) < self.scale
        return self.anchor.edge_keys[keep]


def build_anchor_matrix(n: int, p_max: float, q: float, seed: int) -> AnchorMatrix:
    """Sample the anchor graph ER(n, q) and wrap it as a parameter matrix."""
    rng = rng_from(seed, TAG_LATENT)
    er = ERMatrix(n, q)
    anchor = Graph(n, er.sample_parent_keys(rng), validate=False)
    return AnchorMatrix(n, p_max, q, anchor)


def anchor_q(n: int, s: float, eps_prime: float) -> float:
    """Anchor edge probability from q*s = (1 + 2*eps') / log(n)."""
    return (1.0 + 2.0 * eps_prime) / (s * math.log(n))


def _sbm_table(params: dict) -> np.ndarray:
    if "q" in params and not np.isscalar(params["q"]):
        return np.asarray(params["q"], dtype=np.float64)
    M = int(params["M"])
    q_in = float(params.get("q_in", params.get("p")))
    q_out = float(params.get("q_out", params.get("q")))
    return np.full((M, M), q_out) + np.eye(M) * (q_in - q_out)


def build_parameter_matrix(spec: ModelSpec) -> ParameterMatrix:
    """Realize a ModelSpec; RGG latent points are sampled here from spec.seed."""
    validate_spec(spec)
    n, params = spec.n, spec.params
    if spec.kind == "er":
        return ERMatrix(n, float(params["p"]))
    if spec.kind == "sbm":
        q = _sbm_table(params)
        if "sizes" in params:
            return SBMMatrix(n, list(params["sizes"]), q)
        return SBMMatrix.balanced(n, int(params["M"]), q)
    if spec.kind == "rgg":
        if "points_file" in params:
            points = np.loadtxt(params["points_file"], dtype=np.float64).reshape(n, 2)
        else:
            points = rng_from(spec.seed, TAG_LATENT).random((n, 2))
        return RGGMatrix(n, float(params["p"]), float(params["r"]), points)
    if spec.kind == "clg":
        return CLGMatrix(n, np.asarray(params["weights"], dtype=np.float64))
    if spec.kind == "dense":
        return DenseMatrix(n, np.asarray(params["P"], dtype=np.float64))
    if spec.kind == "anchor":
        return build_anchor_matrix(n, float(params["p_max"]), float(params["q"]), spec.seed)
    raise ValueError(f"unknown model kind {spec.kind!r}")


# ---------------------------------------------------------------------------
# correlated families


@dataclass
class CorrelatedFamily:
    """Parent graph, aligned children, hidden permutations, observed graphs."""

    spec: ModelSpec
    model: ParameterMatrix
    parent: Graph
    children_aligned: list[Graph]
    truth: list[Permutation]  # truth[k-2] is the hidden permutation of child k
    observed: list[Graph]
    latent: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.parent.n

    @property
    def m(self) -> int:
        return len(self.children_aligned)

    def truth_to(self, k: int) -> Permutation:
        """Hidden permutation carrying child-k aligned labels to observed labels."""
        if not 1 <= k <= self.m:
            raise ValueError("child index out of range")
        if k == 1:
            return Permutation.identity(self.n)
        return self.truth[k - 2]

    def truth_between(self, i: int, j: int) -> Permutation:
        """Ground-truth correspondence from observed graph i to observed graph j."""
        return self.truth_to(j).compose(self.truth_to(i).inverse())


def sample_family(spec: ModelSpec) -> CorrelatedFamily:
    """Sample a correlated family; bit-identical for equal specs."""
    validate_spec(spec)
    model = build_parameter_matrix(spec)
    parent = Graph(spec.n, model.sample_parent_keys(rng_from(spec.seed, TAG_PARENT)),
                   validate=False)
    children = []
    for k in range(1, spec.m + 1):
        crng = rng_from(spec.seed, TAG_CHILD, k)
        keep = crng.random(parent.edge_count) < spec.s
        children.append(Graph(spec.n, parent.edge_keys[keep], validate=False))
    truths = []
    observed = [children[0]]
    for k in range(2, spec.m + 1):
        prng = rng_from(spec.seed, TAG_PERM, k)
        pi = Permutation(prng.permutation(spec.n), validate=False)
        truths.append(pi)
        observed.append(relabel(children[k - 1], pi))
    return CorrelatedFamily(spec, model, parent, children, truths, observed, model.latent)


def export_family(family: CorrelatedFamily, prefix: str | os.PathLike,
                  include_parent: bool = False):
    """Write observed graphs as edge-list files plus a JSON truth file.

    Produces ``<prefix>.g<k>.edges`` for k = 1..m and ``<prefix>.truth.json``
    mapping child index to its hidden permutation array.
    """
    prefix = os.fspath(prefix)
    for k, g in enumerate(family.observed, start=1):
        write_edge_list(g, f"{prefix}.g{k}.edges")
    if include_parent:
        write_edge_list(family.parent, f"{prefix}.parent.edges")
    truth_doc = {str(k): family.truth_to(k).mapping.tolist()
                 for k in range(2, family.m + 1)}
    with open(f"{prefix}.truth.json", "w", encoding="ascii") as fh:
        json.dump(truth_doc, fh)
        fh.write("\n")


def spec_with(spec: ModelSpec, **changes) -> ModelSpec:
    return replace(spec, **changes)
