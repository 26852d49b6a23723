"""Core graph and matching types plus the deterministic set operations.

Node ids are dense 0-based integers.  A :class:`Graph` is an immutable
undirected simple graph stored as a sorted array of edge keys
(``i * n + j`` with ``i < j``) with a lazily built CSR adjacency whose
rows are sorted ascending.  All set operations return new graphs, so
instances are safe to share across concurrent tasks.

The edge-list text interchange format is: a header line ``n <count>``
(the literal letter ``n`` followed by the node count), then one ``i j``
pair per line with ``i < j``, ASCII decimal, whitespace-separated.
"""

from __future__ import annotations

import os
from typing import Iterable, Iterator, Mapping

import numpy as np

from . import kernels


class Graph:
    """Undirected simple graph on nodes ``0..n-1``, immutable after construction."""

    __slots__ = ("n", "_keys", "_indptr", "_indices")

    def __init__(self, n: int, edge_keys: np.ndarray, *, validate: bool = True):
        if n < 0:
            raise ValueError("node count must be nonnegative")
        keys = np.asarray(edge_keys, dtype=np.int64)
        if validate and keys.size:
            i = keys // n
            j = keys % n
            if (i < 0).any() or (j >= n).any():
                raise ValueError("edge key out of range")
            if (i >= j).any():
                raise ValueError("edge keys must satisfy i < j (no self-loops)")
            if (np.diff(keys) <= 0).any():
                raise ValueError("edge keys must be sorted and free of duplicates")
        self.n = int(n)
        self._keys = keys
        self._keys.setflags(write=False)
        self._indptr = None
        self._indices = None

    # construction helpers

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, np.empty(0, dtype=np.int64), validate=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build from (i, j) pairs in any order; rejects self-loops and duplicates."""
        pairs = list(edges)
        if not pairs:
            return cls.empty(n)
        arr = np.asarray(pairs, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError("edges must be (i, j) pairs")
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        if (lo == hi).any():
            raise ValueError("self-loops are not allowed")
        if (lo < 0).any() or (hi >= n).any():
            raise ValueError("node id out of range")
        keys = np.unique(lo * n + hi)
        if keys.size != len(pairs):
            raise ValueError("duplicate edges are not allowed")
        return cls(n, keys, validate=False)

    # basic accessors

    @property
    def edge_keys(self) -> np.ndarray:
        """Sorted int64 edge keys ``i * n + j`` with ``i < j`` (read-only)."""
        return self._keys

    @property
    def edge_count(self) -> int:
        return int(self._keys.size)

    def _ensure_csr(self):
        if self._indptr is None:
            indptr, indices = kernels.csr_from_keys(self.n, self._keys)
            indptr.setflags(write=False)
            indices.setflags(write=False)
            self._indptr = indptr
            self._indices = indices
        return self._indptr, self._indices

    @property
    def indptr(self) -> np.ndarray:
        return self._ensure_csr()[0]

    @property
    def indices(self) -> np.ndarray:
        return self._ensure_csr()[1]

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbor ids of ``v`` (read-only view)."""
        indptr, indices = self._ensure_csr()
        return indices[indptr[v]:indptr[v + 1]]

    def degree(self, v: int) -> int:
        indptr, _ = self._ensure_csr()
        return int(indptr[v + 1] - indptr[v])

    def degrees(self) -> np.ndarray:
        if self.n == 0:
            return np.zeros(0, dtype=np.int64)
        d = np.bincount(self._keys // self.n, minlength=self.n)
        d += np.bincount(self._keys % self.n, minlength=self.n)
        return d

    def has_edge(self, i: int, j: int) -> bool:
        if i == j:
            return False
        lo, hi = (i, j) if i < j else (j, i)
        key = lo * self.n + hi
        pos = np.searchsorted(self._keys, key)
        return pos < self._keys.size and self._keys[pos] == key

    def edges(self) -> Iterator[tuple[int, int]]:
        for k in self._keys:
            yield int(k) // self.n, int(k) % self.n

    def edge_array(self) -> np.ndarray:
        """(E, 2) array of edges, i < j, sorted lexicographically."""
        out = np.empty((self._keys.size, 2), dtype=np.int64)
        out[:, 0] = self._keys // self.n
        out[:, 1] = self._keys % self.n
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._keys, other._keys)

    def __hash__(self):
        return hash((self.n, self._keys.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edge_count})"


class Permutation:
    """Bijection on ``{0, ..., n-1}`` backed by an int64 mapping array."""

    __slots__ = ("mapping",)

    def __init__(self, mapping, *, validate: bool = True):
        arr = np.asarray(mapping, dtype=np.int64)
        if validate:
            n = arr.size
            seen = np.zeros(n, dtype=bool)
            if arr.size and ((arr < 0).any() or (arr >= n).any()):
                raise ValueError("permutation values out of range")
            seen[arr] = True
            if not seen.all():
                raise ValueError("mapping is not a bijection")
        self.mapping = arr
        self.mapping.setflags(write=False)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n, dtype=np.int64), validate=False)

    @property
    def n(self) -> int:
        return int(self.mapping.size)

    def __call__(self, v: int) -> int:
        return int(self.mapping[v])

    def apply(self, values: np.ndarray) -> np.ndarray:
        return self.mapping[values]

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self.mapping)
        inv[self.mapping] = np.arange(self.n, dtype=np.int64)
        return Permutation(inv, validate=False)

    def compose(self, inner: "Permutation") -> "Permutation":
        """self after inner: ``(self.compose(inner))(v) == self(inner(v))``."""
        if inner.n != self.n:
            raise ValueError("size mismatch")
        return Permutation(self.mapping[inner.mapping], validate=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return np.array_equal(self.mapping, other.mapping)

    def __hash__(self):
        return hash(self.mapping.tobytes())

    def __repr__(self):
        return f"Permutation({self.mapping.tolist()})"


class PartialMatching:
    """Injective partial map between node sets, with a maintained inverse map."""

    __slots__ = ("_fwd", "_inv")

    def __init__(self, pairs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        fwd: dict[int, int] = {}
        inv: dict[int, int] = {}
        items = pairs.items() if isinstance(pairs, Mapping) else pairs
        for s, t in items:
            s = int(s)
            t = int(t)
            if s in fwd:
                raise ValueError(f"source {s} mapped twice")
            if t in inv:
                raise ValueError(f"matching not injective: target {t} reused")
            fwd[s] = t
            inv[t] = s
        self._fwd = fwd
        self._inv = inv

    @classmethod
    def from_arrays(cls, sources: np.ndarray, targets: np.ndarray) -> "PartialMatching":
        return cls(zip(map(int, sources), map(int, targets)))

    @classmethod
    def from_array(cls, fwd: np.ndarray) -> "PartialMatching":
        """From a dense forward array with -1 for unmatched sources."""
        src = np.flatnonzero(fwd >= 0)
        return cls.from_arrays(src, fwd[src])

    @property
    def pairs(self) -> dict[int, int]:
        return dict(self._fwd)

    def __len__(self) -> int:
        return len(self._fwd)

    def __contains__(self, source: int) -> bool:
        return source in self._fwd

    def __getitem__(self, source: int) -> int:
        return self._fwd[source]

    def get(self, source: int, default=None):
        return self._fwd.get(source, default)

    def source_of(self, target: int, default=None):
        return self._inv.get(target, default)

    def domain(self) -> np.ndarray:
        return np.array(sorted(self._fwd), dtype=np.int64)

    def image(self) -> np.ndarray:
        return np.array(sorted(self._inv), dtype=np.int64)

    def inverse(self) -> "PartialMatching":
        out = PartialMatching()
        out._fwd = dict(self._inv)
        out._inv = dict(self._fwd)
        return out

    def to_array(self, n: int) -> np.ndarray:
        arr = np.full(n, -1, dtype=np.int64)
        for s, t in self._fwd.items():
            arr[s] = t
        return arr

    def items(self):
        return self._fwd.items()

    def __eq__(self, other) -> bool:
        if not isinstance(other, PartialMatching):
            return NotImplemented
        return self._fwd == other._fwd

    def __repr__(self):
        return f"PartialMatching({len(self._fwd)} pairs)"


class MatchProfile:
    """The tuple of matchings from graph 1 to graphs 2..m."""

    __slots__ = ("m", "matchings")

    def __init__(self, m: int, matchings: list[PartialMatching]):
        if len(matchings) != m - 1:
            raise ValueError("profile needs exactly m-1 matchings")
        self.m = m
        self.matchings = list(matchings)

    def to_graph(self, j: int) -> PartialMatching:
        """Matching from graph 1 to graph ``j`` (2 <= j <= m)."""
        if not 2 <= j <= self.m:
            raise ValueError("graph index out of range")
        return self.matchings[j - 2]

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatchProfile):
            return NotImplemented
        return self.m == other.m and self.matchings == other.matchings


# ---------------------------------------------------------------------------
# set operations


def _require_same_n(a: Graph, b: Graph):
    if a.n != b.n:
        raise ValueError(f"graph size mismatch: {a.n} != {b.n}")


def intersect(a: Graph, b: Graph) -> Graph:
    """Edge present iff present in both inputs."""
    _require_same_n(a, b)
    return Graph(a.n, kernels.intersect_keys(a.edge_keys, b.edge_keys), validate=False)


def union(a: Graph, b: Graph) -> Graph:
    """Edge present iff present in either input."""
    _require_same_n(a, b)
    return Graph(a.n, kernels.union_keys(a.edge_keys, b.edge_keys), validate=False)


def relabel(g: Graph, pi: Permutation) -> Graph:
    """Graph with node ids mapped through ``pi``: {i,j} in g iff {pi(i),pi(j)} in result."""
    if pi.n != g.n:
        raise ValueError(f"permutation size mismatch: {pi.n} != {g.n}")
    if g.edge_count == 0:
        return Graph.empty(g.n)
    i = pi.mapping[g.edge_keys // g.n]
    j = pi.mapping[g.edge_keys % g.n]
    keys = np.minimum(i, j) * g.n + np.maximum(i, j)
    keys.sort()
    return Graph(g.n, keys, validate=False)


def compose(a: PartialMatching, b: PartialMatching) -> PartialMatching:
    """b after a: defined exactly where both legs are, ``v -> b(a(v))``."""
    out = {}
    for s, t in a.items():
        u = b.get(t)
        if u is not None:
            out[s] = u
    return PartialMatching(out)


# ---------------------------------------------------------------------------
# edge-list text format


def write_edge_list(g: Graph, path: str | os.PathLike):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"n {g.n}\n")
        for i, j in g.edges():
            fh.write(f"{i} {j}\n")


def read_edge_list(path: str | os.PathLike) -> Graph:
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().split()
        if len(header) != 2 or header[0] != "n":
            raise ValueError(f"{path}: expected header 'n <count>'")
        n = int(header[1])
        pairs = []
        for lineno, line in enumerate(fh, start=2):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'i j'")
            i, j = int(parts[0]), int(parts[1])
            if not i < j:
                raise ValueError(f"{path}:{lineno}: edges must satisfy i < j")
            pairs.append((i, j))
    return Graph.from_edges(n, pairs)
