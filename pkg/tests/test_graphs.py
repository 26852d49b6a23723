import numpy as np
import pytest

from graphalign.graphs import (Graph, PartialMatching, Permutation, compose,
                               intersect, read_edge_list, relabel, union,
                               write_edge_list)
from graphalign.seeding import rng_from


def triangle():
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


def random_graph(rng, n, p):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def edge_set(g):
    return {(i, j) for i, j in g.edges()}


class TestGraphBasics:
    def test_invariants(self):
        g = Graph.from_edges(4, [(2, 3), (0, 1), (1, 3)])
        assert g.edge_count == 3
        assert g.degrees().sum() == 2 * g.edge_count
        for v in range(4):
            nbrs = g.neighbors(v)
            assert (np.diff(nbrs) > 0).all()
            for u in nbrs:
                assert v in g.neighbors(u)

    def test_has_edge(self):
        g = triangle()
        assert g.has_edge(0, 1) and g.has_edge(1, 0)
        assert not g.has_edge(0, 0)
        assert not Graph.empty(3).has_edge(0, 1)

    def test_rejects_self_loops_and_duplicates(self):
        with pytest.raises(ValueError):
            Graph.from_edges(3, [(0, 0)])
        with pytest.raises(ValueError):
            Graph.from_edges(3, [(0, 1), (1, 0)])
        with pytest.raises(ValueError):
            Graph.from_edges(2, [(0, 5)])


class TestSetOps:
    def test_intersect_idempotent(self):
        g = triangle()
        assert intersect(g, g) == g

    def test_intersect_definition(self):
        a = Graph.from_edges(3, [(0, 1), (1, 2)])
        b = Graph.from_edges(3, [(1, 2)])
        assert edge_set(intersect(a, b)) == {(1, 2)}

    def test_union_identity(self):
        g = triangle()
        assert union(g, Graph.empty(3)) == g

    def test_union_definition(self):
        a = Graph.from_edges(3, [(0, 1)])
        b = Graph.from_edges(3, [(1, 2)])
        assert edge_set(union(a, b)) == {(0, 1), (1, 2)}

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            intersect(Graph.empty(3), Graph.empty(4))
        with pytest.raises(ValueError):
            union(Graph.empty(3), Graph.empty(4))

    def test_random_pairs_against_set_oracle(self):
        rng = rng_from(101)
        for _ in range(50):
            a = random_graph(rng, 10, 0.4)
            b = random_graph(rng, 10, 0.4)
            sa, sb = edge_set(a), edge_set(b)
            assert edge_set(intersect(a, b)) == sa & sb
            assert edge_set(union(a, b)) == sa | sb

    def test_containment_and_edge_count_identity(self):
        rng = rng_from(102)
        for _ in range(20):
            a = random_graph(rng, 12, 0.3)
            b = random_graph(rng, 12, 0.3)
            inter, uni = intersect(a, b), union(a, b)
            assert edge_set(inter) <= edge_set(a) <= edge_set(uni)
            assert inter.edge_count + uni.edge_count == a.edge_count + b.edge_count


class TestRelabel:
    def test_identity(self):
        g = triangle()
        assert relabel(g, Permutation.identity(3)) == g

    def test_two_cycle_preserves_edge(self):
        g = Graph.from_edges(2, [(0, 1)])
        assert relabel(g, Permutation([1, 0])) == g

    def test_degree_multiset_invariant(self):
        rng = rng_from(103)
        for _ in range(20):
            g = random_graph(rng, 15, 0.3)
            pi = Permutation(rng.permutation(15))
            h = relabel(g, pi)
            assert sorted(g.degrees()) == sorted(h.degrees())
            assert h.edge_count == g.edge_count

    def test_round_trip(self):
        rng = rng_from(104)
        g = random_graph(rng, 15, 0.3)
        pi = Permutation(rng.permutation(15))
        assert relabel(relabel(g, pi), pi.inverse()) == g

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            relabel(triangle(), Permutation.identity(4))


class TestPermutation:
    def test_rejects_non_bijection(self):
        with pytest.raises(ValueError):
            Permutation([0, 0, 1])
        with pytest.raises(ValueError):
            Permutation([0, 3, 1])

    def test_compose_and_inverse(self):
        rng = rng_from(105)
        p = Permutation(rng.permutation(8))
        q = Permutation(rng.permutation(8))
        pq = p.compose(q)
        for v in range(8):
            assert pq(v) == p(q(v))
        assert p.compose(p.inverse()) == Permutation.identity(8)


class TestPartialMatching:
    def test_rejects_non_injective(self):
        with pytest.raises(ValueError):
            PartialMatching({0: 2, 1: 2})

    def test_compose_domain_intersection(self):
        a = PartialMatching({0: 0, 1: 1})
        b = PartialMatching({1: 1, 2: 2})
        assert compose(a, b) == PartialMatching({1: 1})

    def test_compose_with_inverse_is_identity_on_domain(self):
        f = PartialMatching({0: 3, 2: 1, 4: 0})
        assert compose(f, f.inverse()) == PartialMatching({0: 0, 2: 2, 4: 4})

    def test_compose_random_against_pointwise_oracle(self):
        rng = rng_from(106)
        for _ in range(30):
            n = 12
            dom_a = rng.choice(n, size=6, replace=False)
            img_a = rng.choice(n, size=6, replace=False)
            a = PartialMatching(zip(dom_a.tolist(), img_a.tolist()))
            dom_b = rng.choice(n, size=6, replace=False)
            img_b = rng.choice(n, size=6, replace=False)
            b = PartialMatching(zip(dom_b.tolist(), img_b.tolist()))
            got = compose(a, b)
            for v in range(n):
                t = a.get(v)
                want = b.get(t) if t is not None else None
                assert got.get(v) == want

    def test_compose_associative(self):
        rng = rng_from(107)
        for _ in range(20):
            n = 10
            mk = lambda: PartialMatching(zip(
                rng.choice(n, size=5, replace=False).tolist(),
                rng.choice(n, size=5, replace=False).tolist()))
            a, b, c = mk(), mk(), mk()
            assert compose(a, compose(b, c)) == compose(compose(a, b), c)


class TestEdgeListFormat:
    def test_round_trip(self, tmp_path):
        rng = rng_from(108)
        g = random_graph(rng, 20, 0.2)
        path = tmp_path / "g.edges"
        write_edge_list(g, path)
        assert read_edge_list(path) == g

    def test_header_format(self, tmp_path):
        path = tmp_path / "g.edges"
        write_edge_list(Graph.from_edges(3, [(0, 2)]), path)
        assert path.read_text() == "n 3\n0 2\n"

    def test_rejects_bad_header(self, tmp_path):
        path = tmp_path / "bad.edges"
        path.write_text("3\n0 1\n")
        with pytest.raises(ValueError):
            read_edge_list(path)
