import numpy as np
import pytest

from graphalign.align import (PairwiseMatchings, apply_elimination,
                              build_transitivity_graph, complete_by_elimination,
                              is_connected, pairwise_match_all, score,
                              transitive_close)
from graphalign.graphs import MatchProfile, PartialMatching, Permutation
from graphalign.sampling import ModelSpec, sample_family


def table_of(n, m, entries):
    """Build a full pairwise table; unlisted pairs are empty."""
    table = {}
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            table[(i, j)] = PartialMatching(entries.get((i, j), {}))
    return PairwiseMatchings(n, m, table)


class TestPairwiseMatchAll:
    def test_m2_single_entry(self):
        fam = sample_family(ModelSpec(n=200, kind="er", params={"p": 0.05},
                                      s=0.8, m=2, seed=31))
        pm = pairwise_match_all(fam, "simulated", k=2)
        assert pm.pairs() == [(1, 2)]
        from graphalign.kcore import simulated_kcore_match

        assert pm[(1, 2)] == simulated_kcore_match(fam, 1, 2, 2)

    def test_entry_count(self):
        fam = sample_family(ModelSpec(n=60, kind="er", params={"p": 0.1},
                                      s=0.7, m=4, seed=32))
        pm = pairwise_match_all(fam, "simulated", k=1)
        assert len(pm.pairs()) == 6

    def test_all_entries_correct_and_sized(self):
        from graphalign.graphs import intersect
        from graphalign.kcore import core_peel

        fam = sample_family(ModelSpec(n=2000, kind="er", params={"p": 0.01},
                                      s=0.7, m=4, seed=33))
        pm = pairwise_match_all(fam, "simulated", k=4)
        for i in range(1, 5):
            for j in range(i + 1, 5):
                inter = intersect(fam.children_aligned[i - 1],
                                  fam.children_aligned[j - 1])
                assert len(pm[(i, j)]) == core_peel(inter, 4).size
                truth = fam.truth_between(i, j)
                assert all(t == truth(s) for s, t in pm[(i, j)].items())

    def test_bruteforce_cap(self):
        fam = sample_family(ModelSpec(n=50, kind="er", params={"p": 0.1},
                                      s=0.8, m=2, seed=34))
        with pytest.raises(ValueError):
            pairwise_match_all(fam, "bruteforce", k=1)

    def test_bruteforce_small_instance(self):
        fam = sample_family(ModelSpec(n=6, kind="er", params={"p": 0.6},
                                      s=0.9, m=2, seed=35))
        pm = pairwise_match_all(fam, "bruteforce", k=2)
        assert pm.pairs() == [(1, 2)]


class TestTransitiveClose:
    def test_single_composition(self):
        # v matched 1->2 and 2->3 but absent from (1,3): closed via composition
        pm = table_of(4, 3, {(1, 2): {0: 1}, (2, 3): {1: 2}})
        out = transitive_close(pm)
        assert out.pair_extended[(1, 3)] == PartialMatching({0: 2})
        assert out.conflicts == 0

    def test_all_empty_stays_empty(self):
        pm = table_of(5, 3, {})
        out = transitive_close(pm)
        assert all(len(v) == 0 for v in out.pair_extended.values())
        assert all(len(e) == 0 for e in out.profile.matchings)

    def test_star_pattern(self):
        # node 0 matched only in pairs (1, j): closure matches every pair via graph 1
        m = 5
        pm = table_of(3, m, {(1, j): {0: 0} for j in range(2, m + 1)})
        out = transitive_close(pm)
        for i in range(1, m + 1):
            for j in range(i + 1, m + 1):
                assert out.pair_extended[(i, j)].get(0) == 0

    def test_extension_is_monotone(self):
        fam = sample_family(ModelSpec(n=400, kind="er", params={"p": 0.03},
                                      s=0.5, m=4, seed=36))
        pm = pairwise_match_all(fam, "simulated", k=3)
        out = transitive_close(pm)
        for pair in pm.pairs():
            for s, t in pm[pair].items():
                assert out.pair_extended[pair].get(s) == t

    def test_idempotent(self):
        fam = sample_family(ModelSpec(n=300, kind="er", params={"p": 0.03},
                                      s=0.5, m=4, seed=37))
        pm = pairwise_match_all(fam, "simulated", k=3)
        first = transitive_close(pm)
        again = transitive_close(PairwiseMatchings(300, 4, first.pair_extended))
        assert again.pair_extended == first.pair_extended
        assert again.conflicts == 0

    def test_symmetry_of_ordered_results(self):
        fam = sample_family(ModelSpec(n=300, kind="er", params={"p": 0.03},
                                      s=0.5, m=4, seed=38))
        pm = pairwise_match_all(fam, "simulated", k=3)
        ext = transitive_close(pm).extended_tensor
        for i in range(4):
            for j in range(4):
                if i == j:
                    continue
                fwd = ext[i, j]
                back = ext[j, i]
                dom = np.flatnonzero(fwd >= 0)
                assert np.array_equal(np.sort(fwd[dom]), np.flatnonzero(back >= 0))
                assert (back[fwd[dom]] == dom).all()

    def test_correctness_propagates(self):
        fam = sample_family(ModelSpec(n=500, kind="er", params={"p": 0.02},
                                      s=0.6, m=5, seed=39))
        pm = pairwise_match_all(fam, "simulated", k=2)
        out = transitive_close(pm)
        assert out.conflicts == 0
        for (i, j), ext in out.pair_extended.items():
            truth = fam.truth_between(i, j)
            assert all(t == truth(s) for s, t in ext.items())

    def test_conflict_counting(self):
        # inconsistent inputs: 1->2 and 2->3 compose to 0->3 in graph 3,
        # but (1,3) already claims 0->4
        pm = table_of(6, 3, {(1, 2): {0: 1}, (2, 3): {1: 3}, (1, 3): {0: 4}})
        out = transitive_close(pm)
        assert out.conflicts > 0

    def test_size_arguments_validated(self):
        pm = table_of(4, 3, {})
        with pytest.raises(ValueError):
            transitive_close(pm, n=5)
        with pytest.raises(ValueError):
            transitive_close(pm, m=4)


class TestTransitivityGraph:
    def test_s1_k0_complete(self):
        fam = sample_family(ModelSpec(n=40, kind="er", params={"p": 0.1},
                                      s=1.0, m=4, seed=41))
        pm = pairwise_match_all(fam, "simulated", k=0)
        full = (1 << 4) - 1
        for v in range(fam.n):
            masks = build_transitivity_graph(pm, fam, v)
            for i in range(4):
                assert masks[i] == full & ~(1 << i)

    def test_all_empty(self):
        fam = sample_family(ModelSpec(n=30, kind="er", params={"p": 0.1},
                                      s=0.5, m=3, seed=42))
        pm = table_of(30, 3, {})
        masks = build_transitivity_graph(pm, fam, 0)
        assert masks.tolist() == [0, 0, 0]
        assert not is_connected(masks)

    def test_ground_truth_variant_matches_observed_for_simulated(self):
        fam = sample_family(ModelSpec(n=150, kind="er", params={"p": 0.05},
                                      s=0.6, m=3, seed=43))
        pm = pairwise_match_all(fam, "simulated", k=2)
        for v in range(0, 150, 10):
            obs = build_transitivity_graph(pm, fam, v)
            gt = build_transitivity_graph(pm, fam, v, variant="ground_truth", k=2)
            assert np.array_equal(obs, gt)

    def test_connectivity_characterizes_closure(self):
        fam = sample_family(ModelSpec(n=250, kind="er", params={"p": 0.03},
                                      s=0.5, m=4, seed=44))
        pm = pairwise_match_all(fam, "simulated", k=2)
        out = transitive_close(pm)
        for v in range(fam.n):
            masks = build_transitivity_graph(pm, fam, v)
            connected = is_connected(masks)
            fully_matched = all(
                out.pair_extended[(i, j)].get(fam.truth_to(i)(v)) is not None
                for i in range(1, 5) for j in range(i + 1, 5))
            if connected:
                assert fully_matched
            # with isolated vertices in H(v) the node must miss some pair
            if masks.sum() == 0 and fam.m > 1:
                assert not fully_matched

    def test_variant_validation(self):
        fam = sample_family(ModelSpec(n=20, kind="er", params={"p": 0.2},
                                      s=0.5, m=3, seed=45))
        pm = pairwise_match_all(fam, "simulated", k=1)
        with pytest.raises(ValueError):
            build_transitivity_graph(pm, fam, 0, variant="ground_truth")
        with pytest.raises(ValueError):
            build_transitivity_graph(pm, fam, 0, variant="nope")


class TestScore:
    def test_perfect_profile(self):
        fam = sample_family(ModelSpec(n=120, kind="er", params={"p": 0.08},
                                      s=1.0, m=3, seed=46))
        pm = pairwise_match_all(fam, "simulated", k=0)
        out = transitive_close(pm)
        rep = score(out, fam)
        assert rep.exact_all
        for st in rep.per_pair.values():
            assert st.matched_pre == st.matched_post == 1.0
            assert st.correct_pre == st.correct_post == 1.0

    def test_empty_profile(self):
        fam = sample_family(ModelSpec(n=50, kind="er", params={"p": 0.05},
                                      s=0.5, m=3, seed=47))
        out = transitive_close(table_of(50, 3, {}))
        rep = score(out, fam)
        assert not rep.exact_all
        for st in rep.per_pair.values():
            assert st.matched_pre == st.matched_post == 0.0
            assert st.correct_pre is None and st.correct_post is None

    def test_truth_as_permutation_list(self):
        fam = sample_family(ModelSpec(n=90, kind="er", params={"p": 0.08},
                                      s=0.7, m=3, seed=48))
        pm = pairwise_match_all(fam, "simulated", k=2)
        out = transitive_close(pm)
        assert score(out, fam.truth).per_pair == score(out, fam).per_pair


class TestElimination:
    def test_fills_single_gap(self):
        prof = MatchProfile(2, [PartialMatching({0: 0, 1: 2})])
        done = complete_by_elimination(prof, 3)
        assert done.to_graph(2) == PartialMatching({0: 0, 1: 2, 2: 1})

    def test_complete_profile_unchanged(self):
        prof = MatchProfile(2, [PartialMatching({0: 1, 1: 0})])
        assert complete_by_elimination(prof, 2).to_graph(2) == prof.to_graph(2)

    def test_two_missing_unchanged(self):
        prof = MatchProfile(2, [PartialMatching({0: 0})])
        assert complete_by_elimination(prof, 3).to_graph(2) == PartialMatching({0: 0})

    def test_apply_to_closure_output(self):
        pm = table_of(3, 3, {(1, 2): {0: 0, 1: 2}, (1, 3): {}, (2, 3): {}})
        out = apply_elimination(transitive_close(pm))
        assert out.pair_extended[(1, 2)] == PartialMatching({0: 0, 1: 2, 2: 1})
        assert out.stats[(1, 2)].matched_post == 1.0
