import json
import math

import numpy as np
import pytest

from graphalign.graphs import relabel
from graphalign.sampling import (CorrelatedFamily, ModelSpec, anchor_q,
                                 bernoulli_indices, build_anchor_matrix,
                                 build_parameter_matrix, export_family,
                                 sample_family, tri_unrank)
from graphalign.seeding import rng_from


def er_spec(**kw):
    base = dict(n=2000, kind="er", params={"p": 0.01}, s=0.5, m=3, seed=11)
    base.update(kw)
    return ModelSpec(**base)


class TestHelpers:
    def test_tri_unrank_exhaustive(self):
        for g in (2, 3, 5, 9):
            want = [(i, j) for i in range(g) for j in range(i + 1, g)]
            t = np.arange(len(want), dtype=np.int64)
            i, j = tri_unrank(t, g)
            assert list(zip(i.tolist(), j.tolist())) == want

    def test_bernoulli_indices_support_and_rate(self):
        rng = rng_from(42)
        idx = bernoulli_indices(rng, 100_000, 0.02)
        assert (np.diff(idx) > 0).all() and idx[0] >= 0 and idx[-1] < 100_000
        # 4 sigma band around the binomial mean
        assert abs(idx.size - 2000) < 4 * math.sqrt(100_000 * 0.02 * 0.98)
        assert bernoulli_indices(rng, 100, 0.0).size == 0
        assert np.array_equal(bernoulli_indices(rng, 5, 1.0), np.arange(5))


class TestParameterMatrices:
    def test_er_degrees(self):
        model = build_parameter_matrix(
            ModelSpec(n=10_000, kind="er", params={"p": 0.003}, s=0.8, m=3, seed=1))
        assert np.allclose(model.degrees, 29.997)
        assert model.p_max == 0.003

    def test_clg_equal_weights(self):
        n = 50
        w = np.full(n, 2.0)
        model = build_parameter_matrix(
            ModelSpec(n=n, kind="clg", params={"weights": w.tolist()}, s=0.5, m=2, seed=1))
        assert model.prob(0, 1) == pytest.approx(2.0 / n)
        assert model.prob(3, 3) == 0.0

    def test_clg_invalid_weights(self):
        with pytest.raises(ValueError):
            build_parameter_matrix(ModelSpec(
                n=3, kind="clg", params={"weights": [9.0, 0.1, 0.1]}, s=0.5, m=2, seed=1))

    def test_sbm_balanced_degrees(self):
        # direct summation over a block row: 1999 in-block + 8000 out-of-block
        model = build_parameter_matrix(ModelSpec(
            n=10_000, kind="sbm", params={"M": 5, "q_in": 0.04, "q_out": 0.01},
            s=0.25, m=3, seed=1))
        assert np.allclose(model.degrees, 1999 * 0.04 + 8000 * 0.01)

    def test_sbm_rejects_bad_table(self):
        with pytest.raises(ValueError):
            build_parameter_matrix(ModelSpec(
                n=10, kind="sbm", params={"M": 2, "q": [[0.5, 1.5], [1.5, 0.5]]},
                s=0.5, m=2, seed=1))

    def test_dense_validation(self):
        with pytest.raises(ValueError):
            build_parameter_matrix(ModelSpec(
                n=2, kind="dense", params={"P": [[0.0, 0.5], [0.4, 0.0]]},
                s=0.5, m=2, seed=1))


class TestFamilySampling:
    def test_s_equals_one_children_equal_parent(self):
        fam = sample_family(er_spec(s=1.0, n=500))
        for child in fam.children_aligned:
            assert child == fam.parent

    def test_p_zero_all_empty(self):
        fam = sample_family(er_spec(params={"p": 0.0}, n=300))
        assert fam.parent.edge_count == 0
        assert all(g.edge_count == 0 for g in fam.observed)

    def test_children_subset_of_parent(self):
        fam = sample_family(er_spec())
        for child in fam.children_aligned:
            assert np.isin(child.edge_keys, fam.parent.edge_keys).all()

    def test_observed_is_relabeled_aligned(self):
        fam = sample_family(er_spec())
        assert fam.observed[0] == fam.children_aligned[0]
        for k in range(2, fam.m + 1):
            assert fam.observed[k - 1] == relabel(fam.children_aligned[k - 1],
                                                  fam.truth_to(k))

    def test_child_and_intersection_counts_within_4_sigma(self):
        # binomial moments conditioned on the sampled parent count
        fam = sample_family(er_spec(seed=2718))
        E = fam.parent.edge_count
        s = 0.5
        sigma_child = math.sqrt(E * s * (1 - s))
        for child in fam.children_aligned:
            assert abs(child.edge_count - E * s) <= 4 * sigma_child
        sigma_pair = math.sqrt(E * s * s * (1 - s * s))
        for a in range(3):
            for b in range(a + 1, 3):
                inter = np.intersect1d(fam.children_aligned[a].edge_keys,
                                       fam.children_aligned[b].edge_keys)
                assert abs(inter.size - E * s * s) <= 4 * sigma_pair

    def test_reproducible(self):
        spec = er_spec(seed=909)
        fam1 = sample_family(spec)
        fam2 = sample_family(spec)
        assert fam1.parent == fam2.parent
        assert all(a == b for a, b in zip(fam1.observed, fam2.observed))
        assert all(p == q for p, q in zip(fam1.truth, fam2.truth))
        fam3 = sample_family(er_spec(seed=910))
        assert fam3.parent != fam1.parent

    def test_marginal_child_edge_rates(self):
        # >= 1000 repetitions at n=200: per-pair frequency within 4 sigma of p*s
        n, p, s, reps = 200, 0.05, 0.8, 1000
        rate = p * s
        counts = np.zeros(n * n, dtype=np.int64)
        for rep in range(reps):
            fam = sample_family(ModelSpec(n=n, kind="er", params={"p": p},
                                          s=s, m=2, seed=17_000 + rep))
            counts[fam.children_aligned[0].edge_keys] += 1
        tri = np.array([i * n + j for i in range(n) for j in range(i + 1, n)])
        freq = counts[tri] / reps
        bound = 4 * math.sqrt(rate * (1 - rate) / reps)
        assert np.abs(freq - rate).max() <= bound


class TestRGG:
    def test_edges_respect_radius(self):
        spec = ModelSpec(n=400, kind="rgg", params={"p": 0.9, "r": 0.15},
                         s=1.0, m=2, seed=77)
        fam = sample_family(spec)
        pts = fam.latent["points"]
        r = 0.15
        for i, j in fam.parent.edges():
            assert np.linalg.norm(pts[i] - pts[j]) <= r
        assert fam.model.prob(0, 1) in (0.0, 0.9)

    def test_grid_candidates_match_quadratic_oracle(self):
        spec = ModelSpec(n=300, kind="rgg", params={"p": 0.5, "r": 0.22},
                         s=0.5, m=2, seed=78)
        model = build_parameter_matrix(spec)
        pts = model.latent["points"]
        n = spec.n
        want = []
        for i in range(n):
            d = pts[i + 1:] - pts[i]
            hit = np.flatnonzero((d * d).sum(axis=1) <= 0.22 * 0.22) + i + 1
            want.extend(i * n + int(j) for j in hit)
        assert np.array_equal(model.candidate_keys, np.array(sorted(want)))

    def test_degrees_from_neighborhood_counts(self):
        spec = ModelSpec(n=250, kind="rgg", params={"p": 0.3, "r": 0.2},
                         s=0.5, m=2, seed=79)
        model = build_parameter_matrix(spec)
        assert np.allclose(model.degrees, 0.3 * (model.n_r - 1))


class TestAnchor:
    def test_q_zero_all_zero(self):
        model = build_anchor_matrix(100, 0.5, 0.0, seed=5)
        assert model.degrees.sum() == 0.0
        assert model.p_max == 0.0

    def test_q_one_complete(self):
        model = build_anchor_matrix(50, 0.4, 1.0, seed=5)
        assert np.allclose(model.degrees, 49 * 0.4)

    def test_handshake_identity(self):
        model = build_anchor_matrix(100, 0.5, 0.3, seed=6)
        anchor = model.latent["anchor"]
        assert model.degrees.sum() == pytest.approx(2 * anchor.edge_count * 0.5)

    def test_anchor_q_helper(self):
        q = anchor_q(10_000, 0.5, 0.1)
        assert q * 0.5 == pytest.approx(1.2 / math.log(10_000))


class TestSerialization:
    def test_model_spec_json_round_trip(self, tmp_path):
        spec = er_spec()
        path = tmp_path / "spec.json"
        spec.save(path)
        doc = json.loads(path.read_text())
        assert set(doc) == {"n", "kind", "params", "s", "m", "seed"}
        assert ModelSpec.load(path) == spec

    def test_missing_field_reported(self):
        with pytest.raises(ValueError, match="seed"):
            ModelSpec.from_json_dict({"n": 10, "kind": "er", "params": {},
                                      "s": 0.5, "m": 2})

    def test_export_family(self, tmp_path):
        fam = sample_family(er_spec(n=50, m=3))
        export_family(fam, tmp_path / "fam", include_parent=True)
        assert (tmp_path / "fam.g1.edges").exists()
        assert (tmp_path / "fam.g3.edges").exists()
        assert (tmp_path / "fam.parent.edges").exists()
        truth = json.loads((tmp_path / "fam.truth.json").read_text())
        assert set(truth) == {"2", "3"}
        assert truth["2"] == fam.truth_to(2).mapping.tolist()


class TestValidation:
    def test_bad_kind(self):
        with pytest.raises(ValueError, match="kind"):
            ModelSpec.from_json_dict({"n": 10, "kind": "weird", "params": {},
                                      "s": 0.5, "m": 2, "seed": 0})

    def test_bad_s(self):
        with pytest.raises(ValueError, match="s"):
            sample_family(er_spec(s=0.0))

    def test_bad_m(self):
        with pytest.raises(ValueError, match="m"):
            sample_family(er_spec(m=1))
