import csv
import math

import numpy as np
import pytest

from graphalign.sampling import ModelSpec, build_parameter_matrix
from graphalign.thresholds import (REGION_BOUNDARY, REGION_IMPOSSIBLE,
                                   REGION_MULTI_ONLY, REGION_PAIRWISE,
                                   DegreeProfile, effective_rate,
                                   homogeneous_classify, model_condition,
                                   phase_grid, threshold_report,
                                   write_phase_grid_csv)


def er_profile(n, p, s, m):
    return DegreeProfile(d=np.full(n, (n - 1) * p), p_max=p, n=n, s=s, m=m)


class TestThresholdReport:
    def test_m2_rate_is_s_squared(self):
        for s in (0.2, 0.5, 0.9):
            rep = threshold_report(er_profile(100, 0.05, s, 2))
            assert rep.effective_rate == pytest.approx(s * s, rel=1e-15)

    def test_s1_rate_is_one(self):
        for m in (2, 3, 7):
            assert effective_rate(1.0, m) == 1.0

    def test_er_example_value(self):
        # frozen from a 40-digit mpmath evaluation of 1e4 * exp(-29.997 * 0.768)
        rep = threshold_report(er_profile(10_000, 0.003, 0.8, 3))
        assert rep.effective_rate == pytest.approx(0.768, abs=1e-15)
        assert rep.sum_suff == pytest.approx(9.8822480661266794069e-7, rel=1e-12)
        assert rep.homogeneous_C == pytest.approx(29.997 / math.log(10_000))

    def test_sum_orderings(self):
        for m in (2, 3, 5):
            for s in (0.1, 0.4, 0.8):
                rep = threshold_report(er_profile(500, 0.01, s, m))
                assert rep.sum_strong <= rep.sum_suff
                assert rep.sum_pairwise >= rep.sum_suff
                assert 0.0 <= rep.effective_rate <= s

    def test_rate_increases_with_m(self):
        for s in (0.2, 0.5, 0.9):
            rates = [effective_rate(s, m) for m in range(2, 10)]
            assert all(b > a for a, b in zip(rates, rates[1:]))
            reps = [threshold_report(er_profile(300, 0.02, s, m)).sum_suff
                    for m in range(2, 10)]
            assert all(b <= a for a, b in zip(reps, reps[1:]))

    def test_inhomogeneous_strong_term(self):
        d = np.array([2.0, 5.0, 9.0])
        prof = DegreeProfile(d=d, p_max=0.1, n=3, s=0.5, m=3)
        rep = threshold_report(prof)
        rate = rep.effective_rate
        assert rep.sum_suff == pytest.approx(np.exp(-d * rate).sum())
        assert rep.sum_strong == pytest.approx(np.exp(-d * rate).sum()
                                               - np.exp(-2.0 * rate))
        assert rep.sum_necessary == pytest.approx(np.exp(-d * 0.5).sum()
                                                  - np.exp(-1.0))
        assert rep.homogeneous_C is None

    def test_alpha_scaling(self):
        rep = threshold_report(er_profile(100, 0.05, 0.5, 2), alpha=0.5)
        assert rep.scaled_suff == pytest.approx(rep.sum_suff * 10.0)

    def test_underflow_is_zero(self):
        prof = DegreeProfile(d=np.full(10, 1e6), p_max=0.1, n=10, s=0.9, m=2)
        assert threshold_report(prof).sum_suff == 0.0

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            threshold_report(er_profile(10, 0.1, 0.0, 2))
        with pytest.raises(ValueError):
            threshold_report(er_profile(10, 0.1, 0.5, 1))


class TestHomogeneousClassify:
    def test_spec_examples(self):
        assert homogeneous_classify(5, 0.4, 3) == REGION_MULTI_ONLY
        assert homogeneous_classify(8, 0.5, 2) == REGION_PAIRWISE
        assert homogeneous_classify(3, 0.5, 2) == REGION_IMPOSSIBLE
        assert homogeneous_classify(3, 0.5, 3) == REGION_MULTI_ONLY

    def test_boundary(self):
        assert homogeneous_classify(4.0, 0.5, 2) == REGION_BOUNDARY

    def test_regions_satisfy_inequalities(self):
        for C in np.linspace(0.2, 10, 23):
            for s in np.linspace(0.05, 1.0, 21):
                region = homogeneous_classify(C, s, 3)
                multi = C * effective_rate(s, 3)
                pair = C * s * s
                if region == REGION_IMPOSSIBLE:
                    assert multi < 1
                elif region == REGION_PAIRWISE:
                    assert pair > 1
                elif region == REGION_MULTI_ONLY:
                    assert pair < 1 < multi


class TestModelCondition:
    def test_sbm_single_block_reduces_to_er(self):
        n, p, s, m = 400, 0.02, 0.5, 3
        spec = ModelSpec(n=n, kind="sbm", params={"M": 1, "q": [[p]]},
                         s=s, m=m, seed=1)
        got = model_condition(spec)
        want = n * math.exp(-effective_rate(s, m) * n * p)
        assert got == pytest.approx(want, rel=1e-12)

    def test_rgg_radius_covers_square(self):
        n = 60
        spec = ModelSpec(n=n, kind="rgg", params={"p": 0.3, "r": 1.5},
                         s=0.5, m=3, seed=2)
        got = model_condition(spec)
        want = n * math.exp(-0.3 * effective_rate(0.5, 3) * n)
        assert got == pytest.approx(want, rel=1e-12)

    def test_clg_equal_weights_collapse(self):
        n, w = 80, 3.0
        spec = ModelSpec(n=n, kind="clg", params={"weights": [w] * n},
                         s=0.6, m=4, seed=3)
        got = model_condition(spec)
        assert got == pytest.approx(n * math.exp(-w * effective_rate(0.6, 4)),
                                    rel=1e-12)

    def test_rejects_unsupported_kind(self):
        spec = ModelSpec(n=10, kind="er", params={"p": 0.1}, s=0.5, m=2, seed=4)
        with pytest.raises(ValueError):
            model_condition(spec)


class TestPhaseGrid:
    def test_m2_has_no_multi_only(self):
        rows = phase_grid(np.linspace(0, 10, 41), np.linspace(0, 1, 41), 2)
        assert all(r[3] != REGION_MULTI_ONLY for r in rows)

    def test_m3_has_multi_only(self):
        rows = phase_grid(np.linspace(0, 10, 41), np.linspace(0, 1, 41), 3)
        regions = {r[3] for r in rows}
        assert REGION_MULTI_ONLY in regions
        assert any(r[:2] == (5.0, 0.4) and r[3] == REGION_MULTI_ONLY
                   for r in phase_grid([5.0], [0.4], 3))

    def test_impossible_cells_satisfy_condition(self):
        rows = phase_grid(np.linspace(0, 10, 21), np.linspace(0, 1, 21), 4)
        for C, s, m, region in rows:
            if region == REGION_IMPOSSIBLE:
                assert C * effective_rate(s, m) < 1

    def test_csv_schema(self, tmp_path):
        path = tmp_path / "grid.csv"
        write_phase_grid_csv(phase_grid([1.0, 2.0], [0.5], 3), path)
        with open(path) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["C", "s", "m", "region"]
        assert len(rows) == 3
        assert rows[1] == ["1.0", "0.5", "3", "impossible"]


class TestDegreeProfileFromModel:
    def test_from_spec(self):
        spec = ModelSpec(n=500, kind="er", params={"p": 0.01}, s=0.5, m=3, seed=9)
        prof = DegreeProfile.from_spec(spec)
        model = build_parameter_matrix(spec)
        assert np.array_equal(prof.d, model.degrees)
        assert prof.p_max == model.p_max
        assert (prof.n, prof.s, prof.m) == (500, 0.5, 3)
