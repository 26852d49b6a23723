"""Recovery-condition evaluation and phase-region classification.

All quantities are finite-n surrogates of asymptotic conditions: the
tool reports raw sums (exponentials of large negative arguments
underflow to exactly 0.0, which is the intended reading) and, when an
exponent ``alpha`` is supplied, the scaled product ``sum * n**alpha``.
Interpretation of o(.)/Omega(.) statements is left to the caller.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .sampling import ModelSpec, ParameterMatrix, build_parameter_matrix

REGION_IMPOSSIBLE = "impossible"
REGION_MULTI_ONLY = "multi_only"
REGION_PAIRWISE = "pairwise_possible"
REGION_BOUNDARY = "boundary"

_BOUNDARY_TOL = 1e-12
_HOMOGENEOUS_RTOL = 1e-9


@dataclass(frozen=True)
class DegreeProfile:
    """Expected degrees d_i = sum_{j != i} p_ij plus the model scalars."""

    d: np.ndarray
    p_max: float
    n: int
    s: float
    m: int

    @classmethod
    def from_model(cls, model: ParameterMatrix, s: float, m: int) -> "DegreeProfile":
        return cls(d=np.asarray(model.degrees, dtype=np.float64),
                   p_max=model.p_max, n=model.n, s=s, m=m)

    @classmethod
    def from_spec(cls, spec: ModelSpec) -> "DegreeProfile":
        return cls.from_model(build_parameter_matrix(spec), spec.s, spec.m)


@dataclass(frozen=True)
class ThresholdReport:
    effective_rate: float            # s * (1 - (1-s)^(m-1))
    sum_suff: float                  # sum_i exp(-d_i * effective_rate)
    sum_strong: float                # sum_suff minus its largest term
    sum_pairwise: float              # sum_i exp(-d_i * s^2)
    sum_necessary: float             # sum_i exp(-d_i * s) minus largest term
    homogeneous_C: float | None      # d_i / log n when degrees are constant
    alpha: float | None = None
    scaled_suff: float | None = None  # sum_suff * n**alpha when alpha given


def effective_rate(s: float, m: int) -> float:
    """The exponent rate s * (1 - (1-s)^(m-1)); reduces to s^2 at m = 2."""
    return s * (1.0 - (1.0 - s) ** (m - 1))


def threshold_report(profile: DegreeProfile, alpha: float | None = None) -> ThresholdReport:
    if not 0.0 < profile.s <= 1.0:
        raise ValueError("s must be in (0, 1]")
    if profile.m < 2:
        raise ValueError("m must be at least 2")
    d = profile.d
    rate = effective_rate(profile.s, profile.m)
    terms_suff = np.exp(-d * rate)
    terms_nec = np.exp(-d * profile.s)
    sum_suff = float(terms_suff.sum())
    sum_strong = float(sum_suff - terms_suff.max()) if d.size else 0.0
    sum_pairwise = float(np.exp(-d * profile.s ** 2).sum())
    sum_necessary = float(terms_nec.sum() - terms_nec.max()) if d.size else 0.0
    homogeneous_C = None
    if d.size and profile.n > 1:
        mean = float(d.mean())
        if np.abs(d - mean).max() <= _HOMOGENEOUS_RTOL * max(1.0, abs(mean)):
            homogeneous_C = mean / math.log(profile.n)
    scaled = sum_suff * profile.n ** alpha if alpha is not None else None
    return ThresholdReport(
        effective_rate=rate,
        sum_suff=sum_suff,
        sum_strong=sum_strong,
        sum_pairwise=sum_pairwise,
        sum_necessary=sum_necessary,
        homogeneous_C=homogeneous_C,
        alpha=alpha,
        scaled_suff=scaled,
    )


def homogeneous_classify(C: float, s: float, m: int) -> str:
    """Phase of a homogeneous point: d_i = C log n, thresholds at
    C * effective_rate = 1 (m graphs) and C * s^2 = 1 (two graphs)."""
    if C < 0 or not 0.0 <= s <= 1.0 or m < 2:
        raise ValueError("need C >= 0, s in [0, 1], m >= 2")
    multi = C * effective_rate(s, m)
    pair = C * s * s
    if abs(multi - 1.0) <= _BOUNDARY_TOL or abs(pair - 1.0) <= _BOUNDARY_TOL:
        return REGION_BOUNDARY
    if multi < 1.0:
        return REGION_IMPOSSIBLE
    if pair > 1.0:
        return REGION_PAIRWISE
    return REGION_MULTI_ONLY


def model_condition(spec: ModelSpec, alpha: float | None = None,
                    model: ParameterMatrix | None = None) -> float:
    """Corollary-specific recovery sum for SBM, RGG, or CLG models.

    SBM:  sum_a |V_a| exp(-rate * sum_b |V_b| q_ab)
    RGG:  sum_i exp(-p * rate * N_r(i)) with N_r counted from the stored points
    CLG:  sum_i exp(-w_i * rate)
    Returns the raw sum, or sum * n**alpha when alpha is given.
    """
    if spec.kind not in ("sbm", "rgg", "clg"):
        raise ValueError(f"model_condition supports sbm/rgg/clg, not {spec.kind!r}")
    if model is None:
        model = build_parameter_matrix(spec)
    rate = effective_rate(spec.s, spec.m)
    if spec.kind == "sbm":
        sizes = np.asarray(model.sizes, dtype=np.float64)
        block_rows = model.q @ sizes
        total = float((sizes * np.exp(-rate * block_rows)).sum())
    elif spec.kind == "rgg":
        total = float(np.exp(-model.p * rate * model.n_r.astype(np.float64)).sum())
    else:
        total = float(np.exp(-model.w * rate).sum())
    if alpha is not None:
        total *= spec.n ** alpha
    return total


def phase_grid(C_values, s_values, m: int) -> list[tuple[float, float, int, str]]:
    """Classify every (C, s) cell; rows ordered by C then s."""
    rows = []
    for C in C_values:
        for s in s_values:
            rows.append((float(C), float(s), m, homogeneous_classify(C, s, m)))
    return rows


def write_phase_grid_csv(rows, path):
    with open(path, "w", encoding="ascii", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["C", "s", "m", "region"])
        for C, s, m, region in rows:
            w.writerow([repr(C), repr(s), m, region])
