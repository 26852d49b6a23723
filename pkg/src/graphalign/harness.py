"""Experiment runner: seeded sweeps over m with CSV persistence.

Result CSV columns (exact order): m, run_id, seed, pair_i, pair_j,
frac_matched_pre, frac_matched_post, frac_correct_pre, frac_correct_post,
exact_all.  Aggregate CSV: m, phase, mean_frac_matched, std_frac_matched,
runs; the std is the sample standard deviation over runs of the per-run
mean across pairs.  Wall-clock times go to a separate timing file so the
result files are byte-identical across repeated executions.
"""

from __future__ import annotations

import concurrent.futures
import csv
import json
import math
import time
from dataclasses import dataclass, field, replace

from .align import apply_elimination, pairwise_match_all, score, transitive_close
from .sampling import ModelSpec, sample_family, validate_spec
from .seeding import mix

RESULT_COLUMNS = ["m", "run_id", "seed", "pair_i", "pair_j",
                  "frac_matched_pre", "frac_matched_post",
                  "frac_correct_pre", "frac_correct_post", "exact_all"]
AGGREGATE_COLUMNS = ["m", "phase", "mean_frac_matched", "std_frac_matched", "runs"]
TIMING_COLUMNS = ["m", "run_id", "wall_time_ms"]


@dataclass(frozen=True)
class ExperimentConfig:
    model: ModelSpec          # template; its seed is the base seed, its m is overridden
    m_values: tuple[int, ...]
    runs: int
    k: int
    enable_elimination: bool = False
    output_path: str = "results.csv"
    matcher: str = "simulated"
    workers: int = 1

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("field runs: need at least one run")
        if self.k < 1:
            raise ValueError("field k: core order must be >= 1")
        if not self.m_values or any(m < 2 for m in self.m_values):
            raise ValueError("field m_values: every entry must be >= 2")

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ExperimentConfig":
        for name in ("model", "m_values", "runs", "k"):
            if name not in doc:
                raise ValueError(f"config missing field: {name}")
        model_doc = dict(doc["model"])
        model_doc.setdefault("m", 2)
        model_doc.setdefault("seed", doc.get("base_seed", 0))
        model = ModelSpec.from_json_dict(model_doc)
        return cls(
            model=model,
            m_values=tuple(int(m) for m in doc["m_values"]),
            runs=int(doc["runs"]),
            k=int(doc["k"]),
            enable_elimination=bool(doc.get("enable_elimination", False)),
            output_path=str(doc.get("output_path", "results.csv")),
            matcher=str(doc.get("matcher", "simulated")),
            workers=int(doc.get("workers", 1)),
        )

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path, "r", encoding="ascii") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: malformed JSON at line {exc.lineno}, "
                                 f"column {exc.colno}: {exc.msg}") from exc
        try:
            return cls.from_json_dict(doc)
        except ValueError as exc:
            raise ValueError(f"{path}: {exc}") from exc


@dataclass
class RunResult:
    m: int
    run_id: int
    seed: int
    pair: tuple[int, int]
    frac_matched_pre: float
    frac_matched_post: float
    frac_correct_pre: float | None
    frac_correct_post: float | None
    exact_all: bool
    wall_time_ms: float = 0.0


@dataclass
class AggregateRow:
    m: int
    phase: str  # "pre" or "post"
    mean_frac_matched: float
    std_frac_matched: float
    runs: int


@dataclass
class ExperimentResult:
    rows: list[RunResult] = field(default_factory=list)
    aggregates: list[AggregateRow] = field(default_factory=list)


def run_cell(cfg: ExperimentConfig, m: int, run_id: int) -> list[RunResult]:
    """One (m, run) cell: sample, pairwise-match, close, score."""
    seed = mix(cfg.model.seed, m, run_id)
    spec = replace(cfg.model, m=m, seed=seed)
    started = time.perf_counter()
    family = sample_family(spec)
    pm = pairwise_match_all(family, matcher=cfg.matcher, k=cfg.k)
    out = transitive_close(pm)
    if cfg.matcher == "simulated" and out.conflicts:
        raise AssertionError("simulated matcher produced closure conflicts")
    if cfg.enable_elimination:
        out = apply_elimination(out)
    report = score(out, family)
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    rows = []
    for (i, j) in sorted(report.per_pair):
        st = report.per_pair[(i, j)]
        if cfg.matcher == "simulated":
            if st.correct_pre not in (None, 1.0) or st.correct_post not in (None, 1.0):
                raise AssertionError("simulated matcher must be exact on its domain")
        rows.append(RunResult(
            m=m, run_id=run_id, seed=seed, pair=(i, j),
            frac_matched_pre=st.matched_pre, frac_matched_post=st.matched_post,
            frac_correct_pre=st.correct_pre, frac_correct_post=st.correct_post,
            exact_all=report.exact_all, wall_time_ms=elapsed_ms))
    return rows


def _aggregate(rows: list[RunResult], m_values, runs: int) -> list[AggregateRow]:
    aggs = []
    for m in m_values:
        for phase in ("pre", "post"):
            per_run_means = []
            for run_id in range(runs):
                cell = [r for r in rows if r.m == m and r.run_id == run_id]
                vals = [r.frac_matched_pre if phase == "pre" else r.frac_matched_post
                        for r in cell]
                per_run_means.append(sum(vals) / len(vals))
            mean = sum(per_run_means) / len(per_run_means)
            if len(per_run_means) > 1:
                var = sum((x - mean) ** 2 for x in per_run_means) / (len(per_run_means) - 1)
                std = math.sqrt(var)
            else:
                std = 0.0
            aggs.append(AggregateRow(m=m, phase=phase, mean_frac_matched=mean,
                                     std_frac_matched=std, runs=runs))
    return aggs


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Execute every (m, run) cell; deterministic given the config."""
    validate_spec(replace(cfg.model, m=2))
    cells = [(m, run_id) for m in cfg.m_values for run_id in range(cfg.runs)]
    rows: list[RunResult] = []
    if cfg.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            for cell_rows in pool.map(_run_cell_star, [(cfg, m, r) for m, r in cells]):
                rows.extend(cell_rows)
    else:
        for m, run_id in cells:
            rows.extend(run_cell(cfg, m, run_id))
    rows.sort(key=lambda r: (r.m, r.run_id, r.pair))
    return ExperimentResult(rows=rows, aggregates=_aggregate(rows, cfg.m_values, cfg.runs))


def _run_cell_star(args):
    return run_cell(*args)


# ---------------------------------------------------------------------------
# persistence


def _fmt_frac(x: float | None) -> str:
    return "" if x is None else repr(x)


def result_paths(output_path: str) -> tuple[str, str, str]:
    stem = output_path[:-4] if output_path.endswith(".csv") else output_path
    return f"{stem}.csv", f"{stem}.agg.csv", f"{stem}.timing.csv"


def write_results(result: ExperimentResult, output_path: str) -> tuple[str, str, str]:
    res_path, agg_path, timing_path = result_paths(output_path)
    with open(res_path, "w", encoding="ascii", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(RESULT_COLUMNS)
        for r in result.rows:
            w.writerow([r.m, r.run_id, r.seed, r.pair[0], r.pair[1],
                        repr(r.frac_matched_pre), repr(r.frac_matched_post),
                        _fmt_frac(r.frac_correct_pre), _fmt_frac(r.frac_correct_post),
                        "true" if r.exact_all else "false"])
    with open(agg_path, "w", encoding="ascii", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(AGGREGATE_COLUMNS)
        for a in result.aggregates:
            w.writerow([a.m, a.phase, repr(a.mean_frac_matched),
                        repr(a.std_frac_matched), a.runs])
    with open(timing_path, "w", encoding="ascii", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TIMING_COLUMNS)
        seen = set()
        for r in result.rows:
            if (r.m, r.run_id) not in seen:
                seen.add((r.m, r.run_id))
                w.writerow([r.m, r.run_id, repr(r.wall_time_ms)])
    return res_path, agg_path, timing_path
