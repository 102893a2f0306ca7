"""Configuration sweep: every (properties, inputs, shots) config against every mutant."""
from __future__ import annotations

import csv
import itertools
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .corpus import get_fixture
from .engine import TestConfig, run_suite
from .mutation import MutantKind, MutantRecord, generate_equivalent_mutants, generate_faulty_mutants, mutation_score
from .rng import derive_seed
from .stats import UndefinedStatistic, spearman_rank

log = logging.getLogger(__name__)

PROPERTIES_COUNTS = (1, 2, 3)
INPUT_COUNTS = (1, 2, 4, 8, 16, 32, 64)
SHOT_COUNTS = (12, 25, 50, 100, 200, 400, 800, 1600, 3200)

RESULT_COLUMNS = [
    "algorithm", "mutant_id", "mutant_kind", "num_properties", "num_inputs",
    "shots", "killed", "error", "wall_time_s", "seed",
]
SUMMARY_COLUMNS = ["variable", "mutant_kind", "spearman_r", "p_value", "n"]
VARIABLES = ("num_properties", "num_inputs", "shots")


@dataclass(frozen=True)
class SweepConfig:
    properties_counts: tuple[int, ...] = PROPERTIES_COUNTS
    input_counts: tuple[int, ...] = INPUT_COUNTS
    shot_counts: tuple[int, ...] = SHOT_COUNTS
    repetitions: int = 1
    base_seed: int = 0
    family_alpha: float = 0.05

    def __post_init__(self):
        for name, allowed in (
            ("properties_counts", PROPERTIES_COUNTS),
            ("input_counts", INPUT_COUNTS),
            ("shot_counts", SHOT_COUNTS),
        ):
            values = tuple(getattr(self, name))
            if not values:
                raise ValueError(f"{name} must not be empty")
            bad = sorted(set(values) - set(allowed))
            if bad:
                raise ValueError(f"{name} has values outside {list(allowed)}: {bad}")
            object.__setattr__(self, name, tuple(sorted(set(values))))
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")

    def grid(self):
        return list(itertools.product(self.properties_counts, self.input_counts, self.shot_counts))


@dataclass(frozen=True)
class SweepRow:
    algorithm: str
    mutant_id: str
    mutant_kind: str
    num_properties: int
    num_inputs: int
    shots: int
    killed: bool
    error: bool
    wall_time_s: float
    seed: int
    repetition: int = 0

    @property
    def sort_key(self):
        return (self.algorithm, self.mutant_id, self.num_properties, self.num_inputs, self.shots, self.repetition)

    def csv_row(self) -> list:
        return [
            self.algorithm, self.mutant_id, self.mutant_kind, self.num_properties, self.num_inputs,
            self.shots, int(self.killed), int(self.error), f"{self.wall_time_s:.4f}", self.seed,
        ]


@dataclass
class SweepResult:
    rows: list[SweepRow]
    summary: list[dict] = field(default_factory=list)


def row_seed(base_seed: int, algorithm: str, repetition: int) -> int:
    """Shared by every config and mutant of one algorithm, so inputs nest across configs."""
    return derive_seed(base_seed, "row", algorithm, repetition)


def fixture_mutants(algorithm: str, num_faulty: int = 10, num_equivalent: int = 10, seed: int | None = None) -> list[MutantRecord]:
    fx = get_fixture(algorithm)
    seed = fx.mutant_seed if seed is None else seed
    return generate_faulty_mutants(fx.program, num_faulty, seed) + generate_equivalent_mutants(fx.program, num_equivalent, seed)


def _run_mutant(task) -> list[SweepRow]:
    algorithm, mutant, sweep = task
    fx = get_fixture(algorithm)
    props = fx.properties(mutant.circuit)
    rows = []
    for rep in range(sweep.repetitions):
        seed = row_seed(sweep.base_seed, algorithm, rep)
        for k, n_in, shots in sweep.grid():
            cfg = TestConfig(num_inputs=n_in, shots=shots, family_alpha=sweep.family_alpha, base_seed=seed)
            start = time.perf_counter()
            try:
                result = run_suite(props[:k], cfg)
                killed = not result.passed
                error = any(p.execution_error for p in result.properties)
            except Exception:
                log.exception("sweep row %s/%s failed", algorithm, mutant.id)
                killed, error = True, True
            rows.append(
                SweepRow(algorithm, mutant.id, mutant.kind.value, k, n_in, shots, killed, error,
                         time.perf_counter() - start, seed, rep)
            )
    return rows


def run_sweep(
    mutants: dict[str, Sequence[MutantRecord]],
    sweep: SweepConfig,
    jobs: int = 1,
) -> SweepResult:
    """Run the full grid for each algorithm's mutants; row order is independent of ``jobs``."""
    for algorithm in mutants:
        props = get_fixture(algorithm).properties()
        if len(props) < max(sweep.properties_counts):
            raise ValueError(f"{algorithm} has {len(props)} properties, fewer than {max(sweep.properties_counts)}")
    tasks = [(alg, m, sweep) for alg, ms in mutants.items() for m in ms]
    rows: list[SweepRow] = []
    if jobs <= 1:
        for t in tasks:
            rows.extend(_run_mutant(t))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for chunk in pool.map(_run_mutant, tasks):
                rows.extend(chunk)
    rows.sort(key=lambda r: r.sort_key)
    return SweepResult(rows, summarize(rows))


def config_scores(rows: Sequence[SweepRow]) -> list[dict]:
    """Mutation score per (algorithm, repetition, config, kind)."""
    groups: dict[tuple, list[bool]] = {}
    for r in rows:
        key = (r.algorithm, r.repetition, r.num_properties, r.num_inputs, r.shots, r.mutant_kind)
        groups.setdefault(key, []).append(r.killed)
    return [
        dict(algorithm=a, repetition=rep, num_properties=k, num_inputs=n, shots=s, mutant_kind=kind, score=mutation_score(ks))
        for (a, rep, k, n, s, kind), ks in sorted(groups.items())
    ]


def summarize(rows: Sequence[SweepRow]) -> list[dict]:
    """Spearman correlation of per-config mutation score against each variable, per kind."""
    scores = config_scores(rows)
    out = []
    for kind in (MutantKind.FAULTY.value, MutantKind.EQUIVALENT.value):
        pts = [s for s in scores if s["mutant_kind"] == kind]
        for var in VARIABLES:
            xs = [p[var] for p in pts]
            ys = [p["score"] for p in pts]
            try:
                r, p = spearman_rank(xs, ys)
            except (UndefinedStatistic, ValueError):
                r, p = float("nan"), float("nan")
            out.append(dict(variable=var, mutant_kind=kind, spearman_r=r, p_value=p, n=len(pts)))
    return out


def write_results_csv(rows: Sequence[SweepRow], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(RESULT_COLUMNS)
        for r in rows:
            w.writerow(r.csv_row())


def write_summary_csv(summary: Sequence[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=SUMMARY_COLUMNS)
        w.writeheader()
        for s in summary:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in s.items()})
