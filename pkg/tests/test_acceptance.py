"""Acceptance criteria, one test each.

Every test records a single PASS/FAIL line in ``REPORT``; conftest prints
them after the run, and ``python tests/test_acceptance.py`` prints them
directly.
"""
from __future__ import annotations

import csv
import io
import json
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import dense_state, fisher_bruteforce, holm_by_adjusted_p  # noqa: E402
from qprop.analysis import ExecutionStats  # noqa: E402
from qprop.corpus import FIXTURES, build_qft  # noqa: E402
from qprop.corpus.teleportation import TeleportationOutputEqualToInput, build_teleportation  # noqa: E402
from qprop.engine import Checks, TestConfig, generate_inputs, run_suite  # noqa: E402
from qprop.mutation import mutation_score  # noqa: E402
from qprop.simulator import statevector  # noqa: E402
from qprop.stats import fisher_exact_two_sided, holm_bonferroni  # noqa: E402
from qprop.sweep import SweepConfig, fixture_mutants, run_sweep  # noqa: E402

REPORT: dict[int, str] = {}
ROOT = Path(__file__).resolve().parents[1]


def record(n: int, ok: bool, detail: str):
    REPORT[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(REPORT[n])
    return ok


# 1 -------------------------------------------------------------------------

def test_c1_statistical_kernels_match_oracles():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(200):
        total = int(rng.integers(1, 201))
        cells = rng.multinomial(total, rng.dirichlet(np.ones(4)))
        t = [[int(cells[0]), int(cells[1])], [int(cells[2]), int(cells[3])]]
        got, ref = fisher_exact_two_sided(t), fisher_bruteforce(t)
        worst = max(worst, abs(got - ref) / ref if ref else abs(got))
    holm_mismatch = 0
    for _ in range(1000):
        m = int(rng.integers(1, 40))
        p = list(rng.beta(0.4, 1.0, size=m))
        if holm_bonferroni(list(enumerate(p)), 0.05).rejected != holm_by_adjusted_p(p, 0.05):
            holm_mismatch += 1
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and holm_mismatch == 0 and elapsed < 10
    assert record(1, ok, f"fisher max rel err {worst:.2e}, holm mismatches {holm_mismatch}/1000, {elapsed:.1f}s")


# 2 -------------------------------------------------------------------------

def corpus_circuits(num_inputs: int = 8):
    """Every circuit the corpus properties build for a few inputs, plus the QFT sizes."""
    seen = {}
    for fx in FIXTURES.values():
        seen[fx.program.digest] = fx.program
        for prop in fx.properties():
            for _, inputs in generate_inputs(prop, TestConfig(num_inputs=num_inputs)):
                checks = Checks()
                prop.operations(checks, *inputs)
                for a in checks.registered:
                    for req in a.requirements():
                        seen[req.circuit.digest] = req.circuit
    for n in range(1, 7):
        c = build_qft(n)
        seen[c.digest] = c
    return [c for c in seen.values() if c.num_qubits <= 6]


def test_c2_simulator_matches_dense_matrix_oracle():
    start = time.perf_counter()
    circuits = corpus_circuits()
    worst = max(float(np.max(np.abs(statevector(c).amplitudes - dense_state(c)))) for c in circuits)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 30
    assert record(2, ok, f"{len(circuits)} corpus circuits, max abs diff {worst:.2e}, {elapsed:.1f}s")


# 3 -------------------------------------------------------------------------

def test_c3_teleportation_property_kills_inserted_x():
    correct = build_teleportation()
    mutant = correct.x(2)
    passed, killed, bad = 0, 0, []
    for seed in range(20):
        cfg = TestConfig(num_inputs=64, shots=1600, family_alpha=0.05, base_seed=seed)
        ok_correct = run_suite([TeleportationOutputEqualToInput(correct)], cfg).passed
        ok_mutant = run_suite([TeleportationOutputEqualToInput(mutant)], cfg).passed
        passed += ok_correct
        killed += not ok_mutant
        if not ok_correct or ok_mutant:
            bad.append(seed)
    ok = passed == 20 and killed == 20
    assert record(3, ok, f"correct passes {passed}/20, X-mutant killed {killed}/20, off seeds {bad}")


# 4 and 8 ---------------------------------------------------------------------

def run_cli_sweep(workdir: Path, tag: str):
    manifest = json.loads((ROOT / "manifests" / "desk_sweep.json").read_text())
    manifest["results_csv"] = f"{tag}_results.csv"
    manifest["summary_csv"] = f"{tag}_summary.csv"
    path = workdir / f"{tag}.json"
    path.write_text(json.dumps(manifest))
    env = {k: v for k, v in os.environ.items() if k != "QPROP_SEED"}
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "qprop", "sweep", str(path), "--jobs", "4"],
        capture_output=True, text=True, env=env,
    )
    elapsed = time.perf_counter() - start
    assert proc.returncode == 0, proc.stderr
    return workdir / f"{tag}_results.csv", workdir / f"{tag}_summary.csv", elapsed


@pytest.fixture(scope="module")
def desk_sweeps(tmp_path_factory):
    workdir = tmp_path_factory.mktemp("sweep")
    return run_cli_sweep(workdir, "first"), run_cli_sweep(workdir, "second")


def test_c4_thoroughness_trend(desk_sweeps):
    (results, summary, elapsed), _ = desk_sweeps
    with open(summary) as fh:
        rows = {(r["variable"], r["mutant_kind"]): r for r in csv.DictReader(fh)}
    with open(results) as fh:
        n_rows = sum(1 for _ in csv.DictReader(fh))
    f = rows["num_properties", "faulty"]
    e = rows["shots", "equivalent"]
    fr, fp = float(f["spearman_r"]), float(f["p_value"])
    er, ep = float(e["spearman_r"]), float(e["p_value"])
    ok = fr > 0 and fp < 0.05 and er < 0 and ep < 0.05 and elapsed < 30 * 60 and n_rows == 2 * 189 * 20
    assert record(
        4, ok,
        f"faulty~properties r={fr:+.3f} p={fp:.2g}; equivalent~shots r={er:+.3f} p={ep:.2g}; "
        f"{n_rows} rows in {elapsed / 60:.1f} min",
    )


def kill_column(path: Path) -> bytes:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        keys = ("algorithm", "mutant_id", "num_properties", "num_inputs", "shots", "seed", "killed", "error")
        out = io.StringIO()
        for row in reader:
            out.write(",".join(row[k] for k in keys) + "\n")
    return out.getvalue().encode()


def test_c8_sweep_is_deterministic(desk_sweeps):
    (first, _, _), (second, _, _) = desk_sweeps
    a, b = kill_column(first), kill_column(second)
    ok = a == b and len(a) > 0
    rows = a.count(b"\n")
    assert record(8, ok, f"kill columns identical across two runs: {a == b} ({rows} rows)")


# 5 -------------------------------------------------------------------------

def test_c5_thorough_config_effectiveness():
    sweep = SweepConfig(properties_counts=(3,), input_counts=(64,), shot_counts=(3200,), base_seed=0)
    mutants = {name: fixture_mutants(name) for name in FIXTURES}
    rows = run_sweep(mutants, sweep).rows
    scores = {
        name: mutation_score([r.killed for r in rows if r.algorithm == name and r.mutant_kind == "faulty"])
        for name in FIXTURES
    }
    equivalent = [r.killed for r in rows if r.mutant_kind == "equivalent"]
    fpr = mutation_score(equivalent)
    ok = all(s >= 0.80 for s in scores.values()) and fpr <= 0.05
    per_alg = ", ".join(f"{k}={v:.2f}" for k, v in scores.items())
    assert record(5, ok, f"faulty scores {per_alg}; pooled FPR {fpr:.3f} ({sum(equivalent)}/{len(equivalent)})")


# 6 -------------------------------------------------------------------------

def test_c6_false_positive_calibration():
    start = time.perf_counter()
    prop = [TeleportationOutputEqualToInput(build_teleportation())]
    failures = 0
    for seed in range(500):
        cfg = TestConfig(num_inputs=64, shots=1600, family_alpha=0.05, base_seed=10_000 + seed)
        failures += not run_suite(prop, cfg).passed
    rate = failures / 500
    elapsed = time.perf_counter() - start
    ok = rate <= 0.07 and elapsed < 300
    assert record(6, ok, f"family-wise failure rate {rate:.3f} ({failures}/500 suites), {elapsed:.0f}s")


# 7 -------------------------------------------------------------------------

def test_c7_measurement_optimization():
    stats = ExecutionStats()
    result = run_suite(FIXTURES["teleportation"].properties(), TestConfig(num_inputs=64, shots=1600), stats=stats)
    ok = (
        result.passed is not None
        and stats.circuit_copies <= 3 * stats.distinct_circuits
        and stats.shots_sampled < stats.baseline_shots
    )
    assert record(
        7, ok,
        f"{stats.circuit_copies} copies for {stats.distinct_circuits} distinct circuits; "
        f"{stats.shots_sampled} shots vs {stats.baseline_shots} unoptimized",
    )


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
