import csv

import pytest

from qprop.sweep import (
    RESULT_COLUMNS, SUMMARY_COLUMNS, SweepConfig, SweepRow, fixture_mutants, run_sweep, summarize,
    write_results_csv, write_summary_csv,
)

TINY = SweepConfig(properties_counts=(1, 3), input_counts=(1, 2), shot_counts=(12, 100), base_seed=4)


@pytest.fixture(scope="module")
def mutants():
    return {"teleportation": fixture_mutants("teleportation", 2, 2)}


def test_config_validation():
    with pytest.raises(ValueError):
        SweepConfig(properties_counts=())
    with pytest.raises(ValueError):
        SweepConfig(shot_counts=(13,))
    with pytest.raises(ValueError):
        SweepConfig(repetitions=0)
    assert len(SweepConfig().grid()) == 3 * 7 * 9


def test_single_config_row_count():
    muts = {"teleportation": fixture_mutants("teleportation")}
    res = run_sweep(muts, SweepConfig(properties_counts=(3,), input_counts=(64,), shot_counts=(3200,)))
    assert len(res.rows) == 20
    assert sum(r.mutant_kind == "faulty" for r in res.rows) == 10


def test_row_count_is_product_and_jobs_do_not_matter(mutants):
    a = run_sweep(mutants, TINY, jobs=1)
    b = run_sweep(mutants, TINY, jobs=2)
    assert len(a.rows) == 2 * 2 * 2 * 4
    assert [(r.sort_key, r.killed, r.seed) for r in a.rows] == [(r.sort_key, r.killed, r.seed) for r in b.rows]


def test_rows_share_seed_across_configs(mutants):
    res = run_sweep(mutants, TINY)
    assert len({r.seed for r in res.rows}) == 1
    two = run_sweep(mutants, SweepConfig(properties_counts=(1,), input_counts=(1,), shot_counts=(12,), repetitions=2))
    assert len({r.seed for r in two.rows}) == 2


def test_unknown_or_short_suites_rejected():
    with pytest.raises(KeyError):
        run_sweep({"shor": []}, TINY)


def test_summary_and_csv(tmp_path, mutants):
    res = run_sweep(mutants, TINY)
    write_results_csv(res.rows, tmp_path / "r.csv")
    write_summary_csv(res.summary, tmp_path / "s.csv")
    with open(tmp_path / "r.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == RESULT_COLUMNS and len(rows) == len(res.rows) + 1
    with open(tmp_path / "s.csv") as fh:
        summary = list(csv.DictReader(fh))
    assert list(summary[0]) == SUMMARY_COLUMNS and len(summary) == 6


def test_summarize_signs():
    rows = []
    for k in (1, 2, 3):
        for i, shots in enumerate((12, 25, 50)):
            for m in range(4):
                rows.append(SweepRow("a", f"f{m}", "faulty", k, 1, shots, m < k, False, 0.0, 0))
                rows.append(SweepRow("a", f"e{m}", "equivalent", k, 1, shots, m < 3 - i, False, 0.0, 0))
    out = {(s["variable"], s["mutant_kind"]): s for s in summarize(rows)}
    assert out["num_properties", "faulty"]["spearman_r"] > 0.9
    assert out["shots", "equivalent"]["spearman_r"] < -0.9
