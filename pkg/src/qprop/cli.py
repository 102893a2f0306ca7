"""``qprop`` command line: run, reproduce, mutate, sweep, export-corpus.

Exit codes: 0 pass, 1 property failure, 2 bad manifest or input.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import jsonschema

from .corpus import FIXTURES, get_fixture
from .engine import TestConfig, reproduce, run_suite
from .mutation import MutationError, generate_equivalent_mutants, generate_faulty_mutants
from .qasm import QasmError, from_qasm, to_qasm
from .sweep import (
    INPUT_COUNTS, PROPERTIES_COUNTS, SHOT_COUNTS, SweepConfig, fixture_mutants,
    run_sweep, write_results_csv, write_summary_csv,
)

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

_CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "num_inputs": {"type": "integer", "minimum": 1},
        "shots": {"type": "integer", "minimum": 1},
        "family_alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "max_precondition_attempts": {"type": "integer", "minimum": 1},
        "base_seed": {"type": "integer", "minimum": 0},
    },
}

RUN_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["algorithm"],
    "properties": {
        "algorithm": {"enum": sorted(FIXTURES)},
        "program_qasm": {"type": "string"},
        "properties": {"type": "array", "items": {"type": "string"}, "minItems": 1, "uniqueItems": True},
        "config": _CONFIG_SCHEMA,
        "output": {"type": "string"},
    },
}


def _subset(values):
    return {"type": "array", "items": {"enum": list(values)}, "minItems": 1, "uniqueItems": True}


SWEEP_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["algorithms", "results_csv", "summary_csv"],
    "properties": {
        "algorithms": {"type": "array", "items": {"type": "string"}, "minItems": 1, "uniqueItems": True},
        "faulty_mutants": {"type": "integer", "minimum": 0},
        "equivalent_mutants": {"type": "integer", "minimum": 0},
        "mutant_seed": {"type": "integer", "minimum": 0},
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "properties_counts": _subset(PROPERTIES_COUNTS),
                "input_counts": _subset(INPUT_COUNTS),
                "shot_counts": _subset(SHOT_COUNTS),
            },
        },
        "repetitions": {"type": "integer", "minimum": 1},
        "base_seed": {"type": "integer", "minimum": 0},
        "family_alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "results_csv": {"type": "string"},
        "summary_csv": {"type": "string"},
    },
}


class InputError(Exception):
    """Bad manifest, path or argument; maps to exit code 2."""


def _seed_override() -> int | None:
    raw = os.environ.get("QPROP_SEED")
    if raw is None or raw == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"QPROP_SEED must be a non-negative integer, got {raw!r}") from None
    if value < 0:
        raise InputError(f"QPROP_SEED must be a non-negative integer, got {raw!r}")
    return value


def load_manifest(path: str, schema: dict) -> tuple[dict, Path]:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read manifest {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"manifest {path} is not valid JSON: {exc}") from None
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"manifest {path}: {where}: {exc.message}") from None
    return doc, Path(path).resolve().parent


def _resolve(base: Path, p: str) -> Path:
    q = Path(p)
    return q if q.is_absolute() else base / q


def _read_qasm(path: Path):
    try:
        return from_qasm(path.read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except QasmError as exc:
        raise InputError(f"{path}: {exc}") from None


def _suite_from_manifest(doc: dict, base: Path):
    fx = get_fixture(doc["algorithm"])
    program = None
    if "program_qasm" in doc:
        program = _read_qasm(_resolve(base, doc["program_qasm"]))
        if program.num_qubits != fx.program.num_qubits:
            raise InputError(
                f"{doc['program_qasm']} has {program.num_qubits} qubits; {fx.name} expects {fx.program.num_qubits}"
            )
    props = fx.properties(program)
    if "properties" in doc:
        by_name = {p.property_name: p for p in props}
        unknown = [n for n in doc["properties"] if n not in by_name]
        if unknown:
            raise InputError(f"unknown properties {unknown}; {fx.name} has {sorted(by_name)}")
        props = [by_name[n] for n in doc["properties"]]
    cfg_doc = dict(doc.get("config", {}))
    seed = _seed_override()
    if seed is not None:
        cfg_doc["base_seed"] = seed
    return props, TestConfig(**cfg_doc)


def cmd_run(args) -> int:
    doc, base = load_manifest(args.manifest, RUN_SCHEMA)
    props, cfg = _suite_from_manifest(doc, base)
    result = run_suite(props, cfg)
    for p in result.properties:
        status = "PASS" if p.passed else "FAIL"
        print(f"{status} {p.name}")
        if p.error:
            print(f"  error: {p.error}")
        for v in p.verdicts:
            if not v.passed:
                print(f"  {v.assertion_id} seed={v.seed}: {v.detail}")
        if p.failing_seeds:
            print(f"  failing seeds: {' '.join(str(s) for s in p.failing_seeds)}")
    s = result.stats
    print(
        f"{sum(p.passed for p in result.properties)}/{len(result.properties)} properties passed; "
        f"{s.circuit_copies} circuit copies, {s.shots_sampled} shots "
        f"(unoptimized: {s.baseline_copies} copies, {s.baseline_shots} shots); {result.duration_s:.2f}s"
    )
    if "output" in doc:
        out = _resolve(base, doc["output"])
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(json.dumps(result.to_dict(), indent=2))
    return EXIT_PASS if result.passed else EXIT_FAIL


def cmd_reproduce(args) -> int:
    doc, base = load_manifest(args.manifest, RUN_SCHEMA)
    props, cfg = _suite_from_manifest(doc, base)
    matches = [p for p in props if p.property_name == args.property]
    if not matches:
        raise InputError(f"unknown property {args.property!r}; choose from {[p.property_name for p in props]}")
    verdicts = reproduce(matches[0], args.seed, cfg)
    for v in verdicts:
        print(f"{'PASS' if v.passed else 'FAIL'} {v.assertion_id} {v.detail}".rstrip())
    return EXIT_PASS if all(v.passed for v in verdicts) else EXIT_FAIL


def cmd_mutate(args) -> int:
    circuit = _read_qasm(Path(args.input))
    try:
        make = generate_faulty_mutants if args.kind == "faulty" else generate_equivalent_mutants
        records = make(circuit, args.count, args.seed)
    except MutationError as exc:
        raise InputError(str(exc)) from None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    index = []
    for rec in records:
        name = f"{rec.id}.qasm"
        (out / name).write_text(to_qasm(rec.circuit))
        index.append({**rec.to_dict(), "file": name})
    (out / "index.json").write_text(json.dumps(index, indent=2))
    print(f"wrote {len(records)} {args.kind} mutants to {out}")
    return EXIT_PASS


def cmd_sweep(args) -> int:
    doc, base = load_manifest(args.manifest, SWEEP_SCHEMA)
    unknown = [a for a in doc["algorithms"] if a not in FIXTURES]
    if unknown:
        raise InputError(f"unknown algorithms {unknown}; choose from {sorted(FIXTURES)}")
    grid = doc.get("grid", {})
    seed = _seed_override()
    sweep = SweepConfig(
        properties_counts=tuple(grid.get("properties_counts", PROPERTIES_COUNTS)),
        input_counts=tuple(grid.get("input_counts", INPUT_COUNTS)),
        shot_counts=tuple(grid.get("shot_counts", SHOT_COUNTS)),
        repetitions=doc.get("repetitions", 1),
        base_seed=doc.get("base_seed", 0) if seed is None else seed,
        family_alpha=doc.get("family_alpha", 0.05),
    )
    mutants = {
        a: fixture_mutants(a, doc.get("faulty_mutants", 10), doc.get("equivalent_mutants", 10), doc.get("mutant_seed"))
        for a in doc["algorithms"]
    }
    result = run_sweep(mutants, sweep, jobs=args.jobs)
    results_path = _resolve(base, doc["results_csv"])
    summary_path = _resolve(base, doc["summary_csv"])
    for p in (results_path, summary_path):
        p.parent.mkdir(parents=True, exist_ok=True)
    write_results_csv(result.rows, results_path)
    write_summary_csv(result.summary, summary_path)
    print(f"{len(result.rows)} rows -> {results_path}")
    for s in result.summary:
        print(f"  {s['mutant_kind']:<10} {s['variable']:<15} r={s['spearman_r']:+.3f} p={s['p_value']:.3g} n={s['n']}")
    return EXIT_PASS


def cmd_export_corpus(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, fx in FIXTURES.items():
        (out / f"{name}.qasm").write_text(to_qasm(fx.program))
    print(f"wrote {len(FIXTURES)} programs to {out}")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qprop", description="Property-based testing of quantum circuits.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a property suite from a JSON manifest")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("reproduce", help="re-run one property on one input seed")
    p.add_argument("manifest")
    p.add_argument("property")
    p.add_argument("seed", type=int)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("mutate", help="write mutants of a QASM circuit")
    p.add_argument("input")
    p.add_argument("--kind", choices=("faulty", "equivalent"), default="faulty")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("sweep", help="run the configuration sweep from a JSON manifest")
    p.add_argument("manifest")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("export-corpus", help="write each reference program as QASM")
    p.add_argument("out")
    p.set_defaults(func=cmd_export_corpus)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors already
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
