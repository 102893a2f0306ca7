"""OpenQASM 2.0 subset export and import.

Grammar accepted by :func:`from_qasm`::

    OPENQASM 2.0;
    include "qelib1.inc";
    qreg q[N];
    creg c[M];              (optional)
    <gate> [(<angle>, ...)] q[i] [, q[j] ...];
    measure q[i] -> c[j];
    // comments

Angles may use numbers, ``pi``, unary minus and ``+ - * /``. Two comment
pragmas keep export lossless: ``// qprop: global_phase <float>`` and a
trailing ``// basis=X|Y|Z`` on measure lines.
"""
from __future__ import annotations

import ast
import math
import operator
import re

from .circuit import Basis, Circuit, CircuitError, Gate, GateKind, Initialize, Measure

_EXPORT_NAMES = {
    GateKind.H: "h", GateKind.X: "x", GateKind.Y: "y", GateKind.Z: "z",
    GateKind.S: "s", GateKind.SDG: "sdg", GateKind.T: "t", GateKind.TDG: "tdg",
    GateKind.RX: "rx", GateKind.RY: "ry", GateKind.RZ: "rz",
    GateKind.P: "u1", GateKind.U: "u3", GateKind.CX: "cx", GateKind.CZ: "cz",
    GateKind.SWAP: "swap", GateKind.CCX: "ccx", GateKind.CP: "cu1",
}
_IMPORT_NAMES = {v: k for k, v in _EXPORT_NAMES.items()}
_IMPORT_NAMES.update({"p": GateKind.P, "u": GateKind.U, "cp": GateKind.CP, "CX": GateKind.CX})


class QasmError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class QasmExportError(ValueError):
    pass


def to_qasm(c: Circuit) -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";']
    if c.global_phase:
        lines.append(f"// qprop: global_phase {c.global_phase!r}")
    lines.append(f"qreg q[{c.num_qubits}];")
    measures = c.measurements
    if measures:
        lines.append(f"creg c[{max(m.clbit for m in measures) + 1}];")
    for op in c.ops:
        if isinstance(op, Initialize):
            raise QasmExportError("QASM 2.0 has no initialize instruction; export gate-only circuits")
        if isinstance(op, Measure):
            line = f"measure q[{op.qubit}] -> c[{op.clbit}];"
            if op.basis is not Basis.Z:
                line += f" // basis={op.basis.value}"
            lines.append(line)
            continue
        name = _EXPORT_NAMES[op.kind]
        args = ",".join(f"q[{q}]" for q in op.qubits)
        if op.params:
            name += "(" + ",".join(repr(p) for p in op.params) + ")"
        lines.append(f"{name} {args};")
    return "\n".join(lines) + "\n"


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def _eval_angle(text: str) -> float:
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"bad angle expression {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError(f"unsupported angle expression {text!r}")

    return ev(tree)


_STMT = re.compile(r"^(?P<name>[A-Za-z_][A-Za-z0-9_]*)\s*(?:\((?P<params>[^)]*)\))?\s*(?P<args>.*)$")
_QARG = re.compile(r"^(?P<reg>[A-Za-z_][A-Za-z0-9_]*)\s*\[\s*(?P<idx>\d+)\s*\]$")
_MEASURE = re.compile(r"^measure\s+(?P<q>.+?)\s*->\s*(?P<c>.+)$")


def _split_params(text: str) -> list[str]:
    return [p for p in (s.strip() for s in text.split(",")) if p]


def from_qasm(text: str) -> Circuit:
    qreg: tuple[str, int] | None = None
    creg: tuple[str, int] | None = None
    header_seen = False
    phase = 0.0
    elements: list = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        code, _, comment = raw.partition("//")
        comment = comment.strip()
        if comment.startswith("qprop:"):
            key, _, value = comment[len("qprop:"):].strip().partition(" ")
            if key == "global_phase":
                phase = float(value)
        if not code.strip():
            continue
        col = len(code) - len(code.lstrip()) + 1
        stmts = [s for s in code.split(";")]
        if stmts[-1].strip():
            raise QasmError("missing ';'", lineno, col + len(code.rstrip()))
        for stmt in stmts[:-1]:
            stmt = stmt.strip()
            if not stmt:
                continue
            if stmt.startswith("OPENQASM"):
                if stmt.split()[1:] != ["2.0"]:
                    raise QasmError(f"unsupported version {stmt!r}", lineno, col)
                header_seen = True
                continue
            if not header_seen:
                raise QasmError("expected 'OPENQASM 2.0;' header", lineno, col)
            if stmt.startswith("include"):
                continue
            if stmt.startswith("qreg") or stmt.startswith("creg"):
                m = re.match(r"^(qreg|creg)\s+([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]$", stmt)
                if not m:
                    raise QasmError(f"malformed register declaration {stmt!r}", lineno, col)
                decl = (m.group(2), int(m.group(3)))
                if m.group(1) == "qreg":
                    if qreg is not None:
                        raise QasmError("only one quantum register is supported", lineno, col)
                    qreg = decl
                else:
                    if creg is not None:
                        raise QasmError("only one classical register is supported", lineno, col)
                    creg = decl
                continue
            if stmt.startswith("barrier"):
                continue
            if qreg is None:
                raise QasmError("gate before qreg declaration", lineno, col)
            mm = _MEASURE.match(stmt)
            if mm:
                q = _qubit(mm.group("q"), qreg, lineno, col)
                if creg is None:
                    raise QasmError("measure without a creg declaration", lineno, col)
                cb = _qubit(mm.group("c"), creg, lineno, col)
                basis = Basis.Z
                bm = re.match(r"basis=([XYZ])$", comment)
                if bm:
                    basis = Basis(bm.group(1))
                elements.append((Measure(q, basis, cb), lineno, col))
                continue
            sm = _STMT.match(stmt)
            if not sm or sm.group("name") not in _IMPORT_NAMES:
                name = sm.group("name") if sm else stmt
                raise QasmError(f"unsupported gate {name!r}", lineno, col)
            kind = _IMPORT_NAMES[sm.group("name")]
            try:
                params = [_eval_angle(p) for p in _split_params(sm.group("params") or "")]
            except ValueError as exc:
                raise QasmError(str(exc), lineno, col) from None
            qubits = [_qubit(a, qreg, lineno, col) for a in _split_params(sm.group("args"))]
            try:
                elements.append((Gate(kind, tuple(qubits), tuple(params)), lineno, col))
            except CircuitError as exc:
                raise QasmError(str(exc), lineno, col) from None

    if qreg is None:
        raise QasmError("no quantum register declared")
    c = Circuit(qreg[1])
    for el, lineno, col in elements:
        try:
            c = c.append(el)
        except CircuitError as exc:
            raise QasmError(str(exc), lineno, col) from None
    return c.with_phase(phase) if phase else c


def _qubit(arg: str, reg: tuple[str, int], lineno: int, col: int) -> int:
    m = _QARG.match(arg.strip())
    if not m or m.group("reg") != reg[0]:
        raise QasmError(f"bad register argument {arg.strip()!r}", lineno, col)
    idx = int(m.group("idx"))
    if idx >= reg[1]:
        raise QasmError(f"index {idx} out of range for {reg[0]}[{reg[1]}]", lineno, col)
    return idx
