"""QASM-2.0-compatible text serialization for the supported gate subset.

External qubit indices are 0-based (`q[0]` is internal qubit 1).  The
emitted header is fixed; parse accepts the same subset and reports
malformed statements with their line number.
"""

from __future__ import annotations

import re
from typing import List

from .circuit import Circuit, Gate, cnot, cz, h, phase, swap, x, z

_EMIT = {
    "cnot": "cx",
    "cz": "cz",
    "h": "h",
    "x": "x",
    "z": "z",
    "swap": "swap",
}


class ParseError(ValueError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


def emit_text(c: Circuit) -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{c.n}];"]
    for g in c.gates:
        if g.kind == "phase":
            name = "s" if g.k == 1 else "sdg"
        else:
            name = _EMIT[g.kind]
        args = ",".join(f"q[{q - 1}]" for q in g.qubits)
        lines.append(f"{name} {args};")
    return "\n".join(lines) + "\n"


_STMT = re.compile(r"^(\w+)\s*(.*)$")
_ARG = re.compile(r"^q\[(\d+)\]$")

_PARSE = {
    "cx": (2, lambda qs: cnot(qs[0], qs[1])),
    "cz": (2, lambda qs: cz(qs[0], qs[1])),
    "s": (1, lambda qs: phase(qs[0], 1)),
    "sdg": (1, lambda qs: phase(qs[0], 3)),
    "h": (1, lambda qs: h(qs[0])),
    "x": (1, lambda qs: x(qs[0])),
    "z": (1, lambda qs: z(qs[0])),
    "swap": (2, lambda qs: swap(qs[0], qs[1])),
}


def parse_text(text: str) -> Circuit:
    n = None
    gates: List[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("//")[0].strip()
        if not line:
            continue
        for stmt in filter(None, (s.strip() for s in line.split(";"))):
            m = _STMT.match(stmt)
            if not m:
                raise ParseError(lineno, f"malformed statement {stmt!r}")
            head, rest = m.group(1), m.group(2).strip()
            if head == "OPENQASM":
                if rest != "2.0":
                    raise ParseError(lineno, f"unsupported version {rest!r}")
                continue
            if head == "include":
                continue
            if head == "qreg":
                qm = re.match(r"^q\[(\d+)\]$", rest)
                if not qm:
                    raise ParseError(lineno, f"malformed qreg {rest!r}")
                n = int(qm.group(1))
                continue
            if head not in _PARSE:
                raise ParseError(lineno, f"unknown gate {head!r}")
            if n is None:
                raise ParseError(lineno, "gate before qreg declaration")
            arity, build = _PARSE[head]
            args = [a.strip() for a in rest.split(",")] if rest else []
            if len(args) != arity:
                raise ParseError(lineno, f"{head} expects {arity} arguments")
            qs = []
            for a in args:
                am = _ARG.match(a)
                if not am:
                    raise ParseError(lineno, f"malformed argument {a!r}")
                q = int(am.group(1)) + 1
                if q > n:
                    raise ParseError(lineno, f"qubit q[{q - 1}] outside register")
                qs.append(q)
            try:
                gates.append(build(qs))
            except ValueError as e:
                raise ParseError(lineno, str(e)) from e
    if n is None:
        raise ParseError(1, "missing qreg declaration")
    return Circuit(n, tuple(gates))


__all__ = ["emit_text", "parse_text", "ParseError"]
