"""Gate and circuit representation with the two-qubit-depth metric.

Qubits are 1-based everywhere in this package.  Single-qubit gates are
free in the depth metric: only entangling gates advance a layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

TWO_QUBIT_KINDS = ("cnot", "cz", "swap")
ONE_QUBIT_KINDS = ("phase", "h", "x", "z")


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: Tuple[int, ...]
    k: int = 0  # PHASE exponent, 0 for other kinds

    def __post_init__(self) -> None:
        if any(q < 1 for q in self.qubits):
            raise ValueError("qubits are 1-based")
        if self.kind in TWO_QUBIT_KINDS:
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise ValueError(f"{self.kind} needs two distinct qubits")
        elif self.kind in ONE_QUBIT_KINDS:
            if len(self.qubits) != 1:
                raise ValueError(f"{self.kind} takes one qubit")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.kind == "phase" and self.k not in (1, 3):
            raise ValueError("phase exponent must be 1 or 3 (2 is the z gate)")

    def is_two_qubit(self) -> bool:
        return self.kind in TWO_QUBIT_KINDS

    def inverse(self) -> "Gate":
        if self.kind == "phase":
            return Gate("phase", self.qubits, 4 - self.k)
        return self  # cnot, cz, swap, h, x, z are involutions


def cnot(control: int, target: int) -> Gate:
    return Gate("cnot", (control, target))


def cz(a: int, b: int) -> Gate:
    return Gate("cz", (min(a, b), max(a, b)))


def phase(q: int, k: int) -> Gate:
    """P^k on qubit q; k is reduced mod 4, k=2 canonicalizes to Z."""
    k %= 4
    if k == 0:
        raise ValueError("phase exponent 0 is the identity")
    if k == 2:
        return Gate("z", (q,))
    return Gate("phase", (q,), k)


def h(q: int) -> Gate:
    return Gate("h", (q,))


def x(q: int) -> Gate:
    return Gate("x", (q,))


def z(q: int) -> Gate:
    return Gate("z", (q,))


def swap(a: int, b: int) -> Gate:
    return Gate("swap", (min(a, b), max(a, b)))


@dataclass(frozen=True)
class Circuit:
    n: int
    gates: Tuple[Gate, ...] = ()

    def __post_init__(self) -> None:
        for g in self.gates:
            for q in g.qubits:
                if not 1 <= q <= self.n:
                    raise ValueError(f"qubit {q} outside [1, {self.n}]")

    @classmethod
    def from_gates(cls, n: int, gates: Iterable[Gate]) -> "Circuit":
        return cls(n, tuple(gates))

    def __add__(self, other: "Circuit") -> "Circuit":
        if self.n != other.n:
            raise ValueError("qubit count mismatch")
        return Circuit(self.n, self.gates + other.gates)

    def __len__(self) -> int:
        return len(self.gates)


@dataclass(frozen=True)
class Connectivity:
    kind: str  # "lnn" | "complete" | "graph"
    n: int
    edges: frozenset = field(default_factory=frozenset)

    @classmethod
    def lnn(cls, n: int) -> "Connectivity":
        return cls("lnn", n, frozenset((i, i + 1) for i in range(1, n)))

    @classmethod
    def complete(cls, n: int) -> "Connectivity":
        return cls("complete", n)

    @classmethod
    def graph(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "Connectivity":
        return cls("graph", n, frozenset((min(a, b), max(a, b)) for a, b in edges))

    def allows(self, a: int, b: int) -> bool:
        if self.kind == "complete":
            return a != b
        return (min(a, b), max(a, b)) in self.edges


def expand_swaps(c: Circuit) -> Circuit:
    """Rewrite SWAP(a,b) -> CNOT(a,b), CNOT(b,a), CNOT(a,b)."""
    out: List[Gate] = []
    for g in c.gates:
        if g.kind == "swap":
            a, b = g.qubits
            out += [cnot(a, b), cnot(b, a), cnot(a, b)]
        else:
            out.append(g)
    return Circuit(c.n, tuple(out))


def two_qubit_depth(c: Circuit, expand_swaps_first: bool = False) -> int:
    """Greedy ASAP layering depth counting only two-qubit gates.

    Exact for the per-qubit dependency model; single-qubit gates are free.
    """
    if expand_swaps_first:
        c = expand_swaps(c)
    level = [0] * (c.n + 1)
    depth = 0
    for g in c.gates:
        if not g.is_two_qubit():
            continue
        a, b = g.qubits
        lev = max(level[a], level[b]) + 1
        level[a] = level[b] = lev
        if lev > depth:
            depth = lev
    return depth


def validate_connectivity(c: Circuit, conn: Connectivity) -> List[Gate]:
    """All two-qubit gates whose pair is not an edge; empty means valid."""
    if c.n != conn.n:
        raise ValueError("qubit count mismatch")
    return [g for g in c.gates if g.is_two_qubit() and not conn.allows(*g.qubits)]


def inverse(c: Circuit) -> Circuit:
    """Reversed gate order with each gate inverted."""
    return Circuit(c.n, tuple(g.inverse() for g in reversed(c.gates)))


__all__ = [
    "Gate",
    "Circuit",
    "Connectivity",
    "cnot",
    "cz",
    "phase",
    "h",
    "x",
    "z",
    "swap",
    "expand_swaps",
    "two_qubit_depth",
    "validate_connectivity",
    "inverse",
]
