"""All-to-all synthesis: PMH CNOT circuits and CZ-space phase scheduling.

A phase gate applied to a wire carrying the linear function f acts, up to
single-variable phases, like the product of CZ gates over all variable
pairs in support(f).  The CZ content of a CNOT circuit therefore lives in
F2^(n(n-1)/2); the tools here analyze that span, complete it with inserted
CZ gates, and solve for phase placements realizing a requested target.
"""

from __future__ import annotations

import math
from bisect import insort
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .circuit import Circuit, Gate, cnot, cz, phase, x as x_gate
from .gf2 import BitMatrix, BitVector, nullspace, solve
from .verify import (
    HadamardFreeTarget,
    _synth_cnot_gates,
    hfree_canonical,
    pair_index,
)


@dataclass(frozen=True)
class LinearFunction:
    """A parity x_{i1} + ... + x_{ik}; support bit w-1 = variable x_w."""

    n: int
    support: BitVector


@dataclass(frozen=True)
class CzVector:
    """Element of the CZ space, indexed by pair_index over (i < j)."""

    n: int
    bits: BitVector

    def __post_init__(self) -> None:
        if self.bits.n != self.n * (self.n - 1) // 2:
            raise ValueError("CzVector length must be n(n-1)/2")


@dataclass(frozen=True)
class CzBasis:
    """Echelonized span plus a basis of its orthogonal complement."""

    n: int
    basis: Tuple[CzVector, ...]
    complement: Tuple[CzVector, ...]


def _czvec(support: int, n: int) -> int:
    """Pair mask over all (s < t) with both variables in the support."""
    vars_ = [w for w in range(1, n + 1) if (support >> (w - 1)) & 1]
    out = 0
    for a in range(len(vars_)):
        for b in range(a + 1, len(vars_)):
            out |= 1 << pair_index(n, vars_[a], vars_[b])
    return out


def _cross(f: int, g: int, n: int) -> int:
    """CZ content of a CZ gate between wires carrying f and g."""
    return _czvec(f ^ g, n) ^ _czvec(f, n) ^ _czvec(g, n)


def cz_vector(f: LinearFunction) -> CzVector:
    n = f.n
    npairs = n * (n - 1) // 2
    return CzVector(n, BitVector(npairs, _czvec(f.support.bits, n)))


def _ech_reduce(v: int, basis: Sequence[int]) -> int:
    """Reduce v against an echelon basis (sorted by descending leading bit)."""
    for b in basis:
        if v.bit_length() == b.bit_length():
            v ^= b
    return v


def _ech_insert(basis: List[int], v: int) -> bool:
    """Insert v into the echelon basis in place; False if dependent."""
    v = _ech_reduce(v, basis)
    if not v:
        return False
    insort(basis, v, key=lambda t: -t.bit_length())
    return True


def _rref(vectors: Sequence[int]) -> List[int]:
    """Reduced row-echelon basis of the span (every pivot cleared elsewhere)."""
    basis: List[int] = []
    for v in vectors:
        for b in basis:
            if v & (1 << (b.bit_length() - 1)):
                v ^= b
        if v:
            basis = [b ^ v if b & (1 << (v.bit_length() - 1)) else b for b in basis]
            insort(basis, v, key=lambda t: -t.bit_length())
    return basis


def _replay_functions(c: Circuit) -> Tuple[List[Tuple[int, int, int]], List[int]]:
    """((position, wire, function) trace, final functions) of a CNOT+CZ circuit.

    Position k is the state after gate k; position 0 entries are the inputs.
    """
    n = c.n
    fs = [1 << w for w in range(n)]
    trace = [(0, w, fs[w - 1]) for w in range(1, n + 1)]
    for k, g in enumerate(c.gates, 1):
        if g.kind == "cnot":
            a, b = g.qubits
            fs[b - 1] ^= fs[a - 1]
            trace.append((k, b, fs[b - 1]))
        elif g.kind != "cz":
            raise ValueError(f"non-CNOT gate present: {g.kind}")
    return trace, fs


def collect_linear_functions(c: Circuit) -> List[Tuple[int, int, LinearFunction]]:
    """Every (position, wire, function) reached during replay, inputs included.

    CZ gates are tolerated (they do not alter the functions); anything else
    raises.
    """
    trace, _ = _replay_functions(c)
    return [(pos, w, LinearFunction(c.n, BitVector(c.n, f))) for pos, w, f in trace]


def _generated_czvecs(c: Circuit) -> List[int]:
    """CZ-space vectors generated by a CNOT+CZ circuit's replay."""
    n = c.n
    fs = [1 << w for w in range(n)]
    out = [0]
    for g in c.gates:
        a, b = g.qubits if g.is_two_qubit() else (0, 0)
        if g.kind == "cnot":
            fs[b - 1] ^= fs[a - 1]
            out.append(_czvec(fs[b - 1], n))
        elif g.kind == "cz":
            out.append(_cross(fs[a - 1], fs[b - 1], n))
        else:
            raise ValueError(f"non-CNOT gate present: {g.kind}")
    return out


def cz_basis(c: Circuit) -> CzBasis:
    """Echelon basis of the circuit's CZ span and its orthogonal complement."""
    n = c.n
    npairs = n * (n - 1) // 2
    basis = _rref(_generated_czvecs(c))
    if basis:
        comp = [v.bits for v in nullspace(BitMatrix(len(basis), npairs, tuple(basis)))]
    else:
        comp = [1 << k for k in range(npairs)]
    wrap = lambda bits: CzVector(n, BitVector(npairs, bits))
    return CzBasis(n, tuple(map(wrap, basis)), tuple(map(wrap, comp)))


def _scan_layer(
    n: int,
    fs: Sequence[int],
    occupied: set,
    basis: List[int],
    out: List[Gate],
) -> bool:
    """One greedy pass over lexicographic pairs; True if anything inserted."""
    added = False
    for i in range(1, n + 1):
        if i in occupied:
            continue
        for j in range(i + 1, n + 1):
            if j in occupied:
                continue
            if _ech_insert(basis, _cross(fs[i - 1], fs[j - 1], n)):
                out.append(cz(i, j))
                occupied.update((i, j))
                added = True
                break
    return added


def insert_cz(c: Circuit) -> Circuit:
    """Complete the CZ span by inserting CZ gates into free layer slots.

    Greedy: scan existing layers left to right and qubit pairs in
    lexicographic order, inserting a CZ wherever both qubits are free of
    two-qubit gates in that layer and the gate's CZ vector enlarges the
    span; append fresh layers only when forced.  The number of insertions
    equals the dimension of the initial orthogonal complement.
    """
    n = c.n
    npairs = n * (n - 1) // 2
    basis: List[int] = []
    for v in _generated_czvecs(c):
        _ech_insert(basis, v)
    levels: List[int] = []
    busy = [0] * (n + 1)
    for g in c.gates:
        a, b = g.qubits
        lvl = max(busy[a], busy[b]) + 1
        busy[a] = busy[b] = lvl
        levels.append(lvl)
    depth = max(levels, default=0)
    by_level: List[List[Gate]] = [[] for _ in range(depth + 1)]
    for g, lvl in zip(c.gates, levels):
        by_level[lvl].append(g)

    fs = [1 << w for w in range(n)]
    out: List[Gate] = []
    for lvl in range(1, depth + 1):
        if len(basis) < npairs:
            occupied = set()
            for g in by_level[lvl]:
                occupied.update(g.qubits)
            _scan_layer(n, fs, occupied, basis, out)
        out.extend(by_level[lvl])
        for g in by_level[lvl]:
            if g.kind == "cnot":
                a, b = g.qubits
                fs[b - 1] ^= fs[a - 1]
    while len(basis) < npairs:
        if not _scan_layer(n, fs, set(), basis, out):
            # cannot happen: an unoccupied layer always offers a reducing pair
            raise AssertionError("CZ span not completable on a fresh layer")
    return Circuit(n, tuple(out))


def _solve_phase_selection(
    n: int,
    position_vectors: Sequence[int],
    gate_vectors: Sequence[int],
    gamma: int,
) -> Optional[Tuple[List[int], List[int]]]:
    """Pick position and keep-gate subsets whose CZ vectors sum to gamma.

    Returns (position indices, gate indices) or None if unsatisfiable.
    """
    npairs = n * (n - 1) // 2
    columns: List[int] = []
    owners: List[Tuple[str, int]] = []
    seen = set()
    for idx, v in enumerate(position_vectors):
        if v and v not in seen:
            seen.add(v)
            columns.append(v)
            owners.append(("pos", idx))
    for idx, v in enumerate(gate_vectors):
        columns.append(v)
        owners.append(("gate", idx))
    rows = [0] * npairs
    for col, v in enumerate(columns):
        for r in range(npairs):
            if (v >> r) & 1:
                rows[r] |= 1 << col
    sol = solve(BitMatrix(npairs, len(columns), tuple(rows)), BitVector(npairs, gamma))
    if sol is None:
        return None
    pos_idx, gate_idx = [], []
    for col in range(len(columns)):
        if sol[col + 1]:
            kind, idx = owners[col]
            (pos_idx if kind == "pos" else gate_idx).append(idx)
    return pos_idx, gate_idx


def schedule_phases_a2a(target: HadamardFreeTarget, skeleton: Circuit) -> Circuit:
    """Realize a Hadamard-free target on a CNOT+CZ skeleton with phase gates.

    Solves the F2 system choosing odd-phase positions and which skeleton CZ
    gates to keep so the quadratic part matches target.gamma, then fixes the
    leftover single-variable phases on the input wires.
    """
    n = target.n
    trace, _ = _replay_functions(skeleton)
    pos_vectors = [_czvec(f, n) for _, _, f in trace]
    fs = [1 << w for w in range(n)]
    gate_vectors: List[int] = []
    cz_gate_indices: List[int] = []
    for k, g in enumerate(skeleton.gates):
        if g.kind == "cnot":
            a, b = g.qubits
            fs[b - 1] ^= fs[a - 1]
        else:
            a, b = g.qubits
            gate_vectors.append(_cross(fs[a - 1], fs[b - 1], n))
            cz_gate_indices.append(k)
    sel = _solve_phase_selection(n, pos_vectors, gate_vectors, target.gamma)
    if sel is None:
        raise ValueError(
            "phase system unsatisfiable: skeleton does not span the CZ space"
        )
    pos_sel, gate_sel = sel
    phases_after: Dict[int, List[int]] = {}
    for idx in pos_sel:
        position, wire, _ = trace[idx]
        phases_after.setdefault(position, []).append(wire)
    kept = {cz_gate_indices[i] for i in gate_sel}
    gates: List[Gate] = [phase(w, 1) for w in phases_after.get(0, [])]
    for k, g in enumerate(skeleton.gates):
        if g.kind == "cz" and k not in kept:
            continue
        gates.append(g)
        gates.extend(phase(w, 1) for w in phases_after.get(k + 1, []))
    got = hfree_canonical(Circuit(n, tuple(gates)))
    if got.m != target.m:
        raise ValueError("skeleton CNOT part does not implement the target")
    assert got.gamma == target.gamma  # guaranteed by the solved system
    lead = [
        phase(i, (target.p[i - 1] - got.p[i - 1]) % 4)
        for i in range(1, n + 1)
        if (target.p[i - 1] - got.p[i - 1]) % 4
    ]
    tail = [x_gate(w) for w in range(1, n + 1) if (target.d >> (w - 1)) & 1]
    result = Circuit(n, tuple(lead) + tuple(gates) + tuple(tail))
    assert hfree_canonical(result) == target
    return result


def gauss_synth(m: BitMatrix) -> Circuit:
    """Plain Gaussian-elimination CNOT synthesis; the baseline comparator."""
    return Circuit(m.rows, tuple(_synth_cnot_gates(m)))


def _lower_synth(rows: List[int], n: int, width: int) -> List[Tuple[int, int]]:
    """Zero the below-diagonal part section by section; (control, target) ops."""
    ops: List[Tuple[int, int]] = []
    for lo in range(0, n, width):
        hi = min(n, lo + width)
        mask = ((1 << hi) - 1) ^ ((1 << lo) - 1)
        seen: Dict[int, int] = {}
        for r in range(lo, n):
            sub = rows[r] & mask
            if not sub:
                continue
            if sub in seen:
                rows[r] ^= rows[seen[sub]]
                ops.append((seen[sub] + 1, r + 1))
            else:
                seen[sub] = r
        for col in range(lo, hi):
            bit = 1 << col
            if not rows[col] & bit:
                for r in range(col + 1, n):
                    if rows[r] & bit:
                        rows[col] ^= rows[r]
                        ops.append((r + 1, col + 1))
                        break
                else:
                    raise ValueError("singular matrix")
            for r in range(col + 1, n):
                if rows[r] & bit:
                    rows[r] ^= rows[col]
                    ops.append((col + 1, r + 1))
    return ops


def pmh_synth(m: BitMatrix) -> Circuit:
    """Section-partitioned CNOT synthesis with sub-row deduplication.

    Gate count O(n^2 / log n); section width log2(n)/2 rounded, min 1.
    """
    n = m.rows
    if m.cols != n:
        raise ValueError("matrix must be square")
    width = max(1, round(math.log2(n) / 2))
    work = list(m.data)
    ops1 = _lower_synth(work, n, width)
    workt = [0] * n
    for r in range(n):
        for c in range(n):
            if (work[r] >> c) & 1:
                workt[c] |= 1 << r
    ops2 = _lower_synth(workt, n, width)
    gates = [cnot(t, c) for c, t in ops2]
    gates += [cnot(c, t) for c, t in reversed(ops1)]
    return Circuit(n, tuple(gates))


__all__ = [
    "LinearFunction",
    "CzVector",
    "CzBasis",
    "cz_vector",
    "collect_linear_functions",
    "cz_basis",
    "insert_cz",
    "schedule_phases_a2a",
    "gauss_synth",
    "pmh_synth",
]
