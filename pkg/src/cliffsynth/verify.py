"""Ground-truth oracles for circuit equivalence.

Two independent routes: a phase-polynomial canonical form for
Hadamard-free circuits (exact, from values on weight<=2 inputs) and a
stabilizer tableau with sign tracking for arbitrary Clifford circuits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .circuit import Circuit, Gate, cnot, cz, phase, x as x_gate, z as z_gate
from .gf2 import BitMatrix, BitVector, rank


def pair_index(n: int, i: int, j: int) -> int:
    """Index of the unordered pair (i < j) in the length n(n-1)/2 CZ space."""
    if not 1 <= i < j <= n:
        raise ValueError(f"bad pair ({i}, {j}) for n={n}")
    return (i - 1) * (2 * n - i) // 2 + (j - i - 1)


def pair_mask(n: int, pairs: Iterable[Tuple[int, int]]) -> int:
    """Bitmask over pair indices from an iterable of 1-based (i, j) pairs."""
    m = 0
    for i, j in pairs:
        m |= 1 << pair_index(n, min(i, j), max(i, j))
    return m


def mask_pairs(n: int, mask: int) -> List[Tuple[int, int]]:
    """Inverse of pair_mask: sorted list of (i, j) pairs."""
    out = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if (mask >> pair_index(n, i, j)) & 1:
                out.append((i, j))
    return out


@dataclass(frozen=True)
class HadamardFreeTarget:
    """Canonical form (p, gamma, m, d) of a Hadamard-free Clifford.

    Action: |x> -> i^(p.x + 2*sum_{i<j} gamma_ij x_i x_j) |m x + d| with the
    exponent mod 4 and the global phase normalized by phi(0) = 0.  gamma is
    a bitmask over pair_index; d is the affine output offset contributed by
    X gates (bit w-1 = wire w) and is part of equality.
    """

    n: int
    p: Tuple[int, ...]
    gamma: int
    m: BitMatrix
    d: int = 0

    def __post_init__(self) -> None:
        if len(self.p) != self.n or any(not 0 <= v <= 3 for v in self.p):
            raise ValueError("p must be a length-n vector over Z4")
        if self.gamma >> (self.n * (self.n - 1) // 2):
            raise ValueError("gamma has bits beyond the pair space")
        if self.m.rows != self.n or self.m.cols != self.n:
            raise ValueError("m must be n x n")
        if self.d >> self.n:
            raise ValueError("d has bits beyond n")

    def gamma_pairs(self) -> List[Tuple[int, int]]:
        return mask_pairs(self.n, self.gamma)

    @classmethod
    def identity(cls, n: int) -> "HadamardFreeTarget":
        return cls(n, (0,) * n, 0, BitMatrix.identity(n))


def _basis_samples(n: int) -> List[int]:
    """Input masks 0, e_i, e_i+e_j ordered so pair (i,j) sits at its index."""
    samples = [0] + [1 << (i - 1) for i in range(1, n + 1)]
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            samples.append((1 << (i - 1)) | (1 << (j - 1)))
    return samples


def hfree_canonical(c: Circuit) -> HadamardFreeTarget:
    """Exact (p, gamma, m, d) of a Hadamard-free circuit.

    Simulates the O(n^2) inputs of weight <= 2; a degree-2 Z4 phase
    polynomial is fully determined by its values there.
    """
    n = c.n
    samples = _basis_samples(n)
    ns = len(samples)
    v = np.zeros((n, ns), dtype=np.uint8)
    for s, mask in enumerate(samples):
        for w in range(n):
            v[w, s] = (mask >> w) & 1
    t = np.zeros(ns, dtype=np.int64)
    for g in c.gates:
        if g.kind == "cnot":
            a, b = g.qubits
            v[b - 1] ^= v[a - 1]
        elif g.kind == "cz":
            a, b = g.qubits
            t += 2 * (v[a - 1] & v[b - 1])
        elif g.kind == "phase":
            t += g.k * v[g.qubits[0] - 1]
        elif g.kind == "z":
            t += 2 * v[g.qubits[0] - 1]
        elif g.kind == "x":
            v[g.qubits[0] - 1] ^= 1
        elif g.kind == "swap":
            a, b = g.qubits
            v[[a - 1, b - 1]] = v[[b - 1, a - 1]]
        elif g.kind == "h":
            raise ValueError("Hadamard gate present: circuit is not Hadamard-free")
        else:  # pragma: no cover
            raise ValueError(f"unsupported gate {g.kind}")
    phi = (t - t[0]) % 4
    d = 0
    for w in range(n):
        if v[w, 0]:
            d |= 1 << w
    cols = [0] * (n + 1)
    for i in range(1, n + 1):
        ci = 0
        for w in range(n):
            if v[w, i] ^ v[w, 0]:
                ci |= 1 << w
        cols[i] = ci
    rows = [0] * n
    for i in range(1, n + 1):
        for w in range(n):
            if (cols[i] >> w) & 1:
                rows[w] |= 1 << (i - 1)
    m = BitMatrix(n, n, tuple(rows))
    if rank(m) != n:
        raise ValueError("circuit's linear part is singular")
    p = tuple(int(phi[i]) for i in range(1, n + 1))
    gamma = 0
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            s = n + 1 + pair_index(n, i, j)
            delta = (int(phi[s]) - p[i - 1] - p[j - 1]) % 4
            if delta & 1:  # cannot happen for this gate set
                raise AssertionError("inconsistent phase polynomial")
            if delta == 2:
                gamma |= 1 << pair_index(n, i, j)
    return HadamardFreeTarget(n, p, gamma, m, d)


class CliffordTableau:
    """Conjugation action on Pauli generators, with Z4 phase tracking.

    Row r < n is the image of X_{r+1}, row n + r the image of Z_{r+1},
    stored as i^t X^a Z^b: sym[r, :n] = a, sym[r, n:] = b, phase t in Z4.
    The conventional sign bit of row r is (t - a.b) / 2 mod 2.
    """

    def __init__(self, n: int, sym: np.ndarray, t: np.ndarray) -> None:
        self.n = n
        self.sym = sym.astype(np.uint8)
        self.t = t.astype(np.int64) % 4
        if self.sym.shape != (2 * n, 2 * n) or self.t.shape != (2 * n,):
            raise ValueError("tableau shape mismatch")

    @classmethod
    def identity(cls, n: int) -> "CliffordTableau":
        return cls(n, np.eye(2 * n, dtype=np.uint8), np.zeros(2 * n, dtype=np.int64))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CliffordTableau):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.sym, other.sym)
            and np.array_equal(self.t, other.t)
        )

    def __hash__(self):  # pragma: no cover
        return hash((self.n, self.sym.tobytes(), self.t.tobytes()))

    def signs(self) -> List[int]:
        """Per-row sign bits: image = (-1)^s times the Hermitian X^a Z^b form."""
        out = []
        for r in range(2 * self.n):
            ab = int(np.dot(self.sym[r, : self.n], self.sym[r, self.n :]))
            diff = (int(self.t[r]) - ab) % 4
            if diff & 1:
                raise AssertionError("non-Hermitian tableau row")
            out.append(diff // 2)
        return out

    def row_ints(self, r: int) -> Tuple[int, int, int]:
        """(t, a, b) of row r with a, b as int bitmasks."""
        a = b = 0
        for q in range(self.n):
            if self.sym[r, q]:
                a |= 1 << q
            if self.sym[r, self.n + q]:
                b |= 1 << q
        return int(self.t[r]), a, b

    def is_valid(self) -> bool:
        """Symplectic condition plus Hermitian rows."""
        n = self.n
        s = self.sym.astype(np.int64)
        omega = np.block(
            [
                [np.zeros((n, n), dtype=np.int64), np.eye(n, dtype=np.int64)],
                [np.eye(n, dtype=np.int64), np.zeros((n, n), dtype=np.int64)],
            ]
        )
        if not np.array_equal((s @ omega @ s.T) % 2, omega):
            return False
        ab = (self.sym[:, :n].astype(np.int64) * self.sym[:, n:].astype(np.int64)).sum(
            axis=1
        )
        return bool(np.all((self.t - ab) % 2 == 0))


def tableau_of(c: Circuit) -> CliffordTableau:
    """Tableau of a Clifford circuit, identity for the empty circuit."""
    n = c.n
    sym = np.eye(2 * n, dtype=np.uint8)
    t = np.zeros(2 * n, dtype=np.int64)
    a = sym[:, :n]
    b = sym[:, n:]
    for g in c.gates:
        if g.kind == "cnot":
            cq, tq = g.qubits
            a[:, tq - 1] ^= a[:, cq - 1]
            b[:, cq - 1] ^= b[:, tq - 1]
        elif g.kind == "cz":
            q1, q2 = g.qubits
            t += 2 * (a[:, q1 - 1] & a[:, q2 - 1])
            b[:, q1 - 1] ^= a[:, q2 - 1]
            b[:, q2 - 1] ^= a[:, q1 - 1]
        elif g.kind == "phase":
            q = g.qubits[0]
            t += g.k * a[:, q - 1]
            b[:, q - 1] ^= a[:, q - 1]  # k odd for canonical phase gates
        elif g.kind == "z":
            t += 2 * a[:, g.qubits[0] - 1]
        elif g.kind == "x":
            t += 2 * b[:, g.qubits[0] - 1]
        elif g.kind == "h":
            q = g.qubits[0] - 1
            t += 2 * (a[:, q] & b[:, q])
            tmp = a[:, q].copy()
            a[:, q] = b[:, q]
            b[:, q] = tmp
        elif g.kind == "swap":
            q1, q2 = g.qubits
            a[:, [q1 - 1, q2 - 1]] = a[:, [q2 - 1, q1 - 1]]
            b[:, [q1 - 1, q2 - 1]] = b[:, [q2 - 1, q1 - 1]]
        else:  # pragma: no cover
            raise ValueError(f"unsupported gate {g.kind}")
    return CliffordTableau(n, sym, t)


def pauli_mul(
    p1: Tuple[int, int, int], p2: Tuple[int, int, int]
) -> Tuple[int, int, int]:
    """(t, a, b) product: i^t1 X^a1 Z^b1 . i^t2 X^a2 Z^b2 in canonical form."""
    t1, a1, b1 = p1
    t2, a2, b2 = p2
    crossings = (b1 & a2).bit_count() & 1
    return ((t1 + t2 + 2 * crossings) % 4, a1 ^ a2, b1 ^ b2)


def tableau_compose(after: CliffordTableau, before: CliffordTableau) -> CliffordTableau:
    """Tableau of (before's circuit, then after's circuit)."""
    if after.n != before.n:
        raise ValueError("qubit count mismatch")
    n = after.n
    xrows = [after.row_ints(q) for q in range(n)]
    zrows = [after.row_ints(n + q) for q in range(n)]
    sym = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    t = np.zeros(2 * n, dtype=np.int64)
    for r in range(2 * n):
        tr, ar, br = before.row_ints(r)
        acc = (tr, 0, 0)
        for q in range(n):
            if (ar >> q) & 1:
                acc = pauli_mul(acc, xrows[q])
        for q in range(n):
            if (br >> q) & 1:
                acc = pauli_mul(acc, zrows[q])
        tt, aa, bb = acc
        t[r] = tt
        for q in range(n):
            sym[r, q] = (aa >> q) & 1
            sym[r, n + q] = (bb >> q) & 1
    return CliffordTableau(n, sym, t)


def tableau_inverse(tab: CliffordTableau) -> CliffordTableau:
    """Tableau of the inverse operator."""
    n = tab.n
    s = tab.sym.astype(np.int64)
    omega = np.zeros((2 * n, 2 * n), dtype=np.int64)
    omega[:n, n:] = np.eye(n, dtype=np.int64)
    omega[n:, :n] = np.eye(n, dtype=np.int64)
    sym_inv = (omega @ s.T @ omega) % 2
    cand = CliffordTableau(n, sym_inv.astype(np.uint8), np.zeros(2 * n, dtype=np.int64))
    # Hermitize rows, then cancel residual phases of tab . cand.
    ab = (cand.sym[:, :n].astype(np.int64) * cand.sym[:, n:].astype(np.int64)).sum(
        axis=1
    )
    cand.t = (ab % 2) % 4  # make each row Hermitian (t = a.b mod 2, lifted to Z4)
    resid = tableau_compose(tab, cand)
    cand.t = (cand.t - resid.t) % 4
    return cand


def _synth_cnot_gates(m: BitMatrix) -> List[Gate]:
    """Plain Gaussian-elimination CNOT list whose linear action equals m."""
    n = m.rows
    work = list(m.data)
    ops: List[Tuple[int, int]] = []  # row ops: (control, target), row_t ^= row_c

    def rowop(c: int, t: int) -> None:
        work[t - 1] ^= work[c - 1]
        ops.append((c, t))

    for col in range(1, n + 1):
        if not (work[col - 1] >> (col - 1)) & 1:
            for r in range(col + 1, n + 1):
                if (work[r - 1] >> (col - 1)) & 1:
                    rowop(r, col)
                    break
            else:
                raise ValueError("singular matrix")
        for r in range(1, n + 1):
            if r != col and (work[r - 1] >> (col - 1)) & 1:
                rowop(col, r)
    return [cnot(c, t) for c, t in reversed(ops)]


def circuit_of_hfree(target: HadamardFreeTarget) -> Circuit:
    """Reference circuit for a target: P and CZ layers, then CNOTs, then X."""
    gates: List[Gate] = []
    for q, k in enumerate(target.p, 1):
        if k:
            gates.append(phase(q, k))
    for i, j in target.gamma_pairs():
        gates.append(cz(i, j))
    gates.extend(_synth_cnot_gates(target.m))
    for w in range(1, target.n + 1):
        if (target.d >> (w - 1)) & 1:
            gates.append(x_gate(w))
    return Circuit(target.n, tuple(gates))


def tableau_from_hfree(target: HadamardFreeTarget) -> CliffordTableau:
    return tableau_of(circuit_of_hfree(target))


def hfree_from_tableau(tab: CliffordTableau) -> HadamardFreeTarget:
    """Exact (p, gamma, m, d) of a Hadamard-free tableau.

    A tableau is Hadamard-free iff every Z_j image stays in the Z span,
    i.e. the a-block of the Z rows vanishes.  Then column j of M is the
    a-part of the X_j image, d follows from the Z-row phases (each is
    0 or 2), and row j of Gamma plus the parity of p_j is the b-part of
    the X_j image read through M.  Inverse of tableau_from_hfree.
    """
    n = tab.n
    xrows = [tab.row_ints(j) for j in range(n)]
    zrows = [tab.row_ints(n + j) for j in range(n)]
    if any(a for _, a, _ in zrows):
        raise ValueError("tableau is not Hadamard-free")
    rows = [0] * n
    for j, (_, a, _) in enumerate(xrows):
        for r in range(n):
            if (a >> r) & 1:
                rows[r] |= 1 << j
    m = BitMatrix(n, n, tuple(rows))
    # Z_j -> i^t Z^(M^-T e_j) with t = 2 (M^-1 d)_j, so d = M (t/2)
    vbits = 0
    for j, (t, _, _) in enumerate(zrows):
        if t % 4 == 2:
            vbits |= 1 << j
        else:
            assert t % 4 == 0
    d = m.mul_vec(BitVector(n, vbits)).bits
    gamma = 0
    p = [0] * n
    for j, (t, _, b) in enumerate(xrows):
        # g_j = b_j (as a row vector) times M; g_j[k] = Gamma_jk for k != j
        gj = 0
        bb = b
        while bb:
            low = bb & -bb
            gj ^= m.data[low.bit_length() - 1]
            bb ^= low
        for k in range(j + 1, n):
            if (gj >> k) & 1:
                gamma |= 1 << pair_index(n, j + 1, k + 1)
        gdotv = (gj & vbits).bit_count() & 1
        p[j] = (t - 2 * gdotv) % 4
        if p[j] % 2 != (gj >> j) & 1:
            raise ValueError("tableau is not a valid Clifford image")
    out = HadamardFreeTarget(n, tuple(p), gamma, m, d)
    assert tableau_from_hfree(out) == tab
    return out


def equiv(a: Circuit, b: Circuit) -> bool:
    """Equality up to global phase: tableaux including signs must match."""
    if a.n != b.n:
        raise ValueError("qubit count mismatch")
    return tableau_of(a) == tableau_of(b)


__all__ = [
    "pair_index",
    "pair_mask",
    "mask_pairs",
    "HadamardFreeTarget",
    "hfree_canonical",
    "CliffordTableau",
    "tableau_of",
    "pauli_mul",
    "tableau_compose",
    "tableau_inverse",
    "circuit_of_hfree",
    "tableau_from_hfree",
    "hfree_from_tableau",
    "equiv",
]
