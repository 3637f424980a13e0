import random
from collections import Counter

import pytest

from cliffsynth.circuit import (
    Circuit,
    Connectivity,
    cnot,
    h,
    phase,
    two_qubit_depth,
    validate_connectivity,
)
from cliffsynth.gf2 import random_invertible
from cliffsynth.lnn import (
    _enc,
    _reversal_matrix,
    _skeleton_layers,
    _synth_clifford_tiered,
    _twoq_table,
    synth_clifford_lnn,
)
from cliffsynth.verify import (
    CliffordTableau,
    HadamardFreeTarget,
    hfree_canonical,
    hfree_from_tableau,
    tableau_from_hfree,
    tableau_of,
)

from oracles import random_clifford_circuit, unitaries_equal_exact, unitary_of


def _random_tableau(n, rng, ngates=None):
    return tableau_of(random_clifford_circuit(n, ngates or 20 * n, rng))


def test_identity_tableau_depth_zero():
    c = synth_clifford_lnn(CliffordTableau.identity(6))
    assert two_qubit_depth(c) == 0
    assert c.gates == ()


def test_hfree_tableau_takes_direct_pipeline():
    rng = random.Random(21)
    for n in (2, 5, 8):
        for _ in range(10):
            t = HadamardFreeTarget(
                n,
                tuple(rng.randrange(4) for _ in range(n)),
                rng.getrandbits(n * (n - 1) // 2),
                random_invertible(n, rng),
                rng.getrandbits(n),
            )
            tab = tableau_from_hfree(t)
            c = synth_clifford_lnn(tab)
            assert tableau_of(c) == tab
            assert two_qubit_depth(c) <= 5 * n


def test_example_random_200_gates_n9():
    rng = random.Random(22)
    tab = _random_tableau(9, rng, 200)
    c = synth_clifford_lnn(tab)
    assert tableau_of(c) == tab
    assert two_qubit_depth(c) <= 59
    assert not validate_connectivity(c, Connectivity.lnn(9))


def test_primary_sweep():
    rng = random.Random(23)
    for n in range(1, 14):
        for _ in range(20):
            tab = _random_tableau(n, rng)
            c, tier = _synth_clifford_tiered(tab)
            assert tier == "primary"
            assert tableau_of(c) == tab
            assert two_qubit_depth(c) <= max(7 * n - 4, 0)
            assert not validate_connectivity(c, Connectivity.lnn(n))


def test_forced_fallback_sweep():
    # the alternate skeleton expands each box layer to three CNOT sublayers;
    # only two of them flip through the Hadamards, hence the 8n-4 bound
    rng = random.Random(24)
    for n in range(2, 12):
        for _ in range(8):
            tab = _random_tableau(n, rng)
            c, tier = _synth_clifford_tiered(tab, force_fallback=True)
            assert tier == "fallback"
            assert tableau_of(c) == tab
            assert two_qubit_depth(c) <= 8 * n - 4
            assert not validate_connectivity(c, Connectivity.lnn(n))


def test_invalid_tableau_rejected():
    bad = CliffordTableau.identity(3)
    bad.sym[0, :] = 0
    with pytest.raises(ValueError):
        synth_clifford_lnn(bad)


def test_skeleton_linear_part_is_reversal():
    for n in range(1, 17):
        layers = _skeleton_layers(n)
        assert len(layers) == 2 * n + 2
        c = Circuit(n, tuple(g for layer in layers for g in layer))
        assert hfree_canonical(c).m == _reversal_matrix(n)
        assert two_qubit_depth(c) <= 2 * n + 2
        assert not validate_connectivity(c, Connectivity.lnn(n))


def test_twoq_table_covers_group():
    table = _twoq_table()
    assert len(table) == 11520
    hist = Counter(cost for cost, _ in table.values())
    assert hist == {0: 576, 1: 5184, 2: 5184, 3: 576}
    # spot-check: the stored sequence reproduces its key
    rng = random.Random(25)
    keys = list(table)
    for k in rng.sample(keys, 50):
        cost, gates = table[k]
        assert _enc(tableau_of(Circuit(2, gates))) == k
        assert sum(len(g.qubits) == 2 for g in gates) == cost


def _p(q, k):
    k %= 4
    return [phase(q, k)] if k else []


def _case1(a, b, c, d, e):
    lhs = (
        [cnot(1, 2)]
        + _p(2, a)
        + [cnot(2, 1), cnot(1, 2)]
        + _p(1, b)
        + _p(2, c)
        + [h(1), h(2)]
        + _p(1, d)
        + _p(2, e)
        + [cnot(1, 2)]
    )
    rhs = (
        _p(1, c)
        + _p(2, b)
        + [cnot(2, 1)]
        + _p(1, a)
        + [h(1), h(2)]
        + _p(1, e)
        + [cnot(2, 1)]
        + _p(1, d)
    )
    return lhs, rhs


def _case2(a, b, c, d):
    lhs = (
        [cnot(1, 2)]
        + _p(2, a)
        + [cnot(2, 1)]
        + _p(1, b)
        + _p(2, c)
        + [h(1), h(2)]
        + _p(1, d)
        + [cnot(1, 2)]
    )
    rhs = _p(2, b) + [cnot(1, 2)] + _p(2, a + c) + [h(1), h(2)] + _p(1, d)
    return lhs, rhs


def _case3(a, b, c, d):
    lhs = (
        [cnot(1, 2)]
        + _p(2, a)
        + [cnot(2, 1)]
        + _p(1, b)
        + _p(2, c)
        + [h(1), h(2)]
        + _p(1, d)
        + _p(2, 1)
        + [cnot(1, 2)]
    )
    rhs = (
        _p(2, b)
        + [cnot(1, 2), h(1)]
        + _p(2, a + c)
        + [cnot(1, 2), h(2)]
        + _p(1, d + 1)
        + _p(2, 1)
    )
    return lhs, rhs


def _flags(count):
    for bits in range(1 << count):
        yield tuple((bits >> i) & 1 for i in range(count))


def test_window_case_identities_exact():
    # the three seam rewrites used after the Hadamard push, as exact
    # two-qubit operator identities over all phase-flag assignments
    for fn, nflags in ((_case1, 5), (_case2, 4), (_case3, 4)):
        for bits in _flags(nflags):
            lhs, rhs = fn(*bits)
            ul = unitary_of(Circuit(2, tuple(lhs)))
            ur = unitary_of(Circuit(2, tuple(rhs)))
            assert unitaries_equal_exact(ul, ur), (fn.__name__, bits)


def test_hadamard_push_identity():
    # H on all wires commutes with the first four skeleton layers by
    # flipping every CNOT; exact on small n, tableau-checked through n=10
    for n in range(4, 11):
        flat = [g for layer in _skeleton_layers(n)[:4] for g in layer]
        flipped = [cnot(b, a) for a, b in (g.qubits for g in flat)]
        hs = [h(q) for q in range(1, n + 1)]
        lhs = Circuit(n, tuple(flat + hs))
        rhs = Circuit(n, tuple(hs + flipped))
        assert tableau_of(lhs) == tableau_of(rhs)
        if n <= 5:
            assert unitaries_equal_exact(unitary_of(lhs), unitary_of(rhs))
