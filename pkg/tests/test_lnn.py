import random

import pytest

from cliffsynth.circuit import (
    Circuit,
    Connectivity,
    cnot,
    cz,
    swap,
    two_qubit_depth,
    validate_connectivity,
)
from cliffsynth.gf2 import BitMatrix, random_invertible
from cliffsynth.lnn import (
    SWAP,
    SWAP_PLUS,
    Box,
    BoxNetwork,
    _process_swap_plus_boxes,
    _reversal_matrix,
    assemble_hfree_lnn,
    box_network,
    cz_reversal_network,
    find_phase_schedule,
    initialize_schedule,
    northwest_triangularize,
)
from cliffsynth.verify import HadamardFreeTarget, hfree_canonical, pair_mask

from oracles import unitaries_equal_up_to_phase, unitary_of

# northwest-triangular matrix whose diagonalization network is the
# six-qubit example; columns read bottom-up give x4+x6, x3+x4+x5, ...
_M6 = BitMatrix.from_strings(
    [
        "001011",
        "000110",
        "011100",
        "111000",
        "010000",
        "100000",
    ]
)


def _is_northwest(m: BitMatrix) -> bool:
    n = m.rows
    return all(
        not m[i, j] for i in range(1, n + 1) for j in range(1, n + 1) if i + j > n + 1
    )


def _replay_columns(m: BitMatrix, c: Circuit) -> BitMatrix:
    """Apply the circuit's CNOTs as column operations (control into target)."""
    n = m.rows
    cols = [m.column(w).bits for w in range(1, n + 1)]
    for g in c.gates:
        a, b = g.qubits
        cols[b - 1] ^= cols[a - 1]
    rows = [0] * n
    for w in range(1, n + 1):
        for r in range(n):
            if (cols[w - 1] >> r) & 1:
                rows[r] |= 1 << (w - 1)
    return BitMatrix(n, n, tuple(rows))


def test_northwest_keeps_triangular_input():
    c1, mp = northwest_triangularize(_M6)
    assert c1.gates == ()
    assert mp == _M6


def test_northwest_keeps_reversal():
    j = _reversal_matrix(8)
    c1, mp = northwest_triangularize(j)
    assert c1.gates == ()
    assert mp == j


def test_northwest_random_replay():
    rng = random.Random(11)
    for _ in range(50):
        m = random_invertible(8, rng)
        c1, mp = northwest_triangularize(m)
        assert _is_northwest(mp)
        assert _replay_columns(m, c1) == mp
        assert two_qubit_depth(c1) <= 16
        assert not validate_connectivity(c1, Connectivity.lnn(8))


def test_northwest_sizes_sweep():
    rng = random.Random(12)
    for n in range(1, 13):
        for _ in range(20):
            m = random_invertible(n, rng)
            c1, mp = northwest_triangularize(m)
            assert _is_northwest(mp)
            assert _replay_columns(m, c1) == mp
            assert two_qubit_depth(c1) <= 2 * n


def test_northwest_rejects_singular():
    m = BitMatrix.from_strings(["11", "11"])
    with pytest.raises(ValueError):
        northwest_triangularize(m)


def test_box_network_reversal_all_swap():
    for n in range(2, 9):
        net = box_network(_reversal_matrix(n))
        assert len(net.boxes) == n * (n - 1) // 2
        assert all(b.kind == SWAP for b in net.boxes)


def test_box_network_example_kinds():
    net = box_network(_M6)
    kinds = "".join("P" if b.kind == SWAP_PLUS else "S" for b in net.boxes)
    assert kinds == "SPPSPPSPSSSPPPP"


def test_box_network_layer_order_n7():
    net = box_network(_reversal_matrix(7))
    assert net.layer_order == (6, 4, 2, 1, 3, 5)


def test_box_network_layer_order_closed_form():
    for n in range(2, 13):
        net = box_network(_reversal_matrix(n))
        down = list(range(n - 1, 0, -2))
        up = list(range(2 if n % 2 == 0 else 1, n - 1, 2))
        assert net.layer_order == tuple(down + up)


def test_box_network_pair_meets_once():
    rng = random.Random(13)
    for n in range(2, 11):
        _, mp = northwest_triangularize(random_invertible(n, rng))
        net = box_network(mp)
        pairs = [(b.i, b.j) for b in net.boxes]
        assert len(pairs) == len(set(pairs)) == n * (n - 1) // 2
        assert all(i < j for i, j in pairs)


def test_box_network_label_invariant_replay():
    # the label of a wire always equals the largest variable in its function
    rng = random.Random(14)
    for _ in range(25):
        n = rng.randrange(2, 9)
        _, mp = northwest_triangularize(random_invertible(n, rng))
        net = box_network(mp)
        fs = [mp.column(w).bits for w in range(1, n + 1)]
        lab = list(range(n, 0, -1))
        assert all(f.bit_length() == l for f, l in zip(fs, lab))
        for b in net.boxes:
            w = b.top_wire
            u, v = fs[w - 1], fs[w]
            fs[w - 1], fs[w] = v, (u ^ v) if b.kind == SWAP_PLUS else u
            lab[w - 1], lab[w] = lab[w], lab[w - 1]
            assert fs[w - 1].bit_length() == lab[w - 1]
            assert fs[w].bit_length() == lab[w]
        assert fs == [1 << (w - 1) for w in range(1, n + 1)]


def test_box_network_rejects_bad_input():
    with pytest.raises(ValueError):
        box_network(BitMatrix.from_strings(["10", "01"]))  # identity: below antidiag
    with pytest.raises(ValueError):
        box_network(BitMatrix.from_strings(["11", "11"]))


def test_layer_is_position_of_min_label():
    # box(j,k) before box(i,j) implies box(i,k) not after box(i,j)
    for n in range(3, 13):
        net = box_network(_reversal_matrix(n))
        pos = {lbl: idx for idx, lbl in enumerate(net.layer_order)}
        layer = lambda a, b: pos[min(a, b)]
        for k in range(1, n + 1):
            for i in range(1, n + 1):
                for j in range(i + 1, n + 1):
                    if k in (i, j):
                        continue
                    if layer(j, k) < layer(i, j):
                        assert layer(i, k) <= layer(i, j)


def _box_xors(boxes, fs):
    """Replay boxes over wire functions; XOR value exposed at each box."""
    fs = list(fs)
    out = {}
    for b in boxes:
        w = b.top_wire
        u, v = fs[w - 1], fs[w]
        out[(b.i, b.j)] = u ^ v
        fs[w - 1], fs[w] = v, (u ^ v) if b.kind == SWAP_PLUS else u
    return out, fs


def test_flip_smallest_swap_plus_box():
    # flipping the order-smallest SWAP+ to SWAP changes exactly one input
    # column (c_j gains c_i) and only the XORs at boxes box(k,j) up to it
    rng = random.Random(15)
    done = 0
    while done < 30:
        n = rng.randrange(3, 9)
        _, mp = northwest_triangularize(random_invertible(n, rng))
        net = box_network(mp)
        plus = [b for b in net.boxes if b.kind == SWAP_PLUS]
        if not plus:
            continue
        done += 1
        target = min(plus, key=net.order_key)
        i, j = target.i, target.j
        flipped = [
            Box(b.i, b.j, b.layer, b.top_wire, SWAP) if b is target else b
            for b in net.boxes
        ]
        cols = [mp.column(w).bits for w in range(1, n + 1)]
        # wire of label j before any shuffling: labels start reversed
        cprime = list(cols)
        wj = n - j  # 0-based wire initially holding label j
        wi = n - i
        cprime[wj] ^= cprime[wi]
        xors, end = _box_xors(net.boxes, cols)
        xors2, end2 = _box_xors(flipped, cprime)
        assert end == end2 == [1 << (w - 1) for w in range(1, n + 1)]
        here = net.order_key(target)
        for key in xors:
            if xors[key] != xors2[key]:
                assert j in key
                box = next(b for b in net.boxes if (b.i, b.j) == key)
                assert net.order_key(box) <= here


def test_seven_term_xor_identity():
    for a in (0, 1):
        for b in (0, 1):
            for c in (0, 1):
                total = a + b + c - (a ^ b) - (a ^ c) - (b ^ c) + (a ^ b ^ c)
                assert total % 4 == 0


def test_initialize_schedule_examples():
    s = initialize_schedule((1, 0), pair_mask(2, [(1, 2)]))
    assert s.s == ((2, 3), (0, 1))
    assert initialize_schedule((0, 0, 0), 0).s == ((0,) * 3,) * 3
    s3 = initialize_schedule((0, 0, 0), pair_mask(3, [(1, 3)]))
    assert s3.entry(1, 3) == 3 and s3.entry(1, 1) == 1 and s3.entry(3, 3) == 1
    assert s3.entry(2, 2) == 0 and s3.entry(1, 2) == 0 and s3.entry(2, 3) == 0


def test_schedule_all_swap_unchanged():
    rng = random.Random(16)
    for n in range(2, 8):
        net = box_network(_reversal_matrix(n))
        p = tuple(rng.randrange(4) for _ in range(n))
        gamma = rng.getrandbits(n * (n - 1) // 2)
        assert find_phase_schedule(p, gamma, net).s == initialize_schedule(p, gamma).s


def test_schedule_single_swap_plus_swaps_entries():
    # processing one SWAP+ box exchanges the diagonal and XOR-point entries
    net = box_network(BitMatrix.from_strings(["11", "10"]))
    assert [b.kind for b in net.boxes] == [SWAP_PLUS]
    grid = [[0, 3], [0, 0]]
    _process_swap_plus_boxes(grid, net)
    assert grid == [[0, 0], [0, 3]]


def test_schedule_case3_end_to_end():
    # two SWAP+ boxes with an earlier scheduled pair force the seven-term
    # rewrite; the assembled circuit must still match the target exactly
    mp = BitMatrix.from_strings(["111", "110", "100"])
    net = box_network(mp)
    assert sum(b.kind == SWAP_PLUS for b in net.boxes) == 2
    target = HadamardFreeTarget(3, (0, 0, 0), pair_mask(3, [(2, 3)]), mp.transpose())
    c = assemble_hfree_lnn(target)
    assert hfree_canonical(c) == target


def test_assemble_trivial_targets():
    t = HadamardFreeTarget.identity(4)
    assert assemble_hfree_lnn(t).gates == ()
    t2 = HadamardFreeTarget(3, (1, 0, 2), 0, BitMatrix.identity(3), 0b101)
    c = assemble_hfree_lnn(t2)
    assert two_qubit_depth(c) == 0
    assert hfree_canonical(c) == t2


def test_assemble_linear_only():
    rng = random.Random(17)
    for n in (2, 5, 9):
        for _ in range(10):
            t = HadamardFreeTarget(n, (0,) * n, 0, random_invertible(n, rng))
            c = assemble_hfree_lnn(t)
            assert all(g.kind == "cnot" for g in c.gates)
            assert hfree_canonical(c) == t
            assert two_qubit_depth(c) <= 5 * n


def test_assemble_master_property():
    rng = random.Random(18)
    for n in range(1, 13):
        for _ in range(40):
            t = HadamardFreeTarget(
                n,
                tuple(rng.randrange(4) for _ in range(n)),
                rng.getrandbits(n * (n - 1) // 2),
                random_invertible(n, rng),
                rng.getrandbits(n),
            )
            c = assemble_hfree_lnn(t)
            assert hfree_canonical(c) == t
            assert not validate_connectivity(c, Connectivity.lnn(n))
            assert two_qubit_depth(c) <= 5 * n


def test_cz_reversal_pure():
    for n in range(2, 9):
        c = cz_reversal_network(n, 0)
        got = hfree_canonical(c)
        assert got == HadamardFreeTarget(n, (0,) * n, 0, _reversal_matrix(n))
        assert two_qubit_depth(c) <= 2 * n + 2


def test_cz_reversal_n2_unitary():
    c = cz_reversal_network(2, pair_mask(2, [(1, 2)]))
    want = Circuit(2, (cz(1, 2), swap(1, 2)))
    assert unitaries_equal_up_to_phase(unitary_of(c), unitary_of(want))


def test_cz_reversal_random_sweep():
    rng = random.Random(19)
    for n in range(3, 16):
        for _ in range(10):
            gamma = rng.getrandbits(n * (n - 1) // 2)
            p = tuple(rng.randrange(4) for _ in range(n))
            c = cz_reversal_network(n, gamma, p)
            got = hfree_canonical(c)
            assert got == HadamardFreeTarget(n, p, gamma, _reversal_matrix(n))
            assert two_qubit_depth(c) <= 2 * n + 2
            assert not validate_connectivity(c, Connectivity.lnn(n))
