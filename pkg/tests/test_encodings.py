import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fermigates import fock
from fermigates.circuit import LIBRARY, Circuit, GateApplication, evaluate, gate, raw_gate
from fermigates.encodings import (
    embedding,
    extraction_gate_bound,
    extraction_gate_counts,
    fermionic_extraction,
    k_set,
    l_set,
    pair_decode,
    pair_embedding,
    preceq,
    successors,
    transpile,
    tree_decode,
    tree_decode_indices,
    tree_encode,
    tree_encode_indices,
    tree_extraction_circuit,
    tree_extraction_ops,
)


def _up_to_phase(A, B, tol=1e-10):
    k = np.unravel_index(np.argmax(np.abs(B)), B.shape)
    if abs(B[k]) < tol:
        return np.allclose(A, B, atol=tol)
    ph = A[k] / B[k]
    return abs(abs(ph) - 1) < tol and np.allclose(A, ph * B, atol=tol)


def test_preceq_examples():
    assert preceq(2, 3)
    assert preceq(4, 5)
    assert not preceq(3, 5)
    assert all(preceq(j, j) for j in range(20))


@given(st.integers(0, 300), st.integers(0, 300))
def test_preceq_implies_order(j, k):
    if preceq(j, k):
        assert j <= k


def test_k_and_l_sets():
    assert k_set(7) == {3, 5, 6}
    assert k_set(0) == set()
    assert l_set(6) == {3, 5}


@pytest.mark.parametrize("m", [5, 8, 13])
def test_l_set_gives_prefix_sums(m):
    for idx in range(1 << m):
        n = fock.index_occupations(idx, m)
        x = tree_encode(n)
        for j in range(m):
            assert sum(x[s] for s in l_set(j) if s < m) % 2 == sum(n[:j]) % 2


def test_set_sizes_are_logarithmic():
    for m in (2, 7, 64, 1000):
        cap = math.ceil(math.log2(m)) + 1
        for j in range(m):
            assert len(k_set(j)) <= cap
            assert len(l_set(j)) <= cap
            assert len(successors(j, m)) <= cap


def test_tree_encode_examples():
    e0 = [1] + [0] * 7
    assert [j for j, b in enumerate(tree_encode(e0)) if b] == [0, 1, 3, 7]
    assert tree_encode([0] * 8) == [0] * 8


def test_tree_groupings_m8():
    for j in range(8):
        n = [int(s == j) for s in range(8)]
        x = tree_encode(n)
        assert x[3] == int(j in (0, 1, 2, 3))
        assert x[5] == int(j in (4, 5))


@pytest.mark.parametrize("m", [1, 3, 8, 11, 16])
def test_tree_bijection(m):
    idx = np.arange(1 << m, dtype=np.int64)
    codes = tree_encode_indices(m)
    assert len(np.unique(codes)) == len(idx)
    assert np.array_equal(tree_decode_indices(codes, m), idx)


@given(st.lists(st.integers(0, 1), min_size=1, max_size=40))
def test_tree_round_trip(n):
    assert tree_decode(tree_encode(n)) == n


def test_extraction_counts_examples():
    assert len(tree_extraction_ops(2, 8, 8)) == 5
    assert len(tree_extraction_ops(0, 1, 1)) == 2


def test_extraction_index_error():
    with pytest.raises(IndexError):
        tree_extraction_circuit(8, 8)


@pytest.mark.parametrize("m", [1, 2, 5, 8])
def test_extraction_identity(m):
    J = embedding("tree", m)
    J1 = embedding("tree", m, 1)
    for j in range(m):
        lhs = np.kron(np.eye(2), J) @ fermionic_extraction(j, m)
        rhs = evaluate(tree_extraction_circuit(j, m)) @ J1
        assert np.allclose(lhs, rhs, atol=1e-10)


def test_fast_counts_match_emitted():
    for m in (1, 2, 3, 9, 33, 100):
        assert extraction_gate_counts(m).tolist() == [
            len(tree_extraction_ops(j, m, m)) for j in range(m)
        ]


def test_count_bound_large_m():
    for m in (2**16, 2**16 - 1, 1000):
        assert extraction_gate_counts(m).max() <= extraction_gate_bound(m)


@pytest.mark.parametrize("m", [4, 5])
def test_extraction_recipe(m, rng):
    U = fock.random_physical_unitary(2, rng)
    for j, k in itertools.permutations(range(m), 2):
        E2 = np.kron(np.eye(2), fermionic_extraction(k, m)) @ fermionic_extraction(j, m)
        F = fock.apply_local(np.eye(1 << m, dtype=complex), m, U, (j, k), fermionic=True)
        Q = fock.apply_local(E2, m + 2, U, (m + 1, m), fermionic=False)
        assert np.allclose(Q, E2 @ F, atol=1e-10)


def test_standard_count_far_pair():
    c = Circuit.build("fermionic", 5, [("fb_hop", (0, 4))])
    out, rep = transpile(c, "standard")
    assert rep.gates == len(out.apps) == 7
    assert rep.to_dict() == {"encoding": "standard", "gates": 7, "ancillas": 0, "ancilla_qubits": []}


def test_standard_adjacent_pair_is_one_gate():
    c = Circuit.build("fermionic", 5, [("fb_pair", (2, 3))])
    out, rep = transpile(c, "standard")
    assert rep.gates == 1


def test_standard_count_law_and_square(rng):
    m = 6
    names = [n for n, e in LIBRARY.items() if e.kind == "fermionic" and e.arity == 2]
    for name in names:
        g = gate(name, *([0.3 - 0.4j] * LIBRARY[name].nparams))
        for j, k in itertools.combinations(range(m), 2):
            c = Circuit("fermionic", m, (GateApplication(g, (j, k)),))
            out, rep = transpile(c, "standard")
            assert rep.gates == 2 * (k - j - 1) + 1
            assert np.allclose(evaluate(out), evaluate(c), atol=1e-10)


def test_standard_reversed_targets():
    c = Circuit.build("fermionic", 4, [(gate("hop", 0.2 + 0.9j), (3, 0))])
    out, _ = transpile(c, "standard")
    assert np.allclose(evaluate(out), evaluate(c), atol=1e-10)


def test_standard_rejects_wide_gates():
    c = Circuit.build("fermionic", 3, [("lppx", (0, 1, 2))])
    with pytest.raises(ValueError):
        transpile(c, "standard")


def test_kind_mismatch():
    with pytest.raises(ValueError):
        transpile(Circuit("qubit", 2), "standard")
    with pytest.raises(ValueError):
        transpile(Circuit("fermionic", 2), "pair")
    with pytest.raises(ValueError):
        transpile(Circuit("fermionic", 2), "bogus")


def test_tree_single_mode_gate():
    m = 8
    c = Circuit.build("fermionic", m, [(gate("phase_n", np.pi / 4), (5,))])
    out, rep = transpile(c, "tree")
    assert rep.gates <= 3 * 3 + 3
    J = embedding("tree", m, rep.ancillas)
    assert np.allclose(J @ evaluate(c), evaluate(out) @ J, atol=1e-10)


def test_tree_random_placements(rng):
    m = 6
    names = sorted(n for n, e in LIBRARY.items() if e.kind == "fermionic" and e.arity <= 2)
    for _ in range(20):
        name = names[rng.integers(len(names))]
        e = LIBRARY[name]
        g = gate(name, *([complex(*rng.normal(size=2))] * e.nparams))
        targets = tuple(int(t) for t in rng.choice(m, size=e.arity, replace=False))
        c = Circuit("fermionic", m, (GateApplication(g, targets),))
        out, rep = transpile(c, "tree")
        J = embedding("tree", m, rep.ancillas)
        assert _up_to_phase(J @ evaluate(c), evaluate(out) @ J)
        if e.arity == 2:
            assert rep.gates <= 9 * math.ceil(math.log2(m)) + 10


def test_tree_multi_gate_circuit(rng):
    m = 5
    U = fock.random_physical_unitary(2, rng)
    c = Circuit.build(
        "fermionic",
        m,
        [("fb_hop", (4, 1)), (raw_gate("U", U, "fermionic"), (0, 3)), ("fb_phase", (2,))],
    )
    out, rep = transpile(c, "tree")
    J = embedding("tree", m, rep.ancillas)
    assert np.allclose(J @ evaluate(c), evaluate(out) @ J, atol=1e-10)


QUBIT_GATES = sorted(n for n, e in LIBRARY.items() if e.kind == "qubit")


@pytest.mark.parametrize("name", QUBIT_GATES)
def test_pair_encoding(name, rng):
    for n in (1, 2, 3, 4):
        arity = LIBRARY[name].arity
        if arity > n:
            continue
        targets = tuple(int(t) for t in rng.choice(n, size=arity, replace=False))
        c = Circuit.build("qubit", n, [(name, targets)])
        out, rep = transpile(c, "pair")
        assert rep.gates == len(out.apps) == 1
        J = pair_embedding(n)
        assert np.allclose(J.T @ evaluate(out) @ J, evaluate(c), atol=1e-10)
        assert np.allclose(evaluate(out) @ J, J @ evaluate(c), atol=1e-10)


def test_pair_decode_round_trip(rng):
    psi = fock.random_state(2, rng).amplitudes
    assert np.allclose(pair_decode(pair_embedding(2) @ psi, 2), psi)


def test_pair_decode_rejects_leakage():
    state = np.zeros(4)
    state[1] = 1
    with pytest.raises(ValueError):
        pair_decode(state, 1)
