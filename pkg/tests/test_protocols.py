import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fermigates import fock
from fermigates import protocols as P
from fermigates.circuit import Circuit, controlled, evaluate, gate_matrix, gate, lppx, ppH
from fermigates.fock import FockVector

X = np.array([[0, 1], [1, 0]])
Z = np.diag([1, -1])
H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
CZ = np.diag([1, 1, 1, -1])


def _unitaries(dim):
    return st.integers(0, 2**32 - 1).map(lambda s: fock.random_unitary(dim, np.random.default_rng(s)))


def test_ppext_of_hadamard_is_pph():
    assert np.allclose(P.ppext(H), ppH(), atol=1e-15)


def test_ppext_passes_parity_preserving_gates_through():
    assert np.allclose(P.ppext(CZ), np.kron(CZ, np.eye(2)))


def test_ppext_of_x_is_lppx_core():
    assert np.allclose(controlled(P.ppext(X)), lppx())


@given(_unitaries(4), _unitaries(4), st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False))
@settings(max_examples=25, deadline=None)
def test_ppext_homomorphism(A, B, c):
    e = P.ppext
    assert np.allclose(e(A + B), e(A) + e(B), atol=1e-12)
    assert np.allclose(e(c * A), c * e(A), atol=1e-12)
    assert np.allclose(e(A @ B), e(A) @ e(B), atol=1e-12)
    assert np.allclose(e(A.conj().T), e(A).conj().T, atol=1e-12)
    X0 = np.kron(np.eye(4), X)
    assert np.allclose(X0 @ e(A), e(A) @ X0, atol=1e-12)
    assert fock.is_parity_preserving(e(A))


def test_ppext_identity_and_bad_shape():
    assert np.allclose(P.ppext(np.eye(8)), np.eye(16))
    with pytest.raises(ValueError):
        P.ppext(np.eye(3))


def test_controlled_examples():
    assert np.array_equal(controlled(Z), gate_matrix(gate("D")))
    assert np.array_equal(controlled(np.eye(4)), np.eye(8))


def test_ppext_commutes_with_control_up_to_permutation():
    CX = controlled(X)
    S = P.swap_first_two(3)
    assert np.allclose(P.ppext(CX), S @ controlled(P.ppext(X)) @ S)


def test_sector_pair_round_trip(rng):
    U0, U1 = fock.random_unitary(4, rng), fock.random_unitary(4, rng)
    sp = P.SectorPair(U0, U1)
    back = P.SectorPair.from_matrix(sp.to_matrix())
    assert np.allclose(back.U0, U0) and np.allclose(back.U1, U1)
    assert np.allclose(P.SectorPair(U0, U0).to_matrix(), P.ppext(U0))


def test_odd_sector_identity():
    c = P.odd_sector_circuit(np.eye(4), 3)
    assert np.allclose(evaluate(c), np.eye(16))


def test_odd_sector_phase_m2():
    phi = 0.9
    U = evaluate(P.odd_sector_circuit(np.exp(1j * phi) * np.eye(2), 2))
    par = fock.parity_diagonal(2)
    expect = np.diag(np.where(par > 0, 1, np.exp(1j * phi)))
    assert np.allclose(U, np.kron(np.eye(2), expect))


def test_odd_sector_random_with_ancilla_set(rng):
    m = 3
    for _ in range(5):
        Y = fock.random_unitary(4, rng)
        U = evaluate(P.odd_sector_circuit(Y, m))
        target = P.SectorPair(np.eye(4), Y).to_matrix()
        for anc in (0, 1):
            psi = fock.random_state(m, rng).amplitudes
            inp = np.kron(np.eye(2)[anc], psi)
            assert np.allclose(U @ inp, np.kron(np.eye(2)[anc], target @ psi), atol=1e-10)


def test_arbitrary_sector_pair(rng):
    # (U0, U0) from ppext followed by (I, U1 U0^-1) gives (U0, U1)
    m = 3
    U0, U1 = fock.random_unitary(4, rng), fock.random_unitary(4, rng)
    odd = evaluate(P.odd_sector_circuit(U1 @ U0.conj().T, m))
    full = odd @ np.kron(np.eye(2), P.ppext(U0))
    assert np.allclose(full, np.kron(np.eye(2), P.SectorPair(U0, U1).to_matrix()), atol=1e-9)


def test_odd_sector_rejects_non_unitary():
    with pytest.raises(ValueError):
        P.odd_sector_circuit(2 * np.eye(2), 2)


@pytest.mark.parametrize("z, y", list(itertools.product((1, -1), (1j, -1j))))
def test_protocol_branches(z, y, rng):
    for _ in range(20):
        psi = P.protocol_input(rng, 4)
        out, rec = P.run_protocol(psi, (z, y))
        target = P.quartic_gate(4) @ psi.amplitudes
        assert abs(P.fidelity(target, out.amplitudes) - 1) < 1e-10
        assert abs(rec.probability - 0.25) < 1e-12
        assert rec.correction == P.CORRECTION_LABELS[(y, z)]


def test_protocol_outputs_agree_across_branches(rng):
    psi = P.protocol_input(rng, 4, sector=0)
    outs = [P.run_protocol(psi, b)[0].amplitudes for b in itertools.product((1, -1), (1j, -1j))]
    for a, b in itertools.combinations(outs, 2):
        assert abs(P.fidelity(a, b) - 1) < 1e-10


def test_first_correction_entry():
    c = P._c([2, 5], 4)
    assert np.allclose(P.correction(1j, 1, 4), (np.eye(16) + c) / np.sqrt(2))


def test_protocol_sampling_is_seeded(rng):
    psi = P.protocol_input(rng, 4)
    a = [P.run_protocol(psi, rng=np.random.default_rng(3))[1].label() for _ in range(3)]
    b = [P.run_protocol(psi, rng=np.random.default_rng(3))[1].label() for _ in range(3)]
    assert a == b


def test_protocol_rejects_occupied_ancilla():
    psi = FockVector.basis([0, 0, 1, 0])
    with pytest.raises(ValueError):
        P.run_protocol(psi, (1, 1j))


def test_protocol_rejects_zero_probability_branch(monkeypatch):
    # valid inputs give every branch probability 1/4, so skip the ancilla
    # check and feed an eigenstate of c0c1c3c4 instead
    monkeypatch.setattr(P, "check_ancilla_pair", lambda psi: 0.0)
    vals, vecs = np.linalg.eigh(P.projector4(1, 4))
    psi = FockVector(4, vecs[:, -1])
    with pytest.raises(ValueError, match="zero probability"):
        P.run_protocol(psi, (-1, 1j))


def test_bad_branch_label():
    with pytest.raises(ValueError):
        P.correction(1, 1, 4)


def test_rewrite_empty():
    out = P.rewrite_to_fbasis(Circuit("qubit", 2))
    assert out.kind == "fermionic" and out.width == 3 and len(out) == 0


def test_rewrite_cz_is_single_interaction():
    out = P.rewrite_to_fbasis(Circuit.build("qubit", 2, [("CZ", (0, 1))]))
    assert [a.gate.name for a in out.apps] == ["fb_int"]
    assert out.apps[0].targets == (1, 2)


def _even_block(U, m):
    even = np.flatnonzero(fock.parity_diagonal(m) > 0)
    return U[np.ix_(even, even)]


@pytest.mark.parametrize(
    "ops",
    [
        [("H", (1,))],
        [("H", (0,)), ("CZ", (0, 1)), ("L_pi4", (1,)), ("H", (2,)), ("CZ", (2, 0))],
    ],
)
def test_rewrite_matches_ppext(ops):
    c = Circuit.build("qubit", 3, ops)
    out = P.rewrite_to_fbasis(c)
    assert all(a.gate.name.startswith("fb_") for a in out.apps)
    target = P.ppext(evaluate(c))
    got = evaluate(out)
    assert np.allclose(got, target, atol=1e-10)
    assert np.allclose(_even_block(got, 4), _even_block(target, 4), atol=1e-10)


def test_rewrite_rejects_other_gates():
    with pytest.raises(ValueError):
        P.rewrite_to_fbasis(Circuit.build("qubit", 1, [("X", (0,))]))
    with pytest.raises(ValueError):
        P.rewrite_to_fbasis(Circuit("fermionic", 1))
