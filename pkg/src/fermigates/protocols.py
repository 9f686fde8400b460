"""Universality constructions for parity-preserving gates and the adaptive
measurement replacement for the four-Majorana gate."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import fock
from .circuit import (
    Circuit,
    GateApplication,
    PPBASIS,
    controlled,
    gate,
    raw_gate,
)
from .fock import FockVector
from .pauli import majorana_product, to_dense


# -- parity extension -----------------------------------------------------------


def prefix_parity_map(m: int) -> np.ndarray:
    """V: |n_0, n_1, ...> -> |n_0 + ... + n_{m-1}, n_1, ...>; an involution."""
    dim = 1 << m
    idx = np.arange(dim)
    V = np.zeros((dim, dim))
    V[idx ^ (fock.popcount(idx >> 1) & 1), idx] = 1
    return V


def ppext(X: np.ndarray) -> np.ndarray:
    """Parity-preserving extension V^-1 (I (x) X) V; qubit 0 carries the parity."""
    X = np.asarray(X, dtype=complex)
    if X.ndim != 2 or X.shape[0] != X.shape[1] or X.shape[0] & (X.shape[0] - 1):
        raise ValueError(f"expected a square power-of-two matrix, got {X.shape}")
    m = X.shape[0].bit_length()
    V = prefix_parity_map(m)
    return V.T @ np.kron(X, np.eye(2)) @ V


@dataclass(frozen=True, eq=False)
class SectorPair:
    """A parity-preserving operator given by its even and odd blocks.

    Both blocks act on the coordinates ``(n_1, ..., n_{m-1})``; mode 0 is fixed
    by the total parity.  This identifies the sectors through sigma^x on qubit 0.
    """

    U0: np.ndarray
    U1: np.ndarray

    def __post_init__(self):
        if np.shape(self.U0) != np.shape(self.U1):
            raise ValueError("sector blocks must have the same shape")

    @property
    def m(self) -> int:
        return np.shape(self.U0)[0].bit_length()

    def to_matrix(self) -> np.ndarray:
        V = prefix_parity_map(self.m)
        block = np.kron(self.U0, np.diag([1, 0])) + np.kron(self.U1, np.diag([0, 1]))
        return V.T @ block @ V

    @classmethod
    def from_matrix(cls, U: np.ndarray) -> "SectorPair":
        U = np.asarray(U, dtype=complex)
        if not fock.is_parity_preserving(U):
            raise ValueError("operator does not preserve parity")
        m = U.shape[0].bit_length() - 1
        V = prefix_parity_map(m)
        W = V @ U @ V.T
        return cls(W[0::2, 0::2], W[1::2, 1::2])


def swap_first_two(p: int) -> np.ndarray:
    """Permutation exchanging qubits 0 and 1 of a p-qubit register."""
    dim = 1 << p
    P = np.zeros((dim, dim))
    for idx in range(dim):
        b0, b1 = idx & 1, (idx >> 1) & 1
        P[(idx & ~3) | b1 | (b0 << 1), idx] = 1
    return P


def _is_unitary(U: np.ndarray, tol: float = 1e-10) -> bool:
    return np.allclose(U.conj().T @ U, np.eye(U.shape[0]), atol=tol)


def odd_sector_circuit(Y: np.ndarray, m: int) -> Circuit:
    """Qubit circuit on m data qubits plus ancilla m implementing (I, Y) (x) I.

    ``Y`` acts on the odd sector in the ``(n_1, ..., n_{m-1})`` coordinates.
    """
    Y = np.asarray(Y, dtype=complex)
    if m < 2:
        raise ValueError("need at least two qubits")
    if Y.shape != (1 << (m - 1),) * 2:
        raise ValueError(f"Y must act on {m - 1} qubits, got shape {Y.shape}")
    if not _is_unitary(Y):
        raise ValueError("Y is not unitary")
    lp = gate("lppx")
    W = [GateApplication(lp, (k, 0, m)) for k in range(1, m)]
    # ppext(X) = (Y, Y) with X = Y; control on qubit 0, parity on the ancilla
    core = raw_gate("Lambda(ppext(Y))", controlled(ppext(Y)), "fermionic")
    middle = GateApplication(core, (0, m) + tuple(range(1, m)))
    return Circuit("qubit", m + 1, tuple(W + [middle] + W[::-1]), ancilla_count=1)


def rewrite_to_fbasis(c: Circuit) -> Circuit:
    """Map a qubit circuit over {L_pi4, CZ, H} to a fermionic circuit over the
    four fixed-angle gates, realizing ppext of the input on one extra mode.

    Mode 0 carries the parity; input qubit q becomes mode q + 1.
    """
    if c.kind != "qubit":
        raise ValueError("rewrite_to_fbasis takes a qubit circuit")
    phase, hop, pr, intr = (gate(n) for n in ("fb_phase", "fb_hop", "fb_pair", "fb_int"))
    ops: list[GateApplication] = []
    for app in c.apps:
        name = app.gate.name if app.gate.is_library else None
        if name not in PPBASIS:
            raise ValueError(f"gate {app.gate.name!r} outside the basis {PPBASIS}")
        t = tuple(q + 1 for q in app.targets)
        if name == "L_pi4":
            ops.append(GateApplication(phase, t))
        elif name == "CZ":
            ops.append(GateApplication(intr, t))
        else:
            (k,) = t
            # Lambda(-i) = exp(i 3pi/2 n) = fb_phase^6
            lam = [GateApplication(phase, (k,))] * 6
            # ppH[f](0,k) = Lambda(-i)[k] ppG[f](0,k) Lambda(-i)[k], ppG = hop . pair
            core = lam + [GateApplication(pr, (0, k)), GateApplication(hop, (0, k))] + lam
            # qubit application at (0, k) from the fermionic one via swap defects
            defects = [GateApplication(intr, (l, k)) for l in range(k - 1, 0, -1)]
            ops += defects + core + defects[::-1]
    return Circuit("fermionic", c.width + 1, tuple(ops))


# -- adaptive protocol ----------------------------------------------------------


@dataclass(frozen=True)
class BranchRecord:
    z: int
    y: complex
    probability: float
    correction: str

    def label(self) -> str:
        return f"z={self.z:+d},y={'+i' if self.y == 1j else '-i'}"


CORRECTION_LABELS = {
    (1j, 1): "exp(pi/4 c2c5)",
    (-1j, -1): "exp(-pi/4 c2c5)",
    (1j, -1): "i exp(pi/2 c0c1) exp(pi/2 c2c3) exp(pi/4 c2c5)",
    (-1j, 1): "i exp(pi/2 c0c1) exp(pi/2 c2c3) exp(-pi/4 c2c5)",
}


def _c(indices: Sequence[int], m: int) -> np.ndarray:
    return _c_cached(tuple(indices), m)


@lru_cache(maxsize=256)
def _c_cached(indices: tuple, m: int) -> np.ndarray:
    mat = to_dense(majorana_product(indices, m))
    mat.setflags(write=False)
    return mat


def _mexp2(theta: float, a: int, b: int, m: int) -> np.ndarray:
    """exp(theta c_a c_b) = cos(theta) + sin(theta) c_a c_b."""
    return np.cos(theta) * np.eye(1 << m) + np.sin(theta) * _c([a, b], m)


def quartic_gate(m: int) -> np.ndarray:
    """exp(i pi/4 c_0 c_1 c_2 c_3) on m modes."""
    return np.cos(np.pi / 4) * np.eye(1 << m) + 1j * np.sin(np.pi / 4) * _c([0, 1, 2, 3], m)


def correction(y: complex, z: int, m: int) -> np.ndarray:
    if (y, z) not in CORRECTION_LABELS:
        raise ValueError(f"no correction for outcomes y={y}, z={z}")
    sign = 1 if y == 1j else -1
    U = _mexp2(sign * np.pi / 4, 2, 5, m)
    if z * (y / 1j).real < 0:
        U = 1j * _mexp2(np.pi / 2, 0, 1, m) @ _mexp2(np.pi / 2, 2, 3, m) @ U
    return U


def projector4(z: int, m: int) -> np.ndarray:
    return 0.5 * (np.eye(1 << m) + z * _c([0, 1, 3, 4], m))


def projector2(y: complex, m: int) -> np.ndarray:
    # eigenvalue +i of c2c4 <-> (1 - i c2c4)/2
    return 0.5 * (np.eye(1 << m) - 1j * (y / 1j).real * _c([2, 4], m))


def check_ancilla_pair(psi: FockVector, tol: float = 1e-10) -> float:
    """Residual ||(c_4 + i c_5) psi||; the ancilla pair is mode 2."""
    if psi.m < 3:
        raise ValueError("the protocol needs at least three modes")
    op = _c([4], psi.m) + 1j * _c([5], psi.m)
    return float(np.linalg.norm(op @ psi.amplitudes))


def run_protocol(
    psi_in: FockVector,
    branch_choice: tuple | None = None,
    rng: np.random.Generator | None = None,
    tol: float = 1e-10,
) -> tuple[FockVector, BranchRecord]:
    """Apply exp(i pi/4 c0c1c2c3) by measuring c0c1c3c4 then c2c4 and correcting.

    ``branch_choice = (z, y)`` forces the outcomes; otherwise they are sampled
    from ``rng``.
    """
    m = psi_in.m
    resid = check_ancilla_pair(psi_in)
    if resid > tol:
        raise ValueError(f"ancilla pair not in the +i eigenstate of c4c5 (residual {resid:.3g})")
    if rng is None and branch_choice is None:
        rng = np.random.default_rng()
    psi = psi_in.amplitudes / psi_in.norm()

    probs4 = {z: float(np.linalg.norm(projector4(z, m) @ psi) ** 2) for z in (1, -1)}
    if branch_choice is not None:
        z = branch_choice[0]
    else:
        z = 1 if rng.random() < probs4[1] else -1
    if probs4[z] <= tol:
        raise ValueError(f"outcome z={z} has zero probability")
    psi = projector4(z, m) @ psi / np.sqrt(probs4[z])

    probs2 = {y: float(np.linalg.norm(projector2(y, m) @ psi) ** 2) for y in (1j, -1j)}
    if branch_choice is not None:
        y = branch_choice[1]
    else:
        y = 1j if rng.random() < probs2[1j] else -1j
    if probs2[y] <= tol:
        raise ValueError(f"outcome y={y} has zero probability")
    psi = projector2(y, m) @ psi / np.sqrt(probs2[y])

    out = correction(y, z, m) @ psi
    record = BranchRecord(z, y, probs4[z] * probs2[y], CORRECTION_LABELS[(y, z)])
    return FockVector(m, out), record


def protocol_input(rng: np.random.Generator, m: int = 4, sector: int | None = None) -> FockVector:
    """Random normalized state with the ancilla mode 2 empty."""
    amps = rng.normal(size=1 << m) + 1j * rng.normal(size=1 << m)
    idx = np.arange(1 << m)
    amps[(idx >> 2) & 1 == 1] = 0
    if sector is not None:
        amps[(fock.popcount(idx) & 1) != sector] = 0
    return FockVector(m, amps).normalized()


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    return float(abs(np.vdot(a, b)))
