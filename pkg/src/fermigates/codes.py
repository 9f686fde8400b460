"""One-qubit codes defined by pairing Majorana operators.

A permutation ``tau`` of the ``2m`` Majoranas of ``m`` qubits pairs
``c_{tau(2k)}`` with ``c_{tau(2k+1)}``.  Fixing the occupation of every pair
except the first gives ``m - 1`` stabilizers ``-i c_{tau(2k)} c_{tau(2k+1)}``
and leaves one logical qubit with logical operators ``c_{tau(0)}`` and
``c_{tau(1)}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .pauli import PauliString, commutes, gf2_basis, gf2_reduce, majorana_product

MAX_DISTANCE_QUBITS = 16
MAX_DISTANCE_WEIGHT = 5


@dataclass(frozen=True)
class MajoranaCode:
    m: int
    stabilizers: tuple
    logical_x: PauliString
    logical_y: PauliString
    labels: tuple = ()

    def check(self) -> list[str]:
        """Structural invariants; returns a list of violations (empty if valid)."""
        out = []
        ident = PauliString.identity(self.m)
        for i, s in enumerate(self.stabilizers):
            if not s.is_hermitian or s * s != ident:
                out.append(f"stabilizer {i} is not a Hermitian involution")
        for a, b in itertools.combinations(self.stabilizers, 2):
            if not a.commutes(b):
                out.append(f"stabilizers {a} and {b} anticommute")
        if len(gf2_basis(s.symplectic() for s in self.stabilizers)) != len(self.stabilizers):
            out.append("stabilizers are not independent")
        if len(self.stabilizers) != self.m - 1:
            out.append(f"expected {self.m - 1} stabilizers, got {len(self.stabilizers)}")
        for name, L in (("x", self.logical_x), ("y", self.logical_y)):
            if not all(L.commutes(s) for s in self.stabilizers):
                out.append(f"logical {name} does not commute with the stabilizers")
        if self.logical_x.commutes(self.logical_y):
            out.append("logical operators commute")
        return out


@dataclass(frozen=True)
class DistanceReport:
    distance: int
    witness: PauliString
    checked: int


def _check_permutation(tau: Sequence[int], m: int) -> list[int]:
    tau = [int(t) for t in tau]
    if sorted(tau) != list(range(2 * m)):
        raise ValueError(f"tau must be a permutation of 0..{2 * m - 1}")
    return tau


def pair_operator(a: int, b: int, m: int) -> PauliString:
    """-i c_a c_b as a Pauli string (Hermitian for a != b)."""
    return majorana_product([a, b], m).scaled(3)


def permutation_code(tau: Sequence[int], m: int) -> MajoranaCode:
    if m < 1:
        raise ValueError("need at least one qubit")
    tau = _check_permutation(tau, m)
    stabs = tuple(pair_operator(tau[2 * k], tau[2 * k + 1], m) for k in range(1, m))
    labels = tuple(f"X_{k}" for k in range(1, m))
    return MajoranaCode(
        m, stabs, majorana_product([tau[0]], m), majorana_product([tau[1]], m), labels
    )


def shor_like_pairs(l: int) -> tuple[list, list]:
    """Majorana index pairs and labels of the Z_k and Y_{k,j} stabilizers."""
    if l < 2:
        raise ValueError("the family starts at l = 2")
    pairs, labels = [], []
    for k in range(l - 1):
        pairs.append((2 * k * l + 1, 2 * (k + 2) * l - 2))
        labels.append(f"Z_{k}")
    for k in range(l):
        for j in range(l - 1):
            pairs.append((2 * k * l + 2 * j + 3, 2 * k * l + 2 * j))
            labels.append(f"Y_{k},{j}")
    return pairs, labels


def shor_like_tau(l: int) -> list[int]:
    """The permutation realizing the family: unused Majoranas first, in order."""
    pairs, _ = shor_like_pairs(l)
    used = {i for p in pairs for i in p}
    free = [i for i in range(2 * l * l) if i not in used]
    return free + [i for p in pairs for i in p]


def shor_like_code(l: int) -> MajoranaCode:
    m = l * l
    pairs, labels = shor_like_pairs(l)
    tau = shor_like_tau(l)
    code = permutation_code(tau, m)
    return MajoranaCode(m, code.stabilizers, code.logical_x, code.logical_y, tuple(labels))


def pauli_form_z(k: int, l: int) -> PauliString:
    """X on kl and (k+2)l-1 with Z strictly between."""
    m = l * l
    letters = {k * l: "X", (k + 2) * l - 1: "X"}
    letters.update({s: "Z" for s in range(k * l + 1, (k + 2) * l - 1)})
    return PauliString.from_letters(m, letters)


def pauli_form_y(k: int, j: int, l: int) -> PauliString:
    return PauliString.from_letters(l * l, {k * l + j: "Y", k * l + j + 1: "Y"})


def render_grid(p: PauliString, l: int) -> str:
    """Lay the letters of an l*l-qubit string out row by row, e.g. ``X Z Z``."""
    if p.n != l * l:
        raise ValueError(f"string has {p.n} qubits, expected {l * l}")
    letters = p.letters()
    rows = [" ".join(letters[r * l : (r + 1) * l]) for r in range(l)]
    return "\n".join(rows)


def cyclic_relabel(p: PauliString) -> PauliString:
    """Apply X -> Y -> Z -> X letterwise (sign kept)."""
    nxt = {"X": "Y", "Y": "Z", "Z": "X"}
    letters = {q: nxt[ch] for q, ch in enumerate(p.letters()) if ch != "I"}
    return PauliString.from_letters(p.n, letters, p.sign)


# -- distance -----------------------------------------------------------------


def _syndrome(p: PauliString, stabs: Sequence[PauliString]) -> int:
    return sum((not commutes(p, s)) << i for i, s in enumerate(stabs))


def is_nontrivial_logical(p: PauliString, stabs: Sequence[PauliString]) -> bool:
    """Commutes with every stabilizer and lies outside their span (mod phase)."""
    if not all(commutes(p, s) for s in stabs):
        return False
    basis = gf2_basis(s.symplectic() for s in stabs)
    return gf2_reduce(p.symplectic(), basis) != 0


def code_distance(code: MajoranaCode, max_weight: int = 4) -> DistanceReport:
    """Least weight of a nontrivial logical Pauli, by weight-ordered enumeration.

    Candidates are ordered by weight, then support (lexicographic), then
    letters with X < Y < Z, so the witness is deterministic.
    """
    m = code.m
    if m > MAX_DISTANCE_QUBITS:
        raise ValueError(f"distance search capped at {MAX_DISTANCE_QUBITS} qubits")
    if not 1 <= max_weight <= MAX_DISTANCE_WEIGHT:
        raise ValueError(f"max_weight must lie in 1..{MAX_DISTANCE_WEIGHT}")
    stabs = list(code.stabilizers)
    basis = gf2_basis(s.symplectic() for s in stabs)
    single = {
        (q, ch): PauliString.from_letters(m, {q: ch}) for q in range(m) for ch in "XYZ"
    }
    syn = {key: _syndrome(p, stabs) for key, p in single.items()}
    checked = 0
    for w in range(1, max_weight + 1):
        for support in itertools.combinations(range(m), w):
            for letters in itertools.product("XYZ", repeat=w):
                checked += 1
                s = 0
                for q, ch in zip(support, letters):
                    s ^= syn[(q, ch)]
                if s:
                    continue
                p = PauliString.from_letters(m, dict(zip(support, letters)))
                if gf2_reduce(p.symplectic(), basis):
                    return DistanceReport(w, p, checked)
    raise RuntimeError(f"no nontrivial logical operator up to weight {max_weight}")
