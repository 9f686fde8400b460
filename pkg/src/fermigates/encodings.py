"""Qubit <-> fermion simulation schemes.

* ``standard``: modes are qubits; a two-mode gate on ``(j, k)`` is conjugated
  by swap-defect gates ``D`` on the qubits between them (O(m) per gate).
* ``tree``: the partial-sum encoding ``x_j = sum_{s <= j} n_s`` over the
  binary-tree order, with O(log m) extraction circuits.
* ``pair``: qubit ``q`` becomes the mode pair ``(2q, 2q+1)`` holding ``|00>``
  or ``|11>``; every qubit gate turns into one four-mode fermionic gate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import fock
from .circuit import (
    Circuit,
    GateApplication,
    GateDef,
    fswap,
    gate,
    gate_matrix,
    raw_gate,
)

ENCODING_NAMES = ("standard", "tree", "pair")


# -- the partial order and index sets -----------------------------------------


def preceq(j: int, k: int) -> bool:
    """j precedes k: they agree above some bit l0 and k is all ones below it."""
    if j < 0 or k < 0:
        raise ValueError("indices must be non-negative")
    for l0 in range(max(j, k).bit_length() + 1):
        low = (1 << l0) - 1
        if k & low == low and j >> l0 == k >> l0:
            return True
    return False


def _trailing_ones(j: int) -> int:
    return ((j + 1) & ~j).bit_length() - 1


def sum_set(j: int) -> set:
    """S(j) = {s : s <= j}; x_j is the parity of these occupations."""
    t = _trailing_ones(j)
    return set(range(j - (1 << t) + 1, j + 1))


def successors(j: int, m: int) -> set:
    """{k < m : j <= k}: the code bits that contain n_j."""
    out = set()
    for l0 in range(max(m, j + 1).bit_length() + 1):
        k = j | ((1 << l0) - 1)
        if k < m:
            out.add(k)
    return out


def k_set(j: int) -> set:
    """K(j) with n_j = x_j + sum_{s in K(j)} x_s (mod 2)."""
    return {j ^ (1 << l0) for l0 in range(_trailing_ones(j))}


def l_set(j: int) -> set:
    """L(j) with sum_{s<j} n_s = sum_{s in L(j)} x_s (mod 2)."""
    out = set()
    for l0 in range(j.bit_length()):
        if (j >> l0) & 1:
            out.add(((j >> (l0 + 1)) << (l0 + 1)) | ((1 << l0) - 1))
    return out


def tree_encode(n: Sequence[int]) -> list[int]:
    m = len(n)
    if m < 1:
        raise ValueError("need at least one mode")
    return [sum(n[s] for s in sum_set(j)) % 2 for j in range(m)]


def tree_decode(x: Sequence[int]) -> list[int]:
    return [(x[j] + sum(x[s] for s in k_set(j))) % 2 for j in range(len(x))]


def _bits_to_index(bits: Sequence[int]) -> int:
    return sum(b << s for s, b in enumerate(bits))


def _mask(bits) -> int:
    return sum(1 << b for b in bits)


def tree_encode_indices(m: int) -> np.ndarray:
    """Vectorized tree encoding of every basis index: ``out[idx]`` is the code index."""
    idx = np.arange(1 << m, dtype=np.int64)
    out = np.zeros_like(idx)
    for j in range(m):
        out |= (fock.popcount(idx & _mask(sum_set(j))) & 1) << j
    return out


def tree_decode_indices(codes: np.ndarray, m: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    out = np.zeros_like(codes)
    for j in range(m):
        out |= (fock.popcount(codes & _mask(k_set(j) | {j})) & 1) << j
    return out


def tree_embedding(m: int) -> np.ndarray:
    """The basis permutation J of the tree encoding."""
    dim = 1 << m
    J = np.zeros((dim, dim))
    for idx in range(dim):
        J[_bits_to_index(tree_encode(fock.index_occupations(idx, m))), idx] = 1
    return J


def fermionic_extraction(j: int, m: int) -> np.ndarray:
    """Dense ext_f(j): H -> B (x) H with the extracted qubit as the new top bit.

    ``|n> -> (-1)^{n_j sum_{s<j} n_s} |n_j> (x) |n with n_j = 0>``.
    """
    if not 0 <= j < m:
        raise IndexError(f"mode {j} out of range for m={m}")
    dim = 1 << m
    E = np.zeros((2 * dim, dim))
    for idx in range(dim):
        nj = (idx >> j) & 1
        sign = -1 if nj and (idx & ((1 << j) - 1)).bit_count() & 1 else 1
        E[(nj << m) | (idx & ~(1 << j)), idx] = sign
    return E


def tree_extraction_ops(j: int, m: int, anc: int) -> list:
    """Ordered (gate name, targets) list of U' extracting mode j into qubit ``anc``."""
    if not 0 <= j < m:
        raise IndexError(f"mode {j} out of range for m={m}")
    ops = [("CX", (s, anc)) for s in sorted(k_set(j) | {j})]
    ops += [("CX", (anc, k)) for k in sorted(successors(j, m))]
    ops += [("CZ", (anc, s)) for s in sorted(l_set(j))]
    return ops


def tree_extraction_circuit(j: int, m: int) -> Circuit:
    """U' on m code qubits plus one ancilla at index m."""
    return Circuit.build("qubit", m + 1, tree_extraction_ops(j, m, m), ancilla_count=1)


def extraction_gate_counts(m: int) -> np.ndarray:
    """Gate count of the extraction circuit for every j < m, without building it."""
    j = np.arange(m, dtype=np.int64)
    t = fock.popcount(((j + 1) & ~j) - 1)
    succ = np.ones_like(j)
    prev = j
    for l0 in range(1, m.bit_length() + 1):
        cur = j | ((1 << l0) - 1)
        succ += (cur != prev) & (cur < m)
        prev = cur
    return (t + 1) + succ + fock.popcount(j)


def extraction_gate_bound(m: int) -> int:
    return 3 * math.ceil(math.log2(m)) + 3 if m > 1 else 3


# -- reports and transpilation --------------------------------------------------


@dataclass(frozen=True)
class EncodingReport:
    encoding: str
    gates: int
    ancillas: int
    ancilla_qubits: tuple = field(default=())

    def to_dict(self) -> dict:
        return {
            "encoding": self.encoding,
            "gates": self.gates,
            "ancillas": self.ancillas,
            "ancilla_qubits": list(self.ancilla_qubits),
        }


def _oriented_matrix(app: GateApplication) -> tuple[np.ndarray, tuple, str]:
    """Rewrite a two-mode application so its targets ascend."""
    U = gate_matrix(app.gate)
    j, k = app.targets
    if j < k:
        return U, (j, k), app.gate.name
    F = fswap()
    # U[f](k, j) = (F U F^dag)[f](j, k) since F a_0 F^dag = a_1
    return F @ U @ F.conj().T, (k, j), app.gate.name + ".rev"


def _as_qubit_gate(app: GateApplication, U: np.ndarray, name: str) -> GateDef:
    return app.gate if name == app.gate.name else raw_gate(name, U, "fermionic")


def standard_ops(app: GateApplication) -> list[GateApplication]:
    if app.gate.arity == 1:
        return [app]
    if app.gate.arity != 2:
        raise ValueError(
            f"standard encoding handles one- and two-mode gates, got arity {app.gate.arity}"
        )
    U, (j, k), name = _oriented_matrix(app)
    D = gate("D")
    defects = [GateApplication(D, (l, k)) for l in range(k - 1, j, -1)]
    core = GateApplication(_as_qubit_gate(app, U, name), (j, k))
    return defects + [core] + defects[::-1]


def _check_kind(c: Circuit, kind: str) -> None:
    if c.kind != kind:
        raise ValueError(f"expected a {kind} circuit, got {c.kind}")


def transpile_standard(c: Circuit) -> tuple[Circuit, EncodingReport]:
    _check_kind(c, "fermionic")
    apps = [op for app in c.apps for op in standard_ops(app)]
    out = Circuit("qubit", c.width, tuple(apps))
    return out, EncodingReport("standard", len(apps), 0)


def _tree_app_ops(app: GateApplication, m: int) -> list[GateApplication]:
    p = app.gate.arity
    ancillas = [m + r for r in range(p)]
    if p == 1:
        # a one-mode parity-preserving gate is diagonal: copying n_j suffices
        (j,) = app.targets
        load = [GateApplication(gate("CX"), (s, m)) for s in sorted(k_set(j) | {j})]
        return load + [GateApplication(app.gate, (m,))] + load[::-1]
    forward = []
    for t, anc in zip(app.targets, ancillas):
        forward += [GateApplication(gate(g), tg) for g, tg in tree_extraction_ops(t, m, anc)]
    return forward + [GateApplication(app.gate, tuple(ancillas))] + forward[::-1]


def transpile_tree(c: Circuit) -> tuple[Circuit, EncodingReport]:
    _check_kind(c, "fermionic")
    m = c.width
    nanc = max((app.gate.arity for app in c.apps), default=0)
    apps = [op for app in c.apps for op in _tree_app_ops(app, m)]
    out = Circuit("qubit", m + nanc, tuple(apps), ancilla_count=nanc)
    return out, EncodingReport("tree", len(apps), nanc, tuple(range(m, m + nanc)))


def pair_gate_matrix(U: np.ndarray) -> np.ndarray:
    """X' on 2p modes: X on the pair code subspace, identity on its complement."""
    U = np.asarray(U, dtype=complex)
    p = U.shape[0].bit_length() - 1
    dim = 1 << (2 * p)
    code = [pair_index(b, p) for b in range(1 << p)]
    out = np.eye(dim, dtype=complex)
    out[np.ix_(code, code)] = U
    return out


def pair_index(b: int, p: int) -> int:
    """Fock index of the pair codeword for qubit basis index ``b``."""
    return sum(((b >> q) & 1) * (0b11 << (2 * q)) for q in range(p))


def transpile_pair(c: Circuit) -> tuple[Circuit, EncodingReport]:
    _check_kind(c, "qubit")
    apps = []
    for app in c.apps:
        Xp = pair_gate_matrix(gate_matrix(app.gate))
        g = raw_gate(app.gate.name + ".pair", Xp, "fermionic")
        targets = tuple(t for q in app.targets for t in (2 * q, 2 * q + 1))
        apps.append(GateApplication(g, targets))
    out = Circuit("fermionic", 2 * c.width, tuple(apps))
    return out, EncodingReport("pair", len(apps), 0)


def pair_embedding(n: int) -> np.ndarray:
    """J: n qubits -> 2n modes, |b> -> |b_0 b_0 b_1 b_1 ...>."""
    J = np.zeros((1 << (2 * n), 1 << n))
    for b in range(1 << n):
        J[pair_index(b, n), b] = 1
    return J


def pair_decode(state: np.ndarray, n: int, tol: float = 1e-10) -> np.ndarray:
    """Recover the qubit state; amplitude outside the code space is an error."""
    state = np.asarray(state, dtype=complex)
    J = pair_embedding(n)
    logical = J.T @ state
    leak = np.linalg.norm(state - J @ logical)
    if leak > tol:
        raise ValueError(f"state has weight {leak:.3g} outside the pair code space")
    return logical


def transpile(c: Circuit, encoding: str) -> tuple[Circuit, EncodingReport]:
    try:
        fn = {"standard": transpile_standard, "tree": transpile_tree, "pair": transpile_pair}[
            encoding
        ]
    except KeyError:
        raise ValueError(f"unknown encoding {encoding!r}; choose from {ENCODING_NAMES}") from None
    return fn(c)


def embedding(encoding: str, width: int, ancillas: int = 0) -> np.ndarray:
    """The isometry J of an encoding, with ancillas (if any) fixed to |0>."""
    if encoding == "standard":
        J = np.eye(1 << width)
    elif encoding == "tree":
        J = tree_embedding(width)
    elif encoding == "pair":
        J = pair_embedding(width)
    else:
        raise ValueError(f"unknown encoding {encoding!r}")
    if ancillas:
        # ancillas sit at the high end of the index space
        J = np.vstack([J, np.zeros((((1 << ancillas) - 1) * J.shape[0], J.shape[1]))])
    return J
