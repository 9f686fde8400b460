"""Circuit IR for fermionic, Majorana and qubit circuits, plus the gate library.

Gate matrices live on ``p`` local modes/qubits with local index bit ``r``
belonging to target ``r``.  For fermionic gates the matrix is the Fock-space
matrix of the gate's ladder expansion on modes ``0..p-1``; applying it to
modes ``j_0..j_{p-1}`` substitutes ``a_{j_r}`` for ``a_r``.  Majorana gates on
``p`` Majorana targets carry a matrix on ``ceil(p/2)`` local modes and are
applied by substituting ``c_{j_r}`` for ``c_r`` in their Majorana expansion.

Circuits are read right to left as operators: ``apps[0]`` acts first.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import expm

from . import fock
from .fock import LadderPolynomial as LP
from .pauli import majorana, majorana_product, to_dense

KINDS = ("fermionic", "majorana", "qubit")
MAX_EVAL_WIDTH = 12


def _a(j):
    return LP.ladder(j)


def _ad(j):
    return LP.ladder(j, dagger=True)


def _ladder_dense(p: LP, modes: int) -> np.ndarray:
    return fock.polynomial_to_dense(p, modes)


def _majorana_dense(indices: Sequence[int], modes: int) -> np.ndarray:
    return to_dense(majorana_product(indices, modes))


# -- library -----------------------------------------------------------------


def phase_n(beta: float) -> np.ndarray:
    """exp(i beta a_0^dag a_0)."""
    return np.diag([1.0, np.exp(1j * beta)])


def int_nn(beta: float) -> np.ndarray:
    """exp(i beta n_0 n_1)."""
    return np.diag([1.0, 1.0, 1.0, np.exp(1j * beta)])


def hop(gamma: complex) -> np.ndarray:
    """exp(i (gamma a_0^dag a_1 + gamma^* a_1^dag a_0))."""
    gen = gamma * (_ad(0) * _a(1)) + np.conj(gamma) * (_ad(1) * _a(0))
    return expm(1j * _ladder_dense(gen, 2))


def pair(gamma: complex) -> np.ndarray:
    """exp(i (gamma a_1 a_0 + gamma^* a_0^dag a_1^dag))."""
    gen = gamma * (_a(1) * _a(0)) + np.conj(gamma) * (_ad(0) * _ad(1))
    return expm(1j * _ladder_dense(gen, 2))


def fswap() -> np.ndarray:
    """Fermionic swap I - n_0 - n_1 + a_1^dag a_0 + a_0^dag a_1."""
    p = LP.identity() - LP.number(0) - LP.number(1) + _ad(1) * _a(0) + _ad(0) * _a(1)
    return _ladder_dense(p, 2).real


def ppH() -> np.ndarray:
    """|a,b> -> 2^{-1/2} sum_c (-1)^{bc} |a+b+c, c>."""
    U = np.zeros((4, 4))
    for a, b, c in itertools.product((0, 1), repeat=3):
        U[((a + b + c) % 2) | (c << 1), a | (b << 1)] += (-1) ** (b * c)
    return U / np.sqrt(2)


def ppG() -> np.ndarray:
    """ppext(G / sqrt 2) = exp(-i pi/4 (a_0 - a_0^dag)(a_1 + a_1^dag))."""
    gen = (_a(0) - _ad(0)) * (_a(1) + _ad(1))
    return expm(-1j * np.pi / 4 * _ladder_dense(gen, 2))


def controlled(U: np.ndarray) -> np.ndarray:
    """Lambda(U) with the control on local qubit 0 and U on the remaining ones."""
    U = np.asarray(U, dtype=complex)
    d = U.shape[0]
    out = np.zeros((2 * d, 2 * d), dtype=complex)
    # index = control | (rest << 1)
    out[0::2, 0::2] = np.eye(d)
    out[1::2, 1::2] = U
    return out


def lppx() -> np.ndarray:
    """Lambda(ppext(sigma^x)): |a,b,c> -> |a, b+a, c+a> (control, parity, target)."""
    U = np.zeros((8, 8))
    for a, b, c in itertools.product((0, 1), repeat=3):
        U[a | ((b ^ a) << 1) | ((c ^ a) << 2), a | (b << 1) | (c << 2)] = 1
    return U


def m_rot(theta: float) -> np.ndarray:
    """exp(theta c_0 c_1) on one local mode; (c_0 c_1)^2 = -1."""
    q = _majorana_dense([0, 1], 1)
    return np.cos(theta) * np.eye(2) + np.sin(theta) * q


def m_quartic(theta: float) -> np.ndarray:
    """exp(i theta c_0 c_1 c_2 c_3) on two local modes; the monomial squares to +1."""
    q = _majorana_dense([0, 1, 2, 3], 2)
    return np.cos(theta) * np.eye(4) + 1j * np.sin(theta) * q


_H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
_CX = np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=float)
_SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=float)


@dataclass(frozen=True)
class LibraryEntry:
    arity: int
    kind: str
    nparams: int
    build: Callable[..., np.ndarray]


LIBRARY: dict[str, LibraryEntry] = {
    "phase_n": LibraryEntry(1, "fermionic", 1, phase_n),
    "int_nn": LibraryEntry(2, "fermionic", 1, int_nn),
    "hop": LibraryEntry(2, "fermionic", 1, hop),
    "pair": LibraryEntry(2, "fermionic", 1, pair),
    "fb_phase": LibraryEntry(1, "fermionic", 0, lambda: phase_n(np.pi / 4)),
    "fb_hop": LibraryEntry(2, "fermionic", 0, lambda: hop(np.pi / 4)),
    "fb_pair": LibraryEntry(2, "fermionic", 0, lambda: pair(np.pi / 4)),
    "fb_int": LibraryEntry(2, "fermionic", 0, lambda: int_nn(np.pi)),
    "D": LibraryEntry(2, "fermionic", 0, lambda: int_nn(np.pi).real),
    "fswap": LibraryEntry(2, "fermionic", 0, fswap),
    "ppH": LibraryEntry(2, "fermionic", 0, ppH),
    "G": LibraryEntry(2, "fermionic", 0, ppG),
    "lppx": LibraryEntry(3, "fermionic", 0, lppx),
    "L_pi4": LibraryEntry(1, "fermionic", 0, lambda: phase_n(np.pi / 4)),
    "CZ": LibraryEntry(2, "fermionic", 0, lambda: int_nn(np.pi).real),
    "H": LibraryEntry(1, "qubit", 0, lambda: _H),
    "X": LibraryEntry(1, "qubit", 0, lambda: np.array([[0, 1], [1, 0]], dtype=float)),
    "Y": LibraryEntry(1, "qubit", 0, lambda: np.array([[0, -1j], [1j, 0]])),
    "Z": LibraryEntry(1, "qubit", 0, lambda: np.diag([1.0, -1.0])),
    "S": LibraryEntry(1, "qubit", 0, lambda: np.diag([1, 1j])),
    "CX": LibraryEntry(2, "qubit", 0, lambda: _CX),
    "SWAP": LibraryEntry(2, "qubit", 0, lambda: _SWAP),
    "m_rot": LibraryEntry(2, "majorana", 1, m_rot),
    "m_quartic": LibraryEntry(4, "majorana", 1, m_quartic),
    "mb_rot": LibraryEntry(2, "majorana", 0, lambda: m_rot(np.pi / 8)),
    "mb_quartic": LibraryEntry(4, "majorana", 0, lambda: m_quartic(np.pi / 4)),
}

FBASIS = ("fb_phase", "fb_hop", "fb_pair", "fb_int")
MBASIS = ("mb_rot", "mb_quartic")
PPBASIS = ("L_pi4", "CZ", "H")


@lru_cache(maxsize=None)
def _library_matrix(name: str, params: tuple) -> np.ndarray:
    entry = LIBRARY[name]
    mat = np.array(entry.build(*params), dtype=complex)
    mat.setflags(write=False)
    return mat


@dataclass(frozen=True)
class GateDef:
    name: str
    arity: int
    kind: str
    params: tuple = ()
    matrix: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.matrix is not None:
            mat = np.array(self.matrix, dtype=complex)
            dim = 1 << _local_modes(self.arity, self.kind)
            if mat.shape != (dim, dim):
                raise ValueError(
                    f"gate {self.name!r}: matrix shape {mat.shape}, expected {(dim, dim)}"
                )
            mat.setflags(write=False)
            object.__setattr__(self, "matrix", mat)

    @property
    def is_library(self) -> bool:
        return self.matrix is None

    def unitary(self) -> np.ndarray:
        return gate_matrix(self)


def _local_modes(arity: int, kind: str) -> int:
    return (arity + 1) // 2 if kind == "majorana" else arity


def gate(name: str, *params) -> GateDef:
    """Look up a library gate."""
    if name not in LIBRARY:
        raise KeyError(f"unknown gate {name!r}")
    entry = LIBRARY[name]
    if len(params) != entry.nparams:
        raise ValueError(f"gate {name!r} takes {entry.nparams} parameters, got {len(params)}")
    return GateDef(name, entry.arity, entry.kind, tuple(params))


def raw_gate(name: str, matrix: np.ndarray, kind: str = "qubit", arity: int | None = None) -> GateDef:
    matrix = np.asarray(matrix, dtype=complex)
    if arity is None:
        arity = matrix.shape[0].bit_length() - 1
        if kind == "majorana":
            arity *= 2
    return GateDef(name, arity, kind, (), matrix)


def gate_matrix(g: GateDef) -> np.ndarray:
    if g.matrix is not None:
        return g.matrix
    if g.name not in LIBRARY:
        raise KeyError(f"unknown gate {g.name!r}")
    return _library_matrix(g.name, tuple(g.params))


def validate_parity_preserving(U: np.ndarray) -> bool:
    return fock.is_parity_preserving(U)


@dataclass(frozen=True)
class GateApplication:
    gate: GateDef
    targets: tuple

    def __post_init__(self):
        targets = tuple(int(t) for t in self.targets)
        if len(set(targets)) != len(targets):
            raise ValueError(f"duplicate targets {targets}")
        if len(targets) != self.gate.arity:
            raise ValueError(
                f"gate {self.gate.name!r} has arity {self.gate.arity}, got {len(targets)} targets"
            )
        object.__setattr__(self, "targets", targets)


@dataclass(frozen=True)
class Circuit:
    kind: str
    width: int
    apps: tuple = ()
    ancilla_count: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown circuit kind {self.kind!r}")
        object.__setattr__(self, "apps", tuple(self.apps))
        limit = 2 * self.width if self.kind == "majorana" else self.width
        for app in self.apps:
            for t in app.targets:
                if not 0 <= t < limit:
                    raise IndexError(
                        f"target {t} of {app.gate.name!r} outside width {self.width} ({self.kind})"
                    )
            if self.kind == "majorana" and app.gate.kind != "majorana":
                raise ValueError(f"majorana circuits take majorana gates, got {app.gate.name!r}")
            if self.kind != "majorana" and app.gate.kind == "majorana":
                raise ValueError(f"majorana gate {app.gate.name!r} in a {self.kind} circuit")

    @classmethod
    def build(cls, kind: str, width: int, ops: Sequence, ancilla_count: int = 0) -> "Circuit":
        """``ops`` holds ``(GateDef | name, targets)`` pairs."""
        apps = []
        for g, targets in ops:
            if isinstance(g, str):
                g = gate(g)
            apps.append(GateApplication(g, tuple(targets)))
        return cls(kind, width, tuple(apps), ancilla_count)

    def __len__(self) -> int:
        return len(self.apps)

    def inverse(self) -> "Circuit":
        apps = []
        for app in reversed(self.apps):
            U = gate_matrix(app.gate)
            if app.gate.is_library and np.allclose(U @ U, np.eye(U.shape[0]), atol=1e-14):
                apps.append(app)
            else:
                inv = raw_gate(app.gate.name + "^-1", U.conj().T, app.gate.kind, app.gate.arity)
                apps.append(GateApplication(inv, app.targets))
        return Circuit(self.kind, self.width, tuple(apps), self.ancilla_count)

    def support(self) -> set:
        return {t for app in self.apps for t in app.targets}


# -- evaluation ---------------------------------------------------------------


def majorana_expansion(U: np.ndarray, p: int) -> dict:
    """Coefficients of ``U`` in ordered Majorana monomials ``c_S`` on ``p`` Majoranas.

    ``U`` lives on ``ceil(p/2)`` modes.  Raises if ``U`` needs Majoranas ``>= p``.
    """
    modes = (p + 1) // 2
    dim = 1 << modes
    coeffs = {}
    for r in range(2 * modes + 1):
        for S in itertools.combinations(range(2 * modes), r):
            M = _majorana_dense(S, modes) if S else np.eye(dim)
            c = np.trace(M.conj().T @ U) / dim
            if abs(c) > 1e-12:
                if S and max(S) >= p:
                    raise ValueError(f"gate uses Majorana index {max(S)} beyond its arity {p}")
                coeffs[S] = c
    return coeffs


def majorana_application_matrix(U: np.ndarray, targets: Sequence[int], m: int) -> np.ndarray:
    """Dense ``X[m](targets)`` on ``m`` modes: substitute c_{targets[r]} for c_r."""
    dim = 1 << m
    out = np.zeros((dim, dim), dtype=complex)
    for S, c in majorana_expansion(U, len(targets)).items():
        if S:
            out += c * to_dense(majorana_product([targets[s] for s in S], m))
        else:
            out += c * np.eye(dim)
    return out


def _apply_app(state: np.ndarray, app: GateApplication, kind: str, width: int) -> np.ndarray:
    U = gate_matrix(app.gate)
    if kind == "majorana":
        return majorana_application_matrix(U, app.targets, width) @ state
    if kind == "fermionic" and not fock.is_parity_preserving(U):
        raise ValueError(f"gate {app.gate.name!r} is not parity preserving")
    return fock.apply_local(state, width, U, app.targets, fermionic=(kind == "fermionic"))


def evaluate(c: Circuit) -> np.ndarray:
    """Dense unitary of the whole circuit (phase exact)."""
    if c.width > MAX_EVAL_WIDTH:
        raise ValueError(f"dense evaluation capped at width {MAX_EVAL_WIDTH}, got {c.width}")
    state = np.eye(1 << c.width, dtype=complex)
    for app in c.apps:
        state = _apply_app(state, app, c.kind, c.width)
    return state


def run(c: Circuit, state: np.ndarray) -> np.ndarray:
    """Apply the circuit to a state vector (or a stack of column vectors)."""
    state = np.asarray(state, dtype=complex)
    for app in c.apps:
        state = _apply_app(state, app, c.kind, c.width)
    return state


def rotation_action(c: Circuit, tol: float = 1e-9) -> np.ndarray:
    """Matrix beta with U c_j U^dag = sum_k beta_jk c_k for a Majorana circuit."""
    if c.kind != "majorana":
        raise ValueError("rotation_action needs a majorana circuit")
    U = evaluate(c)
    n = 2 * c.width
    dim = 1 << c.width
    cs = [to_dense(majorana(j, c.width)) for j in range(n)]
    beta = np.zeros((n, n))
    for j in range(n):
        conj = U @ cs[j] @ U.conj().T
        row = np.array([np.trace(cs[k] @ conj) / dim for k in range(n)])
        if np.max(np.abs(row.imag)) > tol:
            raise ValueError(f"conjugated c_{j} has complex coefficients")
        beta[j] = row.real
        resid = conj - sum(beta[j, k] * cs[k] for k in range(n))
        if np.linalg.norm(resid) > tol:
            raise ValueError(
                f"U c_{j} U^dag leaves the linear span of Majoranas; circuit is not quadratic"
            )
    return beta


# -- JSON ----------------------------------------------------------------------


def _param_to_json(p):
    if isinstance(p, complex) or np.iscomplexobj(p):
        return [float(np.real(p)), float(np.imag(p))]
    return float(p)


def _param_from_json(p):
    if isinstance(p, list):
        if len(p) != 2:
            raise ValueError(f"complex parameters are [re, im] pairs, got {p}")
        return complex(p[0], p[1])
    if isinstance(p, (int, float)) and not isinstance(p, bool):
        return float(p)
    raise ValueError(f"bad gate parameter {p!r}")


def matrix_to_json(U: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(U)]


def matrix_from_json(data) -> np.ndarray:
    arr = np.array(data, dtype=float)
    if arr.ndim == 3 and arr.shape[-1] == 2:
        return arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim == 2 and arr.shape[-1] == 2:
        d = int(round(np.sqrt(arr.shape[0])))
        if d * d != arr.shape[0]:
            raise ValueError("flat matrix length is not a square")
        return (arr[:, 0] + 1j * arr[:, 1]).reshape(d, d)
    raise ValueError("matrix must be rows of [re, im] pairs or a flat list of pairs")


def circuit_to_dict(c: Circuit) -> dict:
    gates = []
    for app in c.apps:
        entry = {
            "name": app.gate.name,
            "params": [_param_to_json(p) for p in app.gate.params],
            "targets": list(app.targets),
        }
        if app.gate.matrix is not None:
            entry["matrix"] = matrix_to_json(app.gate.matrix)
        gates.append(entry)
    out = {"kind": c.kind, "width": c.width, "gates": gates}
    if c.ancilla_count:
        out["ancillas"] = c.ancilla_count
    return out


def circuit_from_dict(data: dict) -> Circuit:
    """Parse the circuit JSON schema; raises ``ValueError``/``KeyError`` on violations."""
    if not isinstance(data, dict):
        raise ValueError("circuit JSON must be an object")
    kind = data["kind"]
    width = data["width"]
    if kind not in KINDS:
        raise ValueError(f"unknown circuit kind {kind!r}")
    if not isinstance(width, int) or width < 1:
        raise ValueError(f"width must be a positive integer, got {width!r}")
    apps = []
    for entry in data.get("gates", []):
        name = entry["name"]
        targets = tuple(entry["targets"])
        params = tuple(_param_from_json(p) for p in entry.get("params", []))
        if "matrix" in entry:
            gkind = "majorana" if kind == "majorana" else ("fermionic" if kind == "fermionic" else "qubit")
            g = GateDef(name, len(targets), gkind, params, matrix_from_json(entry["matrix"]))
        else:
            g = gate(name, *params)
        apps.append(GateApplication(g, targets))
    return Circuit(kind, width, tuple(apps), int(data.get("ancillas", 0)))


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)
