"""Graph encoding with one qubit per edge.

Vertices carry fermionic modes and edges carry qubits.  The even sector of the
modes is identified with the common +1 eigenspace ``L`` of the cycle
stabilizers, and the operators ``B_k = -i c_{2k} c_{2k+1}`` and
``A_jk = -i c_{2j} c_{2k}`` are represented by Pauli strings supported on edges
incident to ``k`` (resp. ``j`` and ``k``).

Edge qubits are numbered by their position in ``GraphSpec.edges``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx
import numpy as np

from .fock import parity_diagonal
from .circuit import Circuit, GateApplication, gate, raw_gate, run
from .pauli import (
    MAX_DENSE_QUBITS,
    PauliString,
    gf2_basis,
    majorana_product,
    multiply,
    product,
    to_dense,
)

MAX_TRACE_MODES = 6
MAX_TRACE_QUBITS = 12


class InconsistentStabilizers(RuntimeError):
    """The generated stabilizer set does not define a valid code."""


# -- graph --------------------------------------------------------------------


@dataclass(frozen=True)
class GraphSpec:
    """A connected graph with an edge orientation and a local edge order.

    ``edges`` holds pairs ``(j, k)`` with ``j < k``; ``orientation[e]`` is
    ``epsilon_jk`` for edge ``e = (j, k)``.  ``local_order[v]`` lists the
    neighbors of ``v`` in the chosen order of its incident edges.
    """

    m: int
    edges: tuple
    orientation: tuple
    local_order: tuple

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("graph needs at least one vertex")
        seen = set()
        for j, k in self.edges:
            if j == k:
                raise ValueError(f"self-loop at vertex {j}")
            if not (0 <= j < k < self.m):
                raise ValueError(f"edge {(j, k)} not normalized or out of range")
            if (j, k) in seen:
                raise ValueError(f"duplicate edge {(j, k)}")
            seen.add((j, k))
        if len(self.orientation) != len(self.edges) or any(
            e not in (1, -1) for e in self.orientation
        ):
            raise ValueError("orientation must give +1 or -1 for every edge")
        if len(self.local_order) != self.m:
            raise ValueError("local_order needs one entry per vertex")
        for v in range(self.m):
            nbrs = {k if j == v else j for j, k in self.edges if v in (j, k)}
            if sorted(self.local_order[v]) != sorted(nbrs) or len(set(self.local_order[v])) != len(
                nbrs
            ):
                raise ValueError(f"local order at vertex {v} must list each neighbor once")
        g = nx.Graph()
        g.add_nodes_from(range(self.m))
        g.add_edges_from(self.edges)
        if not nx.is_connected(g):
            raise ValueError("graph is not connected")

    @classmethod
    def from_edges(
        cls,
        m: int,
        edges: Sequence,
        orientation: Sequence[int] | None = None,
        local_order: Sequence[Sequence[int]] | None = None,
    ) -> "GraphSpec":
        """Normalize edges to ``j < k``.  ``orientation[e]`` refers to the pair
        as given; defaults are epsilon = +1 from the smaller vertex and local
        orders sorted by neighbor."""
        norm, eps = [], []
        for e, (j, k) in enumerate(edges):
            j, k = int(j), int(k)
            if j == k:
                raise ValueError(f"self-loop at vertex {j}")
            s = 1 if orientation is None else int(orientation[e])
            if j > k:
                j, k, s = k, j, -s
            norm.append((j, k))
            eps.append(s)
        if local_order is None:
            local_order = [
                sorted(k if j == v else j for j, k in norm if v in (j, k)) for v in range(m)
            ]
        return cls(int(m), tuple(norm), tuple(eps), tuple(tuple(o) for o in local_order))

    @property
    def u(self) -> int:
        return len(self.edges)

    @property
    def max_degree(self) -> int:
        return max((len(o) for o in self.local_order), default=0)

    def edge_index(self, j: int, k: int) -> int:
        try:
            return self.edges.index((min(j, k), max(j, k)))
        except ValueError:
            raise KeyError(f"{(j, k)} is not an edge") from None

    def epsilon(self, j: int, k: int) -> int:
        e = self.orientation[self.edge_index(j, k)]
        return e if j < k else -e

    def incident(self, v: int) -> list[int]:
        """Edge qubits at ``v`` in its local order."""
        return [self.edge_index(v, w) for w in self.local_order[v]]

    def to_dict(self) -> dict:
        return {
            "vertices": self.m,
            "edges": [list(e) for e in self.edges],
            "orientation": list(self.orientation),
            "local_order": [list(o) for o in self.local_order],
        }


def graph_from_dict(data: dict) -> GraphSpec:
    if not isinstance(data, dict) or "vertices" not in data or "edges" not in data:
        raise ValueError("graph JSON needs 'vertices' and 'edges'")
    edges = data["edges"]
    if not all(isinstance(e, (list, tuple)) and len(e) == 2 for e in edges):
        raise ValueError("each edge must be a pair of vertices")
    return GraphSpec.from_edges(
        data["vertices"], edges, data.get("orientation"), data.get("local_order")
    )


def load_graph(path: str) -> GraphSpec:
    with open(path) as fh:
        return graph_from_dict(json.load(fh))


# named test graphs

def path_graph(m: int) -> GraphSpec:
    return GraphSpec.from_edges(m, [(i, i + 1) for i in range(m - 1)])


def cycle_graph(m: int) -> GraphSpec:
    return GraphSpec.from_edges(m, [(i, (i + 1) % m) for i in range(m)])


def complete_graph(m: int) -> GraphSpec:
    return GraphSpec.from_edges(m, list(itertools.combinations(range(m), 2)))


def grid_graph(rows: int, cols: int) -> GraphSpec:
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return GraphSpec.from_edges(rows * cols, edges)


def star_graph(d: int) -> GraphSpec:
    return GraphSpec.from_edges(d + 1, [(0, k) for k in range(1, d + 1)])


def standard_graphs() -> dict:
    return {
        "single_edge": path_graph(2),
        "path4": path_graph(4),
        "triangle": cycle_graph(3),
        "cycle4": cycle_graph(4),
        "cycle6": cycle_graph(6),
        "k4": complete_graph(4),
        "grid2x3": grid_graph(2, 3),
    }


# -- edge operators -------------------------------------------------------------


@dataclass(frozen=True)
class EdgeOperatorSet:
    graph: GraphSpec
    Btilde: tuple
    Atilde: dict = field(repr=False)
    stabilizers: tuple = ()

    @property
    def u(self) -> int:
        return self.graph.u

    def A(self, j: int, k: int) -> PauliString:
        return self.Atilde[(j, k)]


def b_tilde(g: GraphSpec, k: int) -> PauliString:
    z = 0
    for e in g.incident(k):
        z |= 1 << e
    return PauliString(g.u, 0, 0, z)


def a_tilde(g: GraphSpec, j: int, k: int) -> PauliString:
    """epsilon_jk X_jk times Z on edges before (k,j) at j and before (j,k) at k."""
    e = g.edge_index(j, k)
    z = 0
    for v in (j, k):
        order = g.incident(v)
        for q in order[: order.index(e)]:
            z |= 1 << q
    return PauliString(g.u, 0 if g.epsilon(j, k) == 1 else 2, 1 << e, z)


def fundamental_cycles(g: GraphSpec) -> list[list[int]]:
    """Vertex cycles closing each non-tree edge of a BFS tree rooted at 0."""
    graph = nx.Graph()
    graph.add_nodes_from(range(g.m))
    graph.add_edges_from(g.edges)
    parent = {0: None}
    depth = {0: 0}
    tree = set()
    for a, b in nx.bfs_edges(graph, 0, sort_neighbors=sorted):
        parent[b] = a
        depth[b] = depth[a] + 1
        tree.add((min(a, b), max(a, b)))
    cycles = []
    for j, k in g.edges:
        if (j, k) in tree:
            continue
        # path j -> lca and k -> lca, then close through the edge (k, j)
        up_j, up_k = [j], [k]
        a, b = j, k
        while a != b:
            if depth[a] >= depth[b]:
                a = parent[a]
                up_j.append(a)
            else:
                b = parent[b]
                up_k.append(b)
        cycles.append(up_j + up_k[-2::-1])
    return cycles


def cycle_operator(g: GraphSpec, cycle: Sequence[int]) -> PauliString:
    """C = i^p A_{j0 j1} ... A_{j_{p-1} j0} for the closed path ``cycle``."""
    p = len(cycle)
    ops = [a_tilde(g, cycle[r], cycle[(r + 1) % p]) for r in range(p)]
    return product(ops, g.u).scaled(p)


def stabilizer_generators(g: GraphSpec) -> list[PauliString]:
    return [cycle_operator(g, c) for c in fundamental_cycles(g)]


def build_edge_operators(g: GraphSpec) -> EdgeOperatorSet:
    B = tuple(b_tilde(g, k) for k in range(g.m))
    A = {}
    for j, k in g.edges:
        A[(j, k)] = a_tilde(g, j, k)
        A[(k, j)] = a_tilde(g, k, j)
    ops = EdgeOperatorSet(g, B, A, tuple(stabilizer_generators(g)))
    problems = relation_violations(ops)
    if problems:
        raise InconsistentStabilizers("; ".join(problems[:5]))
    return ops


def _shared_endpoints(e1, e2) -> int:
    return sum(a == b for a in e1 for b in e2)


def relation_violations(ops: EdgeOperatorSet) -> list[str]:
    """Exact symbolic check of the algebraic relations; empty when all hold."""
    g, B, A = ops.graph, ops.Btilde, ops.Atilde
    out = []
    ident = PauliString.identity(g.u)
    for k, b in enumerate(B):
        if not b.is_hermitian or b * b != ident:
            out.append(f"B{k} not a Hermitian involution")
        for b2 in B:
            if not b.commutes(b2):
                out.append(f"B{k} does not commute with another B")
    for (j, k), a in A.items():
        if not a.is_hermitian or a * a != ident:
            out.append(f"A{j}{k} not a Hermitian involution")
        if A[(k, j)] != -a:
            out.append(f"A{k}{j} != -A{j}{k}")
        for l, b in enumerate(B):
            if a.commutes(b) != (l not in (j, k)):
                out.append(f"A{j}{k} vs B{l} has the wrong commutation")
        for (l, s), a2 in A.items():
            if a.commutes(a2) != (_shared_endpoints((j, k), (l, s)) % 2 == 0):
                out.append(f"A{j}{k} vs A{l}{s} has the wrong commutation")
    if product(B, g.u) != ident:
        out.append("product of all B is not the identity")
    stabs = ops.stabilizers
    for i, c in enumerate(stabs):
        if not c.is_hermitian or c * c != ident:
            out.append(f"stabilizer {i} not a Hermitian involution")
        for other in list(stabs) + list(B) + list(A.values()):
            if not c.commutes(other):
                out.append(f"stabilizer {i} fails to commute")
                break
    return out


# -- stabilizer group bookkeeping -----------------------------------------------


def _independent_with_kernel(gens: Sequence[PauliString]):
    """Split ``gens`` into an independent basis and products equal to the identity
    up to phase (one per kernel vector)."""
    basis: dict[int, tuple[int, int]] = {}  # pivot -> (vector, combination mask)
    independent, kernel = [], []
    for i, p in enumerate(gens):
        v, combo = p.symplectic(), 1 << i
        while v:
            pivot = v.bit_length() - 1
            if pivot not in basis:
                break
            bv, bc = basis[pivot]
            v ^= bv
            combo ^= bc
        if v:
            basis[v.bit_length() - 1] = (v, combo)
            independent.append(p)
        else:
            kernel.append(product((gens[r] for r in range(len(gens)) if combo >> r & 1), p.n))
    return independent, kernel


def check_consistency(gens: Sequence[PauliString]) -> list[PauliString]:
    """Return an independent generating set, raising if the set is inconsistent."""
    for a, b in itertools.combinations(gens, 2):
        if not a.commutes(b):
            raise InconsistentStabilizers(f"{a} and {b} anticommute")
    for p in gens:
        if not p.is_hermitian:
            raise InconsistentStabilizers(f"{p} is not Hermitian")
    independent, kernel = _independent_with_kernel(list(gens))
    for k in kernel:
        if k.phase != 0:
            raise InconsistentStabilizers(f"a product of generators equals {k}")
    return independent


def stabilizer_rank(gens: Sequence[PauliString]) -> int:
    return len(gf2_basis(p.symplectic() for p in gens))


def codespace_dimension(g: GraphSpec) -> int:
    gens = stabilizer_generators(g)
    check_consistency(gens)
    return 1 << (g.u - stabilizer_rank(gens))


def code_projector(gens: Sequence[PauliString], n: int) -> np.ndarray:
    if n > MAX_DENSE_QUBITS:
        raise ValueError(f"dense projector capped at {MAX_DENSE_QUBITS} qubits")
    P = np.eye(1 << n, dtype=complex)
    for p in check_consistency(gens):
        P = P @ (0.5 * (np.eye(1 << n) + to_dense(p)))
    return P


# -- trace check -----------------------------------------------------------------


def _parse_word(word: Sequence, g: GraphSpec) -> list:
    out = []
    for w in word:
        w = tuple(w)
        if w[0] == "B" and len(w) == 2:
            if not 0 <= w[1] < g.m:
                raise ValueError(f"vertex {w[1]} out of range")
        elif w[0] == "A" and len(w) == 3:
            g.edge_index(w[1], w[2])
        else:
            raise ValueError(f"bad word letter {w!r}; use ('B', k) or ('A', j, k)")
        out.append(w)
    return out


def fock_word(word: Sequence, m: int) -> PauliString:
    """The Fock-side operator as a Jordan-Wigner Pauli string."""
    out = PauliString.identity(m)
    for w in word:
        if w[0] == "B":
            op = majorana_product([2 * w[1], 2 * w[1] + 1], m)
        else:
            op = majorana_product([2 * w[1], 2 * w[2]], m)
        out = multiply(out, op.scaled(3))
    return out


def encoded_word(word: Sequence, ops: EdgeOperatorSet) -> PauliString:
    out = PauliString.identity(ops.u)
    for w in word:
        out = multiply(out, ops.Btilde[w[1]] if w[0] == "B" else ops.A(w[1], w[2]))
    return out


def trace_check(g: GraphSpec, word: Sequence, ops: EdgeOperatorSet | None = None):
    """(Tr over the even sector of the word, Tr over L of the encoded word)."""
    if g.m > MAX_TRACE_MODES or g.u > MAX_TRACE_QUBITS:
        raise ValueError(
            f"trace check capped at {MAX_TRACE_MODES} modes and {MAX_TRACE_QUBITS} edges"
        )
    word = _parse_word(word, g)
    ops = ops or build_edge_operators(g)
    f = to_dense(fock_word(word, g.m))
    even = np.flatnonzero(parity_diagonal(g.m) > 0)
    fock_trace = complex(np.trace(f[np.ix_(even, even)]))
    P = code_projector(ops.stabilizers, g.u)
    code_trace = complex(np.trace(P @ to_dense(encoded_word(word, ops))))
    return fock_trace, code_trace


def random_word(g: GraphSpec, rng: np.random.Generator, max_len: int = 6) -> list:
    letters = [("B", k) for k in range(g.m)]
    for j, k in g.edges:
        letters += [("A", j, k), ("A", k, j)]
    n = int(rng.integers(0, max_len + 1))
    return [letters[int(i)] for i in rng.integers(0, len(letters), size=n)]


# -- Clifford synthesis ------------------------------------------------------------


class _Tracker:
    """Records Clifford gates while conjugating a list of Pauli strings."""

    def __init__(self, paulis: Sequence[PauliString]):
        self.paulis = list(paulis)
        self.ops: list[tuple[str, tuple]] = []

    def apply(self, name: str, *targets: int) -> None:
        self.ops.append((name, targets))
        self.paulis = [p.conjugate(name, targets) for p in self.paulis]


def _to_x(t: _Tracker, idx: int, q: int) -> None:
    """Make the letter of ``paulis[idx]`` on qubit ``q`` an X (up to sign)."""
    letter = t.paulis[idx].letter(q)
    if letter == "Y":
        t.apply("S", q)
    elif letter == "Z":
        t.apply("H", q)


def _reduce_to_z(t: _Tracker, idx: int, qubits: Sequence[int], dest: int) -> None:
    """Map ``paulis[idx]`` to +Z_dest with gates on ``qubits`` only."""
    p = t.paulis[idx]
    sup = [q for q in qubits if (p.support >> q) & 1]
    if not sup:
        raise ValueError("cannot reduce the identity")
    xs = [q for q in sup if (p.xmask >> q) & 1]
    if xs:
        piv = dest if dest in xs else xs[0]
        for q in sup:
            _to_x(t, idx, q)
        for q in sup:
            if q != piv:
                t.apply("CX", piv, q)
        t.apply("H", piv)
    else:
        piv = dest if dest in sup else sup[0]
        for q in sup:
            if q != piv:
                t.apply("CX", q, piv)
    if piv != dest:
        t.apply("SWAP", piv, dest)
    if t.paulis[idx].phase == 2:
        t.apply("X", dest)


def _reduce_partner_to_x(t: _Tracker, idx: int, qubits: Sequence[int], q0: int) -> None:
    """Map ``paulis[idx]`` (anticommuting with Z_q0) to +X_q0 keeping Z_q0 fixed."""
    if t.paulis[idx].letter(q0) == "Y":
        t.apply("S", q0)
    p = t.paulis[idx]
    for q in qubits:
        if q != q0 and (p.support >> q) & 1:
            _to_x(t, idx, q)
            t.apply("CX", q0, q)
    if t.paulis[idx].phase == 2:
        t.apply("Z", q0)


def reduce_triple(
    P: PauliString, Q: PauliString, R: PauliString, qubits: Sequence[int], a: int, b: int
) -> list[tuple[str, tuple]]:
    """Clifford gates on ``qubits`` taking (P, Q, R) to (Z_a, X_a, Z_b).

    Requires P, Q anticommuting Hermitian strings and R commuting with both.
    """
    t = _Tracker([P, Q, R])
    _reduce_to_z(t, 0, qubits, a)
    _reduce_partner_to_x(t, 1, qubits, a)
    _reduce_to_z(t, 2, [q for q in qubits if q != a], b)
    n = P.n
    want = [PauliString.single(n, a, "Z"), PauliString.single(n, a, "X"), PauliString.single(n, b, "Z")]
    if t.paulis != want:
        raise InconsistentStabilizers("Clifford reduction did not reach the target frame")
    return t.ops


def _inverse_ops(ops: Sequence[tuple[str, tuple]]) -> list[tuple[str, tuple]]:
    out = []
    for name, tg in reversed(ops):
        out += [(name, tg)] * (3 if name == "S" else 1)
    return out


def _auxiliary_edge(g: GraphSpec, j: int, k: int) -> int:
    e = g.edge_index(j, k)
    for v in (j, k):
        for q in g.incident(v):
            if q != e:
                return q
    raise ValueError(f"no edge besides {(j, k)} at its endpoints; the graph is too small")


@dataclass(frozen=True)
class LocalGateReport:
    circuit: Circuit
    qubits: tuple
    aux_edge: int
    edge: int
    clifford_gates: int


def gate_frame(g: GraphSpec, j: int, k: int, ops: EdgeOperatorSet | None = None):
    """Clifford W (as ordered gate list) with W B_j W^+ = Z_a, W B_k W^+ = Z_b,
    W A_jk W^+ = -Y_a X_b; returns (gates, a, b, qubits)."""
    ops = ops or build_edge_operators(g)
    b = g.edge_index(j, k)
    a = _auxiliary_edge(g, j, k)
    qubits = sorted(set(g.incident(j)) | set(g.incident(k)))
    Bj, Bk, Ajk = ops.Btilde[j], ops.Btilde[k], ops.A(j, k)
    src = reduce_triple(Bj, Ajk, multiply(Bj, Bk), qubits, a, b)
    # target frame (Z_a, -Y_a X_b, Z_a Z_b) -> (Z_a, X_a, Z_b) via S_a then CX(a, b)
    tgt = [("S", (a,)), ("CX", (a, b))]
    return src + _inverse_ops(tgt), a, b, qubits


def transpile_local_gate(
    U: np.ndarray, j: int, k: int, g: GraphSpec, ops: EdgeOperatorSet | None = None
) -> LocalGateReport:
    """Qubit circuit W^+ U[a, b] W on the u edge qubits representing U[f](j, k)."""
    U = np.asarray(U, dtype=complex)
    if U.shape != (4, 4):
        raise ValueError("expected a two-mode gate (4x4 matrix)")
    if g.m <= 2:
        raise ValueError("local gate transpilation needs more than two vertices")
    W, a, b, qubits = gate_frame(g, j, k, ops)
    apps = [GateApplication(gate(n), tg) for n, tg in W]
    core = GateApplication(raw_gate("U", U, "fermionic"), (a, b))
    inv = [GateApplication(gate(n), tg) for n, tg in _inverse_ops(W)]
    circ = Circuit("qubit", g.u, tuple(apps + [core] + inv))
    return LocalGateReport(circ, tuple(qubits), a, b, len(apps) + len(inv))


def substituted_gate(U: np.ndarray, j: int, k: int, ops: EdgeOperatorSet) -> np.ndarray:
    """Dense nu_jk(U): expand U over products of A, B', B'' and substitute."""
    U = np.asarray(U, dtype=complex)
    A = PauliString.from_letters(2, {0: "Y", 1: "X"}, sign=2)
    B1, B2 = PauliString.single(2, 0, "Z"), PauliString.single(2, 1, "Z")
    tA, tB1, tB2 = ops.A(j, k), ops.Btilde[j], ops.Btilde[k]
    out = np.zeros((1 << ops.u,) * 2, dtype=complex)
    for fa, f1, f2 in itertools.product((0, 1), repeat=3):
        local = product([A] * fa + [B1] * f1 + [B2] * f2, 2)
        coeff = np.trace(to_dense(local).conj().T @ U) / 4
        if abs(coeff) > 1e-14:
            enc = product([tA] * fa + [tB1] * f1 + [tB2] * f2, ops.u)
            out += coeff * to_dense(enc)
    return out


# -- vacuum -------------------------------------------------------------------------


def vacuum_generators(g: GraphSpec, ops: EdgeOperatorSet | None = None) -> list[PauliString]:
    ops = ops or build_edge_operators(g)
    return check_consistency(list(ops.stabilizers) + list(ops.Btilde))


def _stabilizer_state_ops(gens: Sequence[PauliString], n: int):
    """Clifford C with C g_i C^+ = s_i Z_{p_i}; returns (gates, pivots, signs)."""
    t = _Tracker(gens)
    assigned: list[int] = []
    for i in range(len(gens)):
        free = [q for q in range(n) if q not in assigned]
        p = t.paulis[i]
        xs = [q for q in free if (p.xmask >> q) & 1]
        if xs:
            piv = xs[0]
            for q in free:
                if (t.paulis[i].support >> q) & 1:
                    _to_x(t, i, q)
            for q in free:
                if q != piv and (t.paulis[i].support >> q) & 1:
                    t.apply("CX", piv, q)
            t.apply("H", piv)
        else:
            zs = [q for q in free if (p.zmask >> q) & 1]
            if not zs:
                raise InconsistentStabilizers("dependent generator in vacuum set")
            piv = zs[0]
            for q in zs[1:]:
                t.apply("CX", q, piv)
        for q in assigned:
            if (t.paulis[i].zmask >> q) & 1:
                t.apply("CX", q, piv)
        assigned.append(piv)
    signs = []
    for i, piv in enumerate(assigned):
        p = t.paulis[i]
        if p.xmask or p.zmask != 1 << piv or p.phase not in (0, 2):
            raise InconsistentStabilizers("stabilizer reduction failed")
        signs.append(1 if p.phase == 0 else -1)
    return t.ops, assigned, signs


@dataclass(frozen=True)
class VacuumReport:
    generators: tuple
    circuit: Circuit
    state: np.ndarray | None


def vacuum_state(g: GraphSpec, dense: bool = True) -> VacuumReport:
    """The state fixed by every cycle stabilizer and every B_k, with a
    preparation circuit from |0...0>."""
    gens = vacuum_generators(g)
    if len(gens) != g.u:
        raise InconsistentStabilizers(f"{len(gens)} independent generators on {g.u} qubits")
    C, pivots, signs = _stabilizer_state_ops(gens, g.u)
    flips = [("X", (p,)) for p, s in zip(pivots, signs) if s < 0]
    circ = Circuit.build("qubit", g.u, flips + _inverse_ops(C))
    state = None
    if dense:
        if g.u > MAX_DENSE_QUBITS:
            raise ValueError(f"dense vacuum capped at {MAX_DENSE_QUBITS} qubits")
        P = code_projector(gens, g.u)
        col = int(np.argmax(np.linalg.norm(P, axis=0)))
        v = P[:, col]
        v = v / np.linalg.norm(v)
        lead = v[np.argmax(np.abs(v) > 1e-12)]
        state = v * (abs(lead) / lead)
    return VacuumReport(tuple(gens), circ, state)


def circuit_state(c: Circuit) -> np.ndarray:
    """Run a qubit circuit on |0...0>."""
    psi = np.zeros(1 << c.width, dtype=complex)
    psi[0] = 1
    return run(c, psi)
