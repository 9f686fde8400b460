"""Invariant suites shared by the CLI and the acceptance tests.

Every suite returns a list of check records ``{"name", "passed", "deviation",
...}``.  Payloads contain no timings, so seeded runs are byte-identical.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import expm

from . import circuit as C
from . import codes as K
from . import encodings as E
from . import fock
from . import protocols as P
from . import superfast as SF
from .pauli import PauliString, majorana, to_dense

SUITE_NAMES = ("algebra", "encodings", "superfast", "protocol", "codes")

TWO_MODE_PARAMS = {"int_nn": (0.731,), "hop": (0.4 + 0.3j,), "pair": (0.25 - 0.6j,)}


@dataclass
class Options:
    seed: int = 0
    tolerance: float = 1e-10
    trials: int = 100
    samples: int = 10_000
    long: bool = False


def _check(name: str, passed: bool, deviation: float | None = None, **extra) -> dict:
    out = {"name": name, "passed": bool(passed)}
    if deviation is not None:
        out["deviation"] = float(deviation)
    out.update(extra)
    return out


def max_abs(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) if np.size(a) else 0.0


def phase_deviation(a: np.ndarray, b: np.ndarray) -> float:
    """max |a - e^{i phi} b| for the best global phase."""
    a, b = np.asarray(a), np.asarray(b)
    overlap = np.vdot(b, a)
    ph = overlap / abs(overlap) if abs(overlap) > 1e-300 else 1.0
    return max_abs(a, ph * b)


def _rng(opts: Options, stream: int) -> np.random.Generator:
    return np.random.default_rng([opts.seed, stream])


def library_gate(name: str) -> C.GateDef:
    return C.gate(name, *TWO_MODE_PARAMS.get(name, ()))


def two_mode_library_names() -> list[str]:
    return sorted(
        n for n, e in C.LIBRARY.items() if e.kind == "fermionic" and e.arity == 2 and n in _allowed()
    )


def _allowed() -> set:
    return {n for n, e in C.LIBRARY.items() if e.nparams == 0 or n in TWO_MODE_PARAMS}


def one_mode_library_names() -> list[str]:
    return sorted(
        n
        for n, e in C.LIBRARY.items()
        if e.kind == "fermionic" and e.arity == 1 and (e.nparams == 0)
    ) + ["phase_n"]


# -- algebra -----------------------------------------------------------------------


def suite_algebra(opts: Options) -> list[dict]:
    out = []
    car_dev = 0.0
    for m in range(1, 6):
        a = [fock.ladder_matrix(j, m) for j in range(m)]
        ad = [fock.ladder_matrix(j, m, dagger=True) for j in range(m)]
        eye = np.eye(1 << m)
        for j, k in itertools.product(range(m), repeat=2):
            car_dev = max(
                car_dev,
                max_abs(a[j] @ a[k] + a[k] @ a[j], 0 * eye),
                max_abs(ad[j] @ ad[k] + ad[k] @ ad[j], 0 * eye),
                max_abs(a[j] @ ad[k] + ad[k] @ a[j], (j == k) * eye),
            )
    out.append(_check("car_relations_m<=5", car_dev == 0.0, car_dev))
    maj_dev = 0.0
    recon_dev = 0.0
    for m in range(1, 6):
        cs = [to_dense(majorana(j, m)) for j in range(2 * m)]
        eye = np.eye(1 << m)
        for j, k in itertools.product(range(2 * m), repeat=2):
            maj_dev = max(maj_dev, max_abs(cs[j] @ cs[k] + cs[k] @ cs[j], 2 * (j == k) * eye))
        for k in range(m):
            recon_dev = max(
                recon_dev, max_abs(0.5 * (cs[2 * k] + 1j * cs[2 * k + 1]), fock.ladder_matrix(k, m))
            )
    out.append(_check("majorana_relations_m<=5", maj_dev == 0.0, maj_dev))
    out.append(_check("majorana_ladder_reconstruction", recon_dev == 0.0, recon_dev))
    rng = _rng(opts, 1)
    mult_dev = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 5))
        p, q = (
            PauliString(n, int(rng.integers(4)), int(rng.integers(1 << n)), int(rng.integers(1 << n)))
            for _ in range(2)
        )
        mult_dev = max(mult_dev, max_abs(to_dense(p * q), to_dense(p) @ to_dense(q)))
    out.append(_check("pauli_multiply_matches_dense", mult_dev == 0.0, mult_dev))
    return out


# -- encodings ---------------------------------------------------------------------


def suite_encodings(opts: Options) -> list[dict]:
    out = []
    tol = opts.tolerance
    m = 6
    eq7 = eq8 = 0.0
    counts_ok = True
    D = C.gate("D")
    for name in two_mode_library_names():
        g = library_gate(name)
        for j, k in itertools.combinations(range(m), 2):
            app = C.GateApplication(g, (j, k))
            fc = C.Circuit("fermionic", m, (app,))
            qc, rep = E.transpile_standard(fc)
            counts_ok &= rep.gates == len(qc) == 2 * (k - j - 1) + 1
            eq7 = max(eq7, max_abs(C.evaluate(fc), C.evaluate(qc)))
            defects = [C.GateApplication(D, (l, k)) for l in range(k - 1, j, -1)]
            conv_f = C.Circuit("fermionic", m, tuple(defects + [app] + defects[::-1]))
            conv_q = C.Circuit("qubit", m, (app,))
            eq8 = max(eq8, max_abs(C.evaluate(conv_f), C.evaluate(conv_q)))
    out.append(_check("swap_defect_conjugation_f_to_q", eq7 <= tol, eq7))
    out.append(_check("swap_defect_conjugation_q_to_f", eq8 <= tol, eq8))
    out.append(_check("standard_gate_count_law", counts_ok))

    bij = True
    for mm in range(1, 17):
        enc = E.tree_encode_indices(mm)
        ident = np.arange(1 << mm)
        bij &= bool((np.sort(enc) == ident).all() and (E.tree_decode_indices(enc, mm) == ident).all())
    out.append(_check("tree_bijection_m<=16", bij))

    m = 8
    J = E.tree_embedding(m)
    ext_dev = 0.0
    for j in range(m):
        lhs = np.kron(np.eye(2), J) @ E.fermionic_extraction(j, m)
        U = C.evaluate(E.tree_extraction_circuit(j, m))
        rhs = U[:, : 1 << m] @ J
        ext_dev = max(ext_dev, max_abs(lhs, rhs))
    out.append(_check("tree_extraction_identity_m8", ext_dev <= tol, ext_dev))

    worst = -1
    for k in range(1, 17):
        for mm in ((1 << k) - 1, 1 << k, (1 << k) + 1):
            if mm >= 1:
                worst = max(worst, int((E.extraction_gate_counts(mm) - E.extraction_gate_bound(mm)).max()))
    out.append(_check("tree_extraction_count_bound_to_2^16", worst <= 0, float(max(worst, 0))))

    rng = _rng(opts, 2)
    m = 6
    names = two_mode_library_names() + one_mode_library_names()
    sq = {"standard": 0.0, "tree": 0.0}
    for _ in range(20):
        name = names[int(rng.integers(len(names)))]
        g = C.gate(name, *TWO_MODE_PARAMS.get(name, (0.37,) if name == "phase_n" else ()))
        targets = tuple(int(t) for t in rng.choice(m, size=g.arity, replace=False))
        fc = C.Circuit("fermionic", m, (C.GateApplication(g, targets),))
        U = C.evaluate(fc)
        for enc in sq:
            qc, rep = E.transpile(fc, enc)
            Jm = E.embedding(enc, m, rep.ancillas)
            sq[enc] = max(sq[enc], phase_deviation(Jm @ U, C.evaluate(qc) @ Jm))
    for enc, dev in sq.items():
        out.append(_check(f"{enc}_commutation_square_m6", dev <= tol, dev))

    pair_dev = 0.0
    pair_count = True
    for n in range(1, 5):
        for name, e in sorted(C.LIBRARY.items()):
            if e.kind != "qubit" or e.arity > n:
                continue
            targets = tuple(range(n))[-e.arity :][::-1]
            qc = C.Circuit("qubit", n, (C.GateApplication(C.gate(name), targets),))
            fc, rep = E.transpile_pair(qc)
            pair_count &= rep.gates == len(fc) == 1
            Jp = E.pair_embedding(n)
            pair_dev = max(pair_dev, max_abs(Jp.T @ C.evaluate(fc) @ Jp, C.evaluate(qc)))
    out.append(_check("pair_one_application_per_gate", pair_count))
    out.append(_check("pair_code_restriction", pair_dev <= tol, pair_dev))
    return out


# -- superfast -----------------------------------------------------------------------


def suite_superfast(opts: Options) -> list[dict]:
    out = []
    rng = _rng(opts, 3)
    for gname, g in SF.standard_graphs().items():
        ops = SF.build_edge_operators(g)
        viol = SF.relation_violations(ops)
        out.append(_check(f"{gname}:relations", not viol, violations=viol[:3]))
        rank = SF.stabilizer_rank(ops.stabilizers)
        out.append(_check(f"{gname}:independent_stabilizers", rank == g.u - g.m + 1, count=rank))
        dim = SF.codespace_dimension(g)
        out.append(_check(f"{gname}:codespace_dimension", dim == 1 << (g.m - 1), dimension=dim))
        dev = 0.0
        for _ in range(50):
            f, c = SF.trace_check(g, SF.random_word(g, rng), ops)
            dev = max(dev, abs(f - c))
        out.append(_check(f"{gname}:trace_check", dev <= 1e-9, dev))
        if g.m > 2:
            local_ok, dense_dev = True, 0.0
            for j, k in g.edges:
                U = fock.random_physical_unitary(2, rng)
                rep = SF.transpile_local_gate(U, j, k, g, ops)
                allowed = set(g.incident(j)) | set(g.incident(k))
                local_ok &= rep.circuit.support() <= allowed
                if g.u <= 10:
                    dense_dev = max(
                        dense_dev, max_abs(C.evaluate(rep.circuit), SF.substituted_gate(U, j, k, ops))
                    )
            out.append(_check(f"{gname}:local_gate_support", local_ok))
            out.append(_check(f"{gname}:local_gate_substitution", dense_dev <= 1e-9, dense_dev))
        if g.u <= 10:
            vac = SF.vacuum_state(g)
            gens = list(ops.stabilizers) + list(ops.Btilde)
            vdev = max(max_abs(to_dense(p) @ vac.state, vac.state) for p in gens)
            prep = phase_deviation(SF.circuit_state(vac.circuit), vac.state)
            out.append(_check(f"{gname}:vacuum_conditions", vdev <= 1e-9, vdev))
            out.append(_check(f"{gname}:vacuum_preparation", prep <= 1e-9, prep, gates=len(vac.circuit)))
    return out


# -- protocol ---------------------------------------------------------------------


def suite_protocol(opts: Options) -> list[dict]:
    out = []
    rng = _rng(opts, 4)
    hom = 0.0
    sx = 0.0
    X0 = np.kron(np.eye(4), np.array([[0, 1], [1, 0]]))
    for _ in range(20):
        A, B = fock.random_unitary(4, rng), fock.random_unitary(4, rng)
        c = complex(rng.normal(), rng.normal())
        hom = max(
            hom,
            max_abs(P.ppext(A + B), P.ppext(A) + P.ppext(B)),
            max_abs(P.ppext(c * A), c * P.ppext(A)),
            max_abs(P.ppext(A @ B), P.ppext(A) @ P.ppext(B)),
            max_abs(P.ppext(A.conj().T), P.ppext(A).conj().T),
        )
        sx = max(sx, max_abs(X0 @ P.ppext(A), P.ppext(A) @ X0))
    hom = max(hom, max_abs(P.ppext(np.eye(4)), np.eye(8)))
    out.append(_check("ppext_homomorphism", hom <= 1e-12, hom))
    out.append(_check("ppext_commutes_with_x0", sx <= 1e-12, sx))

    odd = 0.0
    m = 3
    for _ in range(20):
        Y = fock.random_unitary(1 << (m - 1), rng)
        U = C.evaluate(P.odd_sector_circuit(Y, m))
        target = np.kron(np.eye(2), P.SectorPair(np.eye(1 << (m - 1)), Y).to_matrix())
        odd = max(odd, max_abs(U, target))
    out.append(_check("odd_sector_construction_m3", odd <= 1e-9, odd))

    a0, a1 = (fock.polynomial_to_dense(fock.LadderPolynomial.ladder(j), 2) for j in (0, 1))
    G = np.array([[1, 1j], [1j, 1]]) / np.sqrt(2)
    lam_m_i = np.diag([1, -1j])
    checks = [
        max_abs(C.gate_matrix(C.gate("fb_phase")), np.diag([1, np.exp(1j * np.pi / 4)])),
        max_abs(C.gate_matrix(C.gate("fb_int")), np.diag([1, 1, 1, -1])),
        max_abs(P.ppext(G), expm(-1j * np.pi / 4 * (a0 - a0.conj().T) @ (a1 + a1.conj().T))),
        max_abs(P.ppext(G), C.gate_matrix(C.gate("fb_hop")) @ C.gate_matrix(C.gate("fb_pair"))),
        max_abs(P.ppext(C.LIBRARY["H"].build()), np.kron(lam_m_i, np.eye(2)) @ P.ppext(G) @ np.kron(lam_m_i, np.eye(2))),
    ]
    fid = max(checks)
    out.append(_check("fermionic_basis_identities", fid <= 1e-12, fid))

    fdev, pdev = 0.0, 0.0
    branch_outputs = []
    for z, y in itertools.product((1, -1), (1j, -1j)):
        for t in range(opts.trials):
            psi = P.protocol_input(rng, 4)
            res, rec = P.run_protocol(psi, (z, y))
            target = P.quartic_gate(4) @ psi.amplitudes
            fdev = max(fdev, abs(1 - P.fidelity(target, res.amplitudes)))
            pdev = max(pdev, abs(rec.probability - 0.25))
            if t == 0:
                branch_outputs.append((psi, res))
    out.append(_check("protocol_fidelity", fdev <= 1e-10, fdev, trials=opts.trials))
    out.append(_check("protocol_branch_probabilities", pdev <= 1e-12, pdev))

    srng = _rng(opts, 5)
    psi = P.protocol_input(srng, 4)
    counts = {lab: 0 for lab in ("z=+1,y=+i", "z=+1,y=-i", "z=-1,y=+i", "z=-1,y=-i")}
    for _ in range(opts.samples):
        _, rec = P.run_protocol(psi, rng=srng)
        counts[rec.label()] += 1
    freqs = {k: v / opts.samples for k, v in counts.items()}
    ok = all(0.235 <= f <= 0.265 for f in freqs.values())
    out.append(_check("protocol_sampled_frequencies", ok, frequencies=freqs, samples=opts.samples))
    return out


# -- codes ---------------------------------------------------------------------------


# 3x3 layouts of the l = 3 stabilizers, row by row
EXPECTED_GRIDS_L3 = {
    "Z_0": "X Z Z\nZ Z X\nI I I",
    "Z_1": "I I I\nX Z Z\nZ Z X",
    "Y_0,0": "Y Y I\nI I I\nI I I",
    "Y_0,1": "I Y Y\nI I I\nI I I",
    "Y_1,0": "I I I\nY Y I\nI I I",
    "Y_1,1": "I I I\nI Y Y\nI I I",
    "Y_2,0": "I I I\nI I I\nY Y I",
    "Y_2,1": "I I I\nI I I\nI Y Y",
}


def suite_codes(opts: Options) -> list[dict]:
    out = []
    for l in (2, 3, 4) if opts.long else (2, 3):
        code = K.shor_like_code(l)
        problems = code.check()
        out.append(_check(f"l={l}:structure", not problems, problems=problems[:3]))
        rep = K.code_distance(code, max_weight=l)
        witness_ok = K.is_nontrivial_logical(rep.witness, code.stabilizers) and rep.witness.weight == rep.distance
        out.append(
            _check(f"l={l}:distance", rep.distance == l and witness_ok, distance=rep.distance, witness=str(rep.witness))
        )
        forms = all(
            s == (K.pauli_form_z(int(lab[2:]), l) if lab[0] == "Z" else K.pauli_form_y(*map(int, lab[2:].split(",")), l))
            for lab, s in zip(code.labels, code.stabilizers)
        )
        out.append(_check(f"l={l}:pauli_forms", forms))
    code = K.shor_like_code(3)
    rendered = {lab: K.render_grid(s, 3) for lab, s in zip(code.labels, code.stabilizers)}
    out.append(_check("l=3:grid_rendering", rendered == EXPECTED_GRIDS_L3))
    return out


SUITES: dict[str, Callable[[Options], list[dict]]] = {
    "algebra": suite_algebra,
    "encodings": suite_encodings,
    "superfast": suite_superfast,
    "protocol": suite_protocol,
    "codes": suite_codes,
}


def run_suites(names, opts: Options) -> dict:
    if isinstance(names, str):
        names = list(SUITE_NAMES) if names == "all" else [names]
    results = {}
    for name in names:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}")
        results[name] = SUITES[name](opts)
    passed = all(c["passed"] for checks in results.values() for c in checks)
    return {"seed": opts.seed, "passed": passed, "suites": results}
