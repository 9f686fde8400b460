"""Command-line entry point.

Every command prints one JSON document on stdout and diagnostics on stderr.
Exit codes: 0 ok, 1 a check failed, 2 bad input, 3 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import circuit as C
from . import codes as K
from . import encodings as E
from . import fock
from . import protocols as P
from . import superfast as SF
from . import verify as V

EXIT_OK, EXIT_FAILED, EXIT_BAD_INPUT, EXIT_INCONSISTENT = 0, 1, 2, 3


class BadInput(Exception):
    pass


class Inconsistent(Exception):
    pass


def _complex_pair(z) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def _emit(payload, args) -> None:
    if args.json:
        text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    else:
        text = json.dumps(payload, sort_keys=True, indent=2)
    sys.stdout.write(text + "\n")


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise BadInput(f"cannot read {path}: {exc}") from None


def _load_circuit(path: str) -> C.Circuit:
    try:
        return C.circuit_from_dict(_load_json(path))
    except (KeyError, ValueError, TypeError, IndexError) as exc:
        raise BadInput(f"circuit schema violation: {exc}") from None


def _load_graph(path: str) -> SF.GraphSpec:
    try:
        return SF.graph_from_dict(_load_json(path))
    except (KeyError, ValueError, TypeError, IndexError) as exc:
        raise BadInput(f"malformed graph: {exc}") from None


# -- commands -------------------------------------------------------------------


def cmd_transpile(args) -> int:
    c = _load_circuit(args.input)
    try:
        out, report = E.transpile(c, args.encoding)
    except ValueError as exc:
        raise BadInput(str(exc)) from None
    payload = {"report": report.to_dict()}
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(C.dumps(C.circuit_to_dict(out)) + "\n")
        payload["out"] = args.out
    else:
        payload["circuit"] = C.circuit_to_dict(out)
    rc = EXIT_OK
    if args.verify:
        width = max(c.width, out.width)
        if width > C.MAX_EVAL_WIDTH:
            payload["verify"] = {"skipped": f"width {width} exceeds {C.MAX_EVAL_WIDTH}"}
        else:
            J = E.embedding(args.encoding, c.width, report.ancillas)
            dev = V.phase_deviation(J @ C.evaluate(c), C.evaluate(out) @ J)
            ok = dev <= args.tolerance
            payload["verify"] = {"deviation": dev, "passed": ok}
            if not ok:
                rc = EXIT_INCONSISTENT
    _emit(payload, args)
    return rc


def _parse_occupations(text: str | None, m: int) -> np.ndarray:
    psi = np.zeros(1 << m, dtype=complex)
    if text is None:
        psi[0] = 1
        return psi
    if len(text) != m or set(text) - {"0", "1"}:
        raise BadInput(f"--input must be {m} characters of 0/1 (mode 0 first)")
    psi[fock.occupation_index([int(ch) for ch in text])] = 1
    return psi


def cmd_simulate(args) -> int:
    c = _load_circuit(args.input_circuit)
    if c.width > C.MAX_EVAL_WIDTH:
        raise BadInput(f"width {c.width} exceeds the dense cap {C.MAX_EVAL_WIDTH}")
    try:
        psi = C.run(c, _parse_occupations(args.input, c.width))
    except ValueError as exc:
        raise BadInput(str(exc)) from None
    amps = {
        format(idx, f"0{c.width}b")[::-1]: _complex_pair(psi[idx])
        for idx in np.flatnonzero(np.abs(psi) > args.tolerance)
    }
    payload = {"kind": c.kind, "width": c.width, "norm": float(np.linalg.norm(psi)), "amplitudes": amps}
    if args.unitary:
        payload["unitary"] = C.matrix_to_json(C.evaluate(c))
    _emit(payload, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    opts = V.Options(
        seed=args.seed,
        tolerance=args.tolerance,
        trials=args.trials,
        samples=args.samples,
        long=args.long,
    )
    payload = V.run_suites(args.suite, opts)
    _emit(payload, args)
    for suite, checks in payload["suites"].items():
        for c in checks:
            if not c["passed"]:
                print(f"FAIL {suite}:{c['name']}", file=sys.stderr)
    return EXIT_OK if payload["passed"] else EXIT_FAILED


def cmd_superfast(args) -> int:
    g = _load_graph(args.graph)
    try:
        ops = SF.build_edge_operators(g)
    except SF.InconsistentStabilizers as exc:
        raise Inconsistent(str(exc)) from None
    if args.action == "stabilizers":
        payload = {"stabilizers": [str(s) for s in ops.stabilizers], "edges": [list(e) for e in g.edges]}
    elif args.action == "dim":
        payload = {
            "dimension": SF.codespace_dimension(g),
            "qubits": g.u,
            "independent_stabilizers": SF.stabilizer_rank(ops.stabilizers),
        }
    elif args.action == "transpile":
        if args.edge is None:
            raise BadInput("transpile needs --edge J K")
        j, k = args.edge
        try:
            U = C.gate_matrix(C.gate(args.gate, *[_parse_param(p) for p in args.params]))
            rep = SF.transpile_local_gate(U, j, k, g, ops)
        except (KeyError, ValueError) as exc:
            raise BadInput(str(exc)) from None
        payload = {
            "circuit": C.circuit_to_dict(rep.circuit),
            "qubits": list(rep.qubits),
            "aux_edge": rep.aux_edge,
            "edge": rep.edge,
            "clifford_gates": rep.clifford_gates,
        }
    else:
        vac = SF.vacuum_state(g, dense=args.dense)
        payload = {
            "generators": [str(p) for p in vac.generators],
            "circuit": C.circuit_to_dict(vac.circuit),
        }
        if vac.state is not None:
            payload["state"] = {
                format(i, f"0{g.u}b")[::-1]: _complex_pair(vac.state[i])
                for i in np.flatnonzero(np.abs(vac.state) > 1e-12)
            }
    _emit(payload, args)
    return EXIT_OK


def _parse_param(text: str):
    try:
        z = complex(text.replace(" ", ""))
    except ValueError:
        raise BadInput(f"bad gate parameter {text!r}") from None
    return z.real if z.imag == 0 else z


def _parse_branch(text: str) -> tuple:
    table = {"+1": 1, "1": 1, "-1": -1, "+i": 1j, "i": 1j, "-i": -1j}
    try:
        z, y = text.split(",")
        z, y = table[z.strip()], table[y.strip()]
    except (ValueError, KeyError):
        raise BadInput(f"--force-branch expects 'z,y' like '+1,-i', got {text!r}") from None
    if z not in (1, -1) or y not in (1j, -1j):
        raise BadInput("z must be +1/-1 and y must be +i/-i")
    return z, y


def cmd_protocol(args) -> int:
    rng = np.random.default_rng(args.seed)
    branch = _parse_branch(args.force_branch) if args.force_branch else None
    rows = []
    counts: dict[str, int] = {}
    worst = 0.0
    if not 3 <= args.modes <= fock.MAX_MODES:
        raise BadInput(f"--modes must lie in 3..{fock.MAX_MODES}")
    for _ in range(args.trials):
        psi = P.protocol_input(rng, args.modes)
        out, rec = P.run_protocol(psi, branch, rng=rng)
        fid = P.fidelity(P.quartic_gate(args.modes) @ psi.amplitudes, out.amplitudes)
        worst = max(worst, abs(1 - fid))
        rows.append({"branch": rec.label(), "probability": rec.probability, "fidelity": fid})
        counts[rec.label()] = counts.get(rec.label(), 0) + 1
    ok = worst <= args.tolerance
    _emit({"rows": rows, "counts": counts, "max_fidelity_deviation": worst, "passed": ok}, args)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_code(args) -> int:
    try:
        if args.tau is not None:
            tau = [int(t) for t in args.tau.split(",")]
            if len(tau) % 2:
                raise ValueError("tau must have even length 2m")
            code = K.permutation_code(tau, len(tau) // 2)
        elif args.family == "shor-like":
            code = K.shor_like_code(args.l)
        else:
            raise ValueError("give --family shor-like --l N or --tau")
    except ValueError as exc:
        raise BadInput(str(exc)) from None
    payload = {
        "m": code.m,
        "stabilizers": [str(s) for s in code.stabilizers],
        "labels": list(code.labels),
        "logical_x": str(code.logical_x),
        "logical_y": str(code.logical_y),
    }
    if args.action == "distance":
        try:
            rep = K.code_distance(code, args.max_weight)
        except ValueError as exc:
            raise BadInput(str(exc)) from None
        except RuntimeError as exc:
            payload["error"] = str(exc)
            _emit(payload, args)
            return EXIT_FAILED
        payload.update({"distance": rep.distance, "witness": str(rep.witness), "checked": rep.checked})
    _emit(payload, args)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def flags(suppress: bool) -> argparse.ArgumentParser:
        # subcommands only override the global values when given explicitly
        kw = {"default": argparse.SUPPRESS} if suppress else {}
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--seed", type=int, help="seed for every random stream", **(kw or {"default": 0}))
        p.add_argument("--tolerance", type=float, **(kw or {"default": 1e-10}))
        p.add_argument("--json", action="store_true", help="compact single-line JSON", **kw)
        return p

    common = flags(suppress=True)
    parser = argparse.ArgumentParser(
        prog="fermigates", parents=[flags(suppress=False)], description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transpile", parents=[common], help="transpile a circuit JSON file")
    p.add_argument("input")
    p.add_argument("--encoding", choices=E.ENCODING_NAMES, required=True)
    p.add_argument("--out")
    p.add_argument("--verify", action="store_true", help="dense commutation-square check")
    p.set_defaults(func=cmd_transpile)

    p = sub.add_parser("simulate", parents=[common], help="run a circuit on a basis state")
    p.add_argument("input_circuit")
    p.add_argument("--input", help="occupations/bits, index 0 first (default all zero)")
    p.add_argument("--unitary", action="store_true", help="also emit the dense unitary")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", parents=[common], help="run invariant suites")
    p.add_argument("--suite", choices=V.SUITE_NAMES + ("all",), default="all")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--long", action="store_true", help="include the l=4 distance search")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("superfast", parents=[common], help="graph edge-qubit encoding")
    p.add_argument("action", choices=("stabilizers", "dim", "transpile", "vacuum"))
    p.add_argument("graph")
    p.add_argument("--edge", type=int, nargs=2, metavar=("J", "K"))
    p.add_argument("--gate", default="hop")
    p.add_argument("--params", nargs="*", default=["0.7853981633974483"])
    p.add_argument("--dense", action="store_true", help="include the dense vacuum state")
    p.set_defaults(func=cmd_superfast)

    p = sub.add_parser("protocol", parents=[common], help="measurement-based quartic gate")
    p.add_argument("action", choices=("run",))
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--modes", type=int, default=4)
    p.add_argument("--force-branch")
    p.set_defaults(func=cmd_protocol)

    p = sub.add_parser("code", parents=[common], help="Majorana-pair codes")
    p.add_argument("action", choices=("distance", "stabilizers"))
    p.add_argument("--family", choices=("shor-like",))
    p.add_argument("--l", type=int, default=3)
    p.add_argument("--tau", help="comma-separated permutation of 0..2m-1")
    p.add_argument("--max-weight", type=int, default=4)
    p.set_defaults(func=cmd_code)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BadInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (Inconsistent, SF.InconsistentStabilizers) as exc:
        print(f"inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
