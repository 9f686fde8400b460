import json

import numpy as np
import pytest

from fermigates.circuit import Circuit, circuit_from_dict, circuit_to_dict, dumps, evaluate, gate
from fermigates.cli import main
from fermigates.superfast import complete_graph, path_graph, standard_graphs


def _call(capsys, *argv):
    rc = main([str(a) for a in argv])
    out = capsys.readouterr()
    return rc, (json.loads(out.out) if out.out.strip() else None), out.err


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return p


def _circuit_file(tmp_path, c, name="c.json"):
    return _write(tmp_path, name, circuit_to_dict(c))


def test_transpile_standard_count(tmp_path, capsys):
    c = Circuit.build("fermionic", 6, [(gate("hop", 0.3), (1, 5))])
    rc, out, _ = _call(capsys, "transpile", _circuit_file(tmp_path, c), "--encoding", "standard", "--verify")
    assert rc == 0
    assert out["report"]["gates"] == 2 * (5 - 1 - 1) + 1
    assert out["verify"]["passed"]


def test_transpile_empty_circuit(tmp_path, capsys):
    rc, out, _ = _call(
        capsys, "transpile", _circuit_file(tmp_path, Circuit("fermionic", 3)), "--encoding", "tree"
    )
    assert rc == 0 and out["report"]["gates"] == 0 and out["circuit"]["gates"] == []


def test_transpile_tree_single_mode(tmp_path, capsys):
    c = Circuit.build("fermionic", 8, [("fb_phase", (5,))])
    out_path = tmp_path / "out.json"
    rc, out, _ = _call(
        capsys, "transpile", _circuit_file(tmp_path, c), "--encoding", "tree", "--out", out_path, "--verify"
    )
    assert rc == 0 and out["report"]["gates"] <= 12 and out["verify"]["passed"]
    back = circuit_from_dict(json.loads(out_path.read_text()))
    assert back.kind == "qubit" and len(back) == out["report"]["gates"]


def test_transpile_pair(tmp_path, capsys):
    c = Circuit.build("qubit", 2, [("H", (0,)), ("CX", (0, 1))])
    rc, out, _ = _call(capsys, "transpile", _circuit_file(tmp_path, c), "--encoding", "pair", "--verify")
    assert rc == 0 and out["report"]["gates"] == 2 and out["verify"]["passed"]


def test_transpile_bad_input(tmp_path, capsys):
    bad = _write(tmp_path, "bad.json", {"kind": "fermionic", "width": 2, "gates": [{"name": "nope", "targets": [0]}]})
    assert _call(capsys, "transpile", bad, "--encoding", "standard")[0] == 2
    missing = tmp_path / "missing.json"
    assert _call(capsys, "transpile", missing, "--encoding", "standard")[0] == 2
    q = _circuit_file(tmp_path, Circuit("qubit", 2), "q.json")
    assert _call(capsys, "transpile", q, "--encoding", "standard")[0] == 2


def test_simulate(tmp_path, capsys):
    c = Circuit.build("fermionic", 3, [(gate("hop", np.pi / 2), (0, 2))])
    rc, out, _ = _call(capsys, "simulate", _circuit_file(tmp_path, c), "--input", "011")
    assert rc == 0
    # |0,1,1> -> i * (-1) |1,1,0>
    assert list(out["amplitudes"]) == ["110"]
    assert np.allclose(out["amplitudes"]["110"], [0, -1])
    assert _call(capsys, "simulate", _circuit_file(tmp_path, c), "--input", "01")[0] == 2


def test_schema_round_trip_through_cli(tmp_path, capsys):
    c = Circuit.build("fermionic", 4, [(gate("pair", 0.1 + 0.2j), (3, 1)), ("fb_int", (0, 2))])
    rc, out, _ = _call(capsys, "transpile", _circuit_file(tmp_path, c), "--encoding", "standard")
    emitted = circuit_from_dict(out["circuit"])
    again = circuit_from_dict(json.loads(dumps(circuit_to_dict(emitted))))
    assert np.array_equal(evaluate(again), evaluate(emitted))


def test_verify_algebra(capsys):
    rc, out, _ = _call(capsys, "verify", "--suite", "algebra")
    assert rc == 0 and out["passed"]
    assert all(c["deviation"] == 0 for c in out["suites"]["algebra"] if "deviation" in c)


def test_verify_protocol_seeded(capsys):
    rc, out, _ = _call(capsys, "verify", "--suite", "protocol", "--trials", 100, "--seed", 7, "--samples", 2000)
    assert rc == 0 and out["passed"] and out["seed"] == 7


def test_verify_unknown_suite(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "nope"])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_flags_after_subcommand(capsys):
    rc = main(["verify", "--suite", "algebra", "--json", "--seed", "3"])
    text = capsys.readouterr().out
    assert rc == 0 and "\n" not in text.strip() and json.loads(text)["seed"] == 3


def _graph_file(tmp_path, g, name="g.json"):
    return _write(tmp_path, name, g.to_dict())


def test_superfast_dim_triangle(tmp_path, capsys):
    rc, out, _ = _call(capsys, "superfast", "dim", _graph_file(tmp_path, standard_graphs()["triangle"]))
    assert rc == 0 and out["dimension"] == 4


def test_superfast_stabilizers(tmp_path, capsys):
    rc, out, _ = _call(capsys, "superfast", "stabilizers", _graph_file(tmp_path, path_graph(4)))
    assert rc == 0 and out["stabilizers"] == []
    rc, out, _ = _call(capsys, "superfast", "stabilizers", _graph_file(tmp_path, complete_graph(4)))
    assert rc == 0 and len(out["stabilizers"]) == 3


def test_superfast_transpile_and_vacuum(tmp_path, capsys):
    f = _graph_file(tmp_path, complete_graph(4))
    rc, out, _ = _call(capsys, "superfast", "transpile", f, "--edge", 0, 2, "--gate", "int_nn", "--params", "3.14")
    assert rc == 0 and out["edge"] not in (out["aux_edge"],)
    assert set(q for g in out["circuit"]["gates"] for q in g["targets"]) <= set(out["qubits"])
    rc, out, _ = _call(capsys, "superfast", "vacuum", f, "--dense")
    assert rc == 0 and "state" in out
    assert _call(capsys, "superfast", "transpile", f)[0] == 2


def test_superfast_bad_graph(tmp_path, capsys):
    f = _write(tmp_path, "g.json", {"vertices": 4, "edges": [[0, 1], [2, 3]]})
    assert _call(capsys, "superfast", "dim", f)[0] == 2


def test_protocol_run(capsys):
    rc, out, _ = _call(capsys, "protocol", "run", "--trials", 100, "--seed", 7)
    assert rc == 0 and out["passed"] and len(out["counts"]) == 4
    assert all(abs(r["probability"] - 0.25) < 1e-12 for r in out["rows"])
    rc, out, _ = _call(capsys, "protocol", "run", "--trials", 5, "--force-branch=-1,+i")
    assert rc == 0 and out["counts"] == {"z=-1,y=+i": 5}
    assert _call(capsys, "protocol", "run", "--force-branch", "2,i")[0] == 2


def test_code_commands(capsys):
    rc, out, _ = _call(capsys, "code", "distance", "--family", "shor-like", "--l", 3)
    assert rc == 0 and out["distance"] == 3
    rc, out, _ = _call(capsys, "code", "stabilizers", "--tau", "0,1,2,3")
    assert rc == 0 and out["stabilizers"] == ["+ .Z"]
    assert _call(capsys, "code", "stabilizers", "--tau", "0,0,1,2")[0] == 2
    rc, out, _ = _call(capsys, "code", "distance", "--family", "shor-like", "--l", 3, "--max-weight", 2)
    assert rc == 1 and "error" in out


def test_determinism(capsys):
    main(["verify", "--suite", "all", "--seed", "42", "--json"])
    a = capsys.readouterr().out
    main(["verify", "--suite", "all", "--seed", "42", "--json"])
    b = capsys.readouterr().out
    assert a == b
