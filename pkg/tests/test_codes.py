import itertools

import pytest
from hypothesis import given, settings, strategies as st

from fermigates.codes import (
    code_distance,
    cyclic_relabel,
    is_nontrivial_logical,
    pauli_form_y,
    pauli_form_z,
    permutation_code,
    render_grid,
    shor_like_code,
)
from fermigates.pauli import PauliString, commutes
from fermigates.verify import EXPECTED_GRIDS_L3


def test_identity_permutation_two_qubits():
    code = permutation_code(range(4), 2)
    assert [str(s) for s in code.stabilizers] == ["+ .Z"]
    assert str(code.logical_x) == "+ X." and str(code.logical_y) == "+ Y."


def test_unencoded_qubit():
    code = permutation_code([0, 1], 1)
    assert code.stabilizers == ()
    assert str(code.logical_x) == "+ X" and str(code.logical_y) == "+ Y"
    rep = code_distance(code)
    assert rep.distance == 1 and str(rep.witness) == "+ X"


def test_bad_permutation():
    with pytest.raises(ValueError):
        permutation_code([0, 0, 1, 2], 2)


@given(st.integers(1, 5).flatmap(lambda m: st.permutations(range(2 * m))))
@settings(max_examples=50, deadline=None)
def test_permutation_codes_are_valid(tau):
    m = len(tau) // 2
    code = permutation_code(tau, m)
    assert code.check() == []
    assert len(code.stabilizers) == m - 1
    assert code.logical_x * code.logical_y == -(code.logical_y * code.logical_x)


def test_shor_like_l2():
    code = shor_like_code(2)
    forms = {lab: str(s) for lab, s in zip(code.labels, code.stabilizers)}
    assert forms == {"Z_0": "+ XZZX", "Y_0,0": "+ YY..", "Y_1,0": "+ ..YY"}


@pytest.mark.parametrize("l", [2, 3, 4, 5])
def test_shor_like_pauli_forms(l):
    code = shor_like_code(l)
    assert code.check() == []
    assert code.m == l * l and len(code.stabilizers) == l * l - 1
    for lab, s in zip(code.labels, code.stabilizers):
        kind, idx = lab.split("_")
        if kind == "Z":
            assert s == pauli_form_z(int(idx), l)
        else:
            k, j = map(int, idx.split(","))
            assert s == pauli_form_y(k, j, l)


def test_l3_grids():
    code = shor_like_code(3)
    for lab, s in zip(code.labels, code.stabilizers):
        assert render_grid(s, 3) == EXPECTED_GRIDS_L3[lab]


def test_l3_examples():
    assert render_grid(pauli_form_z(0, 3), 3) == "X Z Z\nZ Z X\nI I I"
    assert str(pauli_form_y(0, 0, 3)) == "+ YY......."


def test_render_size_check():
    with pytest.raises(ValueError):
        render_grid(PauliString.identity(4), 3)


def test_family_start():
    with pytest.raises(ValueError):
        shor_like_code(1)


@pytest.mark.parametrize("l", [2, 3])
def test_cyclic_relabel_gives_shor_pairs(l):
    code = shor_like_code(l)
    for lab, s in zip(code.labels, code.stabilizers):
        if lab.startswith("Y"):
            r = cyclic_relabel(s)
            assert r.weight == 2 and set(r.letters().replace("I", "")) == {"Z"}
            q = [i for i, ch in enumerate(r.letters()) if ch != "I"]
            assert q[1] == q[0] + 1 and q[0] // l == q[1] // l


def _check_witness(code, rep):
    w = rep.witness
    assert w.weight == rep.distance
    assert all(commutes(w, s) for s in code.stabilizers)
    assert is_nontrivial_logical(w, list(code.stabilizers))
    # nothing lighter works
    m = code.m
    for wt in range(1, rep.distance):
        for sup in itertools.combinations(range(m), wt):
            for letters in itertools.product("XYZ", repeat=wt):
                p = PauliString.from_letters(m, dict(zip(sup, letters)))
                assert not is_nontrivial_logical(p, list(code.stabilizers))


@pytest.mark.parametrize("l", [2, 3])
def test_shor_like_distance(l):
    code = shor_like_code(l)
    rep = code_distance(code, max_weight=4)
    assert rep.distance == l
    _check_witness(code, rep)


def test_distance_search_exhaustion():
    with pytest.raises(RuntimeError):
        code_distance(shor_like_code(3), max_weight=2)
    with pytest.raises(ValueError):
        code_distance(shor_like_code(3), max_weight=6)


def test_logicals_are_nontrivial():
    code = shor_like_code(3)
    assert is_nontrivial_logical(code.logical_x, list(code.stabilizers))
    assert is_nontrivial_logical(code.logical_y, list(code.stabilizers))
    assert not is_nontrivial_logical(code.stabilizers[0], list(code.stabilizers))


@pytest.mark.long
def test_shor_like_distance_l4():
    code = shor_like_code(4)
    rep = code_distance(code, max_weight=4)
    assert rep.distance == 4
    w = rep.witness
    assert w.weight == 4 and is_nontrivial_logical(w, list(code.stabilizers))
