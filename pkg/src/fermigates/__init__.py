"""Fermionic circuits compiled to qubits, with a dense Fock-space oracle.

Modules:

* :mod:`fermigates.fock`: occupation-number states, ladder operators, fermionic gate application
* :mod:`fermigates.pauli`: Pauli strings with exact phases, Majorana operators
* :mod:`fermigates.circuit`: circuit IR, gate library, dense evaluation, JSON
* :mod:`fermigates.encodings`: standard, tree and pair encodings
* :mod:`fermigates.superfast`: one qubit per graph edge
* :mod:`fermigates.protocols`: parity extension and the measurement-based quartic gate
* :mod:`fermigates.codes`: Majorana-pair codes and brute-force distance
"""

from .circuit import Circuit, GateApplication, GateDef, evaluate, gate, raw_gate
from .fock import FockVector, LadderPolynomial
from .pauli import PauliString, majorana

__all__ = [
    "Circuit",
    "FockVector",
    "GateApplication",
    "GateDef",
    "LadderPolynomial",
    "PauliString",
    "evaluate",
    "gate",
    "majorana",
    "raw_gate",
]

__version__ = "0.1.0"
