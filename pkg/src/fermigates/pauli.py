"""Pauli strings with exact fourth-root-of-unity phases.

A :class:`PauliString` stores ``i**phase * prod_q X_q**x_q Z_q**z_q`` with the
X factor to the left of the Z factor on every qubit, so ``Y = i X Z`` is
stored as ``x = z = 1`` with one extra power of ``i``.  Bit ``q`` of a mask
refers to qubit ``q``, matching the mode packing of :mod:`fermigates.fock`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_DENSE_QUBITS = 14

_PHASE_TEXT = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_TEXT_PHASE = {"+": 0, "": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}


@dataclass(frozen=True)
class PauliString:
    n: int
    phase: int = 0
    xmask: int = 0
    zmask: int = 0

    def __post_init__(self):
        object.__setattr__(self, "phase", self.phase % 4)
        full = (1 << self.n) - 1
        if self.xmask & ~full or self.zmask & ~full:
            raise ValueError(f"masks exceed {self.n} qubits")

    # -- constructors -------------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliString":
        return cls.from_letters(n, {qubit: letter})

    @classmethod
    def from_letters(cls, n: int, letters: dict, sign: int = 0) -> "PauliString":
        """Build ``i**sign * prod sigma^letter_q`` (Hermitian letters)."""
        x = z = 0
        phase = sign
        for q, letter in letters.items():
            if not 0 <= q < n:
                raise IndexError(f"qubit {q} out of range for n={n}")
            letter = letter.upper()
            if letter in ("X", "Y"):
                x |= 1 << q
            if letter in ("Z", "Y"):
                z |= 1 << q
            if letter == "Y":
                phase += 1
            elif letter not in ("X", "Z", "I", "."):
                raise ValueError(f"unknown Pauli letter {letter!r}")
        return cls(n, phase, x, z)

    @classmethod
    def parse(cls, text: str) -> "PauliString":
        """Inverse of :meth:`__str__`, e.g. ``"-i XZ.Y"`` (qubit 0 leftmost)."""
        text = text.strip()
        if " " in text:
            head, body = text.split(None, 1)
        elif text[:1] in "+-i":
            head, body = "", text
            while body[:1] in ("+", "-", "i"):
                head, body = head + body[0], body[1:]
        else:
            head, body = "", text
        if head not in _TEXT_PHASE:
            raise ValueError(f"bad phase prefix {head!r}")
        letters = {q: ch for q, ch in enumerate(body) if ch not in ".I"}
        return cls.from_letters(len(body), letters, _TEXT_PHASE[head])

    # -- properties ---------------------------------------------------------
    @property
    def ymask(self) -> int:
        return self.xmask & self.zmask

    @property
    def support(self) -> int:
        return self.xmask | self.zmask

    @property
    def weight(self) -> int:
        return self.support.bit_count()

    @property
    def sign(self) -> int:
        """Power of ``i`` in front of the product of Hermitian letters."""
        return (self.phase - self.ymask.bit_count()) % 4

    @property
    def is_hermitian(self) -> bool:
        return self.sign % 2 == 0

    def letter(self, q: int) -> str:
        return "IXZY"[((self.xmask >> q) & 1) | (((self.zmask >> q) & 1) << 1)]

    def letters(self) -> str:
        return "".join(self.letter(q) for q in range(self.n))

    def is_identity_up_to_phase(self) -> bool:
        return self.support == 0

    def symplectic(self) -> int:
        """x | z << n as a single integer bit vector."""
        return self.xmask | (self.zmask << self.n)

    # -- algebra ------------------------------------------------------------
    def _check(self, other: "PauliString") -> None:
        if self.n != other.n:
            raise ValueError(f"qubit count mismatch: {self.n} vs {other.n}")

    def __mul__(self, other):
        if isinstance(other, PauliString):
            return multiply(self, other)
        return self.scaled(_phase_of(other))

    def __rmul__(self, other):
        return self.scaled(_phase_of(other))

    def __neg__(self) -> "PauliString":
        return self.scaled(2)

    def scaled(self, k: int) -> "PauliString":
        """Multiply by ``i**k``."""
        return PauliString(self.n, self.phase + k, self.xmask, self.zmask)

    def dagger(self) -> "PauliString":
        # (X^x Z^z)^dag = Z^z X^x = (-1)^{x.z} X^x Z^z
        return PauliString(
            self.n, -self.phase + 2 * self.ymask.bit_count(), self.xmask, self.zmask
        )

    def commutes(self, other: "PauliString") -> bool:
        return commutes(self, other)

    def embed(self, n: int, qubits: Sequence[int]) -> "PauliString":
        """Place this string on ``qubits`` of an ``n``-qubit register."""
        x = z = 0
        for q_local, q in enumerate(qubits):
            x |= ((self.xmask >> q_local) & 1) << q
            z |= ((self.zmask >> q_local) & 1) << q
        return PauliString(n, self.phase, x, z)

    def to_dense(self) -> np.ndarray:
        return to_dense(self)

    def __str__(self) -> str:
        body = "".join("." if ch == "I" else ch for ch in self.letters())
        return f"{_PHASE_TEXT[self.sign]} {body}"

    # -- Clifford conjugation ----------------------------------------------
    def conjugate(self, gate: str, targets: Sequence[int]) -> "PauliString":
        """Return ``G P G^dagger`` for an elementary Clifford gate ``G``."""
        phase, x, z = self.phase, self.xmask, self.zmask
        if gate == "H":
            (q,) = targets
            xb, zb = (x >> q) & 1, (z >> q) & 1
            phase += 2 * (xb & zb)
            x = (x & ~(1 << q)) | (zb << q)
            z = (z & ~(1 << q)) | (xb << q)
        elif gate == "S":
            (q,) = targets
            xb = (x >> q) & 1
            phase += xb
            z ^= xb << q
        elif gate == "Sdg":
            (q,) = targets
            xb = (x >> q) & 1
            # S^dag X S = -Y = -i X Z
            phase += 3 * xb
            z ^= xb << q
        elif gate == "X":
            (q,) = targets
            phase += 2 * ((z >> q) & 1)
        elif gate == "Z":
            (q,) = targets
            phase += 2 * ((x >> q) & 1)
        elif gate == "Y":
            (q,) = targets
            phase += 2 * (((x >> q) ^ (z >> q)) & 1)
        elif gate == "CX":
            c, t = targets
            x ^= ((x >> c) & 1) << t
            z ^= ((z >> t) & 1) << c
        elif gate in ("CZ", "D"):
            a, b = targets
            # CZ = H_b CX H_b
            p = self.conjugate("H", [b]).conjugate("CX", [a, b]).conjugate("H", [b])
            return p
        elif gate == "SWAP":
            a, b = targets
            for mask_name in ("x", "z"):
                mask = x if mask_name == "x" else z
                ba, bb = (mask >> a) & 1, (mask >> b) & 1
                mask = (mask & ~((1 << a) | (1 << b))) | (bb << a) | (ba << b)
                if mask_name == "x":
                    x = mask
                else:
                    z = mask
        else:
            raise ValueError(f"no Clifford conjugation rule for gate {gate!r}")
        return PauliString(self.n, phase, x, z)


def _phase_of(c) -> int:
    for k, val in enumerate((1, 1j, -1, -1j)):
        if c == val:
            return k
    raise ValueError(f"scalar {c!r} is not a fourth root of unity")


def multiply(p: PauliString, q: PauliString) -> PauliString:
    p._check(q)
    # X^x1 Z^z1 X^x2 Z^z2 = (-1)^{z1.x2} X^{x1+x2} Z^{z1+z2}
    phase = p.phase + q.phase + 2 * (p.zmask & q.xmask).bit_count()
    return PauliString(p.n, phase, p.xmask ^ q.xmask, p.zmask ^ q.zmask)


def product(strings: Iterable[PauliString], n: int) -> PauliString:
    out = PauliString.identity(n)
    for s in strings:
        out = multiply(out, s)
    return out


def symplectic_form(p: PauliString, q: PauliString) -> int:
    return ((p.xmask & q.zmask).bit_count() + (p.zmask & q.xmask).bit_count()) & 1


def commutes(p: PauliString, q: PauliString) -> bool:
    p._check(q)
    return symplectic_form(p, q) == 0


def to_dense(p: PauliString) -> np.ndarray:
    if p.n > MAX_DENSE_QUBITS:
        raise ValueError(f"dense realization capped at {MAX_DENSE_QUBITS} qubits")
    dim = 1 << p.n
    idx = np.arange(dim)
    # X^x Z^z |b> = (-1)^{z.b} |b ^ x>
    zsign = np.ones(dim)
    z = p.zmask
    q = 0
    while z:
        if z & 1:
            zsign *= 1 - 2 * ((idx >> q) & 1)
        z >>= 1
        q += 1
    mat = np.zeros((dim, dim), dtype=complex)
    mat[idx ^ p.xmask, idx] = (1j ** p.phase) * zsign
    return mat


def majorana(j: int, m: int) -> PauliString:
    """Jordan-Wigner Majorana operator c_j on m modes.

    c_{2k} = X_k Z_{k-1} ... Z_0 and c_{2k+1} = Y_k Z_{k-1} ... Z_0.
    """
    if not 0 <= j < 2 * m:
        raise IndexError(f"Majorana index {j} out of range for m={m}")
    k, odd = divmod(j, 2)
    below = (1 << k) - 1
    if odd:
        return PauliString(m, 1, 1 << k, below | (1 << k))
    return PauliString(m, 0, 1 << k, below)


def majorana_product(indices: Sequence[int], m: int) -> PauliString:
    return product((majorana(j, m) for j in indices), m)


def parity_string(n: int) -> PauliString:
    return PauliString(n, 0, 0, (1 << n) - 1)


def gf2_rank(vectors: Iterable[int]) -> int:
    return len(gf2_basis(vectors))


def gf2_basis(vectors: Iterable[int]) -> dict:
    """Reduced basis keyed by pivot bit; reduce a vector with :func:`gf2_reduce`."""
    basis: dict[int, int] = {}
    for v in vectors:
        v = gf2_reduce(v, basis)
        if v:
            pivot = v.bit_length() - 1
            basis[pivot] = v
    return basis


def gf2_reduce(v: int, basis: dict) -> int:
    while v:
        pivot = v.bit_length() - 1
        if pivot not in basis:
            return v
        v ^= basis[pivot]
    return 0
