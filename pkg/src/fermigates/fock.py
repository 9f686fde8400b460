"""Dense Fock-space simulator for a register of local fermionic modes.

Basis vectors are packed into integers with bit ``s`` holding the occupation
number of mode ``s`` (mode 0 is the least significant bit).  The sign
convention is the one obtained by ordering creation operators by mode index,
so ``a_j`` picks up ``(-1)**(n_0 + ... + n_{j-1})``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_MODES = 14
PARITY_TOL = 1e-10


def popcount(x):
    """Popcount that works on python ints and integer numpy arrays."""
    if isinstance(x, (int, np.integer)):
        return int(x).bit_count()
    x = np.asarray(x, dtype=np.int64)
    out = np.zeros(x.shape, dtype=np.int64)
    while np.any(x):
        out += x & 1
        x = x >> 1
    return out


def parity_diagonal(m: int) -> np.ndarray:
    """Diagonal of the global parity operator prod_j sigma^z_j."""
    idx = np.arange(1 << m)
    return 1 - 2 * (popcount(idx) & 1)


def _check_width(m: int) -> None:
    if m < 1:
        raise ValueError(f"mode count must be >= 1, got {m}")
    if m > MAX_MODES:
        raise ValueError(f"dense simulation capped at {MAX_MODES} modes, got {m}")


@dataclass(frozen=True, eq=False)
class FockVector:
    """Amplitudes over the occupation-number basis of ``m`` modes."""

    m: int
    amplitudes: np.ndarray

    def __post_init__(self):
        _check_width(self.m)
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (1 << self.m,):
            raise ValueError(
                f"expected {1 << self.m} amplitudes for m={self.m}, got shape {amps.shape}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, occupations: Sequence[int]) -> "FockVector":
        """|n_0, ..., n_{m-1}>."""
        m = len(occupations)
        amps = np.zeros(1 << m, dtype=complex)
        amps[occupation_index(occupations)] = 1.0
        return cls(m, amps)

    @classmethod
    def vacuum(cls, m: int) -> "FockVector":
        return cls.basis([0] * m)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "FockVector":
        return FockVector(self.m, self.amplitudes / self.norm())

    def __add__(self, other: "FockVector") -> "FockVector":
        if other.m != self.m:
            raise ValueError("mode count mismatch")
        return FockVector(self.m, self.amplitudes + other.amplitudes)

    def __rmul__(self, c) -> "FockVector":
        return FockVector(self.m, c * self.amplitudes)

    def allclose(self, other: "FockVector", atol: float = 1e-10) -> bool:
        return self.m == other.m and np.allclose(self.amplitudes, other.amplitudes, atol=atol)


def occupation_index(occupations: Sequence[int]) -> int:
    index = 0
    for s, n in enumerate(occupations):
        if n not in (0, 1):
            raise ValueError(f"occupation numbers must be 0 or 1, got {n}")
        index |= n << s
    return index


def index_occupations(index: int, m: int) -> list[int]:
    return [(index >> s) & 1 for s in range(m)]


def _sign_below(idx: np.ndarray, j: int) -> np.ndarray:
    return 1 - 2 * (popcount(idx & ((1 << j) - 1)) & 1)


def ladder_matrix(j: int, m: int, dagger: bool = False) -> np.ndarray:
    """Dense matrix of ``a_j`` (or ``a_j^dagger``) on ``m`` modes; entries are 0/+-1."""
    _check_width(m)
    if not 0 <= j < m:
        raise IndexError(f"mode {j} out of range for m={m}")
    dim = 1 << m
    idx = np.arange(dim)
    bit = 1 << j
    src = idx[(idx & bit) == 0] if dagger else idx[(idx & bit) != 0]
    mat = np.zeros((dim, dim))
    mat[src ^ bit, src] = _sign_below(src, j)
    return mat


def apply_ladder(v: FockVector, j: int, dagger: bool = False) -> FockVector:
    """Return ``a_j v`` or ``a_j^dagger v``.  Killed components become exact zeros."""
    if not 0 <= j < v.m:
        raise IndexError(f"mode {j} out of range for m={v.m}")
    idx = np.arange(1 << v.m)
    bit = 1 << j
    src = idx[(idx & bit) == 0] if dagger else idx[(idx & bit) != 0]
    out = np.zeros_like(v.amplitudes)
    out[src ^ bit] = _sign_below(src, j) * v.amplitudes[src]
    return FockVector(v.m, out)


@dataclass(frozen=True)
class LadderPolynomial:
    """Linear combination of ordered products of ladder operators.

    Each term is ``(coefficient, ((mode, dagger), ...))``; factors are written
    left to right as in the operator product, so the last factor acts first.
    """

    terms: tuple = ()

    @classmethod
    def ladder(cls, j: int, dagger: bool = False) -> "LadderPolynomial":
        return cls(((1.0, ((j, dagger),)),))

    @classmethod
    def identity(cls, c: complex = 1.0) -> "LadderPolynomial":
        return cls(((c, ()),))

    @classmethod
    def number(cls, j: int) -> "LadderPolynomial":
        return cls(((1.0, ((j, True), (j, False))),))

    @property
    def is_physical(self) -> bool:
        return all(len(factors) % 2 == 0 for _, factors in self.terms)

    @property
    def max_mode(self) -> int:
        return max((j for _, fs in self.terms for j, _ in fs), default=-1)

    def dagger(self) -> "LadderPolynomial":
        return LadderPolynomial(
            tuple(
                (np.conj(c), tuple((j, not d) for j, d in reversed(fs)))
                for c, fs in self.terms
            )
        )

    def __add__(self, other: "LadderPolynomial") -> "LadderPolynomial":
        return LadderPolynomial(self.terms + other.terms)

    def __neg__(self) -> "LadderPolynomial":
        return (-1) * self

    def __sub__(self, other: "LadderPolynomial") -> "LadderPolynomial":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LadderPolynomial):
            return LadderPolynomial(
                tuple(
                    (c1 * c2, f1 + f2) for c1, f1 in self.terms for c2, f2 in other.terms
                )
            )
        return LadderPolynomial(tuple((other * c, fs) for c, fs in self.terms))

    def __rmul__(self, other):
        return LadderPolynomial(tuple((other * c, fs) for c, fs in self.terms))


def polynomial_to_dense(p: LadderPolynomial, m: int) -> np.ndarray:
    if p.max_mode >= m:
        raise IndexError(f"polynomial uses mode {p.max_mode} but m={m}")
    dim = 1 << m
    cache = {}
    out = np.zeros((dim, dim), dtype=complex)
    for coeff, factors in p.terms:
        term = np.eye(dim, dtype=complex)
        for j, dagger in factors:
            key = (j, dagger)
            if key not in cache:
                cache[key] = ladder_matrix(j, m, dagger)
            term = term @ cache[key]
        out += coeff * term
    return out


def is_parity_preserving(U: np.ndarray, tol: float = PARITY_TOL) -> bool:
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {U.shape}")
    dim = U.shape[0]
    p = dim.bit_length() - 1
    if 1 << p != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    par = parity_diagonal(p)
    comm = U * par[None, :] - par[:, None] * U
    return float(np.linalg.norm(comm)) < tol


def _extraction_tables(m: int, modes: Sequence[int]):
    """Index bookkeeping for moving ``modes`` to the front of the mode order.

    Returns ``(table, sign)`` where ``table[rest, local]`` is the basis index
    whose extracted modes read ``local`` (bit r <-> modes[r]) and whose other
    modes read ``rest``, and ``sign[index]`` is the fermionic sign picked up
    by extracting the modes one after another.
    """
    p = len(modes)
    idx = np.arange(1 << m)
    sign = np.ones(1 << m, dtype=np.int64)
    remaining = (1 << m) - 1
    for j in modes:
        # extracting j passes every occupied mode still in memory below it
        below = idx & remaining & ((1 << j) - 1)
        nj = (idx >> j) & 1
        sign *= 1 - 2 * (nj * (popcount(below) & 1))
        remaining &= ~(1 << j)
    others = [s for s in range(m) if s not in modes]
    rest_index = np.zeros(1 << m, dtype=np.int64)
    local_index = np.zeros(1 << m, dtype=np.int64)
    for r, s in enumerate(others):
        rest_index |= ((idx >> s) & 1) << r
    for r, s in enumerate(modes):
        local_index |= ((idx >> s) & 1) << r
    table = np.empty((1 << len(others), 1 << p), dtype=np.int64)
    table[rest_index, local_index] = idx
    return table, sign


def _check_modes(m: int, modes: Sequence[int]) -> None:
    if len(set(modes)) != len(modes):
        raise ValueError(f"duplicate modes in {tuple(modes)}")
    for j in modes:
        if not 0 <= j < m:
            raise IndexError(f"mode {j} out of range for m={m}")


def apply_local(
    amps: np.ndarray, m: int, U: np.ndarray, targets: Sequence[int], fermionic: bool
) -> np.ndarray:
    """Apply a ``2^p x 2^p`` gate to targets of an amplitude array.

    ``amps`` has shape ``(2^m,)`` or ``(2^m, k)``; the leading axis is the
    register.  With ``fermionic=True`` the targets are extracted with swap
    defect signs before the gate acts and re-inserted afterwards, which is
    the fermionic gate application; otherwise this is the plain tensor
    (qubit) application.
    """
    _check_modes(m, targets)
    U = np.asarray(U, dtype=complex)
    if U.shape != (1 << len(targets),) * 2:
        raise ValueError(f"gate shape {U.shape} does not match {len(targets)} targets")
    table, sign = _extraction_tables(m, targets)
    a = np.asarray(amps, dtype=complex)
    if fermionic:
        a = sign.reshape((-1,) + (1,) * (a.ndim - 1)) * a
    block = a[table]  # (rest, local, ...)
    block = np.einsum("ij,rj...->ri...", U, block)
    out = np.empty_like(a)
    out[table] = block
    if fermionic:
        out = sign.reshape((-1,) + (1,) * (a.ndim - 1)) * out
    return out


def apply_fermionic_application(
    v: FockVector, U: np.ndarray, modes: Sequence[int]
) -> FockVector:
    """Apply the fermionic gate application ``U[f](modes)`` to ``v``."""
    U = np.asarray(U, dtype=complex)
    if not is_parity_preserving(U):
        raise ValueError("fermionic gates must preserve parity")
    return FockVector(v.m, apply_local(v.amplitudes, v.m, U, modes, fermionic=True))


def sector_project(v: FockVector, sector: int) -> FockVector:
    if sector not in (0, 1):
        raise ValueError(f"sector must be 0 or 1, got {sector}")
    par = popcount(np.arange(1 << v.m)) & 1
    return FockVector(v.m, np.where(par == sector, v.amplitudes, 0))


def sector_projector(m: int, sector: int) -> np.ndarray:
    par = popcount(np.arange(1 << m)) & 1
    return np.diag((par == sector).astype(float))


def mode_permutation_matrix(perm: Sequence[int], m: int | None = None) -> np.ndarray:
    """Signed basis map P with ``P a_j P^dagger = a_{perm[j]}``."""
    m = len(perm) if m is None else m
    if sorted(perm) != list(range(m)):
        raise ValueError(f"{perm} is not a permutation of range({m})")
    dim = 1 << m
    P = np.zeros((dim, dim))
    for idx in range(dim):
        # |n> = prod_j (a_j^dag)^{n_j} |0>, creators in increasing j
        occupied = [perm[j] for j in range(m) if (idx >> j) & 1]
        inversions = sum(
            1 for a in range(len(occupied)) for b in range(a + 1, len(occupied))
            if occupied[a] > occupied[b]
        )
        target = sum(1 << s for s in occupied)
        P[target, idx] = -1 if inversions & 1 else 1
    return P


def random_state(m: int, rng: np.random.Generator, sector: int | None = None) -> FockVector:
    amps = rng.normal(size=1 << m) + 1j * rng.normal(size=1 << m)
    v = FockVector(m, amps)
    if sector is not None:
        v = sector_project(v, sector)
    return v.normalized()


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Gaussian matrix."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_physical_unitary(p: int, rng: np.random.Generator) -> np.ndarray:
    """Random parity-preserving unitary on p modes (independent sector blocks)."""
    dim = 1 << p
    U = np.zeros((dim, dim), dtype=complex)
    par = popcount(np.arange(dim)) & 1
    for sector in (0, 1):
        idx = np.flatnonzero(par == sector)
        U[np.ix_(idx, idx)] = random_unitary(len(idx), rng)
    return U


def basis_states(m: int) -> Iterable[FockVector]:
    for idx in range(1 << m):
        yield FockVector.basis(index_occupations(idx, m))
