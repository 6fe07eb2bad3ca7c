"""Dense statevector engine over the qubit occupation basis.

Qubit ``p`` is bit ``p`` of the basis integer (little-endian), so the basis
state ``|n_{r-1} ... n_1 n_0>`` lives at index ``sum(n_p << p)``.

Pauli strings are stored in symplectic form: an X-mask and a Z-mask, with
``Y = iXZ`` on a qubit where both bits are set.  A string with masks
``(x, z)`` and ``k`` Y letters therefore acts as ``i**k X^x Z^z``.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

MAX_QUBITS = 24
MERGE_TOL = 1e-14

_PHASES = (1.0 + 0j, 1j, -1.0 + 0j, -1j)


def _popcount(n: int) -> int:
    return bin(n).count("1")


@lru_cache(maxsize=32)
def _indices(r: int) -> np.ndarray:
    return np.arange(1 << r, dtype=np.int64)


def _compute_parity_signs(r: int, mask: int) -> np.ndarray:
    return 1.0 - 2.0 * (np.bitwise_count(_indices(r) & mask) & 1)


_cached_parity_signs = lru_cache(maxsize=4096)(_compute_parity_signs)


def _parity_signs(r: int, mask: int) -> np.ndarray:
    """(-1)**popcount(b & mask) for every basis index b."""
    # caching pays off only while the tables stay small
    if r <= 12:
        return _cached_parity_signs(r, mask)
    return _compute_parity_signs(r, mask)


def _check_width(r: int) -> None:
    if not 0 <= r <= MAX_QUBITS:
        raise ValueError(f"number of qubits must be in [0, {MAX_QUBITS}], got {r}")


class StateVector:
    """Dense vector of ``2**num_qubits`` complex amplitudes.

    Not required to be normalized; intermediate vectors such as ``H|psi>``
    share the type.
    """

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, num_qubits: int, amplitudes: np.ndarray) -> None:
        _check_width(num_qubits)
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        if amplitudes.shape != (1 << num_qubits,):
            raise ValueError(
                f"expected {1 << num_qubits} amplitudes for {num_qubits} qubits, "
                f"got shape {amplitudes.shape}"
            )
        self.num_qubits = num_qubits
        self.amplitudes = amplitudes

    def copy(self) -> StateVector:
        return StateVector(self.num_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> StateVector:
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.num_qubits, self.amplitudes / n)

    def number_moments(self) -> tuple[float, float]:
        """Mean and variance of the total occupation number."""
        prob = np.abs(self.amplitudes) ** 2
        total = prob.sum()
        counts = _occupation_counts(self.num_qubits)
        mean = float(prob @ counts / total)
        var = float(prob @ (counts - mean) ** 2 / total)
        return mean, var

    def __repr__(self) -> str:
        return f"StateVector(num_qubits={self.num_qubits}, norm={self.norm():.12g})"


@lru_cache(maxsize=32)
def _occupation_counts(r: int) -> np.ndarray:
    idx = _indices(r)
    counts = np.zeros(1 << r)
    for p in range(r):
        counts += (idx >> p) & 1
    return counts


@dataclass(frozen=True)
class PauliString:
    """A coefficient times a tensor product of I/X/Y/Z letters."""

    num_qubits: int
    x: int
    z: int
    coefficient: complex = 1.0

    def __post_init__(self) -> None:
        _check_width(self.num_qubits)
        full = (1 << self.num_qubits) - 1
        if self.x & ~full or self.z & ~full:
            raise ValueError("Pauli masks exceed the register width")

    @classmethod
    def from_letters(cls, letters: str, coefficient: complex = 1.0) -> PauliString:
        """Build from a per-qubit string where ``letters[p]`` acts on qubit ``p``."""
        x = z = 0
        for p, c in enumerate(letters.upper()):
            if c in "XY":
                x |= 1 << p
            if c in "ZY":
                z |= 1 << p
            if c not in "IXYZ":
                raise ValueError(f"invalid Pauli letter {c!r}")
        return cls(len(letters), x, z, complex(coefficient))

    @classmethod
    def from_sparse(
        cls, num_qubits: int, ops: Mapping[int, str], coefficient: complex = 1.0
    ) -> PauliString:
        letters = ["I"] * num_qubits
        for p, c in ops.items():
            if not 0 <= p < num_qubits:
                raise ValueError(f"qubit index {p} out of range for {num_qubits} qubits")
            letters[p] = c
        return cls.from_letters("".join(letters), coefficient)

    @classmethod
    def identity(cls, num_qubits: int, coefficient: complex = 1.0) -> PauliString:
        return cls(num_qubits, 0, 0, complex(coefficient))

    @property
    def letters(self) -> str:
        out = []
        for p in range(self.num_qubits):
            xb = (self.x >> p) & 1
            zb = (self.z >> p) & 1
            out.append("IXZY"[xb | (zb << 1)])
        return "".join(out)

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    @property
    def num_y(self) -> int:
        return _popcount(self.x & self.z)

    @property
    def key(self) -> tuple[int, int]:
        return (self.x, self.z)

    def with_coefficient(self, coefficient: complex) -> PauliString:
        return PauliString(self.num_qubits, self.x, self.z, complex(coefficient))

    def __mul__(self, other: PauliString | complex) -> PauliString:
        if not isinstance(other, PauliString):
            return self.with_coefficient(self.coefficient * other)
        if other.num_qubits != self.num_qubits:
            raise ValueError("Pauli strings act on different register widths")
        # i^a X^x1 Z^z1 * i^b X^x2 Z^z2 = i^(a+b) (-1)^|z1&x2| X^(x1^x2) Z^(z1^z2)
        x = self.x ^ other.x
        z = self.z ^ other.z
        k = self.num_y + other.num_y - _popcount(x & z) + 2 * _popcount(self.z & other.x)
        return PauliString(
            self.num_qubits, x, z, _PHASES[k % 4] * self.coefficient * other.coefficient
        )

    def __rmul__(self, scalar: complex) -> PauliString:
        return self.with_coefficient(self.coefficient * scalar)

    def commutes_with(self, other: PauliString) -> bool:
        return (_popcount(self.x & other.z) + _popcount(self.z & other.x)) % 2 == 0

    def __str__(self) -> str:
        ops = " ".join(f"{c}{p}" for p, c in enumerate(self.letters) if c != "I")
        return f"({self.coefficient:.6g}) {ops or 'I'}"


class PauliSum:
    """Linear combination of Pauli strings with merged, de-duplicated terms.

    Terms are keyed by their ``(x, z)`` masks; coefficients whose magnitude
    falls below ``MERGE_TOL`` are dropped on :meth:`simplify`.
    """

    __slots__ = ("num_qubits", "_terms")

    def __init__(self, num_qubits: int, terms: Iterable[PauliString] = ()) -> None:
        _check_width(num_qubits)
        self.num_qubits = num_qubits
        self._terms: dict[tuple[int, int], complex] = {}
        for t in terms:
            self.add_term(t)
        self.simplify()

    @classmethod
    def identity(cls, num_qubits: int, coefficient: complex = 1.0) -> PauliSum:
        return cls(num_qubits, [PauliString.identity(num_qubits, coefficient)])

    @classmethod
    def _from_dict(cls, num_qubits: int, terms: dict[tuple[int, int], complex]) -> PauliSum:
        out = cls(num_qubits)
        out._terms = terms
        return out.simplify()

    def add_term(self, term: PauliString) -> None:
        if term.num_qubits != self.num_qubits:
            raise ValueError("term width does not match the sum")
        self._terms[term.key] = self._terms.get(term.key, 0j) + term.coefficient

    def simplify(self, tol: float = MERGE_TOL) -> PauliSum:
        self._terms = {k: c for k, c in self._terms.items() if abs(c) >= tol}
        return self

    @property
    def terms(self) -> list[PauliString]:
        return [PauliString(self.num_qubits, x, z, c) for (x, z), c in self._terms.items()]

    def items(self) -> Iterator[tuple[tuple[int, int], complex]]:
        return iter(self._terms.items())

    def coefficient(self, letters: str) -> complex:
        p = PauliString.from_letters(letters)
        return self._terms.get(p.key, 0j)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[PauliString]:
        return iter(self.terms)

    def __add__(self, other: PauliSum) -> PauliSum:
        if other.num_qubits != self.num_qubits:
            raise ValueError("sums act on different register widths")
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0j) + c
        return PauliSum._from_dict(self.num_qubits, out)

    def __neg__(self) -> PauliSum:
        return PauliSum._from_dict(self.num_qubits, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: PauliSum) -> PauliSum:
        return self + (-other)

    def __mul__(self, other: PauliSum | complex) -> PauliSum:
        if not isinstance(other, PauliSum):
            return PauliSum._from_dict(
                self.num_qubits, {k: c * other for k, c in self._terms.items()}
            )
        if other.num_qubits != self.num_qubits:
            raise ValueError("sums act on different register widths")
        out: dict[tuple[int, int], complex] = {}
        for (x1, z1), c1 in self._terms.items():
            ny1 = _popcount(x1 & z1)
            for (x2, z2), c2 in other._terms.items():
                x, z = x1 ^ x2, z1 ^ z2
                k = ny1 + _popcount(x2 & z2) - _popcount(x & z) + 2 * _popcount(z1 & x2)
                out[(x, z)] = out.get((x, z), 0j) + _PHASES[k % 4] * c1 * c2
        return PauliSum._from_dict(self.num_qubits, out)

    def __rmul__(self, scalar: complex) -> PauliSum:
        return self * scalar

    def dagger(self) -> PauliSum:
        return PauliSum._from_dict(
            self.num_qubits, {k: c.conjugate() for k, c in self._terms.items()}
        )

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return all(abs(c.imag) <= tol for c in self._terms.values())

    def is_anti_hermitian(self, tol: float = 1e-12) -> bool:
        return all(abs(c.real) <= tol for c in self._terms.values())

    def equals(self, other: PauliSum, tol: float = 1e-12) -> bool:
        if other.num_qubits != self.num_qubits:
            return False
        keys = set(self._terms) | set(other._terms)
        return all(
            abs(self._terms.get(k, 0j) - other._terms.get(k, 0j)) <= tol for k in keys
        )

    def to_dense(self) -> np.ndarray:
        """Explicit matrix; intended for small registers in tests and debugging."""
        dim = 1 << self.num_qubits
        mat = np.zeros((dim, dim), dtype=np.complex128)
        idx = _indices(self.num_qubits)
        for (x, z), c in self._terms.items():
            phase = _PHASES[_popcount(x & z) % 4] * c
            mat[idx ^ x, idx] += phase * _parity_signs(self.num_qubits, z)
        return mat

    def __repr__(self) -> str:
        return f"PauliSum(num_qubits={self.num_qubits}, terms={len(self)})"

    def __str__(self) -> str:
        return "\n".join(str(t) for t in sorted(self.terms, key=lambda t: t.letters))


def new_basis_state(r: int, occupied: Iterable[int]) -> StateVector:
    """Computational basis state with the given qubits set to ``|1>``."""
    _check_width(r)
    occupied = list(occupied)
    if len(set(occupied)) != len(occupied):
        raise ValueError(f"duplicate qubit index in {occupied}")
    index = 0
    for j in occupied:
        if not 0 <= j < r:
            raise ValueError(f"qubit index {j} out of range for {r} qubits")
        index |= 1 << j
    amps = np.zeros(1 << r, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(r, amps)


def _check_match(s: StateVector, r: int) -> None:
    if s.num_qubits != r:
        raise ValueError(f"width mismatch: state has {s.num_qubits} qubits, operator {r}")


def _apply_masks(amps: np.ndarray, r: int, x: int, z: int, coeff: complex) -> np.ndarray:
    phase = _PHASES[_popcount(x & z) % 4] * coeff
    out = np.empty_like(amps)
    out[_indices(r) ^ x] = phase * _parity_signs(r, z) * amps
    return out


def apply_pauli_string(s: StateVector, p: PauliString) -> StateVector:
    """Return ``P|s>`` including the string's coefficient."""
    _check_match(s, p.num_qubits)
    return StateVector(s.num_qubits, _apply_masks(s.amplitudes, s.num_qubits, p.x, p.z, p.coefficient))


def apply_pauli_sum(s: StateVector, h: PauliSum) -> StateVector:
    _check_match(s, h.num_qubits)
    out = np.zeros_like(s.amplitudes)
    for (x, z), c in h.items():
        out += _apply_masks(s.amplitudes, s.num_qubits, x, z, c)
    return StateVector(s.num_qubits, out)


def apply_pauli_rotation(s: StateVector, p: PauliString, theta: float) -> StateVector:
    """Return ``exp(i theta P)|s> = cos(theta)|s> + i sin(theta) P|s>``.

    ``P`` must carry coefficient exactly +1 so that ``P**2 = I``.
    """
    if p.coefficient != 1:
        raise ValueError(f"rotation generator must have unit coefficient, got {p.coefficient}")
    _check_match(s, p.num_qubits)
    rotated = _apply_masks(s.amplitudes, s.num_qubits, p.x, p.z, 1.0)
    return StateVector(s.num_qubits, np.cos(theta) * s.amplitudes + 1j * np.sin(theta) * rotated)


def inner(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``, conjugate-linear in the first argument."""
    _check_match(a, b.num_qubits)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def expectation(s: StateVector, h: PauliSum) -> complex:
    return inner(s, apply_pauli_sum(s, h))


def dump_amplitudes(s: StateVector, path: str | Path, tol: float = 0.0) -> None:
    """Write ``index real imag`` lines for every amplitude with modulus above ``tol``."""
    with open(path, "w") as fh:
        for i in np.flatnonzero(np.abs(s.amplitudes) > tol):
            a = s.amplitudes[i]
            fh.write(f"{i} {a.real:.17e} {a.imag:.17e}\n")


def load_amplitudes(path: str | Path, num_qubits: int) -> StateVector:
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                i, re, im = line.split()
                amps[int(i)] = complex(float(re), float(im))
            except (ValueError, IndexError) as err:
                raise ValueError(f"{path}:{lineno}: malformed amplitude line {line!r}") from err
    return StateVector(num_qubits, amps)
