"""Second-quantized ladder algebra and its two qubit encodings.

Fermionic operators are mapped with the Jordan-Wigner (Klein) transformation,
whose phase string runs over every qubit *below* the target::

    a+_p -> (X_p - iY_p)/2  Z_{p-1} ... Z_0
    a_p  -> (X_p + iY_p)/2  Z_{p-1} ... Z_0

Qubit-particle operators drop the phase string entirely::

    s+_p -> (X_p - iY_p)/2
    s_p  -> (X_p + iY_p)/2
"""

from __future__ import annotations

import enum
import itertools
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from qpchem.tensorspace import PauliString, PauliSum


class Statistics(str, enum.Enum):
    FERMIONIC = "fermionic"
    QUBIT = "qubit"

    @classmethod
    def parse(cls, value: str | Statistics) -> Statistics:
        if isinstance(value, Statistics):
            return value
        aliases = {"fermionic": cls.FERMIONIC, "fermion": cls.FERMIONIC,
                   "qubit": cls.QUBIT, "qubit-particle": cls.QUBIT}
        try:
            return aliases[value.lower()]
        except KeyError:
            raise ValueError(f"unknown statistics {value!r}") from None


@dataclass(frozen=True)
class LadderTerm:
    """``coefficient * c_{f0} c_{f1} ...`` where each factor is ``(index, dagger)``."""

    num_orbitals: int
    factors: tuple[tuple[int, bool], ...]
    statistics: Statistics = Statistics.FERMIONIC
    coefficient: complex = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "factors", tuple((int(p), bool(d)) for p, d in self.factors))
        object.__setattr__(self, "statistics", Statistics.parse(self.statistics))
        for p, _ in self.factors:
            if not 0 <= p < self.num_orbitals:
                raise ValueError(f"orbital index {p} out of range [0, {self.num_orbitals})")

    @classmethod
    def excitation(
        cls,
        num_orbitals: int,
        create: Sequence[int],
        annihilate: Sequence[int],
        statistics: Statistics | str = Statistics.FERMIONIC,
        coefficient: complex = 1.0,
    ) -> LadderTerm:
        """``c+_{create[0]} c+_{create[1]} ... c_{annihilate[0]} c_{annihilate[1]} ...``"""
        factors = [(p, True) for p in create] + [(p, False) for p in annihilate]
        return cls(num_orbitals, tuple(factors), Statistics.parse(statistics), coefficient)

    def is_normal_ordered(self) -> bool:
        daggers = [d for _, d in self.factors]
        if daggers != sorted(daggers, reverse=True):
            return False
        n_up = daggers.count(True)
        up = [p for p, _ in self.factors[:n_up]]
        down = [p for p, _ in self.factors[n_up:]]
        return up == sorted(set(up)) and down == sorted(set(down))

    def normal_ordered(self) -> list[LadderTerm]:
        """Equivalent sum of normal-ordered terms.

        Creators are moved left of annihilators and indices sorted ascending
        inside each group.  Fermions anticommute everywhere; qubit particles
        commute between different sites and obey ``{s_p, s+_p} = 1`` on-site.
        Terms that vanish (a repeated creator or annihilator) are dropped.
        """
        out: dict[tuple, complex] = {}
        stack = [(self.factors, complex(self.coefficient))]
        fermi = self.statistics is Statistics.FERMIONIC
        while stack:
            factors, coeff = stack.pop()
            for i in range(len(factors) - 1):
                (p, dp), (q, dq) = factors[i], factors[i + 1]
                if p == q and dp == dq:
                    break  # c c or c+ c+ on one site
                swap_needed = (not dp and dq) or (dp == dq and p > q)
                if not swap_needed:
                    continue
                swapped = factors[:i] + ((q, dq), (p, dp)) + factors[i + 2:]
                if p == q:
                    # c_p c+_p = 1 - c+_p c_p for both statistics
                    stack.append((factors[:i] + factors[i + 2:], coeff))
                    stack.append((swapped, -coeff))
                else:
                    stack.append((swapped, -coeff if fermi else coeff))
                break
            else:
                out[factors] = out.get(factors, 0j) + coeff
        return [
            LadderTerm(self.num_orbitals, f, self.statistics, c)
            for f, c in sorted(out.items())
            if c != 0
        ]

    def dagger(self) -> LadderTerm:
        factors = tuple((p, not d) for p, d in reversed(self.factors))
        return LadderTerm(self.num_orbitals, factors, self.statistics,
                          complex(self.coefficient).conjugate())


@lru_cache(maxsize=1024)
def _ladder_image(r: int, p: int, dagger: bool, statistics: Statistics) -> PauliSum:
    sign = -1.0 if dagger else 1.0
    z = (1 << p) - 1 if statistics is Statistics.FERMIONIC else 0
    # Y = iXZ on qubit p, so the X-mask alone plus the Y term carry the phase
    xp = PauliString(r, 1 << p, z, 0.5)
    yp = PauliString(r, 1 << p, z | (1 << p), sign * 0.5j)
    return PauliSum(r, [xp, yp])


def _encode(term: LadderTerm) -> PauliSum:
    r = term.num_orbitals
    out = PauliSum.identity(r, term.coefficient)
    for p, dagger in term.factors:
        out = out * _ladder_image(r, p, dagger, term.statistics)
    return out


def jordan_wigner(term: LadderTerm) -> PauliSum:
    """Pauli image of a fermionic ladder product."""
    if term.statistics is not Statistics.FERMIONIC:
        raise ValueError("jordan_wigner expects a fermionic term")
    return _encode(term)


def qubit_particle_encode(term: LadderTerm) -> PauliSum:
    """Pauli image of a qubit-particle ladder product (no phase strings)."""
    if term.statistics is not Statistics.QUBIT:
        raise ValueError("qubit_particle_encode expects a qubit-particle term")
    return _encode(term)


def encode(term: LadderTerm) -> PauliSum:
    return _encode(term)


def number_operator(r: int, orbitals: Sequence[int] | None = None) -> PauliSum:
    """Total occupation ``sum_p n_p``; identical image under both encodings."""
    orbitals = range(r) if orbitals is None else orbitals
    out = PauliSum(r)
    for p in orbitals:
        out = out + jordan_wigner(LadderTerm.excitation(r, [p], [p]))
    return out


@dataclass
class GeneratorCoefficients:
    """Coefficients ``A[p, q, s, t]`` of ``sum A c+_p c+_q c_t c_s``.

    Must be antisymmetric within each index pair and anti-Hermitian as a
    matrix over pairs: ``A[p,q,s,t] = -conj(A[s,t,p,q])``.
    """

    tensor: np.ndarray
    tol: float = field(default=1e-10, repr=False)

    def __post_init__(self) -> None:
        a = np.asarray(self.tensor, dtype=np.complex128)
        if a.ndim != 4 or len(set(a.shape)) != 1:
            raise ValueError(f"generator tensor must be r x r x r x r, got {a.shape}")
        self.tensor = a
        self.validate()

    @property
    def num_orbitals(self) -> int:
        return self.tensor.shape[0]

    def validate(self) -> None:
        a = self.tensor
        scale = max(1.0, float(np.abs(a).max(initial=0.0)))
        if np.abs(a + a.transpose(1, 0, 2, 3)).max(initial=0.0) > self.tol * scale:
            raise ValueError("generator coefficients not antisymmetric in (p, q)")
        if np.abs(a + a.transpose(0, 1, 3, 2)).max(initial=0.0) > self.tol * scale:
            raise ValueError("generator coefficients not antisymmetric in (s, t)")
        if np.abs(a + a.transpose(2, 3, 0, 1).conj()).max(initial=0.0) > self.tol * scale:
            raise ValueError("generator coefficients not anti-Hermitian")

    @classmethod
    def from_pairs(cls, r: int, values: dict[tuple[int, int, int, int], complex]) -> GeneratorCoefficients:
        """Expand folded entries ``(p, q, s, t)`` with p<q, s<t into the full tensor.

        Each entry also sets its anti-Hermitian partner ``(s, t, p, q)``.
        """
        a = np.zeros((r,) * 4, dtype=np.complex128)
        for (p, q, s, t), v in values.items():
            if not (p < q and s < t):
                raise ValueError(f"pair indices must be strictly ascending: {(p, q, s, t)}")
            for (i, j, k, l), val in (((p, q, s, t), v), ((s, t, p, q), -np.conj(v))):
                a[i, j, k, l] = val
                a[j, i, k, l] = -val
                a[i, j, l, k] = -val
                a[j, i, l, k] = val
        return cls(a)


def pair_indices(r: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(r), 2))


@lru_cache(maxsize=4096)
def pair_operator(r: int, p: int, q: int, dagger: bool, statistics: Statistics) -> PauliSum:
    # c+_p c+_q  or  c_q c_p
    if dagger:
        term = LadderTerm.excitation(r, [p, q], [], statistics)
    else:
        term = LadderTerm.excitation(r, [], [q, p], statistics)
    return _encode(term)


def generator_groups(
    coeffs: GeneratorCoefficients | np.ndarray,
    statistics: Statistics | str,
    cutoff: float = 0.0,
) -> list[tuple[tuple[int, int, int, int], PauliSum]]:
    """Split the generator image into commuting anti-Hermitian groups.

    Excitation ``(p, q, s, t)`` with ``(p, q) <= (s, t)`` stands for
    ``4 (A[pqst] c+_p c+_q c_t c_s + A[stpq] c+_s c+_t c_q c_p)`` and yields
    up to two groups: the part from ``Re A`` and the part from ``i Im A``.
    The strings inside each group commute, so exponentiating a group string
    by string is exact and conserves particle number.  Groups come back in
    lexicographic index order, real part first.
    """
    if not isinstance(coeffs, GeneratorCoefficients):
        coeffs = GeneratorCoefficients(coeffs)
    statistics = Statistics.parse(statistics)
    a = coeffs.tensor
    r = coeffs.num_orbitals
    pairs = pair_indices(r)
    out = []
    for x, (p, q) in enumerate(pairs):
        for s, t in pairs[x:]:
            combos = [((p, q), (s, t))] if (p, q) == (s, t) else [((p, q), (s, t)), ((s, t), (p, q))]
            parts = (PauliSum(r), PauliSum(r))
            for (i, j), (k, l) in combos:
                v = a[i, j, k, l]
                if abs(v) <= cutoff or v == 0:
                    continue
                op = pair_operator(r, i, j, True, statistics) * pair_operator(r, k, l, False, statistics)
                parts = (parts[0] + op * (4.0 * v.real), parts[1] + op * (4.0j * v.imag))
            for part in parts:
                part = part.simplify()
                if len(part):
                    out.append(((p, q, s, t), part))
    return out


def build_generator(
    coeffs: GeneratorCoefficients | np.ndarray,
    statistics: Statistics | str,
    cutoff: float = 0.0,
) -> PauliSum:
    """Pauli image of ``sum_{pqst} A[p,q,s,t] c+_p c+_q c_t c_s``.

    Only folded entries ``p<q, s<t`` are visited; each carries weight 4 from
    the antisymmetric partners it stands for.  Entries with modulus at or
    below ``cutoff`` are skipped.
    """
    groups = generator_groups(coeffs, statistics, cutoff)
    if not groups:
        r = (coeffs.num_orbitals if isinstance(coeffs, GeneratorCoefficients)
             else np.asarray(coeffs).shape[0])
        return PauliSum(r)
    terms: dict[tuple[int, int], complex] = {}
    for _, group in groups:
        for key, c in group.items():
            terms[key] = terms.get(key, 0j) + c
    return PauliSum._from_dict(groups[0][1].num_qubits, terms)


def hamiltonian_pauli(
    h: np.ndarray,
    g: np.ndarray,
    constant: float = 0.0,
    tol: float = 1e-14,
) -> PauliSum:
    """Jordan-Wigner image of ``sum h_pq a+_p a_q + 1/2 sum g_pqst a+_p a+_q a_t a_s``.

    ``g`` is in physicists' notation, ``g[p,q,s,t] = <pq|st>``, over spin
    orbitals.  ``constant`` is added on the identity.
    """
    h = np.asarray(h)
    g = np.asarray(g)
    r = h.shape[0]
    if h.shape != (r, r) or g.shape != (r,) * 4:
        raise ValueError("integral shapes are inconsistent")
    if np.abs(h - h.conj().T).max(initial=0.0) > 1e-10:
        raise ValueError("one-body integrals are not Hermitian")
    if np.abs(g - g.transpose(2, 3, 0, 1).conj()).max(initial=0.0) > 1e-10 or \
            np.abs(g - g.transpose(1, 0, 3, 2)).max(initial=0.0) > 1e-10:
        raise ValueError("two-body integrals lack <pq|st> = <qp|ts> = <st|pq>* symmetry")

    fermi = Statistics.FERMIONIC
    terms: dict[tuple[int, int], complex] = {}

    def accumulate(op: PauliSum, scale: complex) -> None:
        for key, c in op.items():
            terms[key] = terms.get(key, 0j) + scale * c

    for p, q in itertools.product(range(r), repeat=2):
        if abs(h[p, q]) > tol:
            accumulate(jordan_wigner(LadderTerm.excitation(r, [p], [q])), h[p, q])
    # fold to p<q, s<t: the antisymmetrized integral carries the four images
    for (p, q), (s, t) in itertools.product(pair_indices(r), repeat=2):
        v = 0.5 * (g[p, q, s, t] - g[q, p, s, t] - g[p, q, t, s] + g[q, p, t, s])
        if abs(v) > tol:
            op = pair_operator(r, p, q, True, fermi) * pair_operator(r, s, t, False, fermi)
            accumulate(op, v)
    if constant:
        terms[(0, 0)] = terms.get((0, 0), 0j) + constant
    out = PauliSum._from_dict(r, terms)
    # imaginary residue from floating-point merging of a Hermitian operator
    return PauliSum._from_dict(r, {k: complex(c.real, 0.0) if abs(c.imag) < 1e-13 else c
                                   for k, c in out.items()})
