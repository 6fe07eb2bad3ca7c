"""Basis changes: AO -> MO -> spin orbitals, and the reduced Hamiltonian."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qpchem.chem.integrals import CHEMIST, MO, PHYSICIST, SPIN, IntegralSet


def mo_transform(ints: IntegralSet, mo_coeff: np.ndarray) -> IntegralSet:
    """Rotate AO integrals into the orbitals given by the columns of ``mo_coeff``."""
    if ints.notation != CHEMIST or ints.basis == SPIN:
        raise ValueError("mo_transform expects spatial chemists'-notation integrals")
    c = np.asarray(mo_coeff)
    if c.shape[0] != ints.n_orb:
        raise ValueError(f"coefficient matrix has {c.shape[0]} rows for {ints.n_orb} AOs")
    h = c.T @ ints.h @ c
    g = np.einsum("pi,qj,rk,sl,pqrs->ijkl", c, c, c, c, ints.g, optimize=True)
    return IntegralSet(h=h, g=g, e_nuc=ints.e_nuc, basis=MO, notation=CHEMIST, nelec=ints.nelec)


def spin_orbital_expand(ints: IntegralSet) -> IntegralSet:
    """Expand spatial orbital ``i`` into spin orbitals ``2i`` (alpha), ``2i+1`` (beta).

    The result holds ``<pq|st> = (ps|qt)`` in physicists' notation, nonzero
    only when spin(p) = spin(s) and spin(q) = spin(t).
    """
    if ints.basis == SPIN:
        raise ValueError("integrals are already in the spin-orbital basis")
    if ints.notation != CHEMIST:
        raise ValueError("spatial integrals must be in chemists' notation")
    n = ints.n_orb
    r = 2 * n
    spin = np.arange(r) % 2
    space = np.arange(r) // 2
    same = spin[:, None] == spin[None, :]
    h = np.where(same, ints.h[np.ix_(space, space)], 0.0)
    chem = ints.g[np.ix_(space, space, space, space)]  # (ps|qt) at [p,s,q,t]
    phys = chem.transpose(0, 2, 1, 3)  # [p,q,s,t] -> (ps|qt)
    mask = same[:, None, :, None] & same[None, :, None, :]
    g = np.where(mask, phys, 0.0)
    return IntegralSet(h=h, g=g, e_nuc=ints.e_nuc, basis=SPIN, notation=PHYSICIST, nelec=ints.nelec)


@dataclass
class ReducedHamiltonian:
    """Two-body matrix whose trace against the unit-trace 2-RDM gives the electronic energy."""

    K2: np.ndarray
    nelec: int

    @property
    def num_orbitals(self) -> int:
        return self.K2.shape[0]

    def folded(self) -> np.ndarray:
        """Matrix over pairs p<q, s<t."""
        r = self.num_orbitals
        pq = np.triu_indices(r, 1)
        return self.K2[pq[0], pq[1]][:, pq[0], pq[1]]


def reduced_hamiltonian(ints: IntegralSet, nelec: int) -> ReducedHamiltonian:
    """``K = N/2 (h(1) + h(2)) + N(N-1)/2 u(12)``, antisymmetrized in each pair."""
    if ints.basis != SPIN:
        raise ValueError("reduced_hamiltonian expects spin-orbital integrals")
    if nelec < 2:
        raise ValueError(f"the reduced Hamiltonian needs N >= 2, got {nelec}")
    r = ints.n_orb
    eye = np.eye(r)
    one = np.einsum("ps,qt->pqst", ints.h, eye) + np.einsum("ps,qt->pqst", eye, ints.h)
    k = 0.5 * nelec * one + 0.5 * nelec * (nelec - 1) * ints.g
    k = 0.25 * (k - k.transpose(1, 0, 2, 3) - k.transpose(0, 1, 3, 2) + k.transpose(1, 0, 3, 2))
    return ReducedHamiltonian(k, nelec)

