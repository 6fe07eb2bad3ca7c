"""Closed-shell restricted Hartree-Fock."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from qpchem.chem.integrals import AO, IntegralSet

log = logging.getLogger(__name__)


class SCFConvergenceError(RuntimeError):
    pass


@dataclass
class SCFResult:
    mo_coeff: np.ndarray
    mo_energy: np.ndarray
    energy: float  # includes nuclear repulsion
    density: np.ndarray  # AO density, trace(D S) = N
    iterations: int
    commutator_norm: float


def fock_matrix(h: np.ndarray, eri: np.ndarray, density: np.ndarray) -> np.ndarray:
    coulomb = np.einsum("pqrs,rs->pq", eri, density)
    exchange = np.einsum("prqs,rs->pq", eri, density)
    return h + coulomb - 0.5 * exchange


def rhf_scf(
    ints: IntegralSet,
    nelec: int | None = None,
    max_iter: int = 200,
    conv_tol: float = 1e-10,
    damping: float = 0.0,
) -> SCFResult:
    """Roothaan iterations from the core-Hamiltonian guess.

    Converged when the orthogonalized commutator ``FDS - SDF`` has max-norm
    below ``conv_tol``.  ``damping`` mixes that fraction of the previous
    density into each new one.
    """
    if ints.basis != AO or ints.overlap is None:
        raise ValueError("rhf_scf needs AO integrals with an overlap matrix")
    nelec = ints.nelec if nelec is None else nelec
    if nelec is None or nelec <= 0 or nelec % 2:
        raise ValueError(f"closed-shell SCF needs a positive even electron count, got {nelec}")
    h, eri, s = ints.h, ints.g, ints.overlap
    nocc = nelec // 2
    if nocc > h.shape[0]:
        raise ValueError(f"{nelec} electrons do not fit in {h.shape[0]} orbitals")
    s_eigs = linalg.eigvalsh(s)
    if s_eigs.min() < 1e-10:
        raise np.linalg.LinAlgError(f"overlap matrix is (near) singular, min eigenvalue {s_eigs.min():.3e}")
    x = linalg.fractional_matrix_power(s, -0.5).real

    mo_energy, mo_coeff = linalg.eigh(h, s)
    density = 2.0 * mo_coeff[:, :nocc] @ mo_coeff[:, :nocc].T
    err = np.inf
    for it in range(1, max_iter + 1):
        fock = fock_matrix(h, eri, density)
        err = float(np.abs(x.T @ (fock @ density @ s - s @ density @ fock) @ x).max())
        log.debug("scf iteration %d commutator %.3e", it, err)
        if err < conv_tol:
            mo_energy, mo_coeff = linalg.eigh(fock, s)
            energy = 0.5 * np.sum(density * (h + fock)) + ints.e_nuc
            return SCFResult(mo_coeff, mo_energy, float(energy), density, it, err)
        mo_energy, mo_coeff = linalg.eigh(fock, s)
        new = 2.0 * mo_coeff[:, :nocc] @ mo_coeff[:, :nocc].T
        density = (1.0 - damping) * new + damping * density
    raise SCFConvergenceError(f"SCF not converged after {max_iter} iterations (commutator {err:.3e})")
