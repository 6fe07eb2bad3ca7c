"""Molecular inputs: s-Gaussian integrals, RHF, basis transforms and FCIDUMP I/O."""

from __future__ import annotations

from dataclasses import dataclass

from qpchem.chem.fcidump import FCIDUMPError, fcidump_read, fcidump_write
from qpchem.chem.integrals import IntegralSet, boys_f0, compute_ao_integrals
from qpchem.chem.molecule import (
    ANGSTROM_TO_BOHR,
    BasisSet,
    Geometry,
    data_path,
    hydrogen_chain,
    load_sto3g,
    read_basis,
    read_geometry,
)
from qpchem.chem.scf import SCFConvergenceError, SCFResult, rhf_scf
from qpchem.chem.transform import (
    ReducedHamiltonian,
    mo_transform,
    reduced_hamiltonian,
    spin_orbital_expand,
)

__all__ = [
    "ANGSTROM_TO_BOHR",
    "BasisSet",
    "FCIDUMPError",
    "Geometry",
    "IntegralSet",
    "MolecularProblem",
    "ReducedHamiltonian",
    "SCFConvergenceError",
    "SCFResult",
    "boys_f0",
    "compute_ao_integrals",
    "data_path",
    "fcidump_read",
    "fcidump_write",
    "hydrogen_chain",
    "load_sto3g",
    "mo_transform",
    "molecular_problem",
    "problem_from_fcidump",
    "read_basis",
    "read_geometry",
    "reduced_hamiltonian",
    "rhf_scf",
    "spin_orbital_expand",
]


@dataclass
class MolecularProblem:
    mo: IntegralSet
    spin: IntegralSet
    nelec: int
    scf: SCFResult | None = None


def molecular_problem(geom: Geometry, basis: BasisSet | None = None, **scf_kwargs) -> MolecularProblem:
    """Geometry -> AO integrals -> RHF -> MO and spin-orbital integrals."""
    basis = load_sto3g() if basis is None else basis
    ao = compute_ao_integrals(geom, basis)
    scf = rhf_scf(ao, **scf_kwargs)
    mo = mo_transform(ao, scf.mo_coeff)
    return MolecularProblem(mo=mo, spin=spin_orbital_expand(mo), nelec=ao.nelec, scf=scf)


def problem_from_fcidump(path) -> MolecularProblem:
    mo = fcidump_read(path)
    return MolecularProblem(mo=mo, spin=spin_orbital_expand(mo), nelec=mo.nelec)
