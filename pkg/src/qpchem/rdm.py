"""Fermionic reduced density matrices measured from a statevector.

The measurement always uses Jordan-Wigner images of the ladder operators,
whatever operators prepared the state.  With ``C_st = a_t a_s`` the 2-RDM is
the Gram matrix

    D[p,q,s,t] = <psi| a+_p a+_q a_t a_s |psi> = <C_pq psi | C_st psi>,

so only the ``r(r-1)/2`` pair vectors are built; every other element follows
from antisymmetry.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from qpchem.chem.integrals import SPIN, IntegralSet
from qpchem.chem.transform import ReducedHamiltonian
from qpchem.secondq import Statistics, pair_indices, pair_operator
from qpchem.tensorspace import StateVector, apply_pauli_sum


class SectorError(ValueError):
    """State is not an eigenstate of the total particle number."""


@dataclass
class TwoRDM:
    D: np.ndarray  # D[p, q, s, t] = <a+_p a+_q a_t a_s>
    nelec: int

    @property
    def num_orbitals(self) -> int:
        return self.D.shape[0]

    @property
    def trace(self) -> complex:
        r = self.num_orbitals
        return complex(np.einsum("pqpq->", self.D.reshape(r, r, r, r)))

    def folded(self) -> np.ndarray:
        return fold(self.D)


@dataclass
class OneRDM:
    d: np.ndarray  # d[p, s] = <a+_p a_s>

    @property
    def occupations(self) -> np.ndarray:
        return np.linalg.eigvalsh(0.5 * (self.d + self.d.conj().T))


def fold(tensor: np.ndarray) -> np.ndarray:
    """Restrict a pair-antisymmetric rank-4 tensor to p<q, s<t."""
    r = tensor.shape[0]
    i, j = np.triu_indices(r, 1)
    return tensor[i, j][:, i, j]


def unfold(folded: np.ndarray, r: int) -> np.ndarray:
    """Inverse of :func:`fold` for tensors antisymmetric in both pairs."""
    i, j = np.triu_indices(r, 1)
    out = np.zeros((r,) * 4, dtype=folded.dtype)
    ii, jj = np.ix_(np.arange(len(i)), np.arange(len(i)))
    p, q, s, t = i[ii], j[ii], i[jj], j[jj]
    out[p, q, s, t] = folded
    out[q, p, s, t] = -folded
    out[p, q, t, s] = -folded
    out[q, p, t, s] = folded
    return out


def check_sector(s: StateVector, nelec: int, tol: float = 1e-8) -> None:
    mean, var = s.number_moments()
    if abs(mean - nelec) > tol or var > tol:
        raise SectorError(
            f"state is not in the N={nelec} sector: <N> = {mean:.10f}, var(N) = {var:.3e}"
        )


def pair_vectors(s: StateVector, statistics: Statistics | str = Statistics.FERMIONIC) -> np.ndarray:
    """Columns ``c_t c_s |psi>`` for every folded pair s<t (JW images by default)."""
    r = s.num_qubits
    statistics = Statistics.parse(statistics)
    pairs = pair_indices(r)
    out = np.empty((s.amplitudes.size, len(pairs)), dtype=np.complex128)
    for k, (p, q) in enumerate(pairs):
        op = pair_operator(r, p, q, False, statistics)
        out[:, k] = apply_pauli_sum(s, op).amplitudes
    return out


def measure_2rdm(s: StateVector, nelec: int) -> TwoRDM:
    if abs(s.norm() - 1.0) > 1e-8:
        raise ValueError(f"state must be normalized, norm = {s.norm():.12f}")
    check_sector(s, nelec)
    w = pair_vectors(s)
    return TwoRDM(unfold(w.conj().T @ w, s.num_qubits), nelec)


def contract_to_1rdm(rdm: TwoRDM) -> OneRDM:
    """``d[p, s] = sum_q D[p, q, s, q] / (N - 1)``."""
    n = rdm.nelec
    if n < 2:
        raise ValueError(f"contraction from the 2-RDM needs N >= 2, got {n}")
    return OneRDM(np.einsum("pqsq->ps", rdm.D) / (n - 1))


def energy_from_rdm(
    hamiltonian: ReducedHamiltonian | IntegralSet,
    rdm: TwoRDM,
    e_nuc: float | None = None,
) -> float:
    """Energy as a trace functional of the 2-RDM.

    With a :class:`ReducedHamiltonian` the measured tensor (trace N(N-1)) is
    scaled to unit trace first.  With spin-orbital integrals the one-body part
    uses the contracted 1-RDM.  ``e_nuc`` defaults to the integrals' own
    value, or zero for a reduced Hamiltonian.
    """
    r = rdm.num_orbitals
    n = rdm.nelec
    if isinstance(hamiltonian, ReducedHamiltonian):
        if hamiltonian.num_orbitals != r:
            raise ValueError("reduced Hamiltonian and 2-RDM sizes differ")
        e = np.sum(hamiltonian.K2 * rdm.D) / (n * (n - 1))
        e_nuc = 0.0 if e_nuc is None else e_nuc
    else:
        if hamiltonian.basis != SPIN or hamiltonian.n_orb != r:
            raise ValueError("need spin-orbital integrals matching the 2-RDM")
        d = contract_to_1rdm(rdm).d
        e = np.sum(hamiltonian.h * d) + 0.5 * np.sum(hamiltonian.g * rdm.D)
        e_nuc = hamiltonian.e_nuc if e_nuc is None else e_nuc
    return float(e.real) + e_nuc


@dataclass
class NRepReport:
    trace_error: float
    herm_error: float
    antisym_error: float
    min_eig_D: float
    min_eig_Q: float
    min_eig_G: float
    pass_trace: bool
    pass_herm: bool
    pass_antisym: bool
    pass_D: bool
    pass_Q: bool
    pass_G: bool

    @property
    def passed(self) -> bool:
        return all((self.pass_trace, self.pass_herm, self.pass_antisym,
                    self.pass_D, self.pass_Q, self.pass_G))

    def to_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        return "\n".join(f"{k} = {v}" for k, v in self.to_dict().items())


def q_matrix(rdm: TwoRDM, d: np.ndarray | None = None) -> np.ndarray:
    """Hole matrix ``Q[p,q,s,t] = <a_p a_q a+_t a+_s>`` by anticommutation."""
    r = rdm.num_orbitals
    d = contract_to_1rdm(rdm).d if d is None else d
    e = np.eye(r)
    return (np.einsum("ps,qt->pqst", e, e) - np.einsum("pt,qs->pqst", e, e)
            - np.einsum("qt,sp->pqst", e, d) + np.einsum("qs,tp->pqst", e, d)
            + np.einsum("pt,sq->pqst", e, d) - np.einsum("ps,tq->pqst", e, d)
            + rdm.D.transpose(2, 3, 0, 1))


def g_matrix(rdm: TwoRDM, d: np.ndarray | None = None) -> np.ndarray:
    """Particle-hole matrix ``G[p,q,s,t] = <a+_p a_q a+_t a_s>``."""
    r = rdm.num_orbitals
    d = contract_to_1rdm(rdm).d if d is None else d
    return np.einsum("qt,ps->pqst", np.eye(r), d) + rdm.D.transpose(0, 2, 3, 1)


def _min_eig(mat: np.ndarray) -> float:
    if mat.size == 0:
        return 0.0
    return float(np.linalg.eigvalsh(0.5 * (mat + mat.conj().T)).min())


def n_rep_check(
    rdm: TwoRDM,
    eig_tol: float = 1e-8,
    trace_tol: float = 1e-8,
    sym_tol: float = 1e-10,
) -> NRepReport:
    """Trace, symmetry and D/Q/G positivity diagnostics; never raises."""
    r = rdm.num_orbitals
    n = rdm.nelec
    D = rdm.D
    trace_error = abs(rdm.trace - n * (n - 1))
    herm_error = float(np.abs(D - D.transpose(2, 3, 0, 1).conj()).max(initial=0.0))
    antisym_error = float(max(np.abs(D + D.transpose(1, 0, 2, 3)).max(initial=0.0),
                              np.abs(D + D.transpose(0, 1, 3, 2)).max(initial=0.0)))
    d = np.einsum("pqsq->ps", D) / (n - 1) if n >= 2 else np.zeros((r, r))
    min_d = _min_eig(fold(D))
    min_q = _min_eig(fold(q_matrix(rdm, d)))
    min_g = _min_eig(g_matrix(rdm, d).reshape(r * r, r * r))
    return NRepReport(
        trace_error=float(trace_error),
        herm_error=herm_error,
        antisym_error=antisym_error,
        min_eig_D=min_d,
        min_eig_Q=min_q,
        min_eig_G=min_g,
        pass_trace=trace_error <= trace_tol,
        pass_herm=herm_error <= sym_tol,
        pass_antisym=antisym_error <= sym_tol,
        pass_D=min_d >= -eig_tol,
        pass_Q=min_q >= -eig_tol,
        pass_G=min_g >= -eig_tol,
    )


def dump_rdm(rdm: TwoRDM, path: str | Path, tol: float = 1e-14) -> None:
    """Header ``r N trace``, then ``p q s t real imag`` for p<q, s<t above ``tol``."""
    r = rdm.num_orbitals
    lines = [f"{r} {rdm.nelec} {rdm.trace.real:.17e}"]
    pairs = pair_indices(r)
    for p, q in pairs:
        for s, t in pairs:
            v = rdm.D[p, q, s, t]
            if abs(v) > tol:
                lines.append(f"{p} {q} {s} {t} {v.real:.17e} {v.imag:.17e}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_rdm(path: str | Path, nelec: int | None = None) -> TwoRDM:
    """Read a dump written by :func:`dump_rdm`; pair antisymmetry fills the rest."""
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty RDM dump")
    try:
        r_s, n_s, _ = lines[0].split()
        r, n_file = int(r_s), int(n_s)
    except ValueError as err:
        raise ValueError(f"{path}: malformed header {lines[0]!r}") from err
    D = np.zeros((r,) * 4, dtype=np.complex128)
    for lineno, line in enumerate(lines[1:], 2):
        parts = line.split()
        try:
            p, q, s, t = (int(x) for x in parts[:4])
            re, im = float(parts[4]), float(parts[5])
        except (ValueError, IndexError) as err:
            raise ValueError(f"{path}:{lineno}: malformed RDM line {line!r}") from err
        if len(parts) != 6 or not (0 <= p < q < r and 0 <= s < t < r):
            raise ValueError(f"{path}:{lineno}: expected 'p q s t re im' with p<q, s<t < {r}")
        v = complex(re, im)
        D[p, q, s, t] = v
        D[q, p, s, t] = -v
        D[p, q, t, s] = -v
        D[q, p, t, s] = v
    return TwoRDM(D, n_file if nelec is None else nelec)
