"""Iterative anti-Hermitian contracted Schrodinger equation (ACSE) solver.

Each iteration measures the residual

    A[p,q,s,t] = <psi| [c+_p c+_q c_t c_s, H] |psi>

exactly from the statevector and applies ``exp(eps * sum conj(B) c+c+cc)``
as a first-order product of Pauli rotations, one commuting group per
excitation so that every factor conserves particle number.  The ladder
operators ``c`` are fermionic (Jordan-Wigner encoded) or qubit-particle
(unencoded) depending on the configured encoding, in both the residual and
the unitary, so ``A`` is the energy gradient of the applied generator.  The
direction ``B`` is ``A`` itself or, with ``conjugate=True``, ``A`` mixed
with the previous direction (Polak-Ribiere with restarts).  The 2-RDM is
always measured with fermionic operators.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from qpchem.chem.integrals import SPIN, IntegralSet
from qpchem.gatecost import generator_cost
from qpchem.rdm import TwoRDM, check_sector, measure_2rdm, pair_vectors, unfold
from qpchem.secondq import GeneratorCoefficients, Statistics, generator_groups, hamiltonian_pauli
from qpchem.tensorspace import (
    PauliString,
    PauliSum,
    StateVector,
    apply_pauli_rotation,
    apply_pauli_sum,
    expectation,
    new_basis_state,
)

log = logging.getLogger(__name__)


@dataclass
class SolverConfig:
    encoding: Statistics | str = Statistics.FERMIONIC
    epsilon0: float = 0.1
    line_search: bool = True
    max_iterations: int = 60
    energy_tol: float = 1e-9
    residual_tol: float = 1e-6
    truncation: float = 1e-8  # relative to max |A|
    conjugate: bool = True  # Polak-Ribiere directions; False gives plain residual steps
    seed: int | None = None  # reserved; the exact solver draws no random numbers

    def __post_init__(self) -> None:
        self.encoding = Statistics.parse(self.encoding)
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.energy_tol <= 0 or self.residual_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.epsilon0 <= 0:
            raise ValueError(f"epsilon0 must be positive, got {self.epsilon0}")
        if not 0 <= self.truncation < 1:
            raise ValueError("truncation must lie in [0, 1)")


@dataclass
class ResidualTensor:
    A: np.ndarray

    @property
    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.A))


def acse_residual(
    s: StateVector,
    hamiltonian: PauliSum,
    nelec: int | None = None,
    statistics: Statistics | str = Statistics.FERMIONIC,
) -> ResidualTensor:
    """Exact two-body residual ``<[c+_p c+_q c_t c_s, H]>`` of a state.

    With ``C_st = c_t c_s`` and ``phi = H psi`` the folded residual is
    ``M - M^dagger`` where ``M[(pq),(st)] = <C_pq psi | C_st phi>``.  The
    ladder operators follow ``statistics``: fermionic gives the ACSE residual
    proper, qubit-particle gives the energy gradient of qubit-particle
    generators.  Both vanish on an eigenstate of ``H``.
    """
    if nelec is not None:
        check_sector(s, nelec)
    phi = apply_pauli_sum(s, hamiltonian)
    m = pair_vectors(s, statistics).conj().T @ pair_vectors(phi, statistics)
    return ResidualTensor(unfold(m - m.conj().T, s.num_qubits))


class StepResult(NamedTuple):
    state: StateVector
    epsilon: float
    cnots: int
    energy: float
    fallback: bool


def generator_from_residual(residual: ResidualTensor, encoding: Statistics | str,
                            truncation: float = 1e-8) -> list[PauliSum]:
    """Per-excitation Pauli groups of the step direction ``sum conj(A) c+c+cc``.

    ``conj(A)`` makes the first-order energy change ``-eps * ||A||**2`` for
    complex states too; it equals ``A`` for real ones.  Entries below
    ``truncation * max|A|`` are dropped, as are the diagonal pair entries
    ``(p,q) == (s,t)``.
    """
    a = residual.A.conj()
    amax = np.abs(a).max(initial=0.0)
    if amax == 0.0:
        return []
    a = np.where(np.abs(a) < truncation * amax, 0.0, a)
    # pure pair-number phases (p,q) == (s,t) are not free parameters
    i, j = np.triu_indices(a.shape[0], 1)
    a[i, j, i, j] = a[j, i, j, i] = a[i, j, j, i] = a[j, i, i, j] = 0.0
    return [g for _, g in generator_groups(GeneratorCoefficients(a), encoding)]


def rotation_sequence(groups: list[PauliSum]) -> list[tuple[PauliString, float]]:
    """``(unit string, angle)`` pairs: groups in index order, letters sorted inside.

    An anti-Hermitian term ``i*theta*P`` becomes the rotation ``exp(i theta P)``.
    """
    out = []
    for group in groups:
        for term in sorted(group.terms, key=lambda t: t.letters):
            c = term.coefficient
            if abs(c.real) > 1e-10 * max(1.0, abs(c)):
                raise ValueError(f"generator term {term} is not anti-Hermitian")
            if term.weight == 0:
                continue  # global phase
            out.append((term.with_coefficient(1.0), c.imag))
    return out


def apply_rotations(s: StateVector, rotations: list[tuple[PauliString, float]], eps: float) -> StateVector:
    for p, theta in rotations:
        s = apply_pauli_rotation(s, p, eps * theta)
    return s


def acse_step(
    s: StateVector,
    residual: ResidualTensor,
    cfg: SolverConfig,
    hamiltonian: PauliSum,
    energy: float | None = None,
) -> StepResult:
    """Apply one Trotterized two-body unitary built from the residual.

    With line search on, energies at ``0, eps0, 2 eps0`` are fitted by a
    parabola.  The step is its minimizer, or the better sampled point, when
    that lowers the energy; otherwise ``eps0`` is used and the step is
    flagged as a fallback.
    """
    groups = generator_from_residual(residual, cfg.encoding, cfg.truncation)
    e0 = expectation(s, hamiltonian).real if energy is None else energy
    if not groups:
        return StepResult(s, 0.0, 0, e0, False)
    rotations = rotation_sequence(groups)
    cnots = sum(generator_cost(g) for g in groups)

    def trial(eps: float) -> tuple[float, StateVector]:
        new = apply_rotations(s, rotations, eps)
        return expectation(new, hamiltonian).real, new

    h0 = cfg.epsilon0
    e1, s1 = trial(h0)
    if not cfg.line_search:
        return StepResult(s1, h0, cnots, e1, False)
    e2, s2 = trial(2 * h0)
    curvature = (e2 - 2 * e1 + e0) / (2 * h0 * h0)
    slope = (4 * e1 - 3 * e0 - e2) / (2 * h0)
    candidates = [(e1, h0, s1), (e2, 2 * h0, s2)]
    if curvature > 0:
        eps_star = -slope / (2 * curvature)
        e_star, s_star = trial(eps_star)
        candidates.append((e_star, eps_star, s_star))
        best_e, best_eps, best_s = min(candidates, key=lambda c: c[0])
        if best_e <= e0:
            return StepResult(best_s, best_eps, cnots, best_e, False)
    log.info("line search fallback (curvature %.3e)", curvature)
    return StepResult(s1, h0, cnots, e1, True)


@dataclass
class IterationRecord:
    iteration: int
    epsilon: float
    residual_norm: float
    energy: float
    cumulative_cnots: int
    wall_time: float
    fallback: bool = False


@dataclass
class AnsatzTrace:
    encoding: Statistics
    records: list[IterationRecord] = field(default_factory=list)
    initial_energy: float = 0.0
    converged: bool = False
    stop_reason: str = ""

    @property
    def energies(self) -> np.ndarray:
        return np.array([r.energy for r in self.records])

    @property
    def cumulative_cnots(self) -> np.ndarray:
        return np.array([r.cumulative_cnots for r in self.records], dtype=int)

    @property
    def final_energy(self) -> float:
        return self.records[-1].energy if self.records else self.initial_energy


@dataclass
class ACSEResult:
    trace: AnsatzTrace
    state: StateVector
    rdm: TwoRDM
    hamiltonian: PauliSum

    @property
    def energy(self) -> float:
        return self.trace.final_energy

    @property
    def converged(self) -> bool:
        return self.trace.converged


def _next_direction(a: np.ndarray, prev_a: np.ndarray | None, prev_dir: np.ndarray | None) -> np.ndarray:
    # Polak-Ribiere+ with a restart whenever the mix stops being a descent direction
    if prev_a is None or prev_dir is None:
        return a
    beta = max(0.0, np.vdot(a, a - prev_a).real / np.vdot(prev_a, prev_a).real)
    d = a + beta * prev_dir
    return d if np.vdot(d, a).real > 0 else a


def reference_state(r: int, nelec: int) -> StateVector:
    """Occupy the ``nelec`` lowest spin orbitals (the mean-field determinant)."""
    return new_basis_state(r, range(nelec))


def acse_solve(
    ints: IntegralSet,
    nelec: int,
    cfg: SolverConfig | None = None,
    initial_state: StateVector | None = None,
    hamiltonian: PauliSum | None = None,
    callback: Callable[[IterationRecord, StateVector], None] | None = None,
) -> ACSEResult:
    """Run the ACSE from the reference determinant until a stopping rule fires.

    Stops when the residual norm drops below ``residual_tol``, when the
    energy changes by less than ``energy_tol``, or after ``max_iterations``.
    ``callback`` sees every iteration record with the state it produced.
    """
    cfg = SolverConfig() if cfg is None else cfg
    if ints.basis != SPIN:
        raise ValueError("acse_solve expects spin-orbital integrals")
    r = ints.n_orb
    if hamiltonian is None:
        hamiltonian = hamiltonian_pauli(ints.h, ints.g, constant=ints.e_nuc)
    state = reference_state(r, nelec) if initial_state is None else initial_state
    energy = expectation(state, hamiltonian).real
    trace = AnsatzTrace(cfg.encoding, initial_energy=energy)
    cumulative = 0
    start = time.perf_counter()
    prev_a = direction = None
    for k in range(1, cfg.max_iterations + 1):
        residual = acse_residual(state, hamiltonian, nelec, cfg.encoding)
        norm = residual.frobenius_norm
        if norm < cfg.residual_tol:
            trace.converged, trace.stop_reason = True, "residual"
            break
        direction = _next_direction(residual.A, prev_a, direction) if cfg.conjugate else residual.A
        prev_a = residual.A
        step = acse_step(state, ResidualTensor(direction), cfg, hamiltonian, energy)
        if step.fallback:
            prev_a = None  # restart from the bare residual
        cumulative += step.cnots
        rec = IterationRecord(k, step.epsilon, norm, step.energy, cumulative,
                              time.perf_counter() - start, step.fallback)
        trace.records.append(rec)
        log.info("%s iter %d E=%.12f |A|=%.3e eps=%.4f cnots=%d", cfg.encoding.value,
                 k, step.energy, norm, step.epsilon, cumulative)
        state = step.state
        if callback is not None:
            callback(rec, state)
        delta = abs(step.energy - energy)
        energy = step.energy
        if delta < cfg.energy_tol:
            trace.converged, trace.stop_reason = True, "energy"
            break
    else:
        trace.stop_reason = "max_iterations"
    return ACSEResult(trace, state, measure_2rdm(state, nelec), hamiltonian)
