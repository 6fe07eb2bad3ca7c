import json
from functools import reduce
from pathlib import Path

import numpy as np
import pytest
from scipy.linalg import hadamard

from qpchem.acse import SolverConfig, acse_solve
from qpchem.chem import data_path, hydrogen_chain, molecular_problem, read_geometry
from qpchem.fci import fci_ground_state

FIXTURES = Path(__file__).parent / "fixtures"

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1.0, -1.0]).astype(complex),
}
LOWER = np.array([[0, 1], [0, 0]], dtype=complex)  # |1> -> |0>


def kron_all(factors):
    # qubit p is bit p, so the highest qubit is the leftmost kron factor
    return reduce(np.kron, reversed(factors))


def dense_pauli(letters):
    return kron_all([PAULI[c] for c in letters])


def dense_annihilator(r, p, fermionic=True):
    factors = [PAULI["Z"] if (fermionic and q < p) else PAULI["I"] for q in range(r)]
    factors[p] = LOWER
    return kron_all(factors)


def dense_double_excitation(r, p, q, s, t, fermionic):
    ann = [dense_annihilator(r, i, fermionic) for i in range(r)]
    op = ann[p].conj().T @ ann[q].conj().T @ ann[t] @ ann[s]
    return op - op.conj().T


def pauli_weights(mat, tol=1e-12):
    """Weights of the Pauli strings in a dense operator, via a Walsh-Hadamard transform per X mask."""
    dim = mat.shape[0]
    idx = np.arange(dim)
    had = hadamard(dim)
    weights = []
    for x in range(dim):
        coeffs = had @ mat[idx ^ x, idx] / dim
        for z in np.flatnonzero(np.abs(coeffs) > tol):
            weights.append(bin(x | int(z)).count("1"))
    return sorted(weights)


def ladder_cost(weights):
    return sum(max(0, 2 * (w - 1)) for w in weights)


def load_golden(name):
    return json.loads((FIXTURES / f"{name}.json").read_text())


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def h4_problem():
    return molecular_problem(read_geometry(data_path("h4_chain.geom")))


@pytest.fixture(scope="session")
def h2_problem():
    return molecular_problem(hydrogen_chain(2, 0.74))


@pytest.fixture(scope="session")
def h4_fci(h4_problem):
    return fci_ground_state(h4_problem.spin, h4_problem.nelec)


@pytest.fixture(scope="session")
def h4_runs(h4_problem):
    """Default-configured ACSE runs on H4 in both encodings, every iterate kept."""
    runs = {}
    for enc in ("fermionic", "qubit"):
        states = []
        res = acse_solve(h4_problem.spin, h4_problem.nelec, SolverConfig(encoding=enc),
                         callback=lambda rec, s: states.append(s))
        runs[enc] = (res, states)
    return runs
