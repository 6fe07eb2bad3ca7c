"""Full configuration interaction in a fixed (N, Sz) determinant sector.

Works directly on occupation bitstrings with explicit fermionic sign
counting, so it never touches the Pauli machinery it is used to check.
Determinant ``|j1 < ... < jN>`` is ``a+_{j1} ... a+_{jN}|vac>``, which puts
amplitude +1 on basis index ``sum 2**j``.
"""

from __future__ import annotations

import itertools

import numpy as np
from scipy import linalg

from qpchem.chem.integrals import SPIN, IntegralSet
from qpchem.tensorspace import StateVector


def _annihilate(bits: int, p: int) -> tuple[int, int] | None:
    if not (bits >> p) & 1:
        return None
    sign = -1 if bin(bits & ((1 << p) - 1)).count("1") % 2 else 1
    return sign, bits ^ (1 << p)


def _create(bits: int, p: int) -> tuple[int, int] | None:
    if (bits >> p) & 1:
        return None
    sign = -1 if bin(bits & ((1 << p) - 1)).count("1") % 2 else 1
    return sign, bits | (1 << p)


def apply_ladder_bits(bits: int, ops: list[tuple[int, bool]]) -> tuple[int, int] | None:
    """Act with a product of fermionic ladder operators (rightmost first) on one determinant."""
    sign = 1
    for p, dagger in reversed(ops):
        res = _create(bits, p) if dagger else _annihilate(bits, p)
        if res is None:
            return None
        s, bits = res
        sign *= s
    return sign, bits


def sector_determinants(r: int, nelec: int, sz: float = 0.0) -> list[int]:
    """Bitstrings with ``nelec`` electrons and spin projection ``sz``; alpha on even qubits."""
    if r % 2:
        raise ValueError("spin-orbital count must be even")
    n_alpha = nelec / 2 + sz
    n_beta = nelec / 2 - sz
    if n_alpha != int(n_alpha) or n_beta != int(n_beta):
        raise ValueError(f"N={nelec}, Sz={sz} is not a valid spin sector")
    n_alpha, n_beta = int(n_alpha), int(n_beta)
    n = r // 2
    if not (0 <= n_alpha <= n and 0 <= n_beta <= n):
        return []
    dets = []
    for occ_a in itertools.combinations(range(n), n_alpha):
        for occ_b in itertools.combinations(range(n), n_beta):
            bits = sum(1 << (2 * i) for i in occ_a) | sum(1 << (2 * i + 1) for i in occ_b)
            dets.append(bits)
    return sorted(dets)


def hamiltonian_matrix(ints: IntegralSet, dets: list[int], tol: float = 1e-14) -> np.ndarray:
    """``<D_i| sum h a+a + 1/2 sum <pq|st> a+_p a+_q a_t a_s |D_j>`` (electronic only)."""
    if ints.basis != SPIN:
        raise ValueError("FCI expects spin-orbital integrals")
    h, g = ints.h, ints.g
    r = ints.n_orb
    index = {d: i for i, d in enumerate(dets)}
    mat = np.zeros((len(dets), len(dets)), dtype=np.result_type(h, g, float))
    for j, det in enumerate(dets):
        occ = [p for p in range(r) if (det >> p) & 1]
        for s in occ:
            for p in range(r):
                if abs(h[p, s]) <= tol:
                    continue
                res = apply_ladder_bits(det, [(p, True), (s, False)])
                if res is not None and res[1] in index:
                    mat[index[res[1]], j] += res[0] * h[p, s]
        for s, t in itertools.permutations(occ, 2):
            for p, q in itertools.permutations(range(r), 2):
                v = g[p, q, s, t]
                if abs(v) <= tol:
                    continue
                res = apply_ladder_bits(det, [(p, True), (q, True), (t, False), (s, False)])
                if res is not None and res[1] in index:
                    mat[index[res[1]], j] += 0.5 * res[0] * v
    return mat


def fci_ground_state(ints: IntegralSet, nelec: int, sz: float = 0.0) -> tuple[float, StateVector]:
    """Lowest eigenpair of the sector Hamiltonian; energy includes ``ints.e_nuc``."""
    r = ints.n_orb
    if not 0 < nelec <= r:
        raise ValueError(f"need 0 < N <= {r}, got N={nelec}")
    dets = sector_determinants(r, nelec, sz)
    if not dets:
        raise ValueError(f"empty determinant sector for N={nelec}, Sz={sz}, r={r}")
    mat = hamiltonian_matrix(ints, dets)
    evals, evecs = linalg.eigh(mat)
    vec = evecs[:, 0]
    # deterministic global phase: largest-magnitude coefficient positive
    k = int(np.argmax(np.abs(vec)))
    vec = vec * (abs(vec[k]) / vec[k])
    amps = np.zeros(1 << r, dtype=np.complex128)
    amps[dets] = vec
    return float(evals[0]) + ints.e_nuc, StateVector(r, amps)
