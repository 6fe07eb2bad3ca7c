"""Closed-form integrals over contracted s-type Gaussians."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import special

from qpchem.chem.molecule import BasisSet, Geometry

AO, MO, SPIN = "ao", "mo", "spin"
CHEMIST, PHYSICIST = "chemist", "physicist"


@dataclass
class IntegralSet:
    """One- and two-electron integrals in a labelled basis.

    ``g`` is ``(pq|st)`` when ``notation == "chemist"`` and ``<pq|st>`` when
    ``"physicist"``; spin-orbital sets use physicists' notation.
    """

    h: np.ndarray
    g: np.ndarray
    e_nuc: float = 0.0
    basis: str = MO
    notation: str = CHEMIST
    overlap: np.ndarray | None = field(default=None, repr=False)
    nelec: int | None = None

    def __post_init__(self) -> None:
        self.h = np.asarray(self.h)
        self.g = np.asarray(self.g)
        n = self.h.shape[0]
        if self.h.shape != (n, n) or self.g.shape != (n,) * 4:
            raise ValueError(f"inconsistent integral shapes {self.h.shape}, {self.g.shape}")
        if self.basis not in (AO, MO, SPIN):
            raise ValueError(f"unknown basis tag {self.basis!r}")
        if self.notation not in (CHEMIST, PHYSICIST):
            raise ValueError(f"unknown notation {self.notation!r}")

    @property
    def n_orb(self) -> int:
        return self.h.shape[0]

    def replace(self, **changes) -> IntegralSet:
        return replace(self, **changes)


def boys_f0(t):
    """Zeroth-order Boys function ``F0(t) = int_0^1 exp(-t u^2) du``."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("Boys function argument must be non-negative")
    small = t < 1e-8
    safe = np.where(small, 1.0, t)
    out = np.where(small, 1.0 - t / 3.0 + t * t / 10.0,
                   0.5 * np.sqrt(np.pi / safe) * special.erf(np.sqrt(safe)))
    return float(out) if out.ndim == 0 else out


@dataclass
class _Function:
    center: np.ndarray
    exponents: np.ndarray
    coefficients: np.ndarray  # include primitive normalization


def _primitive_overlap(a, b, rab2):
    p = a + b
    return (np.pi / p) ** 1.5 * np.exp(-a * b / p * rab2)


def basis_functions(geom: Geometry, basis: BasisSet) -> list[_Function]:
    """Normalized contracted s functions in atom order."""
    funcs = []
    for atom in geom.atoms:
        for shell in basis.for_element(atom.symbol):
            a = shell.exponents
            c = shell.coefficients * (2.0 * a / np.pi) ** 0.75
            self_overlap = np.sum(np.outer(c, c) * _primitive_overlap(a[:, None], a[None, :], 0.0))
            funcs.append(_Function(atom.position.copy(), a, c / np.sqrt(self_overlap)))
    return funcs


def _pair_data(f: _Function, g: _Function):
    a = f.exponents[:, None]
    b = g.exponents[None, :]
    p = a + b
    rab2 = float(np.sum((f.center - g.center) ** 2))
    centers = (a[..., None] * f.center + b[..., None] * g.center) / p[..., None]
    k = np.exp(-a * b / p * rab2)
    cc = np.outer(f.coefficients, g.coefficients)
    return a, b, p, rab2, centers, k, cc


def compute_ao_integrals(geom: Geometry, basis: BasisSet) -> IntegralSet:
    """Overlap, core Hamiltonian (T + V), ERIs and nuclear repulsion in the AO basis."""
    funcs = basis_functions(geom, basis)
    n = len(funcs)
    charges = geom.charges
    nuclei = geom.coordinates
    s = np.zeros((n, n))
    t = np.zeros((n, n))
    v = np.zeros((n, n))
    pairs = {}
    for i, j in itertools.combinations_with_replacement(range(n), 2):
        a, b, p, rab2, centers, k, cc = _pair_data(funcs[i], funcs[j])
        pairs[i, j] = pairs[j, i] = (p, centers, k, cc)
        prim_s = (np.pi / p) ** 1.5 * k
        s[i, j] = s[j, i] = np.sum(cc * prim_s)
        mu = a * b / p
        t[i, j] = t[j, i] = np.sum(cc * mu * (3.0 - 2.0 * mu * rab2) * prim_s)
        vij = 0.0
        for z, c in zip(charges, nuclei):
            pc2 = np.sum((centers - c) ** 2, axis=-1)
            vij -= z * np.sum(cc * 2.0 * np.pi / p * k * boys_f0(p * pc2))
        v[i, j] = v[j, i] = vij

    eri = np.zeros((n,) * 4)
    unique = [(i, j) for i in range(n) for j in range(i + 1)]
    for x, (i, j) in enumerate(unique):
        p, pc, kp, cp = pairs[i, j]
        p4 = p[:, :, None, None]
        for k_, l_ in unique[: x + 1]:
            q, qc, kq, cq = pairs[k_, l_]
            q4 = q[None, None, :, :]
            pq2 = np.sum((pc[:, :, None, None, :] - qc[None, None, :, :, :]) ** 2, axis=-1)
            prim = (2.0 * np.pi ** 2.5 / (p4 * q4 * np.sqrt(p4 + q4))
                    * kp[:, :, None, None] * kq[None, None, :, :]
                    * boys_f0(p4 * q4 / (p4 + q4) * pq2))
            val = np.sum(cp[:, :, None, None] * cq[None, None, :, :] * prim)
            for a_, b_, c_, d_ in _eightfold(i, j, k_, l_):
                eri[a_, b_, c_, d_] = val

    return IntegralSet(h=t + v, g=eri, e_nuc=geom.nuclear_repulsion(), basis=AO,
                       notation=CHEMIST, overlap=s, nelec=geom.num_electrons)


def _eightfold(i, j, k, l):
    return {(i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
            (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i)}

