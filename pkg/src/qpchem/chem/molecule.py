"""Geometries and s-type contracted Gaussian basis sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

ANGSTROM_TO_BOHR = 1.8897259886

NUCLEAR_CHARGE = {"H": 1, "He": 2, "Li": 3, "Be": 4, "B": 5, "C": 6, "N": 7, "O": 8, "F": 9, "Ne": 10}


@dataclass
class Atom:
    symbol: str
    charge: int
    position: np.ndarray  # Bohr


@dataclass
class Geometry:
    atoms: list[Atom]

    def __post_init__(self) -> None:
        for a in self.atoms:
            a.position = np.asarray(a.position, dtype=float)
            if a.position.shape != (3,) or not np.all(np.isfinite(a.position)):
                raise ValueError(f"invalid position for {a.symbol}: {a.position}")
            if a.charge < 1:
                raise ValueError(f"nuclear charge must be >= 1, got {a.charge}")
        xyz = np.array([a.position for a in self.atoms]).reshape(-1, 3)
        if len(xyz) > 1:
            dist = np.linalg.norm(xyz[:, None] - xyz[None], axis=-1) + np.eye(len(xyz))
            if dist.min() < 1e-8:
                raise ValueError("two nuclei coincide")

    @classmethod
    def from_list(cls, atoms: list[tuple[str, tuple[float, float, float]]],
                  units: str = "angstrom") -> Geometry:
        scale = _unit_scale(units)
        return cls([Atom(sym, _charge(sym), np.asarray(xyz, dtype=float) * scale)
                    for sym, xyz in atoms])

    @property
    def charges(self) -> np.ndarray:
        return np.array([a.charge for a in self.atoms], dtype=float)

    @property
    def coordinates(self) -> np.ndarray:
        return np.array([a.position for a in self.atoms])

    @property
    def num_electrons(self) -> int:
        return int(sum(a.charge for a in self.atoms))

    def translated(self, shift: np.ndarray) -> Geometry:
        return Geometry([Atom(a.symbol, a.charge, a.position + shift) for a in self.atoms])

    def nuclear_repulsion(self) -> float:
        e = 0.0
        for i, a in enumerate(self.atoms):
            for b in self.atoms[:i]:
                e += a.charge * b.charge / np.linalg.norm(a.position - b.position)
        return e


def hydrogen_chain(n: int, spacing: float, units: str = "angstrom") -> Geometry:
    """Linear H_n along z starting at the origin."""
    return Geometry.from_list([("H", (0.0, 0.0, i * spacing)) for i in range(n)], units)


def _unit_scale(units: str) -> float:
    units = units.strip().lower()
    if units in ("angstrom", "ang", "a"):
        return ANGSTROM_TO_BOHR
    if units in ("bohr", "au"):
        return 1.0
    raise ValueError(f"unknown length unit {units!r}")


def _charge(symbol: str) -> int:
    try:
        return NUCLEAR_CHARGE[symbol.capitalize()]
    except KeyError:
        raise ValueError(f"unknown element {symbol!r}") from None


def read_geometry(path: str | Path) -> Geometry:
    """Parse a geometry file: a unit header line, then ``element x y z`` lines."""
    lines = [ln.split("#")[0].strip() for ln in Path(path).read_text().splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError(f"{path}: empty geometry file")
    units = lines[0]
    atoms = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 4:
            raise ValueError(f"{path}: expected 'element x y z', got {ln!r}")
        atoms.append((parts[0], tuple(float(v) for v in parts[1:])))
    return Geometry.from_list(atoms, units)


@dataclass
class Shell:
    """Contracted s-shell; coefficients refer to normalized primitives."""

    exponents: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self) -> None:
        self.exponents = np.asarray(self.exponents, dtype=float)
        self.coefficients = np.asarray(self.coefficients, dtype=float)
        if np.any(self.exponents <= 0):
            raise ValueError("Gaussian exponents must be positive")
        if self.exponents.shape != self.coefficients.shape:
            raise ValueError("exponent and coefficient counts differ")


@dataclass
class BasisSet:
    shells: dict[str, list[Shell]] = field(default_factory=dict)
    name: str = ""

    def for_element(self, symbol: str) -> list[Shell]:
        try:
            return self.shells[symbol.capitalize()]
        except KeyError:
            raise ValueError(f"basis {self.name!r} has no functions for {symbol}") from None


def parse_basis(text: str, name: str = "") -> BasisSet:
    """Parse ``element exponent coefficient`` lines; blank lines close a shell."""
    basis = BasisSet(name=name)
    current: list[tuple[str, float, float]] = []

    def flush() -> None:
        if not current:
            return
        symbols = {sym for sym, _, _ in current}
        if len(symbols) != 1:
            raise ValueError(f"shell mixes elements {sorted(symbols)}")
        sym = symbols.pop().capitalize()
        shell = Shell([e for _, e, _ in current], [c for _, _, c in current])
        basis.shells.setdefault(sym, []).append(shell)
        current.clear()

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#")[0].strip()
        if not line:
            flush()
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 'element exponent coefficient'")
        current.append((parts[0], float(parts[1]), float(parts[2])))
    flush()
    return basis


def read_basis(path: str | Path) -> BasisSet:
    path = Path(path)
    return parse_basis(path.read_text(), name=path.stem)


def load_sto3g() -> BasisSet:
    text = resources.files("qpchem.chem").joinpath("data/sto-3g.basis").read_text()
    return parse_basis(text, name="sto-3g")


def data_path(name: str) -> Path:
    return Path(str(resources.files("qpchem.chem").joinpath("data", name)))
