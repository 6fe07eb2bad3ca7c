"""CNOT counts for exponentiated Pauli strings under ladder compilation.

``exp(i theta P)`` on a weight-w string compiles to a CNOT ladder that
collects parity onto one qubit, a single-qubit Z rotation, and the mirrored
ladder: ``2 (w - 1)`` CNOTs.  Single-qubit basis changes are not counted.
"""

from __future__ import annotations

from qpchem.tensorspace import PauliString, PauliSum


def cnot_cost(p: PauliString) -> int:
    return max(0, 2 * (p.weight - 1))


def generator_cost(g: PauliSum) -> int:
    """Total CNOTs for one rotation per term of ``g``."""
    return sum(cnot_cost(t) for t in g.terms)
