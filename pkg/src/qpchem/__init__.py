"""Exact-statevector simulation of fermionic and qubit-particle wave-function preparation.

Wave functions are prepared with either Jordan-Wigner encoded fermionic
operators or unencoded qubit-particle operators, and the fermionic 2-RDM is
measured from either.  Subpackages:

- ``tensorspace``: statevectors and Pauli algebra
- ``secondq``: ladder operators, encodings, generators and Hamiltonians
- ``chem``: integrals, RHF and FCIDUMP I/O
- ``rdm``: 2-RDM measurement and N-representability checks
- ``acse``: the ACSE solver; ``fci``: the exact reference
- ``gatecost``: CNOT ladder cost model
"""

__version__ = "0.1.0"
