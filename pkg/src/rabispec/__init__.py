"""Spectroscopy toolkit for qubit-oscillator circuits with very large coupling.

Submodules:

- ``specfun``: orthogonal polynomials and displaced-Fock machinery
- ``rabi``:    Hamiltonian construction, Jacobi eigensolver, parity labels
- ``analytic``: closed-form frequency shifts, cat states, overlap oracle
- ``spectro``: transition maps, hanger lineshape, least-squares fits
- ``twotone``: driven three-level models and level reconstruction
- ``refdata``: bundled reference parameter sets A-I
- ``cli``:     command-line front end
"""

from .rabi import CircuitParams, LabeledLevels, Spectrum

__all__ = ["CircuitParams", "LabeledLevels", "Spectrum"]
__version__ = "0.1.0"
