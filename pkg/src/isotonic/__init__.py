"""Exact and numerical bound states of the d-dimensional isotonic nonlinear oscillator.

The potential ``V(r) = B^2/r^2 + omega^2 r^2 + 2 g (r^2 - a^2)/(r^2 + a^2)^2`` is
exactly solvable when ``g = 2`` and ``omega a^2 = k + 1/2``.  Closed forms are
obtained from a supersymmetric factorization whose partner is the
Gol'dman-Krivchenkov oscillator, and every closed form can be checked against
an independent finite-difference eigensolver.
"""

from .model import (
    DomainError,
    EffectiveParams,
    PotentialParams,
    UnsolvableError,
    effective_k,
    effective_potential,
    solvability_gate,
    solvable_a,
)
from .exact import (
    ExactState,
    GKParams,
    gk_energy,
    gk_wavefunction,
    isotonic_spectrum,
    isotonic_wavefunction,
    isotonic_wavefunction_hermite_form,
    shifted_gk_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "EffectiveParams",
    "ExactState",
    "GKParams",
    "PotentialParams",
    "UnsolvableError",
    "effective_k",
    "effective_potential",
    "gk_energy",
    "gk_wavefunction",
    "isotonic_spectrum",
    "isotonic_wavefunction",
    "isotonic_wavefunction_hermite_form",
    "shifted_gk_spectrum",
    "solvability_gate",
    "solvable_a",
]
