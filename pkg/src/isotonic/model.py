"""Physical potential, d-dimensional radial reduction and the solvability gate."""

import math
from dataclasses import dataclass

import numpy as np

GATE_RTOL = 1e-12
# 1/r terms are refused below this radius instead of returning inf
R_FLOOR = 1e-8


class DomainError(ValueError):
    """Raised when a function is evaluated outside its domain (e.g. r <= 0)."""


class UnsolvableError(ValueError):
    """Raised when closed forms are requested for parameters failing the gate."""


def _check_radius(r):
    r = np.asarray(r, dtype=float)
    if np.any(~(r >= R_FLOOR)):
        raise DomainError(f"radius must be >= {R_FLOOR:g}, got min {np.min(r)!r}")
    return r


def _close(x, y, rtol=GATE_RTOL):
    return abs(x - y) <= rtol * max(abs(x), abs(y), 1.0)


@dataclass(frozen=True)
class PotentialParams:
    """Inputs of ``V(r) = B2/r^2 + omega^2 r^2 + 2 g (r^2-a^2)/(r^2+a^2)^2``.

    Attributes
    ----------
    B2 : float
        Inverse-square strength, ``B^2 >= 0``.
    omega : float
        Oscillator frequency, ``> 0``.
    g : float
        Coupling of the rational term.
    a : float
        Pole distance of the rational term, ``> 0``.
    d : int
        Spatial dimension, ``>= 2``.
    ell : int
        Angular momentum quantum number, ``>= 0``.
    """

    B2: float = 0.0
    omega: float = 1.0
    g: float = 2.0
    a: float = math.sqrt(0.5)
    d: int = 3
    ell: int = 0

    def __post_init__(self):
        if not self.B2 >= 0:
            raise ValueError(f"B2 must be >= 0, got {self.B2!r}")
        if not self.omega > 0:
            raise ValueError(f"omega must be > 0, got {self.omega!r}")
        if not self.a > 0:
            raise ValueError(f"a must be > 0, got {self.a!r}")
        if int(self.d) != self.d or self.d < 2:
            raise ValueError(f"d must be an integer >= 2, got {self.d!r}")
        if int(self.ell) != self.ell or self.ell < 0:
            raise ValueError(f"ell must be an integer >= 0, got {self.ell!r}")

    @classmethod
    def from_a2(cls, a2, **kw):
        """Build from ``a^2`` rather than ``a``."""
        if not a2 > 0:
            raise ValueError(f"a2 must be > 0, got {a2!r}")
        return cls(a=math.sqrt(a2), **kw)

    @property
    def a2(self):
        return self.a * self.a

    def potential(self, r):
        """The physical potential ``V(r)`` (no centrifugal term)."""
        r = _check_radius(r)
        r2 = r * r
        return self.B2 / r2 + self.omega**2 * r2 + 2 * self.g * (r2 - self.a2) / (r2 + self.a2) ** 2


@dataclass(frozen=True)
class EffectiveParams:
    """Derived quantities of the radial problem.

    ``shift1 = omega (2k+3)`` and ``shift2 = omega (2k+5)`` are the additive
    constants of the two partner potentials.
    """

    k: float
    gamma_d: float
    solvable: bool
    shift1: float
    shift2: float
    omega: float
    a: float


def effective_k(p):
    """Effective centrifugal index ``k = sqrt(B2 + (ell + (d-2)/2)^2) - 1/2``.

    Chosen so that ``k(k+1) = B2 + (2 ell + d - 1)(2 ell + d - 3)/4``.
    """
    return math.sqrt(p.B2 + (p.ell + (p.d - 2) / 2) ** 2) - 0.5


def effective_potential(p, r):
    """``U(r) = k(k+1)/r^2 + omega^2 r^2 + 2 g (r^2-a^2)/(r^2+a^2)^2``."""
    r = _check_radius(r)
    k = effective_k(p)
    r2 = r * r
    return k * (k + 1) / r2 + p.omega**2 * r2 + 2 * p.g * (r2 - p.a2) / (r2 + p.a2) ** 2


def solvability_gate(p):
    """Decide whether the closed-form solutions apply to ``p``.

    Solvable iff ``g == 2`` and ``omega a^2 == k + 1/2``, both to a relative
    tolerance of 1e-12.  This is a verdict, never an exception.
    """
    k = effective_k(p)
    gamma_d = k + 0.5
    ok = _close(p.g, 2.0) and _close(p.omega * p.a2, gamma_d)
    return EffectiveParams(
        k=k,
        gamma_d=gamma_d,
        solvable=bool(ok),
        shift1=p.omega * (2 * k + 3),
        shift2=p.omega * (2 * k + 5),
        omega=p.omega,
        a=p.a,
    )


def solvable_a(B2, d, ell, omega):
    """The unique pole distance ``a = sqrt((k + 1/2)/omega)`` that passes the gate."""
    k = effective_k(PotentialParams(B2=B2, omega=omega, d=d, ell=ell))
    if k + 0.5 <= 0:
        raise ValueError("k + 1/2 = 0 (B2=0, d=2, ell=0): no positive a is solvable")
    return math.sqrt((k + 0.5) / omega)


def gate_message(p):
    """Human readable explanation of a failed gate, with the nearest solvable ``a``."""
    e = solvability_gate(p)
    try:
        a_fix = solvable_a(p.B2, p.d, p.ell, p.omega)
    except ValueError:
        return "parameters are not exactly solvable: requires g=2 and omega*a^2=k+1/2, and k+1/2=0 here"
    return (
        "parameters are not exactly solvable: requires g=2 and omega*a^2=k+1/2 "
        f"(got g={p.g!r}, omega*a^2={p.omega * p.a2!r}, k+1/2={e.gamma_d!r}); "
        f"nearest solvable a={a_fix!r} (a2={a_fix * a_fix!r})"
    )
