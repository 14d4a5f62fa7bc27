"""Closed-form spectra and normalized wavefunctions.

Two exactly solvable problems live here: the Gol'dman-Krivchenkov oscillator
``-psi'' + [Lambda(Lambda+1)/r^2 + beta r^2 + alpha/r^2] psi = E psi`` and its
supersymmetric partner, the isotonic oscillator with ``g = 2``.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import specfun
from .model import R_FLOOR, UnsolvableError, _check_radius, _close
from .susy import RadialFunction, _rational_derivative, apply_A_dagger, reduced_ansatz

ROUTES = ("laguerre", "expanded", "intertwined")


@dataclass(frozen=True)
class GKParams:
    """Gol'dman-Krivchenkov parameters.

    ``gamma_d`` fixes the small-r behaviour ``r^(gamma_d - 1/2)`` and must be one
    of the two indicial roots ``1 +- sqrt(alpha + (Lambda+1/2)^2)``.  The plus
    root is the usual regular solution; the minus root is admitted (when
    positive) because the supersymmetric partner of the isotonic oscillator
    needs it for ``k < 1/2``.
    """

    alpha: float
    beta: float
    Lambda: float
    gamma_d: float

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be > 0, got {self.beta!r}")
        disc = self.alpha + (self.Lambda + 0.5) ** 2
        if disc < 0:
            raise ValueError("alpha + (Lambda+1/2)^2 must be non-negative")
        root = math.sqrt(disc)
        if not (_close(self.gamma_d, 1 + root, 1e-12) or _close(self.gamma_d, 1 - root, 1e-12)):
            raise ValueError(f"gamma_d={self.gamma_d!r} is not an indicial root 1 +- {root!r}")
        if not self.gamma_d > 0:
            raise ValueError("gamma_d must be positive for a square-integrable state")

    @classmethod
    def from_dimension(cls, alpha, beta, d, ell):
        """Regular solution for ``Lambda = ell + (d-3)/2``."""
        Lam = ell + (d - 3) / 2
        return cls(alpha=alpha, beta=beta, Lambda=Lam, gamma_d=1 + math.sqrt(alpha + (Lam + 0.5) ** 2))

    @classmethod
    def for_partner(cls, k, omega):
        """The partner ``k(k-1)/r^2 + omega^2 r^2`` with small-r behaviour ``r^k``."""
        return cls(alpha=0.0, beta=omega * omega, Lambda=k - 1, gamma_d=k + 0.5)


@dataclass(frozen=True)
class ExactState:
    """A closed-form bound state.

    Attributes
    ----------
    n : int
        Number of interior nodes.
    k : float
        Effective centrifugal index (for GK states, ``gamma_d - 1/2``).
    energy : float
        Eigenvalue of the operator the state solves.
    norm_constant : float
        Overall constant multiplying the closed form, sign included.
    function : RadialFunction
        The wavefunction with its analytic derivatives.
    scale : float
        Gaussian decay rate ``b`` in ``exp(-b r^2 / 2)``.
    growth_power : float
        ``p`` such that the state grows like ``r^p`` before the Gaussian wins.
    unshifted_energy : float, optional
        Energy of ``-Delta + V`` without the partner-potential constant.
    """

    n: int
    k: float
    energy: float
    norm_constant: float
    function: RadialFunction
    scale: float
    growth_power: float
    unshifted_energy: Optional[float] = None
    route: str = ""

    def evaluate(self, r):
        return self.function(r)

    __call__ = evaluate

    def derivative(self, r, order=1):
        return self.function.derivative(r, order)


class IsotonicLevel(NamedTuple):
    shifted: float
    unshifted: float


def _log_prefactor_derivatives(r, m, b, q, a2):
    """Derivatives 1..3 of ``h = m ln r - b r^2/2 - q ln(r^2 + a^2)``."""
    h1 = m / r - b * r
    h2 = -m / r**2 - b
    h3 = 2 * m / r**3
    if q:
        h1 = h1 - 2 * q * _rational_derivative(r, a2, 0)
        h2 = h2 - 2 * q * _rational_derivative(r, a2, 1)
        h3 = h3 - 2 * q * _rational_derivative(r, a2, 2)
    return h1, h2, h3


def _gaussian_product(c, m, b, q, a2, poly_derivs, description):
    """``c r^m exp(-b r^2/2) (r^2+a^2)^-q Q(r)`` with derivatives up to order 3.

    ``poly_derivs(r)`` returns ``(Q, Q', Q'', Q''')``.
    """

    def parts(r):
        r = _check_radius(r)
        g = c * r**m * np.exp(-b * r * r / 2)
        if q:
            g = g * (r * r + a2) ** (-q)
        h1, h2, h3 = _log_prefactor_derivatives(r, m, b, q, a2)
        gd = (g, g * h1, g * (h2 + h1 * h1), g * (h3 + 3 * h1 * h2 + h1**3))
        return gd, poly_derivs(r)

    def make(order):
        def f(r):
            gd, Qd = parts(r)
            return sum(math.comb(order, j) * gd[j] * Qd[order - j] for j in range(order + 1))

        return f

    return RadialFunction(tuple(make(o) for o in range(4)), description=description)


def _laguerre_poly(terms, b):
    """``Q(r) = P(b r^2)`` with ``P = sum coef * L_n^alpha`` and its r-derivatives."""

    def P(z, j):
        return sum(c * specfun.laguerre_derivative(n, al, z, j) for c, n, al in terms)

    def derivs(r):
        z = b * r * r
        P0, P1, P2, P3 = (P(z, j) for j in range(4))
        return (
            P0,
            2 * b * r * P1,
            2 * b * P1 + 4 * b * b * r * r * P2,
            12 * b * b * r * P2 + 8 * b**3 * r**3 * P3,
        )

    return derivs


# --- Gol'dman-Krivchenkov -------------------------------------------------


def gk_energy(p, n):
    """``E = 2 sqrt(beta) (2n + gamma_d)``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return 2 * math.sqrt(p.beta) * (2 * n + p.gamma_d)


def gk_norm_constant(p, n):
    """``(-1)^n sqrt(2 beta^(gamma/2) (gamma)_n / (n! Gamma(gamma)))`` for the 1F1 form."""
    g = p.gamma_d
    log_val = math.log(2) + 0.5 * g * math.log(p.beta) + math.lgamma(n + g) - math.lgamma(g) - math.lgamma(g) - math.lgamma(n + 1)
    # (gamma)_n / Gamma(gamma) = Gamma(gamma+n) / Gamma(gamma)^2
    return (-1) ** n * math.exp(0.5 * log_val)


def gk_wavefunction(p, n):
    """Normalized GK eigenfunction ``N r^(gamma-1/2) exp(-sqrt(beta) r^2/2) 1F1(-n; gamma; sqrt(beta) r^2)``.

    The terminating 1F1 is evaluated as ``n!/(gamma)_n L_n^(gamma-1)`` through
    the Laguerre recurrence.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    b = math.sqrt(p.beta)
    g = p.gamma_d
    N = gk_norm_constant(p, n)
    conv = math.exp(math.lgamma(n + 1) + math.lgamma(g) - math.lgamma(g + n))
    func = _gaussian_product(
        N, g - 0.5, b, 0, 0.0, _laguerre_poly([(conv, n, g - 1)], b),
        description=f"GK state n={n}, gamma_d={g}",
    )
    return ExactState(
        n=n, k=g - 0.5, energy=gk_energy(p, n), norm_constant=N, function=func,
        scale=b, growth_power=g - 0.5 + 2 * n, route="gk",
    )


def shifted_gk_spectrum(k, omega, n):
    """Eigenvalue ``2 omega (2n + 2k + 3)`` of ``-d^2 + k(k-1)/r^2 + omega^2 r^2 + omega(2k+5)``."""
    if k < 0 or not omega > 0:
        raise ValueError("requires k >= 0 and omega > 0")
    return 2 * omega * (2 * n + 2 * k + 3)


# --- isotonic oscillator ----------------------------------------------------


def _require_solvable(e):
    if not e.solvable:
        raise UnsolvableError("closed forms need g=2 and omega*a^2=k+1/2")


def isotonic_spectrum(e, omega, n):
    """Shifted eigenvalue ``2 omega (2n + 2k + 3)`` and the physical energy.

    The shifted value belongs to ``-d^2 + U(r) + omega(2k+3)``; the physical
    energy of ``-Delta + V`` is ``omega (4n + 2k + 3)``.
    """
    _require_solvable(e)
    if n < 0:
        raise ValueError("n must be >= 0")
    shifted = 2 * omega * (2 * n + 2 * e.k + 3)
    return IsotonicLevel(shifted, shifted - omega * (2 * e.k + 3))


def isotonic_norm_constant(k, omega, n):
    """Constant making the isotonic state of unit norm.

    ``(-1)^n sqrt(2 omega^(k+1/2) n! / (Gamma(n+k+1/2) eps))`` with
    ``eps = 2 omega (2n+2k+3)``.
    """
    eps = 2 * omega * (2 * n + 2 * k + 3)
    log_val = math.log(2) + (k + 0.5) * math.log(omega) + math.lgamma(n + 1) - math.lgamma(n + k + 0.5) - math.log(eps)
    return (-1) ** n * math.exp(0.5 * log_val)


def printed_norm_constant(k, omega, n):
    """``(-1)^n sqrt(2 omega^(k+1/2) (k+1/2)_n / (eps n! Gamma(k+1/2)))``.

    This is the constant as usually quoted for the Laguerre form; it carries
    the 1F1 normalization and therefore differs from
    :func:`isotonic_norm_constant` by ``(k+1/2)_n / n!``.  Kept for comparison.
    """
    eps = 2 * omega * (2 * n + 2 * k + 3)
    g = k + 0.5
    log_val = math.log(2) + g * math.log(omega) + math.lgamma(g + n) - math.lgamma(g) - math.log(eps) - math.lgamma(n + 1) - math.lgamma(g)
    return (-1) ** n * math.exp(0.5 * log_val)


def isotonic_wavefunction(e, omega, a, n, route="laguerre"):
    """Normalized eigenfunction of the isotonic partner potential.

    Parameters
    ----------
    e : EffectiveParams
        Must pass the solvability gate.
    omega, a : float
        Oscillator frequency and pole distance.
    n : int
        Node count.
    route : {"laguerre", "expanded", "intertwined"}
        ``"laguerre"`` uses the bracket
        ``(2k+2n+3) L_n^(k-1/2) - 2(n+1) L_(n+1)^(k-1/2) + (2k+1) L_n^(k+1/2)``;
        ``"expanded"`` the same bracket with ``2 omega a^2`` in place of
        ``2k+1``; ``"intertwined"`` applies ``A^+`` to the normalized GK
        partner state and divides by ``sqrt(eps)``.
    """
    _require_solvable(e)
    if n < 0:
        raise ValueError("n must be >= 0")
    if route not in ROUTES:
        raise ValueError(f"route must be one of {ROUTES}, got {route!r}")
    k = e.k
    a2 = a * a
    if not _close(omega * a2, k + 0.5):
        raise UnsolvableError("omega*a^2 must equal k+1/2")
    level = isotonic_spectrum(e, omega, n)
    C = isotonic_norm_constant(k, omega, n)
    if route == "intertwined":
        gk = gk_wavefunction(GKParams.for_partner(k, omega), n)
        w = reduced_ansatz(k, omega, a)
        lifted = apply_A_dagger(w, gk.function)
        s = 1 / math.sqrt(level.shifted)
        func = RadialFunction(
            tuple(lambda r, f=f: s * f(r) for f in lifted.derivatives),
            description=f"eps^-1/2 A+ psi_GK, n={n}, k={k}",
        )
    else:
        last = 2 * k + 1 if route == "laguerre" else 2 * omega * a2
        terms = [(2 * k + 2 * n + 3, n, k - 0.5), (-2 * (n + 1), n + 1, k - 0.5), (last, n, k + 0.5)]
        func = _gaussian_product(
            C, k + 1, omega, 1, a2, _laguerre_poly(terms, omega),
            description=f"isotonic state n={n}, k={k} ({route})",
        )
    return ExactState(
        n=n, k=k, energy=level.shifted, norm_constant=C, function=func, scale=omega,
        growth_power=k + 2 * n + 1, unshifted_energy=level.unshifted, route=route,
    )


def hermite_bracket(n, r, order=0):
    """``4(2n+3) H_(2n+1) + 8n(2n+3) H_(2n-1) + H_(2n+3)`` and its r-derivatives."""

    def dH(m, j):
        if m - j < 0:
            return np.zeros_like(np.asarray(r, dtype=float))
        return 2**j * math.perm(m, j) * specfun.hermite(m - j, r)

    return 4 * (2 * n + 3) * dH(2 * n + 1, order) + 8 * n * (2 * n + 3) * dH(2 * n - 1, order) + dH(2 * n + 3, order)


def isotonic_wavefunction_hermite_form(n, a2=0.5, k=0.0, omega=1.0):
    """The ``k = 0, omega = 1`` isotonic state written with Hermite polynomials.

    ``(-1)^n C e^(-r^2/2) / (2^(2n+2) n! (r^2+a^2)) * hermite_bracket(n, r)``
    with the same constant ``C`` as :func:`isotonic_wavefunction`, so the two
    agree pointwise.
    """
    if k != 0 or omega != 1:
        raise ValueError("the Hermite form exists only for k=0, omega=1")
    if not _close(a2, 0.5):
        raise UnsolvableError("k=0, omega=1 is solvable only for a^2 = 1/2")
    if n < 0:
        raise ValueError("n must be >= 0")
    C = isotonic_norm_constant(0.0, 1.0, n)
    c = (-1) ** n * C / (2 ** (2 * n + 2) * math.factorial(n))

    def poly(r):
        return tuple(hermite_bracket(n, r, j) for j in range(4))

    func = _gaussian_product(c, 0, 1.0, 1, a2, poly, description=f"Hermite form n={n}")
    shifted = 2 * (2 * n + 3)
    return ExactState(
        n=n, k=0.0, energy=shifted, norm_constant=C, function=func, scale=1.0,
        growth_power=2 * n + 1, unshifted_energy=shifted - 3.0, route="hermite",
    )

