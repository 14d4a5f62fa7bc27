"""Factorization machinery: superpotential, ladder operators and partner potentials.

With ``A = d/dr + W`` and ``A^+ = -d/dr + W`` the partner Hamiltonians are
``H1 = A^+ A = -d^2/dr^2 + W^2 - W'`` and ``H2 = A A^+ = -d^2/dr^2 + W^2 + W'``.
"""

import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from .model import GATE_RTOL, _check_radius, _close


@dataclass(frozen=True)
class RadialFunction:
    """A real function on ``(0, inf)`` with as many analytic derivatives as are known.

    ``derivatives[m]`` evaluates the m-th derivative; ``derivatives[0]`` is the
    function itself.  Orders beyond the stack fall back to central differences.
    """

    derivatives: Tuple[Callable, ...]
    description: str = ""
    behaviour_at_zero: str = ""
    behaviour_at_infinity: str = ""

    def __post_init__(self):
        if not self.derivatives:
            raise ValueError("a RadialFunction needs at least its value")

    def __call__(self, r):
        return self.derivatives[0](r)

    @property
    def analytic_order(self):
        """Highest derivative order available in closed form."""
        return len(self.derivatives) - 1

    def derivative(self, r, order=1):
        if order <= self.analytic_order:
            return self.derivatives[order](r)
        return _central_difference(self, r, order)


def _central_difference(f, r, order):
    r = np.asarray(r, dtype=float)
    h = 1e-6 * np.maximum(1.0, r)
    if order == 1:
        return (f.derivative(r + h, 0) - f.derivative(r - h, 0)) / (2 * h)
    # lower the order by one and difference again with a coarser step
    h = 1e-4 * np.maximum(1.0, r)
    return (f.derivative(r + h, order - 1) - f.derivative(r - h, order - 1)) / (2 * h)


def from_callable(func, description=""):
    """Wrap a plain function; all derivatives will be numerical."""
    return RadialFunction((func,), description=description)


@dataclass(frozen=True)
class SuperpotentialAnsatz:
    """``W(r) = k'/r + omega' r + s r/(r^2 + a^2)``."""

    k_prime: float
    omega_prime: float
    s: float
    a: float

    def __post_init__(self):
        if not self.omega_prime > 0:
            raise ValueError(f"omega_prime must be > 0, got {self.omega_prime!r}")
        if not self.a > 0:
            raise ValueError(f"a must be > 0, got {self.a!r}")

    @property
    def a2(self):
        return self.a * self.a

    @property
    def is_reduced(self):
        """True when ``s = 2`` and ``omega' a^2 = k' + 1/2``."""
        return _close(self.s, 2.0) and _close(self.omega_prime * self.a2, self.k_prime + 0.5)

    def derivative(self, r, order=0):
        """Analytic ``order``-th derivative of ``W`` (order 0 is ``W`` itself)."""
        r = _check_radius(r)
        if order == 0:
            return self.k_prime / r + self.omega_prime * r + self.s * r / (r * r + self.a2)
        # d^m/dr^m (1/r) = (-1)^m m! / r^(m+1)
        out = (-1) ** order * math.factorial(order) * self.k_prime / r ** (order + 1)
        if order == 1:
            out = out + self.omega_prime
        return out + self.s * _rational_derivative(r, self.a2, order)

    def as_radial_function(self, max_order=4):
        return RadialFunction(
            tuple(lambda r, m=m: self.derivative(r, m) for m in range(max_order + 1)),
            description=f"W(r) = {self.k_prime}/r + {self.omega_prime} r + {self.s} r/(r^2+{self.a2})",
        )


def _rational_derivative(r, a2, order):
    """m-th derivative of ``q(r) = r/(r^2 + a^2)``."""
    # q = (1/2) [1/(r - i a) + 1/(r + i a)], so q^(m) = Re[(-1)^m m! / (r - i a)^(m+1)]
    a = math.sqrt(a2)
    return ((-1) ** order * math.factorial(order) / (r - 1j * a) ** (order + 1)).real


def superpotential(w, r):
    """Value of the ansatz superpotential at ``r > 0``."""
    return w.derivative(r, 0)


def partner_potentials(w, r):
    """``(U1, U2) = (W^2 - W', W^2 + W')`` from the analytic derivative of ``W``."""
    W = w.derivative(r, 0)
    dW = w.derivative(r, 1)
    return W * W - dW, W * W + dW


def partner_potentials_expanded(w, r):
    """The same pair written out term by term (rational part over ``(r^2+a^2)^2``).

    Kept as an independent algebraic route to :func:`partner_potentials`.
    """
    r = _check_radius(r)
    kp, om, s, a2 = w.k_prime, w.omega_prime, w.s, w.a2
    r2 = r * r
    den = (r2 + a2) ** 2
    U1 = (
        om**2 * r2
        + kp * (kp + 1) / r2
        + (s * (-2 * a2 * om + s + 2 * kp + 1) * r2 - a2 * s * (2 * om * a2 - 2 * kp + 1)) / den
        + (2 * s + 2 * kp - 1) * om
    )
    U2 = (
        om**2 * r2
        + kp * (kp - 1) / r2
        + (s * (s - 1 + 2 * kp - 2 * a2 * om) * r2 + a2 * s * (1 + 2 * kp - 2 * a2 * om)) / den
        + (2 * s + 2 * kp + 1) * om
    )
    return U1, U2


def reduction_parameters(k, omega, a):
    """Values of ``s`` and ``g`` that make ``U1`` match the isotonic form.

    Returns
    -------
    s, g : float
        ``s = 4 (omega a^2 - k)`` and ``g = 2 (omega a^2 - k)(2 omega a^2 + 1 - 2k)``.
    valid : bool
        Whether ``omega a^2 = k + 1/2``, the condition that also removes the
        rational term from ``U2`` (then ``s = g = 2``).
    """
    if not omega > 0 or not a > 0:
        raise ValueError("omega and a must be positive")
    wa2 = omega * a * a
    s = 4 * (wa2 - k)
    g = 2 * (wa2 - k) * (2 * wa2 + 1 - 2 * k)
    return s, g, bool(_close(wa2, k + 0.5, GATE_RTOL))


def reduced_ansatz(k, omega, a=None):
    """The ansatz with ``k' = k``, ``omega' = omega``, ``s = 2`` and ``a^2 = (k+1/2)/omega``."""
    if a is None:
        a = math.sqrt((k + 0.5) / omega)
    return SuperpotentialAnsatz(k_prime=k, omega_prime=omega, s=2.0, a=a)


def partner_v1(k, omega, a, r):
    """Isotonic partner ``k(k+1)/r^2 + omega^2 r^2 + 4(r^2-a^2)/(r^2+a^2)^2 + omega(2k+3)``."""
    r = _check_radius(r)
    r2, a2 = r * r, a * a
    return k * (k + 1) / r2 + omega**2 * r2 + 4 * (r2 - a2) / (r2 + a2) ** 2 + omega * (2 * k + 3)


def partner_v2(k, omega, r):
    """Gol'dman-Krivchenkov partner ``k(k-1)/r^2 + omega^2 r^2 + omega(2k+5)``."""
    r = _check_radius(r)
    r2 = r * r
    return k * (k - 1) / r2 + omega**2 * r2 + omega * (2 * k + 5)


def zero_mode(w):
    """Formal solution of ``A f = 0``: ``r^-k' (r^2+a^2)^(-s/2) exp(-omega' r^2/2)``.

    Not normalizable with ``f(0) = 0`` for ``k' >= 0``.
    """

    def value(r):
        r = _check_radius(r)
        return r ** (-w.k_prime) * (r * r + w.a2) ** (-w.s / 2) * np.exp(-w.omega_prime * r * r / 2)

    def first(r):
        return -w.derivative(r, 0) * value(r)

    return RadialFunction((value, first), description="exp(-int W)")


def _ladder(w, f, sign):
    # sign=+1: A f = f' + W f ; sign=-1: A^+ f = -f' + W f
    # derivatives via Leibniz: (W f)^(m) = sum_j C(m,j) W^(j) f^(m-j)
    top = f.analytic_order - 1

    def make(m):
        def g(r):
            out = sign * f.derivative(r, m + 1)
            for j in range(m + 1):
                out = out + math.comb(m, j) * w.derivative(r, j) * f.derivative(r, m - j)
            return out

        return g

    if top < 0:
        # no analytic derivative; first derivative from differences
        def g0(r):
            return sign * _central_difference(f, r, 1) + w.derivative(r, 0) * f(r)

        return RadialFunction((g0,), description=f"{'A' if sign > 0 else 'A+'}[{f.description}]")
    return RadialFunction(
        tuple(make(m) for m in range(top + 1)),
        description=f"{'A' if sign > 0 else 'A+'}[{f.description}]",
    )


def apply_A(w, f):
    """``A f = f' + W f``."""
    return _ladder(w, f, +1)


def apply_A_dagger(w, f):
    """``A^+ f = -f' + W f``."""
    return _ladder(w, f, -1)
