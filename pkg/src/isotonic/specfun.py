"""Special functions used by the closed-form solutions.

Everything works in double precision and accepts numpy arrays for the
argument ``z`` (degrees and parameters are scalars).
"""

import math

import numpy as np


def pochhammer(gamma, n):
    """Rising factorial ``gamma (gamma+1) ... (gamma+n-1)``; 1 when ``n == 0``."""
    if n < 0 or int(n) != n:
        raise ValueError(f"n must be a non-negative integer, got {n!r}")
    out = 1.0
    for j in range(int(n)):
        out *= gamma + j
    return out


def gamma(x):
    """Gamma function for positive real ``x``."""
    if x <= 0:
        raise ValueError(f"gamma is only used for positive arguments, got {x!r}")
    return math.gamma(x)


def hyp1f1_terminating(n, b, x):
    """Terminating confluent hypergeometric series ``1F1(-n; b; x)``.

    Summed term by term, so for floats it is a reference for modest ``x``
    rather than a production evaluator (see :func:`laguerre`).  Scalar
    ``fractions.Fraction`` inputs are summed exactly.

    Raises
    ------
    ValueError
        If ``(b)_j`` vanishes for some ``j <= n``.
    """
    if n < 0 or int(n) != n:
        raise ValueError(f"n must be a non-negative integer, got {n!r}")
    n = int(n)
    for j in range(n):
        if b + j == 0:
            raise ValueError(f"(b)_k vanishes for b={b!r}, k={j + 1}")
    if isinstance(x, np.ndarray):
        x = x.astype(float)
    term = x * 0 + 1
    total = term
    for j in range(n):
        # ratio of consecutive terms: (-n+j) x / ((b+j)(j+1))
        term = term * (-n + j) * x / ((b + j) * (j + 1))
        total = total + term
    return total


def laguerre(n, alpha, z):
    """Associated Laguerre polynomial ``L_n^alpha(z)`` by upward recurrence.

    ``(m+1) L_{m+1} = (2m + alpha + 1 - z) L_m - (m + alpha) L_{m-1}``.
    Negative ``n`` returns zeros, which makes identities such as
    ``d/dz L_n^a = -L_{n-1}^{a+1}`` hold at ``n = 0`` without special cases.
    """
    z = np.asarray(z, dtype=float)
    if n < 0:
        out = np.zeros_like(z)
        return out if out.ndim else float(out)
    prev = np.zeros_like(z)
    cur = np.ones_like(z)
    for m in range(int(n)):
        prev, cur = cur, ((2 * m + alpha + 1 - z) * cur - (m + alpha) * prev) / (m + 1)
    return cur if cur.ndim else float(cur)


def laguerre_derivative(n, alpha, z, order=1):
    """``order``-th z-derivative of ``L_n^alpha``: ``(-1)^m L_{n-m}^{alpha+m}``."""
    return (-1) ** order * laguerre(n - order, alpha + order, z)


def hermite(n, z):
    """Physicists' Hermite polynomial from ``H_{m+1} = 2z H_m - 2m H_{m-1}``.

    ``H_{-1}`` is taken as zero so that expressions like ``n H_{2n-1}`` are
    well defined at ``n = 0``.
    """
    z = np.asarray(z, dtype=float)
    if n < 0:
        out = np.zeros_like(z)
        return out if out.ndim else float(out)
    prev = np.zeros_like(z)
    cur = np.ones_like(z)
    for m in range(int(n)):
        prev, cur = cur, 2 * z * cur - 2 * m * prev
    return cur if cur.ndim else float(cur)
