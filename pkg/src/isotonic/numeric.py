"""Independent numerical oracle for the radial equation ``-psi'' + U psi = E psi``.

Two discretizations are provided:

* :func:`discretize` - the 3-point second difference on a uniform grid with
  Dirichlet walls at both ends (the wall at ``r_min`` stands in for ``r = 0``).
* :func:`discretize_weighted` - for ``U = p(p-1)/r^2 + U_regular``, a
  finite-volume scheme for ``chi = psi / r^p`` in the weight ``r^(2p)``.  It
  selects the solution that behaves like ``r^p`` at the origin, which is
  needed whenever ``p < 1/2`` (where Dirichlet picks the other branch).

Eigenpairs come from LAPACK's bisection plus inverse iteration for symmetric
tridiagonal matrices, which is deterministic.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import eigh_tridiagonal

MAX_COUNT = 12
# walls this close to the origin shift levels by O(r_min), well below tolerance
DEFAULT_WALL_FRACTION = 1e-10


class ConvergenceError(RuntimeError):
    """An eigenpair or quadrature did not meet its accuracy contract."""


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid ``r_min, r_min + h, ..., r_max`` (both ends are Dirichlet walls)."""

    r_min: float
    r_max: float
    n_points: int

    def __post_init__(self):
        if not self.r_min > 0:
            raise ValueError(f"r_min must be > 0, got {self.r_min!r}")
        if not self.r_max > self.r_min:
            raise ValueError("r_max must exceed r_min")
        if self.n_points < 3:
            raise ValueError("need at least 3 points")

    @property
    def h(self):
        return (self.r_max - self.r_min) / (self.n_points - 1)

    @property
    def nodes(self):
        return np.linspace(self.r_min, self.r_max, self.n_points)

    @property
    def reaches_origin(self):
        return self.r_min <= 1e-6 * self.r_max

    def refined(self):
        """Same interval with half the spacing."""
        return RadialGrid(self.r_min, self.r_max, 2 * self.n_points - 1)


def default_r_max(k, omega, eps_max):
    """``1.5 sqrt(eps_max/omega^2 + 8 (k+1/2)/omega)``, past the outermost turning point."""
    return 1.5 * math.sqrt(eps_max / omega**2 + 8 * (k + 0.5) / omega)


def radial_grid_for(k, omega, eps_max, n_points=6000, r_max=None):
    """Grid suited to the lowest levels up to ``eps_max``."""
    if r_max is None:
        r_max = default_r_max(k, omega, eps_max)
    return RadialGrid(DEFAULT_WALL_FRACTION * r_max, r_max, n_points)


@dataclass(frozen=True)
class TridiagonalSystem:
    """Symmetric tridiagonal matrix plus what is needed to map vectors back to ``psi``.

    ``psi(nodes[i]) = transform[i] * y[i]`` for an eigenvector ``y``.
    """

    diagonal: np.ndarray
    off_diagonal: np.ndarray
    nodes: np.ndarray
    h: float
    transform: np.ndarray

    def matrix(self):
        """Dense copy, for small systems and tests."""
        return np.diag(self.diagonal) + np.diag(self.off_diagonal, 1) + np.diag(self.off_diagonal, -1)

    def apply(self, v):
        out = self.diagonal * v
        out[:-1] += self.off_diagonal * v[1:]
        out[1:] += self.off_diagonal * v[:-1]
        return out


def _evaluate_potential(U, r):
    try:
        vals = np.asarray(U(r), dtype=float)
    except ValueError as exc:
        raise ValueError(f"potential not evaluable on grid: {exc}") from exc
    bad = ~np.isfinite(vals)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise ValueError(f"potential is not finite at node {i} (r={r[i]!r})")
    return vals


def discretize(U, grid):
    """``-d^2/dr^2 + U`` with the 3-point stencil and ``psi = 0`` at both ends."""
    r = grid.nodes[1:-1]
    h = grid.h
    diag = 2 / h**2 + _evaluate_potential(U, r)
    off = np.full(len(r) - 1, -1 / h**2)
    return TridiagonalSystem(diag, off, r, h, np.ones_like(r))


def discretize_weighted(U_regular, exponent, r_max, n_cells):
    """Finite-volume form of ``-d^2 + p(p-1)/r^2 + U_regular`` with ``psi ~ r^p`` at 0.

    Cells ``[(i-1)h, ih]`` with centres ``(i-1/2)h``, ``i = 1..n_cells``; the
    flux through ``r = 0`` vanishes and ``chi = 0`` is imposed at ``r_max``
    (one half cell beyond the last centre).
    """
    p = float(exponent)
    if p < 0:
        raise ValueError("exponent must be >= 0")
    h = r_max / (n_cells + 0.5)
    i = np.arange(1, n_cells + 1)
    r = (i - 0.5) * h
    # cell masses int r^(2p) dr and face coefficients r^(2p)/h
    mass = ((i * h) ** (2 * p + 1) - ((i - 1) * h) ** (2 * p + 1)) / (2 * p + 1)
    face = (i * h) ** (2 * p) / h
    stiff = face + np.concatenate(([0.0], face[:-1]))
    diag = stiff / mass + _evaluate_potential(U_regular, r)
    off = -face[:-1] / np.sqrt(mass[:-1] * mass[1:])
    return TridiagonalSystem(diag, off, r, h, r**p / np.sqrt(mass))


@dataclass(frozen=True)
class NumericSpectrum:
    """Lowest eigenpairs of a discretized radial problem.

    ``eigenvalues`` are Richardson-extrapolated when two grids were used, in
    which case ``raw_eigenvalues`` holds the fine-grid values and
    ``convergence_estimate`` the fine/coarse difference.  Eigenvectors are
    sampled ``psi`` on ``nodes`` with unit trapezoidal norm.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    nodes: np.ndarray
    raw_eigenvalues: np.ndarray
    convergence_estimate: Optional[np.ndarray] = None
    residuals: Optional[np.ndarray] = None


def trapezoid_weights(nodes):
    w = np.empty_like(nodes)
    dx = np.diff(nodes)
    w[0] = dx[0] / 2
    w[-1] = dx[-1] / 2
    w[1:-1] = (dx[:-1] + dx[1:]) / 2
    return w


def lowest_eigenpairs(system, count, residual_rtol=1e-13):
    """The ``count`` smallest eigenpairs of a symmetric tridiagonal system.

    The residual ``||H y - lambda y||`` is required to stay below
    ``residual_rtol * ||H||_inf`` (the matrix norm is ~4/h^2, so an absolute
    bound would be meaningless in double precision).
    """
    if not 1 <= count <= MAX_COUNT:
        raise ValueError(f"count must be in 1..{MAX_COUNT}")
    vals, vecs = eigh_tridiagonal(
        system.diagonal, system.off_diagonal, select="i", select_range=(0, count - 1),
        lapack_driver="stebz",
    )
    hnorm = np.max(np.abs(system.diagonal)) + 2 * np.max(np.abs(system.off_diagonal), initial=0.0)
    res = np.array([np.linalg.norm(system.apply(vecs[:, j]) - vals[j] * vecs[:, j]) for j in range(count)])
    if np.any(res > residual_rtol * hnorm):
        raise ConvergenceError(f"eigenpair residual {res.max():.3e} exceeds {residual_rtol:g}*||H||={residual_rtol * hnorm:.3e}")
    psi = vecs * system.transform[:, None]
    w = trapezoid_weights(system.nodes)
    psi = psi / np.sqrt(np.sum(w[:, None] * psi * psi, axis=0))
    # sign convention: first sizeable lobe positive
    for j in range(count):
        idx = int(np.argmax(np.abs(psi[:, j]) > 1e-3 * np.max(np.abs(psi[:, j]))))
        if psi[idx, j] < 0:
            psi[:, j] = -psi[:, j]
    return NumericSpectrum(vals, psi, system.nodes, vals, None, res)


def richardson(coarse, fine, h_coarse, h_fine):
    """Cancel the ``O(h^2)`` term from two solves."""
    c, f = np.asarray(coarse), np.asarray(fine)
    return (h_coarse**2 * f - h_fine**2 * c) / (h_coarse**2 - h_fine**2)


def solve(U, grid, count, extrapolate=True):
    """Lowest levels of ``-d^2 + U`` with Dirichlet walls, optionally extrapolated."""
    if not grid.reaches_origin:
        raise ValueError("radial solves need r_min <= 1e-6 r_max")
    fine_grid = grid.refined() if extrapolate else grid
    fine = lowest_eigenpairs(discretize(U, fine_grid), count)
    if not extrapolate:
        return fine
    coarse = lowest_eigenpairs(discretize(U, grid), count)
    ext = richardson(coarse.eigenvalues, fine.eigenvalues, grid.h, fine_grid.h)
    return NumericSpectrum(
        ext, fine.eigenvectors, fine.nodes, fine.eigenvalues,
        np.abs(fine.eigenvalues - coarse.eigenvalues), fine.residuals,
    )


def solve_weighted(U_regular, exponent, r_max, n_cells, count, extrapolate=True):
    """As :func:`solve` but with the boundary exponent scheme."""
    fine = lowest_eigenpairs(discretize_weighted(U_regular, exponent, r_max, 2 * n_cells), count)
    if not extrapolate:
        return fine
    coarse = lowest_eigenpairs(discretize_weighted(U_regular, exponent, r_max, n_cells), count)
    ext = richardson(coarse.eigenvalues, fine.eigenvalues, r_max / (n_cells + 0.5), r_max / (2 * n_cells + 0.5))
    return NumericSpectrum(
        ext, fine.eigenvectors, fine.nodes, fine.eigenvalues,
        np.abs(fine.eigenvalues - coarse.eigenvalues), fine.residuals,
    )


# --- quadrature ------------------------------------------------------------


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    converged: bool


_GL_X, _GL_W = leggauss(20)


def _gl(f, lo, hi):
    mid, half = (lo + hi) / 2, (hi - lo) / 2
    return half * float(np.dot(_GL_W, f(mid + half * _GL_X)))


def integrate(f, lo, hi, tol=1e-10, max_panels=4096):
    """Adaptive composite 20-point Gauss-Legendre quadrature.

    A panel is accepted when splitting it changes its value by less than its
    share of ``tol``.  ``converged`` is False when the panel budget runs out;
    the returned value is then the best estimate available.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    total, err = 0.0, 0.0
    stack = [(lo, hi, _gl(f, lo, hi))]
    panels = 0
    converged = True
    while stack:
        a, b, whole = stack.pop()
        m = (a + b) / 2
        left, right = _gl(f, a, m), _gl(f, m, b)
        diff = abs(left + right - whole)
        panels += 1
        if diff <= tol * (b - a) / (hi - lo) or panels >= max_panels:
            if diff > tol * (b - a) / (hi - lo):
                converged = False
            total += left + right
            err += diff
        else:
            stack.append((m, b, right))
            stack.append((a, m, left))
    return QuadResult(total, err, converged)


def tail_bound(state, R):
    """Bound on ``int_R^inf state^2`` from ``|psi| <= |psi(R)| (r/R)^p exp(-b (r^2-R^2)/2)``.

    Valid once ``R`` lies beyond every node and ``b R^2 > p``.
    """
    b, p = state.scale, state.growth_power
    slope = b * R - p / R
    if slope <= 0:
        return math.inf
    return float(state.evaluate(R)) ** 2 / (2 * slope)


def integration_cutoff(state, tail_tol=1e-12):
    """Radius beyond which the tail bound drops below ``tail_tol``."""
    b, p = state.scale, max(state.growth_power, 0.0)
    R = math.sqrt(2 * p / b) + 6 / math.sqrt(b)
    while tail_bound(state, R) >= tail_tol:
        R += 1 / math.sqrt(b)
    return R


def quadrature_norm(state, tol=1e-10):
    """``int_0^inf state^2 dr`` by adaptive quadrature on ``[r_floor, R]`` plus the tail bound."""
    R = integration_cutoff(state)
    q = integrate(lambda r: state.evaluate(r) ** 2, 1e-8, R, tol=tol)
    tail = tail_bound(state, R)
    return QuadResult(q.value, q.error + tail, q.converged)


def gram_matrix(states, tol=1e-11):
    """Overlap matrix of states by adaptive quadrature (symmetric by construction)."""
    R = max(integration_cutoff(s) for s in states)
    m = len(states)
    G = np.empty((m, m))
    for i in range(m):
        for j in range(i, m):
            G[i, j] = G[j, i] = integrate(lambda r: states[i](r) * states[j](r), 1e-8, R, tol=tol).value
    return G


@dataclass(frozen=True)
class StateReport:
    n: int
    exact_energy: float
    numeric_energy: float
    gap: float
    rel_gap: float
    overlap: float
    norm: float


def verify_exact_state(state, U, grid, spectrum=None):
    """Compare a closed-form state with the numerical spectrum of ``U`` on ``grid``.

    ``spectrum`` may be passed to reuse one solve for several states.
    """
    if spectrum is None:
        spectrum = solve(U, grid, min(MAX_COUNT, state.n + 3))
    idx = int(np.argmin(np.abs(spectrum.eigenvalues - state.energy)))
    num = float(spectrum.eigenvalues[idx])
    gap = abs(num - state.energy)
    nodes = spectrum.nodes
    w = trapezoid_weights(nodes)
    phi = np.asarray(state.evaluate(nodes), dtype=float)
    phi = phi / math.sqrt(float(np.sum(w * phi * phi)))
    overlap = abs(float(np.sum(w * phi * spectrum.eigenvectors[:, idx])))
    return StateReport(
        n=state.n, exact_energy=state.energy, numeric_energy=num, gap=gap,
        rel_gap=gap / abs(state.energy), overlap=overlap, norm=quadrature_norm(state).value,
    )
