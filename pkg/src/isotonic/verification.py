"""Verification suites: special-function identities and closed form vs numerics."""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import List

import numpy as np

from . import exact, numeric, specfun
from .model import PotentialParams, solvability_gate, solvable_a
from .susy import partner_v1

REPORT_VERSION = "1"

# pass thresholds of `verify`
TOL_REL_GAP = 1e-7
TOL_OVERLAP = 1e-8
TOL_NORM = 1e-8
TOL_GRAM = 1e-7
TOL_PARTNER = 1e-6

SCOPE_NOTE = (
    "Only the odd-sector d=1 correspondence is checked: k=0 states map to the odd "
    "states n=3,5,7,... of the d=1 nonlinear oscillator. The even d=1 states "
    "(including its n=0 level E=-3) have no image in this d>=2 construction and are out of scope."
)


@dataclass(frozen=True)
class Case:
    """A solvable parameter set; ``a`` is fixed by the gate."""

    B2: float
    d: int
    ell: int
    omega: float

    @property
    def params(self):
        return PotentialParams(B2=self.B2, omega=self.omega, g=2.0,
                               a=solvable_a(self.B2, self.d, self.ell, self.omega), d=self.d, ell=self.ell)

    def label(self):
        return f"B2={self.B2:g},d={self.d},ell={self.ell},omega={self.omega:g}"


# k = 0, 1/2, 1, sqrt(3) - 1/2 realized through (B2, d, ell)
K_REALIZATIONS = [(0.0, 3, 0), (0.0, 2, 1), (0.0, 3, 1), (2.0, 4, 0)]
OMEGAS = [0.5, 1.0, 2.0]
DEFAULT_SWEEP = [Case(B2, d, ell, w) for (B2, d, ell) in K_REALIZATIONS for w in OMEGAS]


def partner_spectra(k, omega, a, count=5, n_points=6000, r_max=None):
    """Numerical spectra of both partner potentials, without any closed-form input.

    ``V1`` uses Dirichlet walls; ``V2`` uses the ``r^k`` boundary exponent,
    the behaviour that ``A`` imposes on images of ``V1`` states.
    """
    eps_guess = 2 * omega * (2 * (count - 1) + 2 * k + 3)
    grid = numeric.radial_grid_for(k, omega, eps_guess, n_points, r_max)
    s1 = numeric.solve(lambda r: partner_v1(k, omega, a, r), grid, count)
    s2 = numeric.solve_weighted(lambda r: omega**2 * r * r + omega * (2 * k + 5), k, grid.r_max, n_points, count)
    return s1, s2


@dataclass
class CaseResult:
    params: dict
    k: float
    levels: List[dict] = field(default_factory=list)
    gram_dev: float = 0.0
    partner_dev: float = 0.0
    max_rel_gap: float = 0.0
    min_overlap: float = 1.0
    max_norm_dev: float = 0.0
    passed: bool = True
    failures: List[str] = field(default_factory=list)


def run_case(case, n_levels=5, n_gram=9, n_points=6000, r_max=None, energy_offset=0.0):
    """Check one parameter set.

    ``energy_offset`` is added to every closed-form energy before comparison;
    it exists so tests can confirm that a wrong formula is caught.
    """
    p = case.params
    e = solvability_gate(p)
    k, w, a = e.k, p.omega, p.a
    states = [exact.isotonic_wavefunction(e, w, a, n) for n in range(max(n_levels, n_gram))]
    s1, s2 = partner_spectra(k, w, a, n_levels, n_points, r_max)
    res = CaseResult(params=asdict(case) | {"a": a, "g": 2.0}, k=k)
    for st in states[:n_levels]:
        rep = numeric.verify_exact_state(st, None, None, spectrum=s1)
        claimed = st.energy + energy_offset
        gap = abs(rep.numeric_energy - claimed)
        row = {
            "n": st.n, "energy": claimed, "unshifted": st.unshifted_energy + energy_offset,
            "numeric": rep.numeric_energy, "gap": gap, "rel_gap": gap / abs(claimed),
            "overlap": rep.overlap, "norm": rep.norm,
        }
        res.levels.append(row)
    G = numeric.gram_matrix(states[:n_gram])
    res.gram_dev = float(np.max(np.abs(G - np.eye(n_gram))))
    res.partner_dev = float(np.max(np.abs(s1.eigenvalues - s2.eigenvalues) / np.abs(s2.eigenvalues)))
    res.max_rel_gap = max(r["rel_gap"] for r in res.levels)
    res.min_overlap = min(r["overlap"] for r in res.levels)
    res.max_norm_dev = max(abs(r["norm"] - 1) for r in res.levels)
    checks = [
        (res.max_rel_gap <= TOL_REL_GAP, f"eigenvalue rel gap {res.max_rel_gap:.3e}"),
        (1 - res.min_overlap <= TOL_OVERLAP, f"overlap {res.min_overlap:.15f}"),
        (res.max_norm_dev <= TOL_NORM, f"norm deviation {res.max_norm_dev:.3e}"),
        (res.gram_dev <= TOL_GRAM, f"Gram deviation {res.gram_dev:.3e}"),
        (res.partner_dev <= TOL_PARTNER, f"partner deviation {res.partner_dev:.3e}"),
    ]
    res.failures = [msg for ok, msg in checks if not ok]
    res.passed = not res.failures
    return res


def run_suite(cases=None, workers=1, **kw):
    """Run cases (concurrently if ``workers > 1``) and assemble the report dict.

    Results are ordered by case index whatever the completion order.
    """
    cases = list(DEFAULT_SWEEP if cases is None else cases)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda c: run_case(c, **kw), cases))
    else:
        results = [run_case(c, **kw) for c in cases]
    worst = max(range(len(results)), key=lambda i: results[i].max_rel_gap) if results else None
    failed = [(c, r) for c, r in zip(cases, results) if not r.passed]
    summary = {
        "max_gap": max(lv["gap"] for r in results for lv in r.levels),
        "max_rel_gap": max(r.max_rel_gap for r in results),
        "max_gram_dev": max(r.gram_dev for r in results),
        "max_partner_dev": max(r.partner_dev for r in results),
        "min_overlap": min(r.min_overlap for r in results),
        "pass": not failed,
        "worst_case": cases[worst].label() if worst is not None else None,
        "failures": [f"{c.label()}: {'; '.join(r.failures)}" for c, r in failed],
    }
    return {
        "version": REPORT_VERSION,
        "cases": [asdict(r) for r in results],
        "summary": summary,
        "scope": SCOPE_NOTE,
    }


# --- special-function identity suites ----------------------------------------


@dataclass(frozen=True)
class IdentityResult:
    name: str
    checked: int
    max_error: float
    tolerance: float

    @property
    def passed(self):
        return self.max_error <= self.tolerance


def _scaled_error(lhs, *terms):
    """``|lhs - sum(terms)|`` relative to the largest magnitude involved."""
    diff = np.abs(lhs - sum(terms))
    scale = np.maximum.reduce([np.abs(lhs)] + [np.abs(t) for t in terms])
    return np.where(scale > 0, diff / np.where(scale > 0, scale, 1), diff)


LAG_ALPHAS = (-0.5, 0.5, 1.0, 2.5)


def check_laguerre_sum_identity():
    """``L_n^a = L_{n-1}^a + L_n^{a-1}`` for 1 <= n <= 30 on [0, 50]."""
    z = np.linspace(0, 50, 201)
    errs = [
        _scaled_error(specfun.laguerre(n, al, z), specfun.laguerre(n - 1, al, z), specfun.laguerre(n, al - 1, z)).max()
        for n in range(1, 31) for al in LAG_ALPHAS
    ]
    return IdentityResult("laguerre L_n^a = L_{n-1}^a + L_n^{a-1}", len(errs) * len(z), float(max(errs)), 1e-10)


def check_laguerre_derivative_identity():
    """``d/dz L_n^a = -L_{n-1}^{a+1}`` against central differences (step 1e-5)."""
    z = np.linspace(0.5, 50, 100)
    h = 1e-5
    errs = []
    for n in range(1, 31):
        for al in LAG_ALPHAS:
            fd = (specfun.laguerre(n, al, z + h) - specfun.laguerre(n, al, z - h)) / (2 * h)
            an = -specfun.laguerre(n - 1, al + 1, z)
            # finite differences carry roundoff ~ eps |L| / h, so scale by |L| too
            scale = np.maximum(np.abs(an), np.abs(specfun.laguerre(n, al, z)))
            errs.append(float(np.max(np.abs(fd - an) / scale)))
    return IdentityResult("laguerre d/dz L_n^a = -L_{n-1}^{a+1}", len(errs) * len(z), max(errs), 1e-6)


def _hermite_sweep(alpha, r_lo):
    r = np.linspace(r_lo, 5, 200)
    errs = []
    for n in range(16):
        for w in (0.5, 1.0, 2.0):
            lag = specfun.laguerre(n, alpha, w * r * r)
            if alpha < 0:
                her = (-1) ** n / (4**n * math.factorial(n)) * specfun.hermite(2 * n, math.sqrt(w) * r)
            else:
                her = (-1) ** n / (2 ** (2 * n + 1) * math.factorial(n) * math.sqrt(w) * r) * specfun.hermite(2 * n + 1, math.sqrt(w) * r)
            errs.append(float(_scaled_error(lag, her).max()))
    return len(errs) * len(r), max(errs)


def check_hermite_even_identity():
    """``L_n^{-1/2}(w r^2) = (-1)^n / (4^n n!) H_{2n}(sqrt(w) r)``."""
    cnt, err = _hermite_sweep(-0.5, 1e-6)
    return IdentityResult("L_n^{-1/2}(wr^2) vs H_{2n}", cnt, err, 1e-9)


def check_hermite_odd_identity():
    """``L_n^{1/2}(w r^2) = (-1)^n / (2^{2n+1} n! sqrt(w) r) H_{2n+1}(sqrt(w) r)``."""
    cnt, err = _hermite_sweep(0.5, 1e-3)
    return IdentityResult("L_n^{1/2}(wr^2) vs H_{2n+1}", cnt, err, 1e-9)


def check_hermite_recurrence():
    """``2z H_m = H_{m+1} + 2m H_{m-1}`` plus agreement with numpy's Hermite series."""
    z = np.linspace(-5, 5, 201)
    errs = []
    for m in range(1, 40):
        errs.append(float(_scaled_error(2 * z * specfun.hermite(m, z), specfun.hermite(m + 1, z), 2 * m * specfun.hermite(m - 1, z)).max()))
        ref = np.polynomial.hermite.hermval(z, [0] * m + [1])
        errs.append(float((np.abs(specfun.hermite(m, z) - ref) / np.maximum(np.abs(ref), 1e-300 + np.abs(specfun.hermite(m, z)))).max()))
    return IdentityResult("hermite three-term recurrence", len(errs) * len(z), max(errs), 1e-10)


def check_hypergeometric_conversion():
    """``1F1(-n; a+1; z) = n!/(a+1)_n L_n^a(z)`` with the series summed exactly."""
    zs = [Fraction(j, 4) for j in range(0, 201, 5)]
    errs = []
    for n in (0, 1, 2, 5, 10, 20, 30, 40, 50):
        for al in LAG_ALPHAS:
            b = Fraction(al) + 1
            ex = np.array([float(specfun.hyp1f1_terminating(n, b, z)) for z in zs])
            via = math.factorial(n) / specfun.pochhammer(al + 1, n) * specfun.laguerre(n, al, np.array([float(z) for z in zs]))
            errs.append(float(np.max(np.abs(via - ex) / np.abs(ex))))
    return IdentityResult("1F1(-n;a+1;z) = n!/(a+1)_n L_n^a", len(errs) * len(zs), max(errs), 1e-12)


def check_pochhammer_product():
    """``(g)_n (g+n)_m = (g)_{n+m}``."""
    errs = []
    for g in (0.5, 1.0, 1.7, 2.5, 7.25):
        for n in range(0, 21):
            for m in range(0, 41 - n):
                lhs = specfun.pochhammer(g, n) * specfun.pochhammer(g + n, m)
                rhs = specfun.pochhammer(g, n + m)
                errs.append(abs(lhs - rhs) / abs(rhs))
    return IdentityResult("pochhammer product rule", len(errs), max(errs), 1e-12)


IDENTITY_SUITES = (
    check_hypergeometric_conversion,
    check_laguerre_derivative_identity,
    check_laguerre_sum_identity,
    check_hermite_even_identity,
    check_hermite_odd_identity,
    check_hermite_recurrence,
    check_pochhammer_product,
)


def run_identity_suites():
    return [suite() for suite in IDENTITY_SUITES]
