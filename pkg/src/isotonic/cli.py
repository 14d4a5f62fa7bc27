"""Command-line interface.

Subcommands print plot-ready tables (CSV by default, JSON with ``--format
json``).  Column orders:

  spectrum       n, k, eps_shifted, E_unshifted
  wavefunction   r, phi            (preceded by a ``# norm=...`` comment line)
  partner        r, V1, V2, W
  verify         case, n, energy, numeric, gap, rel_gap, overlap, norm
  check-identities  identity, checked, max_error, tolerance, pass

Exit codes: 0 success, 1 verification failure, 2 parameter or gate rejection.
"""

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__, exact, numeric, verification
from .model import PotentialParams, gate_message, solvability_gate, solvable_a
from .susy import partner_v1, partner_v2, reduced_ansatz

EXIT_OK, EXIT_FAIL, EXIT_REJECT = 0, 1, 2


class _Reject(Exception):
    pass


def fmt(x):
    """17 significant digits, enough to round-trip a double."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def _potential_args(p):
    g = p.add_argument_group("potential")
    g.add_argument("--B2", type=float, default=None, help="inverse-square strength B^2 (default 0)")
    g.add_argument("--omega", type=float, default=None, help="oscillator frequency (default 1)")
    g.add_argument("--g", type=float, default=None, help="rational-term coupling (default 2)")
    ga = g.add_mutually_exclusive_group()
    ga.add_argument("--a2", type=float, default=None, help="pole distance squared (default: the solvable value)")
    ga.add_argument("--a", type=float, default=None, help="pole distance; squared internally")
    g.add_argument("--d", type=int, default=None, help="spatial dimension >= 2 (default 3)")
    g.add_argument("--ell", type=int, default=None, help="angular momentum (default 0)")


def _output_args(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output file (default: standard output)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="isotonic", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="exact energies for n = 0..n_max")
    _potential_args(sp)
    sp.add_argument("--n-max", type=int, default=4)
    _output_args(sp)

    wf = sub.add_parser("wavefunction", help="sample a normalized eigenfunction")
    _potential_args(wf)
    wf.add_argument("--n", type=int, default=0, help="node count (<= 12)")
    wf.add_argument("--samples", type=int, default=201)
    wf.add_argument("--r-max", type=float, default=None, help="largest sampled radius")
    _output_args(wf)

    pt = sub.add_parser("partner", help="tabulate the partner potentials and W")
    _potential_args(pt)
    pt.add_argument("--samples", type=int, default=201)
    pt.add_argument("--r-min", type=float, default=0.05)
    pt.add_argument("--r-max", type=float, default=5.0)
    _output_args(pt)

    vf = sub.add_parser("verify", help="closed forms vs the numerical eigensolver over a sweep")
    _potential_args(vf)
    vf.add_argument("--n-max", type=int, default=4, help="highest level compared per case")
    vf.add_argument("--grid-points", type=int, default=6000)
    vf.add_argument("--r-max", type=float, default=None, help="override the grid extent")
    vf.add_argument("--workers", type=int, default=4)
    vf.add_argument("--no-default-sweep", action="store_true", help="check only the user-supplied set")
    vf.add_argument("--inject-energy-error", type=float, default=0.0, help=argparse.SUPPRESS)
    _output_args(vf)

    ci = sub.add_parser("check-identities", help="run the special-function identity suites")
    _output_args(ci)
    return parser


def _params_from(args, require_solvable=True):
    def pick(name, default):
        v = getattr(args, name, None)
        return default if v is None else v

    B2, omega, g = pick("B2", 0.0), pick("omega", 1.0), pick("g", 2.0)
    d, ell = pick("d", 3), pick("ell", 0)
    try:
        if args.a2 is not None:
            p = PotentialParams.from_a2(args.a2, B2=B2, omega=omega, g=g, d=d, ell=ell)
        elif args.a is not None:
            p = PotentialParams(B2=B2, omega=omega, g=g, a=args.a, d=d, ell=ell)
        else:
            p = PotentialParams(B2=B2, omega=omega, g=g, a=solvable_a(B2, d, ell, omega), d=d, ell=ell)
    except ValueError as exc:
        raise _Reject(str(exc)) from exc
    if require_solvable and not solvability_gate(p).solvable:
        raise _Reject(gate_message(p))
    return p


def _user_supplied(args):
    return any(getattr(args, n, None) is not None for n in ("B2", "omega", "g", "a2", "a", "d", "ell"))


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _csv(header, rows, comments=()):
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])
    return buf.getvalue()


def _json(obj):
    return json.dumps(obj, indent=2, default=float) + "\n"


def cmd_spectrum(args):
    p = _params_from(args)
    e = solvability_gate(p)
    rows = []
    for n in range(args.n_max + 1):
        lv = exact.isotonic_spectrum(e, p.omega, n)
        rows.append((n, e.k, lv.shifted, lv.unshifted))
    header = ["n", "k", "eps_shifted", "E_unshifted"]
    if args.format == "json":
        return _json({"params": _param_dict(p), "rows": [dict(zip(header, r)) for r in rows]}), EXIT_OK
    return _csv(header, rows), EXIT_OK


def _param_dict(p):
    return {"B2": p.B2, "omega": p.omega, "g": p.g, "a": p.a, "a2": p.a2, "d": p.d, "ell": p.ell}


def cmd_wavefunction(args):
    p = _params_from(args)
    if not 0 <= args.n <= 12:
        raise _Reject("n must lie in 0..12")
    if args.samples < 2:
        raise _Reject("need at least 2 samples")
    e = solvability_gate(p)
    st = exact.isotonic_wavefunction(e, p.omega, p.a, args.n)
    norm = numeric.quadrature_norm(st).value
    r_max = args.r_max if args.r_max is not None else numeric.integration_cutoff(st)
    r = np.linspace(r_max / args.samples, r_max, args.samples)
    phi = st.evaluate(r)
    if args.format == "json":
        return _json({
            "params": _param_dict(p), "n": args.n, "k": e.k, "energy": st.energy,
            "unshifted_energy": st.unshifted_energy, "norm": norm,
            "rows": [{"r": float(x), "phi": float(y)} for x, y in zip(r, phi)],
        }), EXIT_OK
    comments = [f"norm={fmt(norm)}", f"n={args.n} k={fmt(e.k)} energy={fmt(st.energy)}"]
    return _csv(["r", "phi"], zip(r, phi), comments), EXIT_OK


def cmd_partner(args):
    p = _params_from(args)
    if args.samples < 2 or not 0 < args.r_min < args.r_max:
        raise _Reject("need samples >= 2 and 0 < r-min < r-max")
    e = solvability_gate(p)
    r = np.linspace(args.r_min, args.r_max, args.samples)
    w = reduced_ansatz(e.k, p.omega, p.a)
    cols = (r, partner_v1(e.k, p.omega, p.a, r), partner_v2(e.k, p.omega, r), w.derivative(r, 0))
    header = ["r", "V1", "V2", "W"]
    if args.format == "json":
        return _json({"params": _param_dict(p), "rows": [dict(zip(header, map(float, row))) for row in zip(*cols)]}), EXIT_OK
    return _csv(header, zip(*cols)), EXIT_OK


def cmd_verify(args):
    cases = [] if args.no_default_sweep else list(verification.DEFAULT_SWEEP)
    if _user_supplied(args):
        p = _params_from(args)
        cases.append(verification.Case(p.B2, p.d, p.ell, p.omega))
    if not cases:
        raise _Reject("nothing to verify: give parameters or drop --no-default-sweep")
    if args.grid_points < 100:
        raise _Reject("grid-points must be >= 100")
    report = verification.run_suite(
        cases, workers=args.workers, n_levels=args.n_max + 1, n_points=args.grid_points,
        r_max=args.r_max, energy_offset=args.inject_energy_error,
    )
    code = EXIT_OK if report["summary"]["pass"] else EXIT_FAIL
    flat = []
    for c, res in zip(cases, report["cases"]):
        for lv in res["levels"]:
            flat.append({"case": c.label(), "params": res["params"], **lv})
    if args.format == "json":
        out = {
            "version": report["version"],
            "cases": flat,
            "case_checks": [
                {"case": c.label(), "params": r["params"], "k": r["k"], "gram_dev": r["gram_dev"],
                 "partner_dev": r["partner_dev"], "passed": r["passed"], "failures": r["failures"]}
                for c, r in zip(cases, report["cases"])
            ],
            "summary": report["summary"],
            "scope": report["scope"],
        }
        text = _json(out)
    else:
        s = report["summary"]
        comments = [
            f"pass={fmt(s['pass'])} max_gap={fmt(s['max_gap'])} max_rel_gap={fmt(s['max_rel_gap'])} "
            f"max_gram_dev={fmt(s['max_gram_dev'])} max_partner_dev={fmt(s['max_partner_dev'])}",
            report["scope"],
        ] + [f"FAIL {f}" for f in s["failures"]]
        header = ["case", "n", "energy", "numeric", "gap", "rel_gap", "overlap", "norm"]
        text = _csv(header, ([row[h] for h in header] for row in flat), comments)
    if code != EXIT_OK:
        print(f"verification failed; worst offender: {report['summary']['failures'][0]}", file=sys.stderr)
    return text, code


def cmd_check_identities(args):
    results = verification.run_identity_suites()
    ok = all(r.passed for r in results)
    if args.format == "json":
        text = _json({
            "identities": [
                {"identity": r.name, "checked": r.checked, "max_error": r.max_error,
                 "tolerance": r.tolerance, "pass": r.passed} for r in results
            ],
            "pass": ok,
        })
    else:
        text = _csv(["identity", "checked", "max_error", "tolerance", "pass"],
                    ((r.name, r.checked, r.max_error, r.tolerance, r.passed) for r in results))
    return text, EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "spectrum": cmd_spectrum,
    "wavefunction": cmd_wavefunction,
    "partner": cmd_partner,
    "verify": cmd_verify,
    "check-identities": cmd_check_identities,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors, matching the rejection code
        return int(exc.code or 0)
    try:
        text, code = COMMANDS[args.command](args)
    except _Reject as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REJECT
    _emit(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
