"""Command-line front end.

Exit codes: 0 success, 1 table regression failure, 2 bad arguments,
3 physics-domain error (e.g. F > 0 for the oracle, sigma_0 <= 0 for a
wavefunction).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict

import numpy as np

from .errors import PhysicsDomainError
from .model import PlasmaFieldConfig, QuantumNumbers, effective_potential, series_potential
from .oracle import SCHEMES, compare_with_perturbation, oracle_spectrum
from .parallel import pmap
from .reports import FIGURES, delta_e_analysis, figure_data, reproduce_table
from .susy import full_wavefunction, total_energy, wavefunction_samples

FORMATS = ("text", "csv", "json")


def _physics_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("physical parameters (atomic units)")
    g.add_argument("--A", type=float, default=1.0, help="coupling Z e^2")
    g.add_argument("--lambda-d", dest="lambda_D", type=float, default=20.0, help="Debye length")
    g.add_argument("--g", type=int, choices=(0, 1), default=1, help="0 weakly coupled, 1 dense quantum")
    g.add_argument("--F", type=float, default=0.0, help="electric field")
    g.add_argument("--B", type=float, default=0.0, help="magnetic field")
    g.add_argument("--xi", type=float, default=0, help="AB flux ratio")
    g.add_argument("--mu", type=float, default=1.0)
    g.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--format", choices=FORMATS, default="text")
    p.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")
    return p


def _state_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--m", type=int, default=0)
    return p


def build_parser() -> argparse.ArgumentParser:
    # fresh parents per subcommand: argparse shares parent actions, so set_defaults would leak
    phys, state = _physics_parent, _state_parent
    parser = argparse.ArgumentParser(
        prog="qplasma",
        description="Hydrogen-like bound states in a screened plasma with AB flux, B and F fields.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("energy", parents=[phys(), state()], help="energy breakdown of one state")

    sp = sub.add_parser("spectrum", parents=[phys()], help="energies over n and m ranges")
    sp.add_argument("--n-max", type=int, default=3)
    sp.add_argument("--m-min", type=int, default=-1)
    sp.add_argument("--m-max", type=int, default=1)

    pp = sub.add_parser("potential", parents=[phys(), state()], help="exact vs series potential")
    pp.add_argument("--r-min", type=float, default=0.5)
    pp.add_argument("--r-max", type=float, default=10.0)
    pp.add_argument("--points", type=int, default=201)

    wp = sub.add_parser("wavefunction", parents=[phys(), state()], help="radial samples of P, Q and |psi|")
    wp.add_argument("--r-max", type=float, default=10.0)
    wp.add_argument("--points", type=int, default=101)
    wp.add_argument("--phi", type=float, default=0.0)

    tp = sub.add_parser("table", parents=[phys()], help="regression against a reference table")
    tp.add_argument("--id", dest="table_id", type=int, choices=(1, 2), required=True)

    fp = sub.add_parser("figure", parents=[phys()], help="CSV series for a figure")
    fp.add_argument("--id", dest="figure_id", choices=sorted(FIGURES), required=True)

    op = sub.add_parser("oracle", parents=[phys(), state()], help="finite-difference spectrum for fixed m")
    op.add_argument("--k", type=int, default=3, help="number of eigenvalues")
    op.add_argument("--points", type=int, default=4096)
    op.add_argument("--tolerance", type=float, default=1e-6)
    op.add_argument("--scheme", choices=SCHEMES, default="cylindrical")
    op.add_argument("--box", action="store_true", help="allow F > 0 (box resonances)")

    cp = sub.add_parser("compare", parents=[phys(), state()], help="perturbative vs oracle energy")
    cp.add_argument("--points", type=int, default=4096)
    cp.add_argument("--tolerance", type=float, default=1e-6)

    dp = sub.add_parser("delta-e", parents=[phys(), state()], help="E(B=5) - E(B=0) per flux value")
    dp.add_argument("--xis", type=float, nargs="+", default=[0, 1, 2, 3, 4])
    dp.set_defaults(F=1.2)
    return parser


def _config(args) -> PlasmaFieldConfig:
    xi = int(args.xi) if float(args.xi).is_integer() else args.xi
    return PlasmaFieldConfig(
        A=args.A, lambda_D=args.lambda_D, g=args.g, F=args.F, B=args.B, xi=xi, mu=args.mu, hbar=args.hbar
    )


def _fmt(x) -> str:
    return format(float(x), ".9g")


def _fixed(x: float) -> str:
    x = x + 0.0  # drop negative zero
    if x == 0 or 1e-4 <= abs(x) < 1e9:
        return f"{x:.8f}"
    return f"{x:.8e}"


def _rows_out(fmt, header, rows) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([[_fmt(v) if isinstance(v, float) else v for v in r] for r in rows])
        return buf.getvalue()
    widths = [max(len(h), 16) for h in header]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    for r in rows:
        lines.append(
            "  ".join((_fixed(v) if isinstance(v, float) else str(v)).rjust(w) for v, w in zip(r, widths))
        )
    return "\n".join(lines) + "\n"


def _cmd_energy(args, cfg):
    qn = QuantumNumbers(args.n, args.m)
    b = total_energy(qn, cfg)
    if args.format == "text":
        return (
            f"state n={qn.n} m={qn.m}\n"
            f"  e0     = {_fixed(b.e0)}\n"
            f"  shift  = {_fixed(b.shift)}\n"
            f"  e1     = {_fixed(b.e1)}\n"
            f"  e2     = {_fixed(b.e2)}\n"
            f"  total  = {_fixed(b.total)}\n"
        ), 0
    return _rows_out(args.format, ["n", "m", "e0", "shift", "e1", "e2", "total"],
                     [[qn.n, qn.m, b.e0, b.shift, b.e1, b.e2, b.total]]), 0


def _cmd_spectrum(args, cfg):
    states = [QuantumNumbers(n, m) for m in range(args.m_min, args.m_max + 1) for n in range(args.n_max + 1)]
    results = pmap(lambda qn: total_energy(qn, cfg), states)
    rows = [[q.n, q.m, b.e0, b.shift, b.e1, b.e2, b.total] for q, b in zip(states, results)]
    return _rows_out(args.format, ["n", "m", "e0", "shift", "e1", "e2", "total"], rows), 0


def _cmd_potential(args, cfg):
    qn = QuantumNumbers(args.n, args.m)
    r = np.linspace(args.r_min, args.r_max, args.points)
    exact = effective_potential(r, qn, cfg)
    series = series_potential(r, qn, cfg)
    rows = [[float(a), float(b), float(c)] for a, b, c in zip(r, exact, series)]
    return _rows_out(args.format, ["r", "exact", "series"], rows), 0


def _cmd_wavefunction(args, cfg):
    qn = QuantumNumbers(args.n, args.m)
    r = np.linspace(args.r_max / args.points, args.r_max, args.points)
    samples = wavefunction_samples(r, qn, cfg)
    psi = np.abs(full_wavefunction(r, args.phi, qn, cfg))
    rows = [
        [s.r, s.unperturbed, s.moderated / s.unperturbed if s.unperturbed else float("nan"),
         s.moderated, s.renormalized, float(p)]
        for s, p in zip(samples, psi)
    ]
    return _rows_out(args.format, ["r", "P", "Q", "PQ", "PQ_renormalized", "abs_psi"], rows), 0


def _cmd_table(args, cfg):
    report = reproduce_table(args.table_id)
    text = report.to_json() + "\n" if args.format == "json" else report.render_text() + "\n"
    return text, 0 if report.passed else 1


def _cmd_figure(args, cfg):
    return figure_data(args.figure_id).to_csv(), 0


def _cmd_oracle(args, cfg):
    spec = oracle_spectrum(
        args.m, cfg, args.k, n_points=args.points, tolerance=args.tolerance,
        scheme=args.scheme, box_mode=args.box,
    )
    rows = [[j, args.m, float(e), float(err)] for j, (e, err) in enumerate(zip(spec.eigenvalues, spec.converged))]
    out = _rows_out(args.format, ["n", "m", "eigenvalue", "error_estimate"], rows)
    if args.box and cfg.F > 0 and args.format == "text":
        out += "note: F > 0, values are box-regularised resonances\n"
    return out, 0


def _cmd_compare(args, cfg):
    c = compare_with_perturbation(
        QuantumNumbers(args.n, args.m), cfg, n_points=args.points, tolerance=args.tolerance
    )
    if args.format == "json":
        return json.dumps(asdict(c), indent=2) + "\n", 0
    header = ["n", "m", "perturbative", "oracle", "abs_gap", "oracle_error", "outside_validity"]
    row = [c.n, c.m, c.perturbative, c.oracle, c.abs_gap, c.oracle_error, str(c.outside_validity)]
    out = _rows_out(args.format, header, [row])
    if args.format == "text":
        out += "".join(f"note: {s}\n" for s in c.notes)
    return out, 0


def _cmd_delta_e(args, cfg):
    xis = [int(x) if float(x).is_integer() else x for x in args.xis]
    rows = delta_e_analysis(xis, F=cfg.F, base=cfg, qn=QuantumNumbers(args.n, args.m))
    table = [
        [r.xi, r.e_low, r.e_high, r.delta, "" if r.quoted is None else r.quoted, "yes" if r.discrepancy else "no"]
        for r in rows
    ]
    return _rows_out(args.format, ["xi", "E(B=0)", "E(B=5)", "delta_E", "quoted", "discrepancy"], table), 0


COMMANDS = {
    "energy": _cmd_energy,
    "spectrum": _cmd_spectrum,
    "potential": _cmd_potential,
    "wavefunction": _cmd_wavefunction,
    "table": _cmd_table,
    "figure": _cmd_figure,
    "oracle": _cmd_oracle,
    "compare": _cmd_compare,
    "delta-e": _cmd_delta_e,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        text, code = COMMANDS[args.command](args, cfg)
    except PhysicsDomainError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", newline="\n") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
