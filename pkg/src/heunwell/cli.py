"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 invalid or inconsistent
parameters.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile

import numpy as np

from . import oracle, wavefn
from .errors import HeunWellError, TerminationNotAchievedError
from .model import PotentialSpec, all_families, classify_family, potential_minimum
from .spectrum import (
    Parity,
    build_state,
    eigenvalue,
    nearest_special_strength,
    special_strengths,
    threshold_offset,
)

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_BAD_PARAMS = 0, 1, 2
SNAP_WINDOW = 0.05
log = logging.getLogger("heunwell")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- output


def _write(text: str, path: str | None) -> None:
    if not path:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.splitext(path)[1])
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _fmt(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def render_csv(header: dict, columns: list, rows) -> str:
    """'#'-prefixed parameter echo, a column line, then the data rows."""
    buf = io.StringIO()
    for key, value in header.items():
        buf.write(f"# {key}={_fmt(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def read_csv(text: str):
    """Parse :func:`render_csv` output back into (header, columns, rows of str)."""
    header, body = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            header[key] = value
        elif line:
            body.append(line)
    rows = list(csv.reader(body))
    return header, rows[0], rows[1:]


def render_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _emit(args, header, columns, rows, json_obj):
    if args.format == "json":
        _write(render_json(json_obj), args.out)
    else:
        _write(render_csv(header, columns, rows), args.out)


# -------------------------------------------------------------- commands


def _indices(args):
    return [args.N] if args.N is not None else list(range(0, 4))


def _parities(args):
    if args.parity in (None, "all"):
        return list(Parity)
    return [Parity.parse(args.parity)]


def _state_record(state, nodes):
    return {
        "N": state.n_index,
        "parity": state.parity.value,
        "u0": state.u0,
        "d": state.d,
        "eps": state.eps,
        "nodes": nodes,
        "coefficients": [float(v) for v in state.polynomial],
    }


def _analytic_nodes(state, x_max=None, n_points=4001):
    x_max = 8.0 * state.d if x_max is None else x_max
    return wavefn.sample(state, x_max, n_points).nodes


def cmd_classify(args):
    pairs = [(args.q, args.p)] if args.q is not None else list(all_families())
    if args.q is None and args.p is not None:
        raise UsageError("--p needs --q")
    if args.q is not None and args.p is None:
        pairs = [(args.q, p) for p in range(-2, args.q + 1, 2)]
    records = [{"q": q, "p": p, "class": classify_family(q, p).value} for q, p in pairs]
    _emit(args, {"command": "classify"}, ["q", "p", "class"],
          [(r["q"], r["p"], r["class"]) for r in records], records)
    return EXIT_OK


def cmd_special_values(args):
    records = []
    for n in _indices(args):
        for parity in _parities(args):
            if args.d * math.sqrt(args.u0_max) <= threshold_offset(n, parity):
                continue
            for u0 in special_strengths(n, parity, args.d, args.u0_max, tol=args.tol or 1e-10):
                state = build_state(n, parity, u0, args.d)
                records.append(_state_record(state, _analytic_nodes(state)))
    if not records:
        print(f"no special strengths below u0_max={args.u0_max}", file=sys.stderr)
        return EXIT_BAD_PARAMS
    header = {"command": "special-values", "d": args.d, "u0_max": args.u0_max}
    rows = [(r["N"], r["parity"], r["u0"], r["eps"], r["nodes"]) for r in records]
    _emit(args, header, ["N", "parity", "u0", "eps", "nodes"], rows, records)
    return EXIT_OK


def cmd_spectrum(args):
    """Closed-form eps for every (N, parity) the given U0*d^2 can bind."""
    if args.u0 is None:
        raise UsageError("spectrum needs --u0")
    records = []
    for n in _indices(args):
        for parity in _parities(args):
            if args.d * math.sqrt(args.u0) > threshold_offset(n, parity):
                records.append({"N": n, "parity": parity.value,
                                "eps": eigenvalue(n, parity, args.u0, args.d)})
    header = {"command": "spectrum", "u0": args.u0, "d": args.d}
    _emit(args, header, ["N", "parity", "eps"],
          [(r["N"], r["parity"], r["eps"]) for r in records],
          {"u0": args.u0, "d": args.d, "states": records})
    return EXIT_OK


def _numeric_wave(args):
    if args.u0 is None or args.eps is None:
        raise UsageError("--numeric needs --u0 and --eps")
    window = max(0.5, 0.05 * abs(args.eps))
    lo, hi = args.eps - window, min(args.eps + window, 0.5 * args.eps)
    parities = _parities(args)
    candidates = []
    for res in oracle.spectrum_scan(args.u0, args.d, lo, n_brackets=40, eps_max=hi):
        if res.parity in parities:
            candidates.append(res)
    if not candidates:
        raise TerminationNotAchievedError(f"no bound state within {window:g} of eps={args.eps}")
    best = min(candidates, key=lambda r: abs(r.eps - args.eps))
    x = np.linspace(-args.x_max, args.x_max, args.points)
    values = np.interp(x, best.wave.grid, best.wave.values)
    header = {"command": "wavefunction", "method": "numerov", "u0": args.u0, "d": args.d,
              "parity": best.parity.value, "eps": best.eps, "nodes": best.n_nodes}
    return header, wavefn.normalize(wavefn.make_sample(x, values))


def _analytic_wave(args):
    if args.N is None or args.parity in (None, "all") or args.u0 is None:
        raise UsageError("wavefunction needs --N, --parity and --u0 (or --numeric)")
    parity = Parity.parse(args.parity)
    u0 = nearest_special_strength(args.N, parity, args.u0, args.d, SNAP_WINDOW)
    if u0 is None:
        # surfaces the termination diagnostic for the raw value
        build_state(args.N, parity, args.u0, args.d)
        u0 = args.u0
    state = build_state(args.N, parity, u0, args.d)
    wave = wavefn.normalize(wavefn.sample(state, args.x_max, args.points))
    header = {"command": "wavefunction", "method": "heun", "N": args.N, "parity": parity.value,
              "u0": u0, "d": args.d, "eps": state.eps, "nodes": wave.nodes,
              "coefficients": " ".join(_fmt(float(v)) for v in state.polynomial)}
    return header, wave


def cmd_wavefunction(args):
    if args.points < 3 or args.points % 2 == 0:
        raise UsageError("--points must be odd and >= 3")
    header, wave = _numeric_wave(args) if args.numeric else _analytic_wave(args)
    rows = zip(wave.grid, wave.values, wave.values**2)
    obj = dict(header)
    obj.update(x=wave.grid.tolist(), psi=wave.values.tolist(), psi2=(wave.values**2).tolist())
    _emit(args, header, ["x", "psi", "psi2"], rows, obj)
    return EXIT_OK


def cmd_scan(args):
    if args.u0 is None:
        raise UsageError("scan needs --u0")
    eps_min = args.eps
    if eps_min is None:
        eps_min = potential_minimum(PotentialSpec(args.u0, args.d))[1]
    results = oracle.spectrum_scan(args.u0, args.d, eps_min, n_brackets=args.brackets)
    records = [{"eps": r.eps, "parity": r.parity.value, "nodes": r.n_nodes} for r in results]
    header = {"command": "scan", "u0": args.u0, "d": args.d, "eps_min": eps_min}
    _emit(args, header, ["eps", "parity", "nodes"],
          [(r["eps"], r["parity"], r["nodes"]) for r in records],
          {"u0": args.u0, "d": args.d, "states": records})
    return EXIT_OK


def run_checks(n_max: int = 2, d: float = 1.0, tol: float = 1e-6, u0_max: float = 5000.0):
    """Cross-validate the closed-form route against the Numerov oracle.

    Returns a list of (name, passed, detail) tuples.
    """
    checks = []

    def record(name, ok, detail):
        checks.append((name, bool(ok), detail))

    for n in range(n_max + 1):
        for parity in Parity:
            tag = f"N={n} {parity.value}"
            roots = special_strengths(n, parity, d, u0_max)
            record(f"{tag} root count", len(roots) == n + 1, f"{len(roots)} roots, expected {n + 1}")
            law_start = 2 * n if parity is Parity.SYMMETRIC else 2 * n + 1
            for k, u0 in enumerate(roots):
                rtag = f"{tag} U0={u0:.4f}"
                try:
                    state = build_state(n, parity, u0, d)
                except TerminationNotAchievedError as exc:
                    record(f"{rtag} termination", False, str(exc))
                    continue
                nodes = _analytic_nodes(state)
                record(f"{rtag} node law", nodes == law_start - 2 * k,
                       f"{nodes} nodes, expected {law_start - 2 * k}")
                window = max(0.05 * abs(state.eps), 0.05)
                shot = oracle.shoot_eigenvalue(u0, d, state.eps - window,
                                               min(state.eps + window, 0.5 * state.eps), parity)
                rel = abs(shot.eps - state.eps) / abs(state.eps)
                record(f"{rtag} closed-form vs Numerov", rel <= tol, f"rel diff {rel:.2e} (tol {tol:.0e})")
                record(f"{rtag} Numerov nodes", shot.n_nodes == nodes, f"{shot.n_nodes} vs {nodes}")
                xs = np.linspace(-4 * d, 4 * d, 101)
                res = np.array([wavefn.schrodinger_residual(state, x) for x in xs])
                scale = np.max(np.abs(state.eps * wavefn.psi(state, xs)))
                ratio = np.mean(np.abs(res)) / scale
                record(f"{rtag} Schrodinger residual", ratio <= 1e-3, f"mean/||eps psi|| = {ratio:.2e}")
    return checks


def cmd_verify(args):
    n_max = args.N if args.N is not None else 2
    checks = run_checks(n_max, args.d, args.tol or 1e-6, args.u0_max)
    width = max(len(name) for name, _, _ in checks)
    lines = [f"{'PASS' if ok else 'FAIL'}  {name:<{width}}  {detail}" for name, ok, detail in checks]
    failed = [name for name, ok, _ in checks if not ok]
    lines.append(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    _write("\n".join(lines) + "\n", args.out)
    if failed:
        print("failed: " + ", ".join(failed), file=sys.stderr)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "special-values": cmd_special_values,
    "spectrum": cmd_spectrum,
    "wavefunction": cmd_wavefunction,
    "verify": cmd_verify,
    "scan": cmd_scan,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--N", type=int, help="polynomial degree N (default: 0..3 where applicable)")
    common.add_argument("--parity", choices=["s", "a", "all"], help="s(ymmetric), a(ntisymmetric) or all")
    common.add_argument("--d", type=float, default=1.0, help="well width d (default 1)")
    common.add_argument("--u0", type=float, help="potential strength U0 = 2mV0/hbar^2")
    common.add_argument("--u0-max", type=float, default=5000.0, help="upper end of the U0 search (default 5000)")
    common.add_argument("--eps", type=float, help="energy eps = 2mE/hbar^2 (numeric states; scan lower bound)")
    common.add_argument("--x-max", type=float, default=6.0, help="half-width of the x grid (default 6)")
    common.add_argument("--points", type=int, default=4001, help="odd number of grid points (default 4001)")
    common.add_argument("--tol", type=float,
                        help="root tolerance in U0 (special-values, default 1e-10) or relative "
                             "eps agreement (verify, default 1e-6)")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    common.add_argument("--numeric", action="store_true", help="wavefunction from the Numerov oracle")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="heunwell", description=__doc__.splitlines()[0] if __doc__ else None)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("classify", parents=[common], help="solvability class of (q, p) families")
    p.add_argument("--q", type=int)
    p.add_argument("--p", type=int)
    sub.add_parser("special-values", parents=[common], help="special U0 with eigenvalues and node counts")
    sub.add_parser("spectrum", parents=[common], help="closed-form eigenvalues at a given U0")
    sub.add_parser("wavefunction", parents=[common], help="sampled, normalised wavefunction")
    sub.add_parser("verify", parents=[common], help="cross-validation report")
    p = sub.add_parser("scan", parents=[common], help="all bound states by Numerov shooting")
    p.add_argument("--brackets", type=int, default=200, help="eps grid cells (default 200)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    for name in ("d", "u0_max", "x_max", "tol", "u0"):
        value = getattr(args, name, None)
        if value is not None and not value > 0:
            print(f"--{name.replace('_', '-')} must be positive", file=sys.stderr)
            return EXIT_BAD_PARAMS
    try:
        return COMMANDS[args.command](args)
    except (UsageError, HeunWellError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_PARAMS


if __name__ == "__main__":
    sys.exit(main())
