"""Command-line front end: ``sweep``, ``filter`` and ``oracle-check``.

Exit codes: 0 success, 1 usage error, 2 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .circuit import ANALYTIC_GLOBAL_PHASE, run_oracle
from .errors import FockFilterError
from .filter import (
    FilterConfig,
    alpha_for_hole,
    alpha_for_parity,
    filtered_state,
    lambda_param,
)
from .fock import (
    DEFAULT_CUTOFF,
    FockVector,
    cat_state,
    coherent_state,
    fock_state,
    normalize,
    squeezed_coherent_state,
)
from .metrics import mandel_q, quadratures
from .sweep import (
    SpecError,
    load_figure,
    load_spec,
    run_sweep,
    shipped_figures,
    to_csv,
    to_json,
    to_svg,
)

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2
ORACLE_TOL = 1e-9
ORACLE_PROB_TOL = 1e-10
HOLE_TOL = 1e-12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _write(text: str, out: str | None):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, newline="")


# -------------------------------------------------------------------- sweep


def cmd_sweep(args) -> int:
    overrides = {"cutoff": args.cutoff, "steps": args.steps}
    if args.figure == "all":
        if not args.out_dir:
            raise UsageError("--figure all needs --out-dir")
        names = shipped_figures()
    elif args.figure:
        names = [args.figure]
    else:
        names = []
    if bool(names) == bool(args.config):
        raise UsageError("give exactly one of --config or --figure")

    try:
        specs = (
            [(n, load_figure(n, overrides)) for n in names]
            if names
            else [(Path(args.config).stem, load_spec(args.config, overrides))]
        )
    except (SpecError, OSError) as exc:
        raise UsageError(str(exc)) from exc

    for name, spec in specs:
        rows = run_sweep(spec)
        text = to_csv(spec, rows) if args.format == "csv" else to_json(spec, rows)
        if args.out_dir:
            out_dir = Path(args.out_dir)
            out_dir.mkdir(parents=True, exist_ok=True)
            out = str(out_dir / f"{name}.{args.format}")
        else:
            out = args.out
        _write(text, out)
        if args.svg:
            svg_path = Path(args.out_dir or ".") / f"{name}.svg" if args.svg == "auto" else Path(args.svg)
            svg_path.write_text(to_svg(spec, rows))
        flagged = sum(1 for r in rows if r["flag"])
        print(f"{name}: {len(rows)} rows ({flagged} flagged) -> {out or 'stdout'}", file=sys.stderr)
    return EXIT_OK


# ------------------------------------------------------------------- filter


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise UsageError(f"cannot parse complex number {text!r}") from None


def build_state(args) -> tuple[FockVector, complex | None]:
    gamma = args.gamma * np.exp(1j * args.beta)
    if args.state == "squeezed":
        xi = args.s * np.exp(1j * args.squeeze_phase)
        return squeezed_coherent_state(gamma, xi, args.cutoff), gamma
    if args.state == "cat":
        return cat_state(gamma, args.delta, args.cutoff), gamma
    if args.state == "coherent":
        return coherent_state(gamma, args.cutoff), gamma
    return fock_state(args.n, args.cutoff), None


def _vector_json(vec: FockVector, k: int) -> list[list[float]]:
    return [[float(c.real), float(c.imag)] for c in vec.amplitudes[:k]]


def filter_report(args) -> dict:
    phi, gamma = build_state(args)
    lam = lambda_param(args.theta1, args.theta2)
    report: dict = {
        "input": {"state": args.state, "cutoff": phi.cutoff},
        "theta1": args.theta1,
        "theta2": args.theta2,
        "lambda": [lam.real, lam.imag],
    }
    if args.alpha is not None:
        alpha = _parse_complex(args.alpha)
    elif args.parity is not None:
        if gamma is None or args.state != "cat":
            raise UsageError("--parity needs --state cat")
        alpha = alpha_for_parity(gamma, args.delta, args.theta1, args.theta2, args.parity)
    else:
        alpha = alpha_for_hole(phi, args.hole, args.theta1, args.theta2)
    report["alpha"] = [alpha.real, alpha.imag]

    config = FilterConfig.from_alpha(args.theta1, args.theta2, alpha)
    result = filtered_state(phi, config)
    h = np.abs(result.collapsed.amplitudes)
    scale = h.max()
    state = result.normalized()
    report["probability"] = result.probability
    if args.alpha is None and args.parity is None:
        ratio = float(h[args.hole] / scale)
        report["hole"] = {"n": args.hole, "relative_amplitude": ratio, "verified": ratio <= HOLE_TOL}
    if args.parity is not None:
        removed = h[1::2] if args.parity == "even" else h[0::2]
        worst = float(removed.max()) if removed.size else 0.0
        report["parity"] = {"kept": args.parity, "max_removed_amplitude": worst,
                            "verified": worst <= HOLE_TOL}
    try:
        report["mandel_q"] = mandel_q(state)
    except FockFilterError as exc:
        report["mandel_q"] = None
        report["mandel_q_error"] = type(exc).__name__
    report["quadratures"] = quadratures(state).as_dict()
    report["amplitudes"] = _vector_json(state, args.amplitudes)
    report["error"] = None
    return report


def cmd_filter(args) -> int:
    try:
        report = filter_report(args)
        code = EXIT_OK
    except FockFilterError as exc:
        report = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        if args.state == "coherent":
            report["error"]["hint"] = (
                "coherent inputs are degenerate: alpha^(n) = -Lambda*gamma for every n, "
                "so removing one component removes them all"
            )
        code = EXIT_NUMERIC
    _write(json.dumps(report, indent=2) + "\n", args.out)
    return code


# ------------------------------------------------------------- oracle-check


def random_case(rng: np.random.Generator, max_photons: int = 12, max_alpha: float = 1.5):
    support = int(rng.integers(2, max_photons + 2))
    amps = np.zeros(max_photons + 1, dtype=complex)
    amps[:support] = rng.normal(size=support) + 1j * rng.normal(size=support)
    phi = normalize(FockVector(amps))
    alpha = max_alpha * math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform())
    theta1, theta2 = rng.uniform(0.1, 1.4, size=2)
    return phi, complex(alpha), float(theta1), float(theta2)


def oracle_check(seed: int, trials: int, cutoff: int = 24) -> dict:
    """Compare the closed-form filter to the brute-force three-mode evolution."""
    if trials < 1:
        raise UsageError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    cases = []
    for k in range(trials):
        phi, alpha, theta1, theta2 = random_case(rng)
        psi = coherent_state(alpha, cutoff)
        config = FilterConfig.from_ancilla(theta1, theta2, psi)
        analytic = filtered_state(phi, config, check=False)
        brute = run_oracle(phi, psi, theta1, theta2)
        dev = float(np.max(np.abs(brute.collapsed.amplitudes
                                  - ANALYTIC_GLOBAL_PHASE * analytic.collapsed.amplitudes)))
        pdev = abs(brute.probability - analytic.probability)
        cases.append({"trial": k, "alpha": [alpha.real, alpha.imag], "theta1": theta1,
                      "theta2": theta2, "probability": analytic.probability,
                      "amplitude_deviation": dev, "probability_deviation": pdev})
    max_dev = max(c["amplitude_deviation"] for c in cases)
    max_pdev = max(c["probability_deviation"] for c in cases)
    return {
        "seed": seed,
        "trials": trials,
        "cutoff": cutoff,
        "max_amplitude_deviation": max_dev,
        "max_probability_deviation": max_pdev,
        "passed": max_dev <= ORACLE_TOL and max_pdev <= ORACLE_PROB_TOL,
        "cases": cases,
    }


def cmd_oracle_check(args) -> int:
    report = oracle_check(args.seed, args.trials, args.cutoff)
    if args.format == "json":
        text = json.dumps(report, indent=2) + "\n"
    else:
        lines = [
            f"{'PASS' if report['passed'] else 'FAIL'} seed={report['seed']} trials={report['trials']}",
            f"max amplitude deviation   {report['max_amplitude_deviation']:.3e} (tol {ORACLE_TOL:g})",
            f"max probability deviation {report['max_probability_deviation']:.3e} (tol {ORACLE_PROB_TOL:g})",
        ]
        text = "\n".join(lines) + "\n"
    _write(text, args.out)
    return EXIT_OK if report["passed"] else EXIT_NUMERIC


# --------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fockfilter", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"fockfilter {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sw = sub.add_parser("sweep", help="parameter sweep over a filtered state family")
    sw.add_argument("--config", help="TOML sweep spec")
    sw.add_argument("--figure", help=f"shipped spec name or 'all' ({', '.join(shipped_figures())})")
    sw.add_argument("--cutoff", type=int, help="override the spec's cutoff")
    sw.add_argument("--steps", type=int, help="override the number of grid points")
    sw.add_argument("--format", choices=("csv", "json"), default="csv")
    sw.add_argument("--out", help="output file (default stdout)")
    sw.add_argument("--out-dir", help="directory for one file per figure")
    sw.add_argument("--svg", nargs="?", const="auto", help="also render an SVG line chart")
    sw.set_defaults(func=cmd_sweep)

    fl = sub.add_parser("filter", help="single filter evaluation, JSON report")
    fl.add_argument("--state", choices=("squeezed", "cat", "coherent", "fock"), required=True)
    fl.add_argument("--gamma", type=float, default=0.5, help="|gamma|")
    fl.add_argument("--beta", type=float, default=0.0, help="phase of gamma")
    fl.add_argument("--s", type=float, default=1.0, help="squeezing magnitude")
    fl.add_argument("--squeeze-phase", type=float, default=0.0)
    fl.add_argument("--delta", type=float, default=math.pi / 2, help="cat relative phase")
    fl.add_argument("--n", type=int, default=1, help="photon number for --state fock")
    target = fl.add_mutually_exclusive_group()
    target.add_argument("--hole", type=int, default=0, help="Fock component to remove")
    target.add_argument("--parity", choices=("even", "odd"), help="parity class to keep (cat)")
    target.add_argument("--alpha", help="explicit ancilla amplitude, e.g. 0.3-0.1j")
    fl.add_argument("--theta1", type=float, default=math.pi / 4)
    fl.add_argument("--theta2", type=float, default=math.pi / 4)
    fl.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
    fl.add_argument("--amplitudes", type=int, default=10, help="how many amplitudes to print")
    fl.add_argument("--out", help="output file (default stdout)")
    fl.set_defaults(func=cmd_filter)

    oc = sub.add_parser("oracle-check", help="closed form vs full three-mode unitary")
    oc.add_argument("--seed", type=int, default=42)
    oc.add_argument("--trials", type=int, default=20)
    oc.add_argument("--cutoff", type=int, default=24, help="ancilla cutoff")
    oc.add_argument("--format", choices=("text", "json"), default="text")
    oc.add_argument("--out", help="output file (default stdout)")
    oc.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"fockfilter {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
