"""Command-line front end.

Every subcommand first prints a ``# resolved:`` line holding the complete
invocation with all defaults filled in; feeding that line back reproduces the
run exactly.

Exit codes: 0 success, 1 validation or usage error, 2 numerical failure,
3 I/O error.
"""

from __future__ import annotations

import argparse
import shlex
import sys

import numpy as np

from . import __version__
from ._io import atomic_write_text
from .chain import (
    STRONG_FIRST,
    WEAK_FIRST,
    EndCouplings,
    make_random_paired,
    make_staggered,
    make_uniform,
    read_pattern_csv,
    validate,
)
from .dynamics import evolve_series, format_series, transition_amplitude
from .effective import (
    effective_two_level,
    lambda_all,
    lambda_closed_form,
    lambda_recursion_appendix,
    lambda_recursion_centered,
    lambda_spectral,
    perturbative_xi_for_equal_time,
)
from .errors import NumericalFailure, ValidationError
from .experiments import (
    SweepConfig,
    default_xi_grid,
    equal_time_compare,
    format_results,
    sweep_random_paired,
    sweep_staggered,
)
from .spectral import (
    TridiagonalHamiltonian,
    build_channel_hamiltonian,
    build_full_hamiltonian,
    diagonalize,
    dump_spectrum,
)

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3


def g12(x: float) -> str:
    return f"{x:.12g}"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _flags(pairs) -> str:
    out = []
    for flag, value in pairs:
        if value is None:
            continue
        if isinstance(value, tuple):
            value = ",".join(repr(v) for v in value)
        elif isinstance(value, float):
            value = repr(value)
        out += [flag, str(value)]
    return " ".join(shlex.quote(x) for x in out)


# pattern / end-coupling options --------------------------------------------

def _add_pattern_options(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--pattern", type=_floats, help="comma-separated couplings J_1,...,J_{N-1}")
    src.add_argument("--pattern-file", help="single-row CSV with header J_1,...,J_{N-1}")
    src.add_argument("--uniform", type=int, metavar="N", help="homogeneous channel of N sites")
    src.add_argument("--staggered", type=int, metavar="N", help="staggered channel of N sites")
    src.add_argument("--random-paired", type=int, metavar="N", help="random paired channel of N sites")
    p.add_argument("--b", type=float, default=0.5, help="weak coupling of --staggered (default 0.5)")
    p.add_argument("--phase", choices=(WEAK_FIRST, STRONG_FIRST), default=WEAK_FIRST)
    p.add_argument("--W", type=float, default=0.5, help="disorder width of --random-paired")
    p.add_argument("--seed", type=int, default=0)


def _add_end_options(p):
    p.add_argument("--a", type=float, help="a_S = a_R = A")
    p.add_argument("--a-s", type=float, dest="a_s")
    p.add_argument("--a-r", type=float, dest="a_r")
    p.add_argument("--xi", type=float, help="equal-time couplings a = xi/sqrt(|Lambda_N|)")


def _resolve_pattern(args):
    if args.pattern is not None:
        return validate(args.pattern), [("--pattern", args.pattern)]
    if args.pattern_file is not None:
        return read_pattern_csv(args.pattern_file), [("--pattern-file", args.pattern_file)]
    if args.uniform is not None:
        return make_uniform(args.uniform), [("--uniform", args.uniform)]
    if args.staggered is not None:
        pattern = make_staggered(args.staggered, args.b, args.phase)
        return pattern, [("--staggered", args.staggered), ("--b", args.b), ("--phase", args.phase)]
    pattern = make_random_paired(args.random_paired, args.W, args.seed)
    flags = [("--random-paired", args.random_paired), ("--W", args.W), ("--seed", args.seed)]
    return pattern, flags


def _resolve_ends(args, pattern):
    given = [x is not None for x in (args.a, args.a_s, args.a_r, args.xi)]
    if args.xi is not None:
        if any(given[:3]):
            raise ValidationError("--xi cannot be combined with --a/--a-s/--a-r")
        ends = perturbative_xi_for_equal_time(pattern, args.xi)
        return ends, [("--xi", args.xi)]
    if args.a is not None:
        if args.a_s is not None or args.a_r is not None:
            raise ValidationError("--a cannot be combined with --a-s/--a-r")
        return EndCouplings.symmetric(args.a), [("--a", args.a)]
    if args.a_s is None or args.a_r is None:
        raise ValidationError("end couplings required: --a, --xi, or both --a-s and --a-r")
    return EndCouplings(args.a_s, args.a_r), [("--a-s", args.a_s), ("--a-r", args.a_r)]


def _print_resolved(command, pairs, out):
    print(f"# resolved: {command} {_flags(pairs)}".rstrip(), file=out)


# subcommands ---------------------------------------------------------------

def cmd_lambda(args, out):
    pattern, flags = _resolve_pattern(args)
    flags += [("--output", args.output), ("--dump-spectrum", args.dump_spectrum)]
    _print_resolved("lambda", flags, out)
    decomp = diagonalize(build_channel_hamiltonian(pattern))
    values = lambda_all(pattern, decomp)
    print(f"N = {pattern.N}", file=out)
    for key, value in values.items():
        print(f"{key} = {g12(value)}", file=out)
    if args.output:
        header = "N,lambda_closed,lambda_spectral,lambda_rec_centered,lambda_rec_appendix,max_rel_dev\n"
        row = ",".join([str(pattern.N)] + [g12(v) for v in values.values()])
        atomic_write_text(args.output, header + row + "\n")
    if args.dump_spectrum:
        dump_spectrum(decomp, args.dump_spectrum)
    return EXIT_OK


def cmd_effective(args, out):
    pattern, flags = _resolve_pattern(args)
    ends, end_flags = _resolve_ends(args, pattern)
    _print_resolved("effective", flags + end_flags, out)
    model = effective_two_level(pattern, ends)
    print(f"N = {pattern.N}", file=out)
    print(f"a_S = {g12(ends.a_S)}", file=out)
    print(f"a_R = {g12(ends.a_R)}", file=out)
    print(f"perturbative = {ends.perturbative(pattern.N)}", file=out)
    for name in ("h_S", "h_R", "Lambda", "J_eff", "gap", "tau"):
        print(f"{name} = {g12(getattr(model, name))}", file=out)
    return EXIT_OK


def cmd_dynamics(args, out):
    pattern, flags = _resolve_pattern(args)
    ends, end_flags = _resolve_ends(args, pattern)
    model = effective_two_level(pattern, ends)
    t_max = args.t_max if args.t_max is not None else 2.0 * model.tau
    if not t_max > 0 or args.points < 1:
        raise ValidationError("--t-max must be positive and --points >= 1")
    flags += end_flags + [
        ("--t-max", float(t_max)),
        ("--points", args.points),
        ("--output", args.output),
        ("--dump-spectrum", args.dump_spectrum),
    ]
    _print_resolved("dynamics", flags, out)
    decomp = diagonalize(build_full_hamiltonian(pattern, ends))
    meta = {"N": pattern.N}
    if ends.is_symmetric:
        meta["a"] = ends.a_S
    else:
        meta.update(a_S=ends.a_S, a_R=ends.a_R)
    series = evolve_series(decomp, np.linspace(0.0, t_max, args.points), meta)
    text = format_series(series)
    if args.output:
        atomic_write_text(args.output, text)
        i = int(np.argmax(series.fidelity))
        print(f"C = {g12(series.metadata['C'])}", file=out)
        print(f"delta_lambda = {g12(series.metadata['delta_lambda'])}", file=out)
        print(f"tau = {g12(series.metadata['tau'])}", file=out)
        print(f"max_fidelity = {g12(series.fidelity[i])} at t = {g12(series.times[i])}", file=out)
    else:
        out.write(text)
    if args.dump_spectrum:
        dump_spectrum(decomp, args.dump_spectrum)
    return EXIT_OK


SWEEP_KEYS = {
    "N": int,
    "xi_grid": _floats,
    "b_values": _floats,
    "W_values": _floats,
    "samples": int,
    "seed": int,
    "scaling": str,
    "output": str,
    "workers": int,
}


def _read_config_file(path) -> dict:
    settings = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValidationError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in SWEEP_KEYS:
                raise ValidationError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                settings[key] = SWEEP_KEYS[key](value)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from None
    return settings


def _add_sweep_options(p, random: bool):
    p.add_argument("--config", help="key=value file with SweepConfig fields")
    p.add_argument("--N", type=int)
    p.add_argument("--xi-grid", type=_floats, dest="xi_grid")
    p.add_argument("--xi-min", type=float, dest="xi_min")
    p.add_argument("--xi-max", type=float, dest="xi_max")
    p.add_argument("--xi-points", type=int, dest="xi_points")
    if random:
        p.add_argument("--W-values", type=_floats, dest="W_values")
        p.add_argument("--samples", type=int)
        p.add_argument("--workers", type=int)
    else:
        p.add_argument("--b-values", type=_floats, dest="b_values")
        p.add_argument("--scaling", choices=("equal-time", "fixed"))
    p.add_argument("--seed", type=int)
    p.add_argument("--output")


def _resolve_sweep(args, random: bool):
    settings = _read_config_file(args.config) if args.config else {}
    for key in SWEEP_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    ranged = [args.xi_min, args.xi_max, args.xi_points]
    if any(x is not None for x in ranged):
        if args.xi_grid is not None:
            raise ValidationError("--xi-grid cannot be combined with --xi-min/--xi-max/--xi-points")
        lo, hi, n = (x if x is not None else d for x, d in zip(ranged, (1e-3, 0.5, 60)))
        if not (0 < lo < hi) or n < 1:
            raise ValidationError("need 0 < xi-min < xi-max and xi-points >= 1")
        settings["xi_grid"] = default_xi_grid(lo, hi, n)
    workers = settings.pop("workers", 1)
    if not random:
        settings.setdefault("W_values", ())
    config = SweepConfig(**settings)
    pairs = [("--N", config.N), ("--xi-grid", config.xi_grid)]
    if random:
        pairs += [("--W-values", config.W_values), ("--samples", config.samples), ("--workers", workers)]
    else:
        pairs += [("--b-values", config.b_values), ("--scaling", config.scaling)]
    pairs += [("--seed", config.seed), ("--output", config.output)]
    return config, workers, pairs


def _emit_sweep(result, config, out):
    text = format_results(result)
    if config.output:
        atomic_write_text(config.output, text)
        print(f"rows = {len(result.rows)}", file=out)
        print(f"output = {config.output}", file=out)
    else:
        out.write(text)


def cmd_sweep_staggered(args, out):
    config, _, pairs = _resolve_sweep(args, random=False)
    _print_resolved("sweep-staggered", pairs, out)
    _emit_sweep(sweep_staggered(config), config, out)
    return EXIT_OK


def cmd_sweep_random(args, out):
    config, workers, pairs = _resolve_sweep(args, random=True)
    _print_resolved("sweep-random", pairs, out)
    _emit_sweep(sweep_random_paired(config, workers=workers), config, out)
    return EXIT_OK


def cmd_equal_time(args, out):
    _print_resolved("equal-time", [("--N", args.N), ("--b", args.b), ("--xi", args.xi)], out)
    cmp = equal_time_compare(args.N, args.b, args.xi)
    for name in ("N", "b", "xi", "tau", "lambda_staggered", "a_uniform", "a_staggered",
                 "t_uniform", "F_uniform", "t_staggered", "F_staggered", "deficit"):
        value = getattr(cmp, name)
        print(f"{name} = {value if isinstance(value, int) else g12(value)}", file=out)
    return EXIT_OK


def cmd_selftest(args, out):
    from scipy.linalg import expm

    _print_resolved("selftest", [("--seed", args.seed), ("--patterns", args.patterns)], out)
    rng = np.random.default_rng(args.seed)
    results = []

    def check(name, ok, detail):
        results.append(ok)
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}", file=out)

    worst = 0.0
    for _ in range(args.patterns):
        N = 2 * int(rng.integers(1, 51))
        pattern = validate(rng.uniform(0.05, 1.0, N - 1))
        worst = max(worst, lambda_all(pattern)["max_rel_dev"])
    check("four-way Lambda agreement", worst <= 1e-8, f"max relative deviation {worst:.3e}")

    small = [((0.5,), 2.0), ((1.0, 0.5, 1.0), -0.5), ((1.0,) * 5, 1.0)]
    dev = 0.0
    for couplings, expected in small:
        pattern = validate(couplings)
        decomp = diagonalize(build_channel_hamiltonian(pattern))
        for route in (lambda_closed_form(pattern), lambda_recursion_centered(pattern),
                      lambda_recursion_appendix(pattern), lambda_spectral(decomp)):
            dev = max(dev, abs(route / expected - 1.0))
    check("small-N closed forms", dev <= 1e-12, f"max relative deviation {dev:.3e}")

    g = 0.7
    t = rng.uniform(0.0, 20.0, 100)
    dimer = diagonalize(TridiagonalHamiltonian([g]))
    err = float(np.abs(np.abs(transition_amplitude(dimer, t)) - np.abs(np.sin(g * t))).max())
    check("dimer Rabi oscillation", err <= 1e-12, f"max |f| error {err:.3e}")

    pattern = validate(rng.uniform(0.2, 1.0, 5))
    H = build_full_hamiltonian(pattern, EndCouplings(0.3, 0.4))
    decomp = diagonalize(H)
    dense = H.dense()
    err = max(abs(abs(transition_amplitude(decomp, s)) - abs(expm(-1j * dense * s)[-1, 0])) for s in t)
    check("spectral propagator vs expm", err <= 1e-9, f"max |f| error {err:.3e}")

    return EXIT_OK if all(results) else EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spinqst", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"spinqst {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("lambda", help="Lambda_N by all four routes")
    _add_pattern_options(p)
    p.add_argument("--output", help="CSV row file")
    p.add_argument("--dump-spectrum", metavar="PREFIX", dest="dump_spectrum")
    p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("effective", help="effective two-level model")
    _add_pattern_options(p)
    _add_end_options(p)
    p.set_defaults(func=cmd_effective)

    p = sub.add_parser("dynamics", help="exact |f(t)| and F(t) time series")
    _add_pattern_options(p)
    _add_end_options(p)
    p.add_argument("--t-max", type=float, dest="t_max", help="default: twice the effective tau")
    p.add_argument("--points", type=int, default=2001)
    p.add_argument("--output", help="series CSV (default: stdout)")
    p.add_argument("--dump-spectrum", metavar="PREFIX", dest="dump_spectrum")
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("sweep-staggered", help="C(xi) for weak-first staggered channels")
    _add_sweep_options(p, random=False)
    p.set_defaults(func=cmd_sweep_staggered)

    p = sub.add_parser("sweep-random", help="C(xi) for random paired channel ensembles")
    _add_sweep_options(p, random=True)
    p.set_defaults(func=cmd_sweep_random)

    p = sub.add_parser("equal-time", help="uniform vs staggered peak fidelity at equal transfer time")
    p.add_argument("--N", type=int, default=30)
    p.add_argument("--b", type=float, default=0.7)
    p.add_argument("--xi", type=float, default=0.02)
    p.set_defaults(func=cmd_equal_time)

    p = sub.add_parser("selftest", help="run the built-in oracle checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--patterns", type=int, default=200)
    p.set_defaults(func=cmd_selftest)
    return parser


def run(argv=None, out=None) -> int:
    """Parse ``argv``, dispatch, and return the exit code."""
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except ValidationError as exc:
        print(f"spinqst: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalFailure as exc:
        print(f"spinqst: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"spinqst: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
