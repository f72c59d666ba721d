"""Command-line front end.

Every subcommand writes deterministic artifacts: CSV at 17 significant digits
(re-ingestable without loss) or JSON with sorted keys.  ``--plot`` additionally
renders a PNG next to the delimited output.  Exit codes: 0 success, 2
validation error (message names the failing field), 64 unknown subcommand,
65 malformed input file.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .bounds import entropy_change_bound, gsc_change_bound, modified_cost_bound
from .continuum import ContinuumModel, averaged_gsc_numeric, c2_piecewise
from .lanczos import LANCZOS_TOL, lanczos
from .lie import (
    Su2Params,
    Su11Params,
    su2_c2,
    su2_sc,
    su2_variance,
    su11_c2,
    su11_sc,
    su11_variance,
)
from .linalg import NumericalError, ValidationError
from .rmt import EnsembleSpec, ensemble_gsc
from .statistics import (
    charfun,
    entropy_curve,
    gsc,
    long_time_average,
    long_time_variance,
    pdf,
    spread_profile,
    u_loschmidt,
    variance_curve,
)
from .systems import SystemFormatError, load_system

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_UNKNOWN_COMMAND = 64
EXIT_MALFORMED_INPUT = 65


def _write_csv(path, header, columns):
    columns = [np.asarray(col, dtype=float) for col in columns]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(format(x, ".17g") for x in row) + "\n")


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _order_list(text):
    try:
        orders = tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not orders:
        raise argparse.ArgumentTypeError("at least one order is required")
    return orders


def _parser(name, description):
    return argparse.ArgumentParser(prog=f"kspread {name}", description=description)


def _add_system_args(parser, with_plot=True):
    parser.add_argument("--system", required=True, metavar="FILE",
                        help="system description JSON (see package docs)")
    parser.add_argument("--out", required=True, metavar="FILE", help="output path")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed override for gue-sample systems")
    if with_plot:
        parser.add_argument("--plot", action="store_true",
                            help="also render a PNG next to the output")


def _load_pipeline(args, tol=None):
    system = load_system(args.system, seed=args.seed)
    K = lanczos(system.hamiltonian, system.psi0, tol=LANCZOS_TOL if tol is None else tol)
    return system, K


def _profile_of(system, K):
    return spread_profile(K, system.hamiltonian, system.psi0, system.times)


def cmd_lanczos(argv):
    parser = _parser("lanczos", "Krylov decomposition of a system, as JSON.")
    _add_system_args(parser)
    parser.add_argument("--tol", type=float, default=None,
                        help=f"relative termination tolerance (default {LANCZOS_TOL})")
    parser.add_argument("--include-basis", action="store_true",
                        help="embed the Krylov vectors in the JSON payload")
    args = parser.parse_args(argv)
    system, K = _load_pipeline(args, tol=args.tol)
    _write_json(args.out, K.to_json_dict(include_basis=args.include_basis))
    if args.plot:
        from . import plotting

        n = np.arange(K.length)
        plotting.plot_curves(
            plotting.figure_path(args.out), n,
            {"a_n": K.a, "b_n": np.concatenate([[np.nan], K.b])},
            xlabel="n", ylabel="coefficient", title=system.label,
        )
    return EXIT_OK


def cmd_spread(argv):
    parser = _parser("spread", "Chain weights p_n(t) on the system's time grid.")
    _add_system_args(parser)
    args = parser.parse_args(argv)
    system, K = _load_pipeline(args)
    profile = _profile_of(system, K)
    header = ["t"] + [f"p_{n}" for n in range(profile.length)]
    _write_csv(args.out, header, [profile.times] + [profile.p[:, n] for n in range(profile.length)])
    if args.plot:
        from . import plotting

        shown = {f"p_{n}": profile.p[:, n] for n in range(min(profile.length, 6))}
        plotting.plot_curves(plotting.figure_path(args.out), profile.times, shown,
                             xlabel="t", ylabel="p_n(t)", title=system.label)
    return EXIT_OK


def cmd_gsc(argv):
    parser = _parser("gsc", "Moment curves C_m(t) with variance and entropy.")
    _add_system_args(parser)
    parser.add_argument("--m", type=_order_list, default=(1,),
                        help="comma-separated moment orders, e.g. 1,2")
    args = parser.parse_args(argv)
    system, K = _load_pipeline(args)
    profile = _profile_of(system, K)
    curves = {m: gsc(profile, m) for m in args.m}
    var = variance_curve(profile)
    ent = entropy_curve(profile)
    header = ["t"] + [f"C_{m}" for m in args.m] + ["variance", "entropy"]
    _write_csv(args.out, header, [profile.times] + list(curves.values()) + [var, ent])
    if args.plot:
        from . import plotting

        series = {f"C_{m}": curve for m, curve in curves.items()}
        series["variance"] = var
        plotting.plot_curves(plotting.figure_path(args.out), profile.times, series,
                             xlabel="t", ylabel="moment", title=system.label)
    return EXIT_OK


def cmd_pdf(argv):
    parser = _parser("pdf", "Chain distribution snapshot at one grid time, as JSON.")
    _add_system_args(parser)
    parser.add_argument("--t-index", type=int, required=True, help="index into the time grid")
    args = parser.parse_args(argv)
    system, K = _load_pipeline(args)
    profile = _profile_of(system, K)
    snap = pdf(profile, args.t_index)
    _write_json(args.out, {"t": snap.t, "weights": snap.weights.tolist()})
    if args.plot:
        from . import plotting

        plotting.plot_stem(plotting.figure_path(args.out), np.arange(len(snap.weights)),
                           snap.weights, xlabel="n", ylabel="p_n",
                           title=f"{system.label} at t = {snap.t:g}")
    return EXIT_OK


def cmd_charfun(argv):
    parser = _parser("charfun", "Characteristic function samples over u at one time.")
    _add_system_args(parser)
    parser.add_argument("--t-index", type=int, required=True, help="index into the time grid")
    parser.add_argument("--umax", type=float, default=2.0 * math.pi, help="u range end")
    parser.add_argument("--upoints", type=int, default=129, help="number of u samples")
    args = parser.parse_args(argv)
    if args.upoints < 2:
        parser.error("--upoints must be at least 2")
    system, K = _load_pipeline(args)
    profile = _profile_of(system, K)
    u = np.linspace(0.0, args.umax, args.upoints)
    chi = charfun(profile, args.t_index, u)
    _write_csv(args.out, ["u", "re_chi", "im_chi"], [u, chi.real, chi.imag])
    if args.plot:
        from . import plotting

        plotting.plot_curves(plotting.figure_path(args.out), u,
                             {"Re chi": chi.real, "Im chi": chi.imag},
                             xlabel="u", ylabel="chi(u)", title=system.label)
    return EXIT_OK


def cmd_echo(argv):
    parser = _parser("echo", "u-evolution echo |chi(u, t)|^2 at one time.")
    _add_system_args(parser)
    parser.add_argument("--t-index", type=int, required=True, help="index into the time grid")
    parser.add_argument("--umax", type=float, default=2.0 * math.pi, help="u range end")
    parser.add_argument("--upoints", type=int, default=129, help="number of u samples")
    args = parser.parse_args(argv)
    if args.upoints < 2:
        parser.error("--upoints must be at least 2")
    system, K = _load_pipeline(args)
    profile = _profile_of(system, K)
    u = np.linspace(0.0, args.umax, args.upoints)
    echo = u_loschmidt(profile, args.t_index, u)
    _write_csv(args.out, ["u", "echo"], [u, echo])
    if args.plot:
        from . import plotting

        plotting.plot_curves(plotting.figure_path(args.out), u, {"echo": echo},
                             xlabel="u", ylabel="|chi|^2", title=system.label)
    return EXIT_OK


def cmd_entropy(argv):
    parser = _parser("entropy", "Spread entropy over the system's time grid.")
    _add_system_args(parser)
    args = parser.parse_args(argv)
    system, K = _load_pipeline(args)
    profile = _profile_of(system, K)
    ent = entropy_curve(profile)
    _write_csv(args.out, ["t", "entropy"], [profile.times, ent])
    if args.plot:
        from . import plotting

        plotting.plot_curves(plotting.figure_path(args.out), profile.times,
                             {"entropy": ent}, xlabel="t", ylabel="S(t)",
                             title=system.label)
    return EXIT_OK


def cmd_su2(argv):
    parser = _parser("su2", "Closed-form su(2) curves C, C_2, variance.")
    parser.add_argument("--alpha", type=float, required=True)
    parser.add_argument("--gamma", type=float, required=True)
    parser.add_argument("--delta", type=float, default=0.0)
    parser.add_argument("--j", type=float, required=True)
    parser.add_argument("--tmax", type=float, default=None,
                        help="time range end (default two revival periods 4 pi / Delta)")
    parser.add_argument("--points", type=int, default=201)
    parser.add_argument("--out", required=True, metavar="FILE")
    parser.add_argument("--seed", type=int, default=None, help="accepted for uniformity; unused")
    parser.add_argument("--plot", action="store_true")
    args = parser.parse_args(argv)
    if args.points < 2:
        parser.error("--points must be at least 2")
    params = Su2Params(alpha=args.alpha, gamma=args.gamma, j=args.j, delta=args.delta)
    tmax = 4.0 * math.pi / params.frequency if args.tmax is None else args.tmax
    if not tmax > 0.0:
        parser.error("--tmax must be positive")
    t = np.linspace(0.0, tmax, args.points)
    series = {"C_1": su2_sc(params, t), "C_2": su2_c2(params, t),
              "variance": su2_variance(params, t)}
    _write_csv(args.out, ["t"] + list(series), [t] + list(series.values()))
    if args.plot:
        from . import plotting

        plotting.plot_curves(plotting.figure_path(args.out), t, series,
                             xlabel="t", ylabel="moment",
                             title=f"su(2): alpha={args.alpha:g} gamma={args.gamma:g} j={args.j:g}")
    return EXIT_OK


def cmd_su11(argv):
    parser = _parser("su11", "Closed-form su(1,1) curves C, C_2, variance.")
    parser.add_argument("--lam", type=float, required=True)
    parser.add_argument("--omega", type=float, required=True)
    parser.add_argument("--beta", type=float, default=0.0)
    parser.add_argument("--h", type=float, required=True)
    parser.add_argument("--case", choices=("I", "II"), default="II")
    parser.add_argument("--tmax", type=float, required=True,
                        help="time range end (curves grow like sinh^2)")
    parser.add_argument("--points", type=int, default=201)
    parser.add_argument("--out", required=True, metavar="FILE")
    parser.add_argument("--seed", type=int, default=None, help="accepted for uniformity; unused")
    parser.add_argument("--plot", action="store_true")
    args = parser.parse_args(argv)
    if args.points < 2:
        parser.error("--points must be at least 2")
    if not args.tmax > 0.0:
        parser.error("--tmax must be positive")
    params = Su11Params(lam=args.lam, omega=args.omega, h=args.h, beta=args.beta)
    t = np.linspace(0.0, args.tmax, args.points)
    series = {"C_1": su11_sc(params, args.case, t), "C_2": su11_c2(params, args.case, t),
              "variance": su11_variance(params, args.case, t)}
    _write_csv(args.out, ["t"] + list(series), [t] + list(series.values()))
    if args.plot:
        from . import plotting

        plotting.plot_curves(plotting.figure_path(args.out), t, series,
                             xlabel="t", ylabel="moment",
                             title=f"su(1,1) case {args.case}: lam={args.lam:g} "
                                   f"omega={args.omega:g} h={args.h:g}")
    return EXIT_OK


def cmd_rmt(argv):
    parser = _parser("rmt", "GUE ensemble statistics report, as JSON.")
    parser.add_argument("--L", type=int, required=True, help="matrix dimension")
    parser.add_argument("--samples", type=int, required=True)
    parser.add_argument("--seed", type=int, required=True,
                        help="master seed (required; runs are never clock-seeded)")
    parser.add_argument("--m", type=_order_list, default=(1, 2),
                        help="comma-separated moment orders")
    parser.add_argument("--vmax", type=float, default=5.0, help="end of the v = t/L window")
    parser.add_argument("--vpoints", type=int, default=126)
    parser.add_argument("--workers", type=int, default=1, help="parallel realizations")
    parser.add_argument("--out", required=True, metavar="FILE")
    parser.add_argument("--plot", action="store_true")
    args = parser.parse_args(argv)
    if args.vpoints < 2 or not args.vmax > 0.0:
        parser.error("--vmax must be positive and --vpoints at least 2")
    if args.workers < 1:
        parser.error("--workers must be at least 1")
    spec = EnsembleSpec(L=args.L, samples=args.samples, seed=args.seed)
    v = np.linspace(0.0, args.vmax, args.vpoints)
    report = ensemble_gsc(spec, args.m, v, workers=args.workers)
    _write_json(args.out, report.to_json_dict())
    if args.plot:
        from . import plotting

        series = {f"C_{m} / (L-1)^{m}": report.mean_gsc[i] for i, m in enumerate(report.orders)}
        plotting.plot_curves(plotting.figure_path(args.out), v, series,
                             xlabel="v = t/L", ylabel="normalized moment",
                             title=f"GUE L={args.L}, {args.samples} samples")
    return EXIT_OK


def cmd_continuum(argv):
    parser = _parser("continuum", "Ensemble-averaged normalized moment curve in v = t/L.")
    parser.add_argument("--L", type=int, default=512, help="chain length of the model")
    parser.add_argument("--m", type=int, required=True, help="moment order, 1..4")
    parser.add_argument("--vmax", type=float, default=5.0)
    parser.add_argument("--points", type=int, default=400)
    parser.add_argument("--out", required=True, metavar="FILE")
    parser.add_argument("--seed", type=int, default=None, help="accepted for uniformity; unused")
    parser.add_argument("--plot", action="store_true")
    args = parser.parse_args(argv)
    if args.points < 2 or not args.vmax > 0.0:
        parser.error("--vmax must be positive and --points at least 2")
    model = ContinuumModel(L=args.L, m=args.m)
    v = np.linspace(0.0, args.vmax, args.points)
    numeric = averaged_gsc_numeric(model, v)
    header = ["v", "C_m_numeric"]
    columns = [v, numeric]
    series = {f"C_{args.m} numeric": numeric}
    if args.m == 2:
        exact = c2_piecewise(v)
        header.append("C_m_exact")
        columns.append(exact)
        series["C_2 exact"] = exact
    _write_csv(args.out, header, columns)
    if args.plot:
        from . import plotting

        plotting.plot_curves(plotting.figure_path(args.out), v, series,
                             xlabel="v = t/L", ylabel="normalized moment",
                             title=f"continuum limit, m = {args.m}")
    return EXIT_OK


def cmd_bounds(argv):
    parser = _parser("bounds", "Change-bound reports for moments, entropy, and cost.")
    _add_system_args(parser, with_plot=False)
    parser.add_argument("--tau", type=float, required=True, help="change window [0, tau]")
    parser.add_argument("--m", type=int, default=1, help="moment order of the GSC bound")
    args = parser.parse_args(argv)
    system, K = _load_pipeline(args)
    profile = _profile_of(system, K)
    H = system.hamiltonian
    payload = {
        "gsc": gsc_change_bound(H, profile, args.tau, args.m).to_json_dict(),
        "entropy": entropy_change_bound(H, profile, args.tau).to_json_dict(),
        "modified_cost": modified_cost_bound(H, profile, args.tau).to_json_dict(),
        "m": args.m,
        "tau": args.tau,
    }
    _write_json(args.out, payload)
    return EXIT_OK


def cmd_longtime(argv):
    parser = _parser("longtime", "Infinite-time averages from the diagonal sums.")
    _add_system_args(parser, with_plot=False)
    parser.add_argument("--m", type=_order_list, default=(1, 2),
                        help="comma-separated moment orders to average")
    args = parser.parse_args(argv)
    system, K = _load_pipeline(args)
    H, psi0 = system.hamiltonian, system.psi0
    payload = {
        "average": {str(m): long_time_average(H, psi0, K, m) for m in args.m},
        "variance": long_time_variance(H, psi0, K),
    }
    _write_json(args.out, payload)
    return EXIT_OK


_COMMANDS = {
    "lanczos": (cmd_lanczos, "Krylov decomposition as JSON"),
    "spread": (cmd_spread, "chain weights p_n(t) as CSV"),
    "gsc": (cmd_gsc, "moment curves C_m(t), variance, entropy as CSV"),
    "pdf": (cmd_pdf, "distribution snapshot as JSON"),
    "charfun": (cmd_charfun, "characteristic function samples as CSV"),
    "echo": (cmd_echo, "u-evolution echo samples as CSV"),
    "entropy": (cmd_entropy, "spread entropy curve as CSV"),
    "su2": (cmd_su2, "closed-form su(2) curves as CSV"),
    "su11": (cmd_su11, "closed-form su(1,1) curves as CSV"),
    "rmt": (cmd_rmt, "GUE ensemble report as JSON"),
    "continuum": (cmd_continuum, "continuum-limit averaged curve as CSV"),
    "bounds": (cmd_bounds, "change-bound reports as JSON"),
    "longtime": (cmd_longtime, "long-time averages as JSON"),
}


def _print_usage(stream):
    print("usage: kspread <subcommand> [options]", file=stream)
    print("subcommands:", file=stream)
    for name, (_, blurb) in _COMMANDS.items():
        print(f"  {name:<10} {blurb}", file=stream)
    print("run `kspread <subcommand> --help` for options", file=stream)


def main(argv=None):
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    if argv and argv[0] in ("-h", "--help"):
        _print_usage(sys.stdout)
        return EXIT_OK
    if not argv:
        _print_usage(sys.stderr)
        return EXIT_UNKNOWN_COMMAND
    name, rest = argv[0], argv[1:]
    if name not in _COMMANDS:
        print(f"kspread: unknown subcommand {name!r}", file=sys.stderr)
        _print_usage(sys.stderr)
        return EXIT_UNKNOWN_COMMAND
    handler = _COMMANDS[name][0]
    try:
        return handler(rest)
    except SystemExit as exc:  # argparse --help or usage error
        return exc.code if isinstance(exc.code, int) else EXIT_VALIDATION
    except SystemFormatError as exc:
        print(f"kspread {name}: malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED_INPUT
    except OSError as exc:
        print(f"kspread {name}: {exc}", file=sys.stderr)
        return EXIT_MALFORMED_INPUT
    except (ValidationError, NumericalError) as exc:
        print(f"kspread {name}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def run(subcommand, args=()):
    """Programmatic entry point mirroring `kspread <subcommand> ...`."""
    return main([str(subcommand), *args])


if __name__ == "__main__":
    sys.exit(main())
