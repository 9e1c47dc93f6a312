"""Command-line front end: ``fermiemit <command> [options]``.

Every command writes CSV files and a plain-text ``manifest.txt`` (resolved
parameters, seed, version, SHA-256 of each output) into ``--out``.
"""

import argparse
import math
import os
import sys
import time

import numpy as np

from . import __version__, collective, decay, noise, response, verify
from .config import default_params, parse_config
from .errors import ConfigError, ConvergenceError, ValidationError
from .io import RunManifest, write_csv
from .units import HBAR


def _floats(text):
    return [float(x) for x in text.split(",") if x.strip()]


def build_parser():
    parser = argparse.ArgumentParser(prog="fermiemit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value parameter file (default: free-electron gas with v_F = 1e8 cm/s at 1.2 GHz)")
    common.add_argument("--out", default=".", help="output directory (created if missing)")
    common.add_argument("--seed", type=int, default=None, help="master seed (required by stochastic commands)")
    common.add_argument("--threads", type=int, default=1, help="maximum number of worker processes")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("noise", parents=[common], help="transverse-current noise C^{-+}(q, w)")
    p.add_argument("--hw-over-ef", type=_floats, default=[1e-5, 1e-3, 1e-1],
                   help="comma-separated hbar w / E_F values")
    p.add_argument("--q-min", type=float, default=1e-6, help="smallest q in units of k_F")
    p.add_argument("--q-max", type=float, default=3.0, help="largest q in units of k_F")
    p.add_argument("--points", type=int, default=400)

    p = sub.add_parser("rates", parents=[common], help="decay-rate profile gamma(r)")
    p.add_argument("--r-min", type=float, default=0.1, help="in units of lambda_F")
    p.add_argument("--r-max", type=float, default=1e4, help="in units of lambda_F")
    p.add_argument("--points", type=int, default=200)

    p = sub.add_parser("subradiance", parents=[common], help="dark-state statistics of random ensembles")
    p.add_argument("--n-dipoles", type=int, default=500)
    p.add_argument("--realizations", type=int, default=50)
    p.add_argument("--spacings", type=_floats, default=[0.3, 1.0, 3.0, 10.0, 30.0],
                   help="comma-separated spacings a / lambda_F")
    p.add_argument("--threshold", type=float, default=0.1)

    p = sub.add_parser("superradiance", parents=[common], help="initial-time superradiance diagnostics")
    p.add_argument("--n-dipoles", type=int, default=100, help="square lattice, rounded to a square number")
    p.add_argument("--spacings", type=_floats, default=[0.1, 0.3, 1.0, 3.0, 10.0],
                   help="comma-separated lattice spacings a / lambda_F")

    p = sub.add_parser("macrospin", parents=[common], help="mean-field decay of N co-located dipoles")
    p.add_argument("--n-spins", type=int, default=20)
    p.add_argument("--gamma0", type=float, default=None, help="single-dipole rate in 1/s (default: gamma(0))")
    p.add_argument("--t-max", type=float, default=10.0, help="in units of 1/(N gamma0)")
    p.add_argument("--points", type=int, default=1001)
    p.add_argument("--method", choices=("exact", "ode"), default="exact")
    p.add_argument("--rotating", action="store_true", help="write the rotating-frame trajectory")

    p = sub.add_parser("currents", parents=[common], help="time frames of the emitted current wave")
    p.add_argument("--n-spins", type=int, default=20)
    p.add_argument("--ef-over-hgamma0", type=float, default=5e5,
                   help="E_F / (hbar gamma0); sets gamma0 = 2 E_F / (hbar x)")
    p.add_argument("--delta-over-gamma0", type=float, default=100.0)
    p.add_argument("--d-gamma0-over-vf", type=float, default=1e-3, help="height d in units of v_F / gamma0")
    p.add_argument("--rho-points", type=int, default=256)
    p.add_argument("--phi-points", type=int, default=128)
    p.add_argument("--rho-min", type=float, default=0.05, help="in units of 2 v_F / (gamma0 N)")
    p.add_argument("--rho-max", type=float, default=4.0, help="in units of 2 v_F / (gamma0 N)")
    p.add_argument("--frames", type=int, default=64)
    p.add_argument("--t-min", type=float, default=0.0, help="in units of 1/(N gamma0)")
    p.add_argument("--t-max", type=float, default=8.0, help="in units of 1/(N gamma0)")
    p.add_argument("--part", choices=response.PARTS, default="total")
    p.add_argument("--mode", choices=response.MODES, default="exact")

    p = sub.add_parser("verify", parents=[common], help="cross-module consistency checks")
    p.add_argument("--spin-degeneracy", type=int, default=2, help=argparse.SUPPRESS)
    return parser


# --------------------------------------------------------------------------

def _cmd_noise(args, params, manifest):
    ef_w = params.e_f / HBAR
    q = np.geomspace(args.q_min, args.q_max, args.points) * params.k_f
    rows = []
    for x in args.hw_over_ef:
        w = x * ef_w
        rows.extend((qi, w, noise.oersted_noise(params, w, qi)) for qi in q)
    return [write_csv(os.path.join(args.out, "noise.csv"), ["q_invcm", "omega_rads", "c_minusplus"], rows)]


def _cmd_rates(args, params, manifest):
    r = np.geomspace(args.r_min, args.r_max, args.points) * params.lambda_f
    rows = [(ri, decay.gamma_r(params, ri)) for ri in r]
    manifest.notes["rate_units"] = "gamma_hz is the decay rate in 1/s"
    return [write_csv(os.path.join(args.out, "rates.csv"), ["r_cm", "gamma_hz"], rows)]


def _cmd_subradiance(args, params, manifest):
    if args.seed is None:
        raise ValidationError("subradiance is stochastic: pass --seed", field="seed")
    stats = decay.disorder_sweep(params, args.n_dipoles, args.spacings, args.realizations,
                                 threshold=args.threshold, seed=args.seed, workers=args.threads)
    manifest.parameters.update({"N": args.n_dipoles, "realizations": args.realizations,
                                "threshold": args.threshold})
    manifest.notes["spread"] = [[s.spacing, s.min_rate_std, s.dark_fraction_std] for s in stats]
    rows = [(s.spacing, s.mean_min_rate, s.dark_fraction) for s in stats]
    return [write_csv(os.path.join(args.out, "subradiance.csv"),
                      ["a_over_lambda_f", "mean_min_over_gamma0", "dark_fraction"], rows)]


def _cmd_superradiance(args, params, manifest):
    side = max(2, int(round(math.sqrt(args.n_dipoles))))
    n_total = side * side
    lam = collective.lambda_SR(params)
    idx = np.arange(side) - 0.5 * (side - 1)
    gx, gy = np.meshgrid(idx, idx, indexing="ij")
    unit = np.column_stack([gx.ravel(), gy.ravel()])
    r_max = math.sqrt(2.0) * (side - 1) * max(args.spacings) * params.lambda_f * 1.02
    profile = decay.RadialProfile(params, max(r_max, 4 * params.lambda_f))
    rows, report = [], []
    for a in args.spacings:
        spacing = a * params.lambda_f
        mat = decay.build_matrix(decay.DipoleEnsemble(unit * spacing), params, profile)
        rep = collective.superradiance_report(mat, params, 1.0 / spacing**2, lambda_sr=lam)
        rows.append((rep.n, rep.dtR, rep.g2_zero, rep.R_coherent))
        report.append(f"a/lambda_F={a:g}  n={rep.n:.6e}  dtR={rep.dtR:.6e}  g2={rep.g2_zero:.6f}  "
                      f"R_coherent={rep.R_coherent:.6e}  superradiant={'yes' if rep.dtR > 0 else 'no'}")
    text = os.path.join(args.out, "superradiance.txt")
    with open(text, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"N = {n_total} (square lattice)\n")
        fh.write(f"lambda_SR = {lam:.6e} cm  lambda_SR' = {collective.lambda_SR_prime(params):.6e} cm\n")
        fh.write("\n".join(report) + "\n")
    print(open(text, encoding="utf-8").read(), end="")
    manifest.parameters["N"] = n_total
    csv = write_csv(os.path.join(args.out, "superradiance.csv"), ["n", "dtR", "g2", "R_coherent"], rows)
    return [csv, text]


def _cmd_macrospin(args, params, manifest):
    g0 = decay.gamma_r(params, 0.0) if args.gamma0 is None else args.gamma0
    N = args.n_spins
    t = np.linspace(0.0, args.t_max / (N * g0), args.points)
    solve = collective.macrospin_exact if args.method == "exact" else collective.macrospin_ode
    traj = solve(N, g0, params.delta, t)
    if args.rotating:
        traj = traj.rotating_frame()
    manifest.parameters.update({"N": N, "gamma0": g0, "method": args.method, "rotating": str(args.rotating)})
    rows = zip(traj.times, traj.sx, traj.sy, traj.sz)
    return [write_csv(os.path.join(args.out, "macrospin.csv"), ["t_s", "sx", "sy", "sz"], rows)]


def _cmd_currents(args, params, manifest):
    N = args.n_spins
    g0 = 2.0 * params.e_f / (HBAR * args.ef_over_hgamma0)
    p = params.replace(delta=args.delta_over_gamma0 * g0, d=args.d_gamma0_over_vf * params.v_f / g0)
    grid = response.PolarGrid.default(p, N, g0, n_rho=args.rho_points, n_phi=args.phi_points,
                                      rho_range=(args.rho_min, args.rho_max))
    times = np.linspace(args.t_min, args.t_max, args.frames) / (N * g0)
    frames = response.current_field(p, N, g0, grid, times, part=args.part, mode=args.mode)
    manifest.parameters.update(p.as_dict())
    manifest.parameters.update({"N": N, "gamma0": g0, "part": args.part, "mode": args.mode})
    manifest.notes["frame_times_s"] = [float(t) for t in times]
    manifest.notes["units"] = "rho_cm in cm, phi_rad in rad, j_rho and j_phi in statA/cm; " \
                              "drive is the exact macrospin on the whole real time axis"
    out = []
    rr, pp = np.meshgrid(grid.rho, grid.phi, indexing="ij")
    for k, fr in enumerate(frames):
        rows = zip(rr.ravel(), pp.ravel(), fr.j_rho.ravel(), fr.j_phi.ravel())
        out.append(write_csv(os.path.join(args.out, f"frame_{k:05d}.csv"), ["rho_cm", "phi_rad", "j_rho", "j_phi"],
                             rows))
    return out


def _cmd_verify(args, params, manifest):
    results = verify.run_verify(params, spin_degeneracy=args.spin_degeneracy)
    for r in results:
        print(r.line())
    manifest.notes["all_passed"] = all(r.passed for r in results)
    rows = [(r.name, r.value, r.target, r.tolerance, int(r.passed)) for r in results]
    return [write_csv(os.path.join(args.out, "verify.csv"), ["check", "value", "target", "tolerance", "passed"], rows)]


COMMANDS = {"noise": _cmd_noise, "rates": _cmd_rates, "subradiance": _cmd_subradiance,
            "superradiance": _cmd_superradiance, "macrospin": _cmd_macrospin,
            "currents": _cmd_currents, "verify": _cmd_verify}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        params = parse_config(args.config)[0] if args.config else default_params()
        if args.threads < 1:
            raise ValidationError("--threads must be >= 1", field="threads")
        os.makedirs(args.out, exist_ok=True)
        manifest = RunManifest(args.command, dict(params.as_dict()), seed=args.seed)
        start = time.perf_counter()
        outputs = COMMANDS[args.command](args, params, manifest)
        manifest.duration_s = time.perf_counter() - start
        for path in outputs:
            manifest.add_output(path)
        manifest.write(args.out)
    except (ConfigError, ValidationError, ConvergenceError) as exc:
        print(f"fermiemit {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.command == "verify" and not manifest.notes["all_passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
