"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 physics error
(degeneracy / dark state), 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .config import ScenarioConfig, load_config
from .errors import ConfigError, PhysicsError
from .evolve import steady_state
from .layout import GEOMETRY_KINDS, coupling_set, make_layout
from .liouvillian import DriveSpec, bell_state, build_model, superoperator
from .observables import concurrence, field_amplitudes, g2_zero, intensity, mandel_q
from .runner import SCENARIO_NAMES, Table, run_scenario, sweep, write_tables
from .slh import build_network, to_lindblad
from .spectral import transition_rates
from .errors import DarkStateError

SLH_CHECK_TOL = 1e-10


def _parse_overrides(pairs) -> dict:
    overrides = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise ConfigError(f"override {pair!r} is not of the form key=value")
        key, value = pair.split("=", 1)
        overrides[key.strip()] = value.strip()
    return overrides


def _cmd_scenario(args) -> int:
    overrides = _parse_overrides(args.set)
    config = load_config(args.config) if args.config else None
    tables = run_scenario(args.name, overrides=overrides, config=config)
    paths = write_tables(tables, args.out)
    for p in paths:
        print(p)
    return 0


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    result = sweep(cfg)
    table = result.to_table("sweep")
    paths = write_tables([table], args.out)
    for p in paths:
        print(p)
    for name in result.observables:
        try:
            ext = result.extremum(name, "max")
        except PhysicsError:
            continue
        params = " ".join(
            f"{n}={v:.12g}" for n, v in zip(result.param_names, ext["params"])
        )
        print(f"max {name} = {ext['value']:.12g} at {params}")
    failed = sum(e is not None for e in result.errors)
    if failed:
        print(f"{failed}/{len(result.errors)} points failed (recorded as nan)")
    return 0


def _cmd_rates(args) -> int:
    lay = make_layout(args.geometry, args.spacing_over_pi * np.pi, args.gamma0)
    cs = coupling_set(lay)
    r = transition_rates(cs)
    print(f"geometry={args.geometry} spacing_over_pi={args.spacing_over_pi:.12g} gamma0={args.gamma0:.12g}")
    print(f"delta_1 = {cs.delta[0]:.12g}")
    print(f"delta_2 = {cs.delta[1]:.12g}")
    print(f"Delta_12 = {cs.Delta[0, 1]:.12g}")
    print(f"Gamma_1 = {cs.Gamma[0, 0]:.12g}")
    print(f"Gamma_2 = {cs.Gamma[1, 1]:.12g}")
    print(f"Gamma_12 = {cs.Gamma[0, 1]:.12g}")
    print(f"delta_tilde = {r.delta_tilde:.12g}")
    print(f"rate_e_plus = {r.gamma_e_plus:.12g}")
    print(f"rate_e_minus = {r.gamma_e_minus:.12g}")
    print(f"rate_plus_g = {r.gamma_plus_g:.12g}")
    print(f"rate_minus_g = {r.gamma_minus_g:.12g}")
    if args.out:
        table = Table(
            name=f"rates_{args.geometry}",
            columns=(
                "kdx_over_pi",
                "rate_e_plus",
                "rate_e_minus",
                "rate_plus_g",
                "rate_minus_g",
            ),
            rows=(
                (
                    args.spacing_over_pi,
                    r.gamma_e_plus,
                    r.gamma_e_minus,
                    r.gamma_plus_g,
                    r.gamma_minus_g,
                ),
            ),
        )
        for p in write_tables([table], args.out):
            print(p)
    return 0


def _cmd_slh_check(args) -> int:
    drives = [DriveSpec(), DriveSpec(rabi=args.rabi, detuning=args.detuning)]
    worst = 0.0
    for theta in np.linspace(0.0, np.pi, args.grid):
        lay = make_layout(args.geometry, float(theta))
        cs = coupling_set(lay)
        for drive in drives:
            closed = superoperator(build_model(cs, drive))
            composed = superoperator(to_lindblad(build_network(lay, drive)))
            worst = max(worst, float(np.max(np.abs(closed - composed))))
    status = "PASS" if worst < SLH_CHECK_TOL else "FAIL"
    print(
        f"slh-check {args.geometry}: max |closed-form - composed| = {worst:.3e} "
        f"over {args.grid} spacings ({status})"
    )
    if worst >= SLH_CHECK_TOL:
        raise PhysicsError(
            f"SLH-composed Liouvillian deviates by {worst:.3e} (tolerance {SLH_CHECK_TOL})"
        )
    return 0


def _cmd_steady(args) -> int:
    cfg = load_config(args.config)
    lay = make_layout(
        cfg.geometry.kind, cfg.geometry.spacing_over_pi * np.pi, cfg.geometry.gamma0
    )
    cs = coupling_set(lay)
    model = build_model(cs, DriveSpec(rabi=cfg.drive.rabi, detuning=cfg.drive.detuning))
    ss = steady_state(model)
    fields = field_amplitudes(lay, "left")
    beta = bell_state()
    print(f"concurrence = {concurrence(ss.rho):.12g}")
    print(f"p_gg = {np.real(ss.rho[0, 0]):.12g}")
    print(f"p_beta = {np.real(beta.conj() @ ss.rho @ beta):.12g}")
    print(f"p_ee = {np.real(ss.rho[3, 3]):.12g}")
    print(f"intensity = {intensity(ss.rho, fields):.12g}")
    try:
        print(f"g2_zero = {g2_zero(ss.rho, fields):.12g}")
        print(f"mandel_q = {mandel_q(ss.rho, fields):.12g}")
    except DarkStateError:
        print("g2_zero = nan (dark state)")
        print("mandel_q = nan (dark state)")
    print(f"residual = {ss.residual:.3e}")
    print(f"uniqueness_margin = {ss.uniqueness_margin:.3e}")
    if args.out:
        labels = ("gg", "ge", "eg", "ee")
        rows = tuple(
            (labels[i], labels[j], float(ss.rho[i, j].real), float(ss.rho[i, j].imag))
            for i in range(4)
            for j in range(4)
        )
        table = Table(name="steady_rho", columns=("bra", "ket", "re", "im"), rows=rows)
        for p in write_tables([table], args.out):
            print(p)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wqed",
        description="Giant atoms in a 1D waveguide: collective decay, "
        "entanglement and photon statistics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scenario", help="reproduce a named data set")
    p.add_argument("name", choices=SCENARIO_NAMES)
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override a configuration entry (repeatable)")
    p.add_argument("--config", help="configuration file (custom scenario)")
    p.add_argument("--out", default="out", help="output directory (default: out)")
    p.set_defaults(func=_cmd_scenario)

    p = sub.add_parser("sweep", help="evaluate a configured parameter sweep")
    p.add_argument("config", help="JSON configuration with a sweep section")
    p.add_argument("--out", default="out")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("rates", help="print dressed-state transition rates")
    p.add_argument("--geometry", choices=GEOMETRY_KINDS, required=True)
    p.add_argument("--spacing-over-pi", type=float, required=True)
    p.add_argument("--gamma0", type=float, default=1.0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_rates)

    p = sub.add_parser(
        "slh-check",
        help="verify the composed network against the closed-form master equation",
    )
    p.add_argument("--geometry", choices=GEOMETRY_KINDS, required=True)
    p.add_argument("--grid", type=int, default=40)
    p.add_argument("--rabi", type=float, default=1.5)
    p.add_argument("--detuning", type=float, default=0.0)
    p.set_defaults(func=_cmd_slh_check)

    p = sub.add_parser("steady", help="steady state and observables for a configuration")
    p.add_argument("config")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_steady)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except PhysicsError as e:
        print(f"physics error: {e}", file=sys.stderr)
        return 3
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
