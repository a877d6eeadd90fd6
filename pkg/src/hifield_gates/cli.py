"""hifield-gates command line.

Units: GHz for detunings, degrees for angles, tesla, MHz for omega_z, ms for
times, mW for powers. Exit codes: 0 success, 2 usage error, 3 numerical or
search failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import asdict

import numpy as np

from . import __version__, atomic, design, dynamics, operating, sweeps
from .figures import FIGURES, UnknownFigureError, figure_data
from .results import FLAG, LABEL, ResultTable, species_hash
from .stark import ResonanceError

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3

GLOBAL_DEFAULTS = {
    "species": "be9",
    "field_tesla": 4.46,
    "theta_r_deg": 20.0,
    "omega_z_mhz": 1.59,
    "waist_mm": 1.0,
    "tau_ms": 1.0,
    "out": "-",
    "format": "csv",
}
_FLOAT_KEYS = {"field_tesla", "theta_r_deg", "omega_z_mhz", "waist_mm", "tau_ms"}
BEAM_NOTE = "circular Gaussian beams; an elliptical beam (e.g. 6:1) would reduce power proportionally, not modeled"


class ConfigError(ValueError):
    pass


def read_config(path):
    """key=value lines; '#' comments; keys as the long global flags (dashes or underscores)."""
    out = {}
    try:
        lines = open(path).read().splitlines()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        k = k.replace("-", "_")
        if k not in GLOBAL_DEFAULTS:
            raise ConfigError(f"{path}:{n}: unknown key {k!r}")
        if k in _FLOAT_KEYS:
            try:
                v = float(v)
            except ValueError as e:
                raise ConfigError(f"{path}:{n}: {k} must be a number") from e
        out[k] = v
    return out


def resolve_globals(args):
    """CLI flags override config-file values, which override defaults."""
    if not hasattr(args, "config"):
        args.config = None
    cfg = read_config(args.config) if args.config else {}
    for k, dflt in GLOBAL_DEFAULTS.items():
        if getattr(args, k, None) is None:
            setattr(args, k, cfg.get(k, dflt))
    if args.format not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    return args


def context(args):
    return sweeps.GateContext(args.theta_r_deg, args.omega_z_mhz, args.waist_mm, args.tau_ms)


def _meta(args, kind, **kw):
    sp = atomic.load_species(args.species)
    return {
        "kind": kind,
        "species": sp.name,
        "field_tesla": args.field_tesla,
        "context": asdict(context(args)),
        "constants_hash": species_hash(sp),
        "version": __version__,
        **kw,
    }


# ---------------------------------------------------------------- operating point from flags


def _point(args, sp, scheme):
    d = args.detuning_ghz * sweeps.GHZ
    if args.gate == "LS":
        if args.phi_deg is None:
            phi = design.acss_null_angle(scheme, sp, d)
            if phi is None:
                raise design.SearchError(f"no ACSS-null angle at {args.detuning_ghz} GHz; pass --phi-deg")
        else:
            phi = math.radians(args.phi_deg)
        return design.evaluate_ls(scheme, sp, d, phi)
    if args.gate == "MS1":
        return design.evaluate_ms1(scheme, sp, d, args.ratio)
    if args.phi_sb_deg is None or args.phi_c_deg is None:
        pts = design.ms2_points(scheme, sp, d)
        branch = args.branch
        if branch not in pts:
            raise design.SearchError(f"no per-beam ACSS null ({branch}) at {args.detuning_ghz} GHz")
        return pts[branch]
    return design.evaluate_ms(scheme, sp, d, math.radians(args.phi_c_deg), math.radians(args.phi_sb_deg))


def _angle_dict(pt):
    return {k: (math.degrees(v) if k.startswith("phi") else v) for k, v in pt.angles.items()}


# ---------------------------------------------------------------- commands


def cmd_levels(args):
    sp = atomic.load_species(args.species)
    scheme = atomic.level_energies(sp, args.field_tesla)
    t = ResultTable(
        [("manifold", LABEL), ("J", "1"), ("mj", "1"), ("frequency", "GHz")],
        [],
        _meta(args, "levels", qubit_splitting_ghz=scheme.qubit_splitting / sweeps.GHZ,
              note="frequency above S1/2 mJ=-1/2; P levels relative to the zero-field S1/2-P3/2 line"),
    )
    for lv in scheme.levels:
        f = lv.omega if lv.manifold == atomic.S12 else lv.omega - sp.omega0
        t.add(lv.manifold, lv.J, lv.mj, f / sweeps.GHZ)
    return t


def _point_row_table(args, kind, extra_meta=None):
    cols = [("search", LABEL), ("gate", LABEL), ("detuning", "GHz"), ("phi_1", "deg"), ("phi_2", "deg"),
            ("zeta_l", "1"), ("zeta_q_norm", "1"), ("power", "mW"), ("acss", "kHz")]
    return ResultTable(cols, [], _meta(args, kind, **(extra_meta or {})))


def _add_point(t, label, pt, sp, ctx):
    req = sweeps.requirements(pt, sp, ctx)
    a = pt.angles
    if pt.gate == "LS":
        p1, p2 = math.degrees(a["phi_p"]), math.nan
    elif pt.gate == "MS2":
        p1, p2 = math.degrees(a["phi_sb"]), math.degrees(a["phi_c"])
    else:
        p1 = p2 = math.nan
    t.add(label, pt.gate, pt.detuning / sweeps.GHZ, p1, p2, pt.zeta_l, pt.merit.zeta_q_normalized,
          req.total_power * 1e3, req.acss_at_point / (2 * math.pi * 1e3))


def cmd_opsearch(args):
    sp = atomic.load_species(args.species)
    scheme = atomic.level_energies(sp, args.field_tesla)
    ctx = context(args)
    lo, hi = args.start, args.stop
    if not lo < hi:
        raise sweeps.UsageError("start must be below stop")
    window = (lo * sweeps.GHZ, hi * sweeps.GHZ)
    t = _point_row_table(args, "opsearch", {"search": args.kind, "window_ghz": [lo, hi], "note": BEAM_NOTE})
    if args.kind == "joint":
        for pt in design.joint_operating_points(scheme, sp, window):
            _add_point(t, "joint", pt, sp, ctx)
    elif args.kind == "ms1-null":
        for r in design.ms_null_detunings(scheme, sp, args.ratio, window):
            _add_point(t, "ms1-null", design.evaluate_ms1(scheme, sp, r, args.ratio), sp, ctx)
    elif args.kind == "ls-null-max":
        pt = operating.ls_null_best(scheme, sp, (lo, hi), args.step)
        if pt is not None:
            _add_point(t, "ls-null-max", pt, sp, ctx)
    else:
        pt = operating.ms2_best(scheme, sp, (lo, hi), args.step)
        if pt is not None:
            _add_point(t, "ms2-max", pt, sp, ctx)
    if not t.rows:
        raise design.SearchError(f"no {args.kind} operating point in [{lo}, {hi}] GHz")
    return t


def cmd_sweep(args):
    req = sweeps.SweepRequest(
        gate=args.gate,
        quantity=args.quantity,
        axis=args.axis,
        start=args.start,
        stop=args.stop,
        step=args.step,
        mode=args.mode or "",
        phi_deg=args.phi_deg,
        ratio=args.ratio,
        species=args.species,
        field_tesla=args.field_tesla,
        detuning_ghz=args.detuning_ghz,
        context=context(args),
    )
    return sweeps.run_sweep(req)


def cmd_table2(args):
    return operating.table2(args.species, context(args), args.step)


def cmd_figure(args):
    return figure_data(args.id, args.species, args.field_tesla, context(args))


def cmd_fidelity(args):
    tau = args.tau_ms * 1e-3
    j = math.pi / (2 * tau)
    p = dynamics.FidelityParams(j, args.gamma_ud, args.gamma_du, args.gamma_el)
    stop = args.t_stop_ms if args.t_stop_ms is not None else 2 * args.tau_ms
    if not stop > 0 or args.points < 2:
        raise sweeps.UsageError("need t-stop-ms > 0 and at least 2 points")
    t_ms = np.linspace(0.0, stop, args.points)
    f = dynamics.fidelity_ls_exact if args.gate == "LS" else dynamics.fidelity_ms_exact
    exact = np.atleast_1d(f(p, t_ms * 1e-3))
    cols = [("t", "ms"), ("fidelity", "1")]
    if args.check:
        cols.append(("fidelity_lindblad", "1"))
        ode = dynamics.lindblad_fidelity(args.gate, p, t_ms * 1e-3)
    t = ResultTable(cols, [], _meta(args, "fidelity", gate=args.gate, j_rad_per_s=j,
                                    rates_per_s=[args.gamma_ud, args.gamma_du, args.gamma_el]))
    for i, x in enumerate(t_ms):
        row = [float(x), float(exact[i])]
        if args.check:
            row.append(float(ode[i]))
        t.add(*row)
    return t


def _requirements_row(args):
    sp = atomic.load_species(args.species)
    scheme = atomic.level_energies(sp, args.field_tesla)
    pt = _point(args, sp, scheme)
    return sp, pt, sweeps.requirements(pt, sp, context(args))


def cmd_power(args):
    sp, pt, req = _requirements_row(args)
    t = ResultTable(
        [("gate", LABEL), ("detuning", "GHz"), ("power", "mW"), ("intensity", "W/m^2"), ("g0", "rad/s"),
         ("j", "rad/s"), ("eta", "1"), ("acss", "kHz"), ("zeta_l", "1"), ("near_resonance", FLAG)],
        [],
        _meta(args, "power", angles=_angle_dict(pt), note=BEAM_NOTE),
    )
    t.add(pt.gate, pt.detuning / sweeps.GHZ, req.total_power * 1e3, req.intensity, req.g0_required, req.j, req.eta,
          req.acss_at_point / (2 * math.pi * 1e3), pt.zeta_l, int(pt.flags["near_resonance"]))
    return t


def cmd_error(args):
    sp, pt, req = _requirements_row(args)
    err = design.gate_error(req.rates, req.tau_g, pt.gate)
    cols = [("gate", LABEL), ("detuning", "GHz"), ("gate_error", "1"), ("gamma_ud", "1/s"), ("gamma_du", "1/s"),
            ("gamma_el", "1/s"), ("stability_bound", "1")]
    bound = math.nan
    if args.arm_time_ms is not None:
        bound = design.intensity_stability_bound(args.arm_time_ms * 1e-3, req.acss_at_point, args.n_ions)
    t = ResultTable(cols, [], _meta(args, "error", angles=_angle_dict(pt)))
    r = req.rates
    t.add(pt.gate, pt.detuning / sweeps.GHZ, err, r.gamma_ud, r.gamma_du, r.gamma_el, bound)
    return t


# ---------------------------------------------------------------- parser


def _add_point_flags(p):
    p.add_argument("--gate", choices=sweeps.GATES, default="LS")
    p.add_argument("--detuning-ghz", type=float, required=True)
    p.add_argument("--phi-deg", type=float, help="LS polarization angle; default: ACSS-null angle")
    p.add_argument("--ratio", type=float, default=1.0, help="MS1 b_sigma/b_pi")
    p.add_argument("--phi-sb-deg", type=float)
    p.add_argument("--phi-c-deg", type=float)
    p.add_argument("--branch", choices=("++", "+-"), default="++", help="MS2 null branch when angles are not given")


def _global_flags():
    # SUPPRESS keeps a flag given before the subcommand from being reset by the subparser
    g = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    g.add_argument("--species")
    g.add_argument("--field-tesla", type=float)
    g.add_argument("--theta-r-deg", type=float)
    g.add_argument("--omega-z-mhz", type=float)
    g.add_argument("--waist-mm", type=float)
    g.add_argument("--tau-ms", type=float, help="gate (Bell) time")
    g.add_argument("--out", help="output path, '-' for stdout")
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--config", help="file of key=value lines overriding defaults")
    return g


def build_parser():
    common = _global_flags()
    ap = argparse.ArgumentParser(prog="hifield-gates", description="High-field trapped-ion LS/MS gate design.",
                                 parents=[common])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("levels", parents=[common], help="level energies at the given field").set_defaults(func=cmd_levels)

    p = sub.add_parser("opsearch", parents=[common], help="search for an operating point")
    p.add_argument("--kind", choices=("joint", "ls-null-max", "ms1-null", "ms2-max"), default="joint")
    p.add_argument("--start", type=float, default=-15.0)
    p.add_argument("--stop", type=float, default=0.0)
    p.add_argument("--ratio", type=float, default=math.sqrt(2))
    p.add_argument("--step", type=float, default=0.5)
    p.set_defaults(func=cmd_opsearch)

    p = sub.add_parser("sweep", parents=[common], help="sweep a quantity over detuning or field")
    p.add_argument("--gate", choices=sweeps.GATES, default="LS")
    p.add_argument("--quantity", choices=sweeps.QUANTITIES, default="zeta_l")
    p.add_argument("--axis", choices=("detuning", "field"), default="detuning")
    p.add_argument("--start", type=float, default=-210.0)
    p.add_argument("--stop", type=float, default=210.0)
    p.add_argument("--step", type=float, default=1.0)
    p.add_argument("--mode", choices=sorted({m for ms in sweeps.MODES.values() for m in ms}))
    p.add_argument("--phi-deg", type=float, default=0.0)
    p.add_argument("--ratio", type=float, default=1.0)
    p.add_argument("--detuning-ghz", type=float, default=0.0, help="fixed detuning for field sweeps")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("table2", parents=[common], help="recompute the five gate-regime operating points")
    p.add_argument("--step", type=float, default=0.5)
    p.set_defaults(func=cmd_table2)

    p = sub.add_parser("figure", parents=[common], help="emit a figure dataset")
    p.add_argument("id", help=", ".join(FIGURES))
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("fidelity", parents=[common], help="exact gate fidelity vs time (J = pi/(2 tau))")
    p.add_argument("--gate", choices=("LS", "MS"), default="LS")
    p.add_argument("--gamma-ud", type=float, default=0.0, help="1/s")
    p.add_argument("--gamma-du", type=float, default=0.0, help="1/s")
    p.add_argument("--gamma-el", type=float, default=0.0, help="1/s")
    p.add_argument("--t-stop-ms", type=float)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--check", action="store_true", help="also integrate the master equation")
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("power", parents=[common], help="laser power needed at an operating point")
    _add_point_flags(p)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("error", parents=[common], help="first-order gate error at an operating point")
    _add_point_flags(p)
    p.add_argument("--arm-time-ms", type=float, help="spin-echo arm time for the intensity-stability bound")
    p.add_argument("--n-ions", type=int, default=100)
    p.set_defaults(func=cmd_error)
    return ap


USAGE_ERRORS = (sweeps.UsageError, ConfigError, UnknownFigureError, atomic.UnknownSpeciesError,
                atomic.FieldRangeError)
NUMERIC_ERRORS = (design.SearchError, design.UnattainableError, ResonanceError, dynamics.IntegrationError,
                  ArithmeticError)


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        resolve_globals(args)
        table = args.func(args)
        text = table.dump(args.format)
    except USAGE_ERRORS as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NUMERIC_ERRORS as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
