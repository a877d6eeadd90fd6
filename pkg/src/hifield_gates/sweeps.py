"""Parameter sweeps over detuning or magnetic field, emitted as ResultTables."""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from functools import lru_cache

import numpy as np

from . import atomic, design, stark
from .results import FLAG, LABEL, ResultTable, species_hash
from .stark import ResonanceError

GHZ = design.GHZ
GATES = ("LS", "MS1", "MS2")
QUANTITIES = ("zeta_l", "zeta_q_norm", "acss", "force", "rabi", "rates", "power")
MODES = {
    "LS": ("acss-null", "fixed-angle", "vertical", "horizontal"),
    "MS1": ("fixed-angle",),
    "MS2": ("per-beam-null",),
}


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class GateContext:
    """Geometry and motion needed to turn unit-intensity results into requirements."""

    theta_r_deg: float = 20.0
    omega_z_mhz: float = 1.59
    waist_mm: float = 1.0
    tau_ms: float = 1.0

    def geometry(self, species):
        return stark.geometry_for(species, self.theta_r_deg, self.waist_mm * 1e-3)

    @property
    def omega_z(self):
        return 2 * math.pi * self.omega_z_mhz * 1e6

    @property
    def tau(self):
        return self.tau_ms * 1e-3


@lru_cache(maxsize=64)
def scheme_for(species, B):
    return atomic.level_energies(species, B)


def grid(start, stop, step):
    if not step > 0:
        raise UsageError("step must be positive")
    if not start < stop:
        raise UsageError("start must be below stop")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(n)]


def requirements(point, species, ctx):
    return design.gate_requirements(point, species, ctx.geometry(species), ctx.omega_z, ctx.tau)


def ls_point(scheme, species, detuning, mode, phi=0.0):
    """OperatingPoint for an LS polarization mode, or None when no ACSS null exists."""
    if mode == "acss-null":
        phi = design.acss_null_angle(scheme, species, detuning)
        if phi is None:
            return None
    elif mode == "vertical":
        phi = 0.0
    elif mode == "horizontal":
        phi = math.pi / 2
    elif mode != "fixed-angle":
        raise UsageError(f"polarization mode {mode!r} not valid for LS")
    return design.evaluate_ls(scheme, species, detuning, phi)


def point_values(pt, species, ctx, quantity):
    """Ordered (name, unit, value) triples for the requested quantity."""
    if quantity == "zeta_l":
        return [("zeta_l", "1", pt.zeta_l)]
    if quantity == "zeta_q_norm":
        return [("zeta_q_norm", "1", pt.merit.zeta_q_normalized)]
    if quantity in ("force", "rabi"):
        g0sq = stark.single_photon_rabi(1.0, species) ** 2
        return [(quantity, "rad/s per W/m^2", abs(pt.strength) * g0sq)]
    req = requirements(pt, species, ctx)
    if quantity == "acss":
        return [("acss", "kHz", req.acss_at_point / (2 * math.pi * 1e3))]
    if quantity == "power":
        return [("power", "mW", req.total_power * 1e3)]
    if quantity == "rates":
        r = req.rates
        return [("gamma_ud", "1/s", r.gamma_ud), ("gamma_du", "1/s", r.gamma_du), ("gamma_el", "1/s", r.gamma_el)]
    raise UsageError(f"unknown quantity {quantity!r}")


def quantity_columns(quantity):
    if quantity == "rates":
        return [("gamma_ud", "1/s"), ("gamma_du", "1/s"), ("gamma_el", "1/s")]
    units = {"zeta_l": "1", "zeta_q_norm": "1", "force": "rad/s per W/m^2", "rabi": "rad/s per W/m^2"}
    units.update(acss="kHz", power="mW")
    return [(quantity, units[quantity])]


@dataclass(frozen=True)
class SweepRequest:
    gate: str = "LS"
    quantity: str = "zeta_l"
    axis: str = "detuning"
    start: float = -210.0  # GHz or tesla
    stop: float = 210.0
    step: float = 1.0
    mode: str = ""  # blank selects the gate's default
    phi_deg: float = 0.0  # fixed-angle LS
    ratio: float = 1.0  # b_sigma / b_pi for MS1
    species: str = "be9"
    field_tesla: float = 4.46
    detuning_ghz: float = 0.0  # fixed detuning for field sweeps
    context: GateContext = GateContext()

    @property
    def polarization_mode(self):
        return self.mode or MODES[self.gate][0]

    def validate(self):
        if self.gate not in GATES:
            raise UsageError(f"gate must be one of {GATES}")
        if self.quantity not in QUANTITIES:
            raise UsageError(f"quantity must be one of {QUANTITIES}")
        if self.quantity == "force" and self.gate != "LS":
            raise UsageError("quantity 'force' applies to the LS gate; use 'rabi' for MS")
        if self.quantity == "rabi" and self.gate == "LS":
            raise UsageError("quantity 'rabi' applies to MS gates; use 'force' for LS")
        if self.axis not in ("detuning", "field"):
            raise UsageError("axis must be 'detuning' or 'field'")
        if self.polarization_mode not in MODES[self.gate]:
            raise UsageError(f"mode {self.polarization_mode!r} not valid for {self.gate}; use one of {MODES[self.gate]}")
        if not self.ratio > 0:
            raise UsageError("ratio must be positive")
        grid(self.start, self.stop, self.step)


def _angle_columns(gate):
    if gate == "LS":
        return [("phi_p", "deg")]
    if gate == "MS1":
        return [("b_sigma", "1"), ("b_pi", "1")]
    return [("phi_sb", "deg"), ("phi_c", "deg")]


def _angles(pt, gate):
    a = pt.angles
    if gate == "LS":
        return [math.degrees(a["phi_p"])]
    if gate == "MS1":
        return [a["b_sigma"], a["b_pi"]]
    return [math.degrees(a["phi_sb"]), math.degrees(a["phi_c"])]


def evaluate_points(req, scheme, species, detuning):
    """[(series, OperatingPoint or None)] at one grid point."""
    mode = req.polarization_mode
    if req.gate == "LS":
        return [(mode, ls_point(scheme, species, detuning, mode, math.radians(req.phi_deg)))]
    if req.gate == "MS1":
        return [(f"ratio={req.ratio:.6g}", design.evaluate_ms1(scheme, species, detuning, req.ratio))]
    pts = design.ms2_points(scheme, species, detuning)
    return [("++", pts.get("++")), ("+-", pts.get("+-"))]


def run_sweep(req):
    req.validate()
    species = atomic.load_species(req.species)
    x_name, x_unit = ("detuning", "GHz") if req.axis == "detuning" else ("field", "T")
    cols = [("series", LABEL), (x_name, x_unit)] + _angle_columns(req.gate) + quantity_columns(req.quantity)
    cols += [("no_null", FLAG), ("near_resonance", FLAG)]
    mark_nulls = req.gate == "MS1" and req.axis == "detuning"
    if mark_nulls:
        cols.append(("null_point", FLAG))
    meta = {
        "kind": "sweep",
        "request": {k: v for k, v in asdict(req).items() if k != "context"},
        "context": asdict(req.context),
        "species": species.name,
        "constants_hash": species_hash(species),
    }
    if req.axis == "detuning":
        meta["field_tesla"] = req.field_tesla
    table = ResultTable(cols, [], meta)
    skipped_res, skipped_range = [], []
    n_extra = len(cols) - 4 - mark_nulls
    tail = (0,) if mark_nulls else ()
    for x in grid(req.start, req.stop, req.step):
        if req.axis == "detuning":
            B, d = req.field_tesla, x * GHZ
        else:
            B, d = x, req.detuning_ghz * GHZ
        try:
            scheme = scheme_for(species, B)
        except atomic.FieldRangeError:
            skipped_range.append(x)
            continue
        try:
            pts = evaluate_points(req, scheme, species, d)
            rows = []
            for series, pt in pts:
                if pt is None:
                    rows.append((series, x, *([math.nan] * n_extra), 1, 0, *tail))
                    continue
                vals = [v for _, _, v in point_values(pt, species, req.context, req.quantity)]
                rows.append((series, x, *_angles(pt, req.gate), *vals, 0, int(pt.flags["near_resonance"]), *tail))
        except (ResonanceError, ZeroDivisionError):
            skipped_res.append(x)
            continue
        table.rows.extend(rows)
    if mark_nulls and not skipped_range:
        scheme = scheme_for(species, req.field_tesla)
        for r in design.ms_null_detunings(scheme, species, req.ratio, (req.start * GHZ, req.stop * GHZ)):
            pt = design.evaluate_ms1(scheme, species, r, req.ratio)
            vals = [v for _, _, v in point_values(pt, species, req.context, req.quantity)]
            table.add(f"ratio={req.ratio:.6g}", r / GHZ, *_angles(pt, req.gate), *vals, 0,
                      int(pt.flags["near_resonance"]), 1)
    table.metadata["skipped_resonant"] = skipped_res
    table.metadata["skipped_out_of_range"] = skipped_range
    return table.sort("series", x_name)


def maximize_on_grid(f, lo, hi, step, refine=True):
    """(x, f(x)) maximizing f over a grid with local refinement; NaN/None values skipped."""
    from scipy.optimize import minimize_scalar

    best = None
    for x in np.arange(lo, hi + 0.5 * step, step):
        try:
            v = f(x)
        except (ResonanceError, ZeroDivisionError):
            continue
        if v is None or not np.isfinite(v):
            continue
        if best is None or v > best[1]:
            best = (float(x), float(v))
    if best is None or not refine:
        return best

    def neg(x):
        try:
            v = f(x)
        except (ResonanceError, ZeroDivisionError):
            return math.inf
        return math.inf if v is None or not np.isfinite(v) else -v

    res = minimize_scalar(neg, bounds=(best[0] - step, best[0] + step), method="bounded", options={"xatol": 1e-7 * step})
    if np.isfinite(res.fun) and -res.fun >= best[1]:
        return float(res.x), float(-res.fun)
    return best
