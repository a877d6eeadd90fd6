"""The five gate-regime operating points, recomputed from the atomic model.

Selection rules (all at 4.46 T for Be+, 1 ms Bell time, 1 mm waist, 20 degree
crossing, 1.59 MHz COM mode):
  1. LS joint point: ACSS-null angle equals the balanced-force angle, [-15, 0] GHz.
  2. LS: largest zeta_L on the ACSS-null branch above the P manifold.
  3. MS config 1, b_sigma = sqrt2 b_pi: largest zeta_L among two-beam ACSS nulls in [-200, 0] GHz.
  4. MS config 2: largest zeta_L (either sign branch) between the Zeeman resonances.
  5. MS config 2: largest zeta_L (either sign branch) above the P manifold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import atomic, design
from .results import LABEL, ResultTable, species_hash
from .sweeps import GHZ, GateContext, maximize_on_grid, requirements

FIELD = 4.46
JOINT_WINDOW = (-15.0, 0.0)
HIGH_WINDOW = (190.0, 500.0)
INNER_WINDOW = (-300.0, 190.0)
MS1_WINDOW = (-200.0, 0.0)
MS1_RATIO = math.sqrt(2)


@dataclass(frozen=True)
class Reference:
    point: int
    gate: str
    detuning: float  # GHz
    phi_1: float  # deg (LS phi_P or MS phi_SB); nan if not applicable
    phi_2: float  # deg (MS phi_C)
    zeta_l: float
    power_mw: float


NAN = math.nan
REFERENCE_POINTS = (
    Reference(1, "LS", -5.29, 65.25, NAN, 1066.9, 13.6),
    Reference(2, "LS", 299.3, 70.5, NAN, 3440.9, 3443.6),
    Reference(3, "MS1", -163.2, NAN, NAN, 1769.7, 48.9),
    Reference(4, "MS2", -142.6, 39.3, -41.5, 1041.2, 20.1),
    Reference(5, "MS2", 431.4, 83.5, 71.0, 9512.9, 1997.9),
)


def deviation(computed, reference, relative=False):
    if relative:
        return (computed - reference) / reference
    return computed - reference


def ms2_best(scheme, species, window, step):
    best = None
    for branch in ("++", "+-"):

        def f(x, branch=branch):
            pts = design.ms2_points(scheme, species, x * GHZ)
            return pts[branch].zeta_l if branch in pts else None

        r = maximize_on_grid(f, *window, step)
        if r and (best is None or r[1] > best[1][1]):
            best = (branch, r)
    if best is None:
        return None
    branch, (x, _) = best
    return design.ms2_points(scheme, species, x * GHZ)[branch]


def ls_null_best(scheme, species, window, step):
    def f(x):
        phi = design.acss_null_angle(scheme, species, x * GHZ)
        return None if phi is None else design.evaluate_ls(scheme, species, x * GHZ, phi).zeta_l

    r = maximize_on_grid(f, *window, step)
    if r is None:
        return None
    d = r[0] * GHZ
    return design.evaluate_ls(scheme, species, d, design.acss_null_angle(scheme, species, d))


def ms1_best(scheme, species):
    roots = design.ms_null_detunings(scheme, species, MS1_RATIO, tuple(w * GHZ for w in MS1_WINDOW))
    pts = [design.evaluate_ms1(scheme, species, r, MS1_RATIO) for r in roots]
    return max(pts, key=lambda p: p.zeta_l) if pts else None


def find_points(species="be9", step=0.5):
    """Computed OperatingPoint (or None) for each of the five rows."""
    sp = atomic.load_species(species)
    scheme = atomic.level_energies(sp, FIELD)
    try:
        p1 = design.joint_operating_point(scheme, sp, tuple(w * GHZ for w in JOINT_WINDOW))
    except design.SearchError:
        p1 = None
    return {
        1: p1,
        2: ls_null_best(scheme, sp, HIGH_WINDOW, step),
        3: ms1_best(scheme, sp),
        4: ms2_best(scheme, sp, INNER_WINDOW, step),
        5: ms2_best(scheme, sp, HIGH_WINDOW, step),
    }


def reference_evaluation(ref, species):
    """OperatingPoint at the reference detuning and angles (no search)."""
    scheme = atomic.level_energies(species, FIELD)
    d = ref.detuning * GHZ
    if ref.gate == "LS":
        return design.evaluate_ls(scheme, species, d, math.radians(ref.phi_1))
    if ref.gate == "MS1":
        return design.evaluate_ms1(scheme, species, d, MS1_RATIO)
    return design.evaluate_ms(scheme, species, d, math.radians(ref.phi_2), math.radians(ref.phi_1))


def _angles(pt):
    if pt is None:
        return NAN, NAN
    a = pt.angles
    if pt.gate == "LS":
        return math.degrees(a["phi_p"]), NAN
    if pt.gate == "MS2":
        return math.degrees(a["phi_sb"]), math.degrees(a["phi_c"])
    return NAN, NAN


def table2(species="be9", context=None, step=0.5):
    ctx = context or GateContext()
    sp = atomic.load_species(species)
    pts = find_points(sp, step)
    cols = [
        ("point", LABEL),
        ("gate", LABEL),
        ("detuning", "GHz"),
        ("ref_detuning", "GHz"),
        ("dev_detuning", "GHz"),
        ("phi_1", "deg"),
        ("ref_phi_1", "deg"),
        ("dev_phi_1", "deg"),
        ("phi_2", "deg"),
        ("ref_phi_2", "deg"),
        ("dev_phi_2", "deg"),
        ("zeta_l", "1"),
        ("ref_zeta_l", "1"),
        ("rel_dev_zeta_l", "1"),
        ("power", "mW"),
        ("ref_power", "mW"),
        ("rel_dev_power", "1"),
        ("zeta_l_at_ref", "1"),
        ("power_at_ref", "mW"),
    ]
    meta = {
        "kind": "table2",
        "species": sp.name,
        "field_tesla": FIELD,
        "context": {k: getattr(ctx, k) for k in ("theta_r_deg", "omega_z_mhz", "waist_mm", "tau_ms")},
        "constants_hash": species_hash(sp),
    }
    table = ResultTable(cols, [], meta)
    for ref in REFERENCE_POINTS:
        pt = pts[ref.point]
        if pt is not None:
            d = pt.detuning / GHZ
            z = pt.zeta_l
            pw = requirements(pt, sp, ctx).total_power * 1e3
        else:
            d = z = pw = NAN
        a1, a2 = _angles(pt)
        at_ref = reference_evaluation(ref, sp)
        table.add(
            str(ref.point),
            ref.gate,
            d,
            ref.detuning,
            deviation(d, ref.detuning),
            a1,
            ref.phi_1,
            deviation(a1, ref.phi_1),
            a2,
            ref.phi_2,
            deviation(a2, ref.phi_2),
            z,
            ref.zeta_l,
            deviation(z, ref.zeta_l, True),
            pw,
            ref.power_mw,
            deviation(pw, ref.power_mw, True),
            at_ref.zeta_l,
            requirements(at_ref, sp, ctx).total_power * 1e3,
        )
    return table
