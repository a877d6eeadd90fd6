"""Data behind each published figure (fig2 .. fig12), as ResultTables.

Numbering: 2 ACSS-null vs balanced-force angle gap; 3 LS merits at ACSS nulls;
4 LS merits for vertical/horizontal light; 5 MS configuration 1; 6 MS
configuration 2; 7 quadratic LS merit vs field; 8 linear LS and MS merits vs
field; 9 far-detuned merit, power and ACSS; 10 Mg+ LS; 11 Mg+ MS; 12 gate
fidelity dynamics and Bell-time grids.
"""

from __future__ import annotations

import math

import numpy as np

from . import atomic, design, dynamics
from .results import FLAG, LABEL, ResultTable, species_hash
from .stark import ResonanceError
from .sweeps import GHZ, GateContext, ls_point, requirements, scheme_for

FIELDS = (0.5, 2.5, 4.5)
SQRT2 = math.sqrt(2)
MS1_RATIOS = (("1", 1.0), ("sqrt2", SQRT2), ("1/sqrt2", 1 / SQRT2))


class UnknownFigureError(KeyError):
    pass


def _lin(lo, hi, step):
    n = int(round((hi - lo) / step)) + 1
    return [round(lo + i * step, 9) for i in range(n)]


def _log(lo, hi, n):
    return [float(f"{x:.12g}") for x in np.geomspace(lo, hi, n)]


def _deg(x):
    return math.degrees(x) if x is not None else math.nan


def _meta(kind, species, **kw):
    return {"kind": kind, "species": species.name, "constants_hash": species_hash(species), **kw}


def _ls(scheme, species, d_ghz, mode):
    try:
        return ls_point(scheme, species, d_ghz * GHZ, mode)
    except ResonanceError:
        return "resonant"


def _ms1(scheme, species, d_ghz, ratio):
    try:
        return design.evaluate_ms1(scheme, species, d_ghz * GHZ, ratio)
    except ResonanceError:
        return "resonant"


# ---------------------------------------------------------------- LS figures


def fig2(species, B, ctx):
    scheme = scheme_for(species, B)
    t = ResultTable(
        [("series", LABEL), ("detuning", "GHz"), ("phi_acss", "deg"), ("phi_f", "deg"), ("gap", "rad"),
         ("no_null", FLAG)],
        [],
        _meta("fig2", species, field_tesla=B),
    )
    for d in _lin(-210, 210, 0.25):
        try:
            pa = design.acss_null_angle(scheme, species, d * GHZ)
            pf = design.balanced_force_angle(scheme, species, d * GHZ)
        except ResonanceError:
            continue
        gap = abs(pa - pf) if pa is not None and pf is not None else math.nan
        t.add("curve", d, _deg(pa), _deg(pf), gap, int(pa is None or pf is None))
    try:
        jp = design.joint_operating_point(scheme, species, (-15 * GHZ, 0.0))
        phi = jp.angles["phi_p"]
        t.add("joint", jp.detuning / GHZ, math.degrees(phi), math.degrees(phi), 0.0, 0)
    except design.SearchError:
        pass
    return t


def fig3(species, B, ctx):
    scheme = scheme_for(species, B)
    t = ResultTable(
        [("series", LABEL), ("detuning", "GHz"), ("phi_p", "deg"), ("value", "1"), ("reference", FLAG),
         ("no_null", FLAG), ("near_resonance", FLAG)],
        [],
        _meta("fig3", species, field_tesla=B, note="LS merits with each beam's differential ACSS nulled"),
    )
    for d in _lin(-210, 210, 0.5):
        pt = _ls(scheme, species, d, "acss-null")
        if pt == "resonant":
            continue
        if pt is None:
            t.add("zeta_q_norm", d, math.nan, math.nan, 0, 1, 0)
            t.add("zeta_l", d, math.nan, math.nan, 0, 1, 0)
            continue
        nr = int(pt.flags["near_resonance"])
        phi = math.degrees(pt.angles["phi_p"])
        t.add("zeta_q_norm", d, phi, pt.merit.zeta_q_normalized, 0, 0, nr)
        t.add("zeta_l", d, phi, pt.zeta_l, 0, 0, nr)
    try:
        jp = design.joint_operating_point(scheme, species, (-15 * GHZ, 0.0))
        phi = math.degrees(jp.angles["phi_p"])
        t.add("zeta_q_norm", jp.detuning / GHZ, phi, jp.merit.zeta_q_normalized, 1, 0, 0)
        t.add("zeta_l", jp.detuning / GHZ, phi, jp.zeta_l, 1, 0, 0)
    except design.SearchError:
        pass
    return t.sort("series", "detuning", "reference")


def fig4(species, B, ctx):
    scheme = scheme_for(species, B)
    t = ResultTable(
        [("series", LABEL), ("detuning", "GHz"), ("zeta_q_norm", "1"), ("zeta_l", "1"), ("near_resonance", FLAG)],
        [],
        _meta("fig4", species, field_tesla=B),
    )
    for mode in ("vertical", "horizontal"):
        for d in _lin(-500, 500, 1.0):
            pt = _ls(scheme, species, d, mode)
            if pt == "resonant":
                continue
            t.add(mode, d, pt.merit.zeta_q_normalized, pt.zeta_l, int(pt.flags["near_resonance"]))
    return t


def fig7(species, B, ctx):
    t = ResultTable(
        [("series", LABEL), ("field", "T"), ("detuning", "GHz"), ("phi_p", "deg"), ("zeta_q_norm", "1"),
         ("no_null", FLAG), ("near_resonance", FLAG)],
        [],
        _meta("fig7", species),
    )
    for mode in ("acss-null", "vertical"):
        for b in FIELDS:
            scheme = scheme_for(species, b)
            for d in _lin(-210, 210, 0.5):
                pt = _ls(scheme, species, d, mode)
                if pt == "resonant":
                    continue
                if pt is None:
                    t.add(mode, b, d, math.nan, math.nan, 1, 0)
                    continue
                t.add(mode, b, d, math.degrees(pt.angles["phi_p"]), pt.merit.zeta_q_normalized, 0,
                      int(pt.flags["near_resonance"]))
    return t


def _multib_table(kind, species, note):
    return ResultTable(
        [("series", LABEL), ("field", "T"), ("detuning", "GHz"), ("zeta_l", "1"), ("no_null", FLAG),
         ("near_resonance", FLAG)],
        [],
        _meta(kind, species, note=note),
    )


def _ls_multib(t, species, series, mode, grid):
    for b in FIELDS:
        scheme = scheme_for(species, b)
        for d in grid:
            pt = _ls(scheme, species, d, mode)
            if pt == "resonant":
                continue
            if pt is None:
                t.add(series, b, d, math.nan, 1, 0)
            else:
                t.add(series, b, d, pt.zeta_l, 0, int(pt.flags["near_resonance"]))


def _ms_multib(t, species, series, grid):
    for b in FIELDS:
        scheme = scheme_for(species, b)
        for d in grid:
            pt = _ms1(scheme, species, d, 1.0)
            if pt == "resonant":
                continue
            t.add(series, b, d, pt.zeta_l, 0, int(pt.flags["near_resonance"]))


def fig8(species, B, ctx):
    t = _multib_table("fig8", species, "LS (a: ACSS-null, b/c: vertical) and MS config 1 equal amplitudes")
    _ls_multib(t, species, "LS-acss-null", "acss-null", _lin(-210, 210, 0.5))
    _ls_multib(t, species, "LS-vertical", "vertical", _lin(-210, 210, 0.5))
    _ls_multib(t, species, "LS-vertical-far", "vertical", _log(1e3, 1e5, 81))
    _ms_multib(t, species, "MS1-near", _lin(-400, 400, 1.0))
    _ms_multib(t, species, "MS1-far", _log(1e3, 1e5, 81))
    return t


def fig9(species, B, ctx):
    scheme = scheme_for(species, B)
    t = ResultTable(
        [("series", LABEL), ("detuning", "GHz"), ("zeta_l", "1"), ("power", "mW"), ("acss", "kHz")],
        [],
        _meta("fig9", species, field_tesla=B, context={k: getattr(ctx, k) for k in
                                                         ("theta_r_deg", "omega_z_mhz", "waist_mm", "tau_ms")}),
    )
    for d in _log(500, 5e4, 81):
        for series, pt in (("LS-vertical", _ls(scheme, species, d, "vertical")),
                           ("MS1-equal", _ms1(scheme, species, d, 1.0))):
            if pt == "resonant":
                continue
            req = requirements(pt, species, ctx)
            t.add(series, d, pt.zeta_l, req.total_power * 1e3, req.acss_at_point / (2 * math.pi * 1e3))
    return t.sort("series", "detuning")


def fig10(species, B, ctx):
    sp = atomic.load_species("mg24")
    t = _multib_table("fig10", sp, "Mg+ LS, vertical polarization")
    _ls_multib(t, sp, "near", "vertical", _lin(-3500, 500, 2.0))
    _ls_multib(t, sp, "far", "vertical", _log(1e4, 1e5, 61))
    return t


def fig11(species, B, ctx):
    sp = atomic.load_species("mg24")
    t = _multib_table("fig11", sp, "Mg+ MS config 1, equal amplitudes")
    _ms_multib(t, sp, "near", _lin(-3500, 500, 2.0))
    _ms_multib(t, sp, "far", _log(1e4, 1e5, 61))
    return t


# ---------------------------------------------------------------- MS configuration figures


def fig5(species, B, ctx):
    scheme = scheme_for(species, B)
    t = ResultTable(
        [("series", LABEL), ("detuning", "GHz"), ("zeta_q_norm", "1"), ("zeta_l", "1"), ("null_point", FLAG),
         ("near_resonance", FLAG)],
        [],
        _meta("fig5", species, field_tesla=B, note="series = b_sigma/b_pi"),
    )
    for label, ratio in MS1_RATIOS:
        for d in _lin(-400, 400, 1.0):
            pt = _ms1(scheme, species, d, ratio)
            if pt == "resonant":
                continue
            t.add(label, d, pt.merit.zeta_q_normalized, pt.zeta_l, 0, int(pt.flags["near_resonance"]))
        for r in design.ms_null_detunings(scheme, species, ratio, (-400 * GHZ, 400 * GHZ)):
            pt = design.evaluate_ms1(scheme, species, r, ratio)
            t.add(label, r / GHZ, pt.merit.zeta_q_normalized, pt.zeta_l, 1, int(pt.flags["near_resonance"]))
    return t.sort("series", "detuning")


def fig6(species, B, ctx):
    scheme = scheme_for(species, B)
    t = ResultTable(
        [("series", LABEL), ("detuning", "GHz"), ("phi_sb", "deg"), ("phi_c", "deg"), ("zeta_q_norm", "1"),
         ("zeta_l", "1"), ("no_null", FLAG), ("near_resonance", FLAG)],
        [],
        _meta("fig6", species, field_tesla=B, note="per-beam ACSS nulls; ++ and +- sign branches of (phi_sb, phi_c)"),
    )
    for d in _lin(-400, 600, 1.0):
        try:
            pts = design.ms2_points(scheme, species, d * GHZ)
        except ResonanceError:
            continue
        for branch in ("++", "+-"):
            pt = pts.get(branch)
            if pt is None:
                t.add(branch, d, math.nan, math.nan, math.nan, math.nan, 1, 0)
                continue
            a = pt.angles
            t.add(branch, d, math.degrees(a["phi_sb"]), math.degrees(a["phi_c"]), pt.merit.zeta_q_normalized,
                  pt.zeta_l, 0, int(pt.flags["near_resonance"]))
    return t.sort("series", "detuning")


# ---------------------------------------------------------------- fidelity


def _fid(gate, p, t):
    f = dynamics.fidelity_ls_exact if gate == "LS" else dynamics.fidelity_ms_exact
    return np.atleast_1d(f(p, t))


def fig12(species, B, ctx):
    """Rates in units of J (J = 1)."""
    t = ResultTable(
        [("panel", LABEL), ("gate", LABEL), ("series", LABEL), ("x", "1"), ("gamma_plus", "J"),
         ("gamma_minus", "J"), ("gamma_el", "J"), ("fidelity", "1")],
        [],
        {"kind": "fig12", "note": "x is tJ for panels a/b, gamma_el/J for c/d, gamma_plus/J for e/f"},
    )
    bell = math.pi / 2
    times = _lin(0.0, 2 * math.pi, 2 * math.pi / 200)
    for gate, pa, pc, pe in (("LS", "a", "c", "e"), ("MS", "b", "d", "f")):
        curves = []
        for gp in (0.05, 0.25):
            curves.append((f"gp={gp};gm=0", gp, 0.0, 0.0))
            curves.append((f"gp={gp};gm=gp", gp, gp, 0.0))
        for ge in (0.05, 0.25):
            curves.append((f"gel={ge}", 0.0, 0.0, ge))
        for name, gp, gm, ge in curves:
            p = dynamics.FidelityParams(1.0, gp + gm, gp - gm, ge)
            for x, f in zip(times, _fid(gate, p, np.array(times))):
                t.add(pa, gate, name, x, gp, gm, ge, float(f))
        for gp in (0.0, 0.05, 0.25):
            for same in (False, True):
                gm = gp if same else 0.0
                name = f"gp={gp};gm={'gp' if same else 0}"
                for ge in _lin(0.0, 0.5, 0.01):
                    p = dynamics.FidelityParams(1.0, gp + gm, gp - gm, ge)
                    t.add(pc, gate, name, ge, gp, gm, ge, float(_fid(gate, p, bell)[0]))
        for ratio in (0.0, 0.25, 0.5, 1.0, 2.0, 4.0):
            name = f"du/ud={ratio}"
            for gp in _lin(0.0, 0.5, 0.01):
                ud = 2 * gp / (1 + ratio)
                du = ratio * ud
                p = dynamics.FidelityParams(1.0, ud, du, 0.0)
                t.add(pe, gate, name, gp, p.gamma_plus, p.gamma_minus, 0.0, float(_fid(gate, p, bell)[0]))
    return t


FIGURES = {f"fig{i}": f for i, f in
           enumerate((fig2, fig3, fig4, fig5, fig6, fig7, fig8, fig9, fig10, fig11, fig12), start=2)}


def figure_data(fig_id, species="be9", field=4.46, context=None):
    key = str(fig_id).lower()
    if key not in FIGURES:
        raise UnknownFigureError(f"unknown figure {fig_id!r}; available: {', '.join(FIGURES)}")
    sp = atomic.load_species(species)
    return FIGURES[key](sp, field, context or GateContext())
