import dataclasses
import math
import warnings

import pytest
from hypothesis import assume, given, settings, strategies as st

from hifield_gates import atomic, design, scatter, stark
from hifield_gates.sweeps import GateContext, requirements
from oracles import grid_roots, match_roots

GHZ = design.GHZ
BE = atomic.load_species("be9")
S446 = atomic.level_energies(BE, 4.46)
CTX = GateContext()


def _coeffs(s, d):
    try:
        return stark.stark_coefficients(s, BE, d)
    except stark.ResonanceError:
        return None


# ---------------------------------------------------------------- LS angles


@settings(max_examples=60, deadline=None)
@given(d=st.floats(-400, 400), B=st.floats(0.5, 4.5))
def test_null_angle_closes(d, B):
    s = atomic.level_energies(BE, B)
    c = _coeffs(s, d * GHZ)
    assume(c is not None)
    phi = design.null_angle_from(c)
    if phi is None:
        assert c.da * c.db >= 0
        return
    assert 0 < phi < math.pi / 2
    assert abs(stark.differential_acss(c, phi)) < 1e-9 * abs(c.da)


@settings(max_examples=60, deadline=None)
@given(d=st.floats(-400, 400), B=st.floats(0.5, 4.5))
def test_balanced_angle_closes(d, B):
    s = atomic.level_energies(BE, B)
    c = _coeffs(s, d * GHZ)
    assume(c is not None)
    phi = design.balanced_angle_from(c)
    if phi is None:
        return
    f = stark.spin_forces(c, phi)
    assert abs(f.f_up + f.f_down) < 1e-9 * (abs(f.f_up) + abs(f.f_down))


def test_null_absent_when_signs_match():
    # red of the whole P manifold both differences share a sign
    found = 0
    for x in range(-2000, -500, 50):
        c = stark.stark_coefficients(S446, BE, x * GHZ)
        if c.da * c.db > 0:
            found += 1
            assert design.acss_null_angle(S446, BE, x * GHZ) is None
    assert found > 0


@pytest.mark.xfail(strict=True, reason="model null angle at -5.29 GHz is 66.59 deg")
def test_null_angle_at_quoted_operating_point():
    phi = design.acss_null_angle(S446, BE, -5.29 * GHZ)
    assert math.degrees(phi) == pytest.approx(65.25, abs=0.1)


# ---------------------------------------------------------------- joint point


def test_joint_point_closes_and_is_frozen():
    pt = design.joint_operating_point(S446, BE, (-15 * GHZ, 0.0))
    phi_f = design.balanced_force_angle(S446, BE, pt.detuning)
    assert pt.angles["phi_p"] == pytest.approx(phi_f, abs=1e-9)
    assert pt.detuning / GHZ == pytest.approx(-1.0341, abs=1e-3)
    assert math.degrees(pt.angles["phi_p"]) == pytest.approx(64.956, abs=1e-3)
    assert abs(pt.residual_acss) < 1e-9 * abs(stark.stark_coefficients(S446, BE, pt.detuning).da)


def test_joint_point_at_low_field_matches_grid_oracle():
    s = atomic.level_energies(BE, 0.5)
    pt = design.joint_operating_point(s, BE, (-15 * GHZ, 0.0))
    oracle = grid_roots(lambda x: design.angle_gap(s, BE, x * GHZ), -15.0, 0.0, 0.001)
    assert len(oracle) == 1
    assert pt.detuning / GHZ == pytest.approx(oracle[0], abs=0.01)
    assert pt.detuning / GHZ == pytest.approx(-0.00527, abs=1e-4)


def test_joint_point_errors():
    with pytest.raises(design.SearchError):
        design.joint_operating_point(S446, BE, (0.0, 0.0))
    with pytest.raises(design.SearchError, match="scan points"):
        design.joint_operating_point(S446, BE, (-15 * GHZ, -10 * GHZ))


# ---------------------------------------------------------------- MS nulls


def test_ms1_acss_vanishes_at_zero_field():
    s = atomic.level_energies(BE, 0.0)
    for ratio in (1.0, math.sqrt(2)):
        for x in (-180.0, -60.3, 20.0, 150.0):
            beams = scatter.ms_beams(s, x * GHZ, 0.0, math.pi / 2, *reversed(design.ms1_amplitudes(ratio)))
            scale = sum(abs(design.beams_acss(s, BE, [b])) for b in beams)
            assert abs(design.ms1_acss(s, BE, x * GHZ, ratio)) <= 1e-12 * scale
    assert design.ms_null_detunings(s, BE, 1.0, (-200 * GHZ, 0.0)) == []


def _ms1_scale(s, d, ratio):
    b_sigma, b_pi = design.ms1_amplitudes(ratio)
    beams = scatter.ms_beams(s, d, 0.0, math.pi / 2, b_pi, b_sigma)
    return sum(abs(design.beams_acss(s, BE, [b])) for b in beams)


@pytest.mark.parametrize("ratio", [math.sqrt(2), 1.0, 1 / math.sqrt(2)])
def test_ms_null_detunings_close(ratio):
    roots = design.ms_null_detunings(S446, BE, ratio, (-210 * GHZ, 210 * GHZ))
    assert roots
    for r in roots:
        assert abs(design.ms1_acss(S446, BE, r, ratio)) < 1e-9 * _ms1_scale(S446, r, ratio)


def test_ms_null_detunings_frozen():
    roots = design.ms_null_detunings(S446, BE, math.sqrt(2), (-200 * GHZ, 0.0))
    assert [round(r / GHZ, 2) for r in roots] == [-41.68]
    roots = design.ms_null_detunings(S446, BE, 1 / math.sqrt(2), (-200 * GHZ, 0.0))
    assert [round(r / GHZ, 2) for r in roots] == [-158.79, -103.08, -51.54]


@pytest.mark.xfail(strict=True, reason="ratio sqrt2 yields a single null at -41.68 GHz in this model")
def test_ms_null_detuning_quoted():
    roots = design.ms_null_detunings(S446, BE, math.sqrt(2), (-200 * GHZ, 0.0))
    assert any(abs(r / GHZ + 163.2) <= 0.5 for r in roots)


@pytest.mark.parametrize("window,ratio", [((-60.0, -30.0), math.sqrt(2)), ((-120.0, -40.0), 1.0)])
def test_ms_null_detunings_match_grid_oracle(window, ratio):
    found = [r / GHZ for r in design.ms_null_detunings(S446, BE, ratio, tuple(w * GHZ for w in window))]
    oracle = grid_roots(lambda x: design.ms1_acss(S446, BE, x * GHZ, ratio), *window, 0.01)
    assert oracle
    assert match_roots(found, oracle, 0.01) == ([], [])


@settings(max_examples=40, deadline=None)
@given(d=st.floats(-400, 600))
def test_ms_null_angles_close(d):
    try:
        ang = design.ms_null_angles(S446, BE, d * GHZ)
    except stark.ResonanceError:
        assume(False)
    assume(ang is not None)
    psb, pc = ang
    for det, phi in ((d * GHZ, psb), (d * GHZ - S446.qubit_splitting, pc), (d * GHZ - S446.qubit_splitting, -pc)):
        c = stark.stark_coefficients(S446, BE, det)
        assert abs(stark.differential_acss(c, phi)) < 1e-9 * abs(c.da)
    pts = design.ms2_points(S446, BE, d * GHZ)
    assert set(pts) == {"++", "+-"}
    scale = sum(abs(stark.stark_coefficients(S446, BE, det).da) for det in (d * GHZ, d * GHZ - S446.qubit_splitting))
    for pt in pts.values():
        assert abs(pt.residual_acss) < 1e-9 * scale


def test_ms_null_angles_frozen():
    psb, pc = design.ms_null_angles(S446, BE, -142.6 * GHZ)
    assert math.degrees(psb) == pytest.approx(45.55, abs=0.01)
    assert math.degrees(pc) == pytest.approx(35.09, abs=0.01)
    assert design.ms_null_angles(S446, BE, 431.4 * GHZ) is None


@pytest.mark.xfail(strict=True, reason="model angles at -142.6 GHz are (45.55, +-35.09) deg")
def test_ms_null_angles_quoted_inner():
    psb, pc = design.ms_null_angles(S446, BE, -142.6 * GHZ)
    assert math.degrees(psb) == pytest.approx(39.3, abs=0.2)
    assert math.degrees(-pc) == pytest.approx(-41.5, abs=0.2)


@pytest.mark.xfail(strict=True, reason="model null branch ends near 429 GHz")
def test_ms_null_angles_quoted_outer():
    psb, pc = design.ms_null_angles(S446, BE, 431.4 * GHZ)
    assert math.degrees(psb) == pytest.approx(83.5, abs=0.2)
    assert math.degrees(pc) == pytest.approx(71.0, abs=0.2)


# ---------------------------------------------------------------- requirements


@pytest.mark.parametrize("tau", [1e-4, 1e-3, 5e-3])
def test_requirements_bell_time(tau):
    pt = design.evaluate_ls(S446, BE, 299.3 * GHZ, math.radians(70.5))
    req = design.gate_requirements(pt, BE, CTX.geometry(BE), CTX.omega_z, tau)
    assert req.tau_g * req.j == pytest.approx(math.pi / 2, rel=1e-12)
    assert req.total_power > 0
    assert req.rates.gamma_r == pytest.approx(pt.rates.gamma_r * req.g0_required**2, rel=1e-12)


def test_requirements_errors():
    s0 = atomic.level_energies(BE, 0.0)
    pt = design.evaluate_ls(s0, BE, -50 * GHZ, 0.0)
    with pytest.raises(design.UnattainableError):
        design.gate_requirements(pt, BE, CTX.geometry(BE), CTX.omega_z)
    with pytest.raises(ValueError):
        design.gate_requirements(pt, BE, CTX.geometry(BE), CTX.omega_z, 0.0)


def test_lamb_dicke_parameter():
    assert design.lamb_dicke(BE, CTX.geometry(BE), CTX.omega_z) == pytest.approx(0.13, abs=0.005)


def test_far_detuned_vertical_acss():
    for x in (500.0, 5e3, 5e4):
        pt = design.evaluate_ls(S446, BE, x * GHZ, 0.0)
        acss = requirements(pt, BE, CTX).acss_at_point / (2 * math.pi * 1e3)
        assert acss == pytest.approx(-5.4, rel=0.05)


# ---------------------------------------------------------------- errors and bounds


def test_gate_error_formulas():
    r = scatter.ScatteringRates(gamma_ud=3.0, gamma_du=1.0, gamma_el=8.0)
    assert design.gate_error(r, 1e-3, "LS") == pytest.approx((0.75 * 4.0 + 0.5 * 8.0) * 1e-3)
    ms = 2 * r.gamma_plus + 2.0 - (4 / math.pi) * r.gamma_minus
    assert design.gate_error(r, 1e-3, "MS") == pytest.approx(ms * 1e-3)


@settings(max_examples=25, deadline=None)
@given(k=st.floats(1e-3, 1e3), x=st.sampled_from([-5.29, 299.3, -80.0]))
def test_gate_error_invariant_under_intensity_scaling(k, x):
    pt = design.evaluate_ls(S446, BE, x * GHZ, design.acss_null_angle(S446, BE, x * GHZ) or 0.3)
    scaled = dataclasses.replace(pt, strength=pt.strength * k, rates=pt.rates.scaled(k))
    e1 = design.gate_error(requirements(pt, BE, CTX).rates, CTX.tau, "LS")
    e2 = design.gate_error(requirements(scaled, BE, CTX).rates, CTX.tau, "LS")
    assert e2 == pytest.approx(e1, rel=1e-10)


def test_gate_error_warns_when_large():
    r = scatter.ScatteringRates(gamma_ud=200.0, gamma_du=200.0, gamma_el=0.0)
    with pytest.warns(RuntimeWarning):
        design.gate_error(r, 1e-3, "LS")
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        design.gate_error(scatter.ScatteringRates(1.0, 1.0, 1.0), 1e-3, "LS")


def test_stability_bound():
    b = design.intensity_stability_bound(1e-3, 2 * math.pi * 5e3, 100)
    assert b == pytest.approx(3e-3, rel=0.1)
    assert design.intensity_stability_bound(1e-3, 2 * math.pi * 5e3, 400) == pytest.approx(b / 2)
    assert design.intensity_stability_bound(1e-3, -2 * math.pi * 5e3, 100) == pytest.approx(b)
    assert design.intensity_stability_bound(1e-3, 0.0, 100) == math.inf
