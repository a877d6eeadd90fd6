"""Operating-point search and gate requirements.

Detunings are rad/s internally. Per-point strengths and rates are stored at g0 = 1
(they scale as g0^2), so requirements follow by a single rescaling.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import atomic, merit, scatter, stark
from .atomic import HBAR
from .stark import ResonanceError

TWOPI = 2 * math.pi
GHZ = TWOPI * 1e9

SCAN_STEP = 0.1 * GHZ
ROOT_TOL = 0.01 * GHZ  # required bracket accuracy; brentq goes far below this


class SearchError(RuntimeError):
    pass


class UnattainableError(ValueError):
    pass


# ---------------------------------------------------------------- root scanning


def _safe(f, x):
    try:
        v = f(x)
    except ResonanceError:
        return math.nan
    return math.nan if v is None else v


def scan_roots(f, start, stop, step=SCAN_STEP, rel_tol=1e-6):
    """All sign changes of f on a uniform grid, refined by Brent's method.

    Sign changes across poles (resonances) are discarded: at a genuine root the
    refined residual is tiny compared to the bracketing values.
    """
    if not stop > start:
        return []
    n = max(int(math.ceil((stop - start) / step)), 1)
    xs = np.linspace(start, stop, n + 1)
    vs = [_safe(f, x) for x in xs]
    roots = []
    for a, b, fa, fb in zip(xs[:-1], xs[1:], vs[:-1], vs[1:]):
        if not (math.isfinite(fa) and math.isfinite(fb)):
            continue
        if fa == 0.0:
            roots.append(a)
            continue
        if fa * fb > 0:
            continue
        try:
            r = brentq(lambda x: _checked(f, x), a, b, xtol=1e-6, maxiter=200)
        except (ValueError, ResonanceError):
            continue
        if abs(f(r)) <= rel_tol * max(abs(fa), abs(fb)):
            roots.append(r)
    if math.isfinite(vs[-1]) and vs[-1] == 0.0:
        roots.append(xs[-1])
    return sorted(set(roots))


def _checked(f, x):
    v = f(x)
    if v is None or not math.isfinite(v):
        raise ValueError("undefined inside bracket")
    return v


# ---------------------------------------------------------------- LS angles


def null_angle_from(coeffs):
    if coeffs.db == 0:
        return None
    r = -coeffs.da / coeffs.db
    return math.atan(math.sqrt(r)) if r > 0 else None


def balanced_angle_from(coeffs):
    s = coeffs.b_up + coeffs.b_down
    if s == 0:
        return None
    r = (coeffs.a_up + coeffs.a_down) / s
    return math.atan(math.sqrt(r)) if r > 0 else None


def acss_null_angle(scheme, species, detuning):
    """Polarization angle in (0, pi/2) nulling one beam's differential ACSS, or None."""
    return null_angle_from(stark.stark_coefficients(scheme, species, detuning))


def balanced_force_angle(scheme, species, detuning):
    """Angle giving F_up = -F_down, or None."""
    return balanced_angle_from(stark.stark_coefficients(scheme, species, detuning))


def angle_gap(scheme, species, detuning):
    c = stark.stark_coefficients(scheme, species, detuning)
    a, b = null_angle_from(c), balanced_angle_from(c)
    if a is None or b is None:
        return None
    return a - b


# ---------------------------------------------------------------- operating points


@dataclass
class OperatingPoint:
    gate: str  # "LS", "MS1" or "MS2"
    detuning: float
    angles: dict
    strength: float  # F0/(hbar dk) or Omega_R at g0 = 1
    rates: scatter.ScatteringRates  # at g0 = 1
    residual_acss: float  # at g0 = 1
    power_weight: float  # sum of squared beam amplitudes over beam paths
    merit: merit.MeritValues = None
    flags: dict = field(default_factory=dict)

    @property
    def zeta_l(self):
        return self.merit.zeta_l


def _finish(pt, species, gate):
    rates = pt.rates
    z0 = merit.reference_zeta_q0(species, atomic_intensity_unit(species))
    if gate == "LS":
        pt.merit = merit.merit_ls(pt.strength, rates, z0)
    else:
        pt.merit = merit.merit_ms(pt.strength, rates, z0)
    pt.flags.setdefault("near_resonance", rates.near_resonance)
    return pt


def atomic_intensity_unit(species):
    """Per-beam intensity giving g0 = 1 rad/s."""
    return stark.intensity_for_rabi(1.0, species)


def evaluate_ls(scheme, species, detuning, phi):
    c = stark.stark_coefficients(scheme, species, detuning)
    f0 = stark.spin_forces(c, phi).f0
    rates = scatter.combine(scheme, species, scatter.ls_beams(detuning, phi))
    pt = OperatingPoint(
        gate="LS",
        detuning=detuning,
        angles={"phi_p": phi},
        strength=f0,
        rates=rates,
        residual_acss=stark.differential_acss(c, phi),
        power_weight=2.0,
    )
    return _finish(pt, species, "LS")


def beams_acss(scheme, species, beams):
    """Total differential ACSS of a set of beams (each scaled by its amplitude^2)."""
    tot = 0.0
    for b in beams:
        c = stark.stark_coefficients(scheme, species, b.detuning, b.g0)
        tot += b.amp**2 * stark.differential_acss(c, b.phi)
    return tot


def ms1_amplitudes(ratio):
    """(b_sigma, b_pi) with b_sigma/b_pi = ratio and b_sigma^2 + b_pi^2 = 2."""
    b_pi = math.sqrt(2.0 / (1.0 + ratio**2))
    return ratio * b_pi, b_pi


def evaluate_ms(scheme, species, detuning_ms, phi_c, phi_sb, b_c=1.0, b_sb=1.0, gate="MS2"):
    beams = scatter.ms_beams(scheme, detuning_ms, phi_c, phi_sb, b_c, b_sb)
    om = stark.raman_rabi(
        scheme, species, detuning_ms, stark.polarization(phi_c, b_c), stark.polarization(phi_sb, b_sb)
    )
    rates = scatter.combine(scheme, species, beams)
    pt = OperatingPoint(
        gate=gate,
        detuning=detuning_ms,
        angles={"phi_c": phi_c, "phi_sb": phi_sb, "b_c": b_c, "b_sb": b_sb},
        strength=om,
        rates=rates,
        residual_acss=beams_acss(scheme, species, beams),
        power_weight=b_c**2 + b_sb**2,
    )
    return _finish(pt, species, "MS")


def evaluate_ms1(scheme, species, detuning_ms, ratio):
    """Configuration 1: sigma (horizontal) sideband beam, pi (vertical) carrier."""
    b_sigma, b_pi = ms1_amplitudes(ratio)
    pt = evaluate_ms(scheme, species, detuning_ms, 0.0, math.pi / 2, b_pi, b_sigma, gate="MS1")
    pt.angles.update(b_sigma=b_sigma, b_pi=b_pi)
    return pt


def joint_operating_points(scheme, species, window, step=SCAN_STEP):
    lo, hi = window
    roots = scan_roots(lambda d: angle_gap(scheme, species, d), lo, hi, step)
    return [evaluate_ls(scheme, species, r, acss_null_angle(scheme, species, r)) for r in roots]


def joint_operating_point(scheme, species, window, step=SCAN_STEP):
    """Detuning in window where the ACSS-null and balanced-force angles coincide."""
    lo, hi = window
    if not hi > lo:
        raise SearchError("empty detuning window")
    pts = joint_operating_points(scheme, species, window, step)
    if not pts:
        xs = np.arange(lo, hi, step)
        defined = sum(angle_gap_or_none(scheme, species, x) is not None for x in xs)
        raise SearchError(
            f"no joint ACSS-null / balanced-force point in [{lo / GHZ:.3f}, {hi / GHZ:.3f}] GHz "
            f"({defined} of {len(xs)} scan points have both angles defined)"
        )
    return max(pts, key=lambda p: p.zeta_l)


def angle_gap_or_none(scheme, species, d):
    try:
        return angle_gap(scheme, species, d)
    except ResonanceError:
        return None


def ms1_acss(scheme, species, detuning_ms, ratio):
    b_sigma, b_pi = ms1_amplitudes(ratio)
    return beams_acss(scheme, species, scatter.ms_beams(scheme, detuning_ms, 0.0, math.pi / 2, b_pi, b_sigma))


def ms_null_detunings(scheme, species, ratio, window, step=SCAN_STEP):
    """Detunings where the summed carrier + sideband differential ACSS vanishes (config 1)."""
    if scheme.qubit_splitting == 0:
        return []  # differential shift vanishes identically: no isolated nulls
    lo, hi = window
    return scan_roots(lambda d: ms1_acss(scheme, species, d, ratio), lo, hi, step)


def ms_null_angles(scheme, species, detuning_ms):
    """Per-beam null angles (phi_sb, phi_c) for configuration 2, or None.

    Both signs of phi_c null the carrier; the caller picks the combination.
    """
    psb = acss_null_angle(scheme, species, detuning_ms)
    pc = acss_null_angle(scheme, species, detuning_ms - scheme.qubit_splitting)
    if psb is None or pc is None:
        return None
    return psb, pc


def ms2_points(scheme, species, detuning_ms):
    """Both sign variants (++ and +-) of the configuration-2 null point."""
    ang = ms_null_angles(scheme, species, detuning_ms)
    if ang is None:
        return {}
    psb, pc = ang
    return {
        "++": evaluate_ms(scheme, species, detuning_ms, pc, psb),
        "+-": evaluate_ms(scheme, species, detuning_ms, -pc, psb),
    }


# ---------------------------------------------------------------- requirements


def lamb_dicke(species, geometry, omega_z):
    return geometry.dk * math.sqrt(HBAR / (2 * species.mass * omega_z))


def required_strength(species, geometry, omega_z, tau_g):
    """F0/(hbar dk) (LS) or Omega_R (MS) giving J = pi/(2 tau) in one loop (delta_z = 2 pi/tau)."""
    if not tau_g > 0:
        raise ValueError("gate time must be positive")
    J = math.pi / (2 * tau_g)
    delta_z = TWOPI / tau_g
    eta = lamb_dicke(species, geometry, omega_z)
    return math.sqrt(2 * delta_z * J) / eta


def ising_coupling(strength, species, geometry, omega_z, delta_z):
    """COM-mode J = hbar (s dk)^2 / (4 m omega_z delta_z) for s = F0/(hbar dk) or Omega_R."""
    return HBAR * (strength * geometry.dk) ** 2 / (4 * species.mass * omega_z * delta_z)


@dataclass(frozen=True)
class GateRequirements:
    j: float
    tau_g: float
    g0_required: float
    intensity: float  # reference per-beam intensity (field amplitude 1), W/m^2
    total_power: float  # W
    eta: float
    acss_at_point: float  # rad/s
    rates: scatter.ScatteringRates  # at the required intensity


def gate_requirements(point, species, geometry, omega_z, tau_g=1e-3):
    s_req = required_strength(species, geometry, omega_z, tau_g)
    if point.strength == 0:
        raise UnattainableError("no interaction at this operating point")
    g0sq = s_req / abs(point.strength)
    g0 = math.sqrt(g0sq)
    intensity = stark.intensity_for_rabi(g0, species)
    power = point.power_weight * intensity * math.pi * geometry.waist**2 / 2
    # LS points carry the single-beam value (both beams are identical), MS the beam sum
    acss = point.residual_acss * g0sq
    delta_z = TWOPI / tau_g
    j = ising_coupling(s_req, species, geometry, omega_z, delta_z)
    return GateRequirements(
        j=j,
        tau_g=tau_g,
        g0_required=g0,
        intensity=intensity,
        total_power=power,
        eta=lamb_dicke(species, geometry, omega_z),
        acss_at_point=acss,
        rates=point.rates.scaled(g0sq),
    )


def gate_error(rates, tau_g, gate):
    """Bell-time infidelity to first order in the scattering rates."""
    if gate == "LS":
        g = 0.75 * rates.gamma_r + 0.5 * rates.gamma_el
    else:
        g = 2 * rates.gamma_plus + rates.gamma_el / 4 - (4 / math.pi) * rates.gamma_minus
    if g * tau_g > 0.2:
        warnings.warn("gate error above 0.2: first-order expansion unreliable", RuntimeWarning)
    return g * tau_g


def intensity_stability_bound(arm_time, acss, n_ions):
    """Fractional intensity imbalance that rotates the collective spin by 1/sqrt(N)."""
    if acss == 0:
        return math.inf
    return (1 / math.sqrt(n_ions)) / (abs(acss) * arm_time)
