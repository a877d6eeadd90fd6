"""AC Stark shifts, differential light shift, spin-dependent optical dipole force
and the two-photon Raman Rabi frequency of the MS beams.

All Stark quantities are proportional to g0^2; pass g0=1 to get per-g0^2 values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import constants as sc

from .atomic import HBAR, UP, DOWN, coupling, cartesian_coupling


class ResonanceError(ZeroDivisionError):
    """A detuning hits an atomic resonance exactly."""


@dataclass(frozen=True)
class BeamGeometry:
    theta_r: float  # full crossing angle, rad
    k: float  # optical wavenumber, 1/m
    waist: float = 1e-3  # 1/e^2 intensity radius, m

    def __post_init__(self):
        if not 0 < self.theta_r <= np.pi:
            raise ValueError("crossing angle must lie in (0, pi]")

    @property
    def dk(self):
        return 2 * self.k * math.sin(self.theta_r / 2)


def geometry_for(species, theta_r_deg=20.0, waist=1e-3):
    return BeamGeometry(theta_r=math.radians(theta_r_deg), k=species.k, waist=waist)


@dataclass(frozen=True)
class StarkCoefficients:
    a_up: float
    a_down: float
    b_up: float
    b_down: float

    @property
    def da(self):
        return self.a_up - self.a_down

    @property
    def db(self):
        return self.b_up - self.b_down


def single_photon_rabi(intensity, species):
    """g0 = mu E0 / (2 hbar) for a beam of peak intensity I = c eps0 E0^2 / 2."""
    if intensity < 0:
        raise ValueError("intensity must be nonnegative")
    E0 = math.sqrt(2 * intensity / (sc.c * sc.epsilon_0))
    return species.mu * E0 / (2 * HBAR)


def intensity_for_rabi(g0, species):
    """Inverse of single_photon_rabi."""
    E0 = 2 * HBAR * abs(g0) / species.mu
    return sc.c * sc.epsilon_0 * E0**2 / 2


def transition_detuning(scheme, species, detuning, i, level):
    """Laser detuning on the transition qubit state i -> level (detuning is from omega0)."""
    return detuning + scheme.ground_offset(i) + species.omega0 - level.omega


def stark_coefficients(scheme, species, detuning, g0=1.0):
    """Light shifts of both qubit states for pi (A) and horizontal (B) light."""
    out = {}
    for i in (UP, DOWN):
        a = b = 0.0
        for lv in scheme.p_levels():
            den = transition_detuning(scheme, species, detuning, i, lv)
            wa = coupling(i, lv.J, lv.mj, 0) ** 2
            wb = 0.5 * (coupling(i, lv.J, lv.mj, 1) ** 2 + coupling(i, lv.J, lv.mj, -1) ** 2)
            if wa == 0 and wb == 0:
                continue
            if den == 0:
                raise ResonanceError(f"laser resonant with mJ={i:+} -> {lv.manifold} mJ={lv.mj:+}")
            a += wa / den
            b += wb / den
        out[i] = (g0**2 * a, g0**2 * b)
    return StarkCoefficients(a_up=out[UP][0], a_down=out[DOWN][0], b_up=out[UP][1], b_down=out[DOWN][1])


def differential_acss(coeffs, phi):
    c2, s2 = math.cos(phi) ** 2, math.sin(phi) ** 2
    return coeffs.da * c2 + coeffs.db * s2


@dataclass(frozen=True)
class SpinForces:
    f_up: float
    f_down: float

    @property
    def f0(self):
        return 0.5 * (self.f_up - self.f_down)


def spin_forces(coeffs, phi):
    """Force amplitudes in units of hbar*dk (rad/s) for beams at +phi and -phi."""
    c2, s2 = math.cos(phi) ** 2, math.sin(phi) ** 2
    fu = -2 * (coeffs.a_up * c2 - coeffs.b_up * s2)
    fd = -2 * (coeffs.a_down * c2 - coeffs.b_down * s2)
    return SpinForces(fu, fd)


def polarization(phi, amp=1.0):
    """Real polarization vector (z, x) components of a beam at angle phi from vertical."""
    return (amp * math.cos(phi), amp * math.sin(phi))


def raman_rabi(scheme, species, detuning_ms, pol_c, pol_sb, g0=1.0):
    """Two-photon Rabi frequency: absorb a sideband photon from |down>, emit into the carrier to |up>.

    pol_c and pol_sb are (z, x) field components relative to E_MS0, so beam
    amplitude factors b are folded in. Intermediate states are the four mJ=+-1/2
    P levels.
    """
    tot = 0.0
    for lv in scheme.p_levels():
        if abs(lv.mj) != 0.5:
            continue
        num = cartesian_coupling(UP, lv.J, lv.mj, pol_c) * cartesian_coupling(DOWN, lv.J, lv.mj, pol_sb)
        if num == 0:
            continue
        den = detuning_ms + species.omega0 - lv.omega
        if den == 0:
            raise ResonanceError(f"sideband beam resonant with {lv.manifold} mJ={lv.mj:+}")
        tot += num / den
    return g0**2 * tot
