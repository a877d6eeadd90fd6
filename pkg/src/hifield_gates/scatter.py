"""Off-resonant photon scattering: Kramers-Heisenberg amplitudes, Raman and
Rayleigh decoherence rates for sets of laser beams."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .atomic import UP, DOWN, coupling
from .stark import ResonanceError, transition_detuning


@dataclass(frozen=True)
class Beam:
    """One laser beam: detuning from omega0, polarization angle from vertical,
    field amplitude relative to the reference field, and the reference g0."""

    detuning: float
    phi: float = 0.0
    amp: float = 1.0
    g0: float = 1.0

    def weights(self):
        s = self.amp * math.sin(self.phi) / math.sqrt(2)
        return {-1: s, 0: self.amp * math.cos(self.phi), 1: s}


def scattering_amplitude(scheme, species, i, j, J, lam, beam, validity=None):
    """A^{i->j}_{J,lam}: absorb lam-polarized light from i into |J, i+lam>, decay to j."""
    m = i + lam
    if abs(m) > J:
        return 0.0
    q = lam + i - j  # = m - j, the emitted photon polarization
    if q not in (-1, 0, 1):
        return 0.0
    num = beam.weights()[lam] * coupling(j, J, m, q) * coupling(i, J, m, lam)
    if num == 0:
        return 0.0
    lv = next(l for l in scheme.p_levels() if l.J == J and l.mj == m)
    den = transition_detuning(scheme, species, beam.detuning, i, lv)
    if den == 0:
        raise ResonanceError(f"resonant scattering via {lv.manifold} mJ={m:+} (lambda={lam:+d})")
    if validity is not None and abs(den) < 10 * species.gamma:
        validity.append((i, J, m, lam))
    return num / den


def _path_sum(scheme, species, i, j, lam, beam, validity=None):
    return sum(scattering_amplitude(scheme, species, i, j, J, lam, beam, validity) for J in (0.5, 1.5))


def beam_rates(scheme, species, beam, validity=None):
    """Single-beam (gamma_ud, gamma_du, gamma_el)."""
    f = beam.g0**2 * species.gamma
    gud = gdu = gel = 0.0
    for lam in (-1, 0, 1):
        gud += _path_sum(scheme, species, UP, DOWN, lam, beam, validity) ** 2
        gdu += _path_sum(scheme, species, DOWN, UP, lam, beam, validity) ** 2
        gel += (
            _path_sum(scheme, species, DOWN, DOWN, lam, beam, validity)
            - _path_sum(scheme, species, UP, UP, lam, beam, validity)
        ) ** 2
    return f * gud, f * gdu, f * gel


def raman_rates(scheme, species, beams):
    if not beams:
        raise ValueError("need at least one beam")
    gud = gdu = 0.0
    for b in beams:
        u, d, _ = beam_rates(scheme, species, b)
        gud += u
        gdu += d
    return gud, gdu, gud + gdu


def rayleigh_rate(scheme, species, beams):
    if not beams:
        raise ValueError("need at least one beam")
    return sum(beam_rates(scheme, species, b)[2] for b in beams)


@dataclass(frozen=True)
class ScatteringRates:
    gamma_ud: float
    gamma_du: float
    gamma_el: float
    near_resonance: bool = False

    @property
    def gamma_r(self):
        return self.gamma_ud + self.gamma_du

    @property
    def gamma_plus(self):
        return 0.5 * (self.gamma_ud + self.gamma_du)

    @property
    def gamma_minus(self):
        return 0.5 * (self.gamma_ud - self.gamma_du)

    @property
    def gamma_ls(self):
        return 0.5 * (self.gamma_r + self.gamma_el)

    @property
    def gamma_ms(self):
        return 0.25 * (self.gamma_el + 3 * self.gamma_r)

    def decoherence(self, gate):
        return self.gamma_ls if gate == "LS" else self.gamma_ms

    def scaled(self, c):
        return ScatteringRates(c * self.gamma_ud, c * self.gamma_du, c * self.gamma_el, self.near_resonance)


def combine(scheme, species, beams):
    """Sum single-beam rates over all beams into a ScatteringRates record."""
    flags = []
    gud = gdu = gel = 0.0
    for b in beams:
        u, d, e = beam_rates(scheme, species, b, flags)
        gud += u
        gdu += d
        gel += e
    return ScatteringRates(gud, gdu, gel, near_resonance=bool(flags))


def ls_beams(detuning, phi, g0=1.0):
    """The two ODF beams (upper at +phi, lower at -phi) of the light-shift gate."""
    return [Beam(detuning, phi, 1.0, g0), Beam(detuning, -phi, 1.0, g0)]


def ms_beams(scheme, detuning_ms, phi_c, phi_sb, b_c=1.0, b_sb=1.0, g0=1.0):
    """Carrier beam one qubit splitting below the sideband beam at detuning_ms."""
    return [
        Beam(detuning_ms - scheme.qubit_splitting, phi_c, b_c, g0),
        Beam(detuning_ms, phi_sb, b_sb, g0),
    ]
