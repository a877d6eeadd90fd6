"""Figures of merit: interaction strength against spontaneous-emission decoherence."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from . import atomic, stark, scatter

TWOPI = 2 * math.pi

# reference LS configuration all quadratic merits are normalised to
REF_DETUNING = TWOPI * -5.29e9
REF_PHI = math.radians(65.25)
REF_FIELD = 4.46


class UndefinedMeritError(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class MeritValues:
    zeta_q: float  # 1/s
    zeta_l: float
    zeta_q0: float

    @property
    def zeta_q_normalized(self):
        return self.zeta_q / self.zeta_q0


def _check(gamma):
    if not gamma > 0:
        raise UndefinedMeritError("decoherence rate is zero; merit undefined")


def ls_point(scheme, species, detuning, phi, g0=1.0):
    """(F0/(hbar dk), rates) for the LS gate at (detuning, +-phi)."""
    c = stark.stark_coefficients(scheme, species, detuning, g0)
    f0 = stark.spin_forces(c, phi).f0
    rates = scatter.combine(scheme, species, scatter.ls_beams(detuning, phi, g0))
    return f0, rates


@lru_cache(maxsize=None)
def _zeta_q0_per_intensity(species):
    scheme = atomic.level_energies(species, REF_FIELD)
    g0 = stark.single_photon_rabi(1.0, species)
    f0, rates = ls_point(scheme, species, REF_DETUNING, REF_PHI, g0)
    return f0**2 / rates.gamma_ls


def reference_zeta_q0(species, intensity=1.0):
    """zeta_Q of the reference LS point at the given per-beam intensity (W/m^2)."""
    return _zeta_q0_per_intensity(species) * intensity


def merit_ls(f0_over_hdk, rates, zeta_q0=1.0):
    g = rates.gamma_ls
    _check(g)
    f = abs(f0_over_hdk)
    return MeritValues(zeta_q=f**2 / g, zeta_l=f / g, zeta_q0=zeta_q0)


def merit_ms(omega_r, rates, zeta_q0=1.0):
    g = rates.gamma_ms
    _check(g)
    w = abs(omega_r)
    return MeritValues(zeta_q=w**2 / g, zeta_l=w / g, zeta_q0=zeta_q0)
