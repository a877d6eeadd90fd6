"""Large-detuning closed forms for the gate strengths, scattering rates and merits.

Built on linear Zeeman shifts (g_J = 4/3 for P3/2, 2/3 for P1/2), first order in
delta_z/delta. Exact counterparts for comparison come from the diagonalised
level scheme via the design module.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from . import atomic, design

VALIDITY_LIMIT = 0.1


class AsymptoticValidityWarning(UserWarning):
    pass


@dataclass(frozen=True)
class AsymptoticInputs:
    delta: float  # detuning (LS) or sideband detuning (MS), rad/s
    delta_z: float  # mu_B B / hbar
    omega_fs: float
    g0: float = 1.0
    gamma: float = 1.0

    @classmethod
    def for_species(cls, species, B, delta, g0=1.0):
        return cls(delta, atomic.MU_B * B / atomic.HBAR, species.omega_fs, g0, species.gamma)

    @property
    def omega_fs_prime(self):
        return self.omega_fs / self.delta

    @property
    def delta_z_prime(self):
        return self.delta_z / self.delta

    @property
    def valid(self):
        return abs(self.delta_z_prime) < VALIDITY_LIMIT

    def check(self):
        if not self.valid:
            warnings.warn(
                f"|delta_z/delta| = {abs(self.delta_z_prime):.3g} >= {VALIDITY_LIMIT}; first-order expansion unreliable",
                AsymptoticValidityWarning,
                stacklevel=3,
            )
        return self.valid


# ---------------------------------------------------------------- LS, vertical polarization


def ls_force_approx(p):
    """F0/(hbar dk)."""
    p.check()
    d, w = p.delta, p.omega_fs
    return 4 * p.g0**2 / 9 * p.delta_z / d**2 * (1 + (d / (d + w)) ** 2)


def ls_raman_approx(p):
    p.check()
    d, w = p.delta, p.omega_fs
    return 4 * p.g0**2 * p.gamma / (9 * d**2) * (w / (d + w)) ** 2


def ls_rayleigh_approx(p):
    p.check()
    d, w = p.delta, p.omega_fs
    return (
        16 * p.g0**2 * p.gamma / (81 * d**2) * p.delta_z_prime**2 * ((2 * d**2 + 2 * w * d + w**2) / (d + w) ** 2) ** 2
    )


def ls_gamma_approx(p):
    """Total LS decoherence rate; Rayleigh is second order in delta_z/delta and dropped."""
    return ls_raman_approx(p)


def ls_merit_scaling(p):
    """zeta_L,LS ~ (delta_z/gamma)(2 d^2 + 2 d w + w^2)/w^2."""
    p.check()
    d, w = p.delta, p.omega_fs
    return p.delta_z / p.gamma * (2 * d**2 + 2 * d * w + w**2) / w**2


def ls_merit_limit(p):
    """delta >> omega_fs limit: (delta_z/omega_fs)(delta^2/(gamma omega_fs))."""
    return p.delta_z / p.omega_fs * p.delta**2 / (p.gamma * p.omega_fs)


# ---------------------------------------------------------------- MS configuration 1, b_sigma = b_pi


def ms_rabi_unexpanded(p):
    wp, dp = p.omega_fs_prime, p.delta_z_prime
    return p.g0**2 / (3 * p.delta) * (1 / (1 - 5 / 3 * dp) - 1 / (1 + wp - 4 / 3 * dp))


def ms_rabi_approx(p):
    p.check()
    wp, dp = p.omega_fs_prime, p.delta_z_prime
    return p.g0**2 / (3 * p.delta) * (wp / (1 + wp) + dp / 3 * (1 + 10 * wp + 5 * wp**2) / (1 + wp) ** 2)


def ms_raman_approx(p):
    p.check()
    wp, dp = p.omega_fs_prime, p.delta_z_prime
    return 2 * p.g0**2 * p.gamma / (9 * p.delta**2) * (wp / (1 + wp)) ** 2 * (3 + 4 * dp * (2 + wp) / (1 + wp))


def ms_rayleigh_approx(p):
    p.check()
    wp = p.omega_fs_prime
    return 4 * p.g0**2 * p.gamma / (81 * p.delta**2) * (wp / (1 + wp)) ** 2


def ms_rayleigh_unexpanded(p):
    wp, dp = p.omega_fs_prime, p.delta_z_prime
    t1 = ((1 / (1 - 5 / 3 * dp) + 2 / (1 + wp - 4 / 3 * dp)) / 3 - 1 / (1 - dp)) ** 2 / 2
    t2 = (1 / (1 + dp) - (2 / (1 + wp + 4 / 3 * dp) + 1 / (1 + 5 / 3 * dp)) / 3) ** 2 / 2
    t3 = (1 / (1 + wp - 8 / 3 * dp) + 2 / (1 - 7 / 3 * dp) - (1 / (1 + wp - 4 / 3 * dp) + 2 / (1 - 5 / 3 * dp))) ** 2 / 9
    return p.g0**2 * p.gamma / (9 * p.delta**2) * (t1 + t2 + t3)


def ms_gamma_approx(p):
    """(Gamma_el + 3 Gamma_r)/4 to first order."""
    p.check()
    wp, dp = p.omega_fs_prime, p.delta_z_prime
    return p.g0**2 * p.gamma / (18 * p.delta**2) * (wp / (1 + wp)) ** 2 * (83 / 9 + 12 * dp * (2 + wp) / (1 + wp))


def ms_merit_approx(p):
    p.check()
    d, w, dz = p.delta, p.omega_fs, p.delta_z
    corr = dz * d / (d + w) ** 2 * (83 + 182 * w / d + 91 * (w / d) ** 2) / 249
    return 54 * d / (83 * p.gamma) * ((d + w) / w) ** 2 * (w / (d + w) + corr)


def ms_merit_limit(p):
    """omega_fs << delta limit: delta^2 / (gamma omega_fs)."""
    return p.delta**2 / (p.gamma * p.omega_fs)


# ---------------------------------------------------------------- exact counterparts


def exact_ls_vertical(species, B, delta):
    """(F0/(hbar dk), Gamma_LS, zeta_L) at g0 = 1 with both beams vertically polarized."""
    scheme = atomic.level_energies(species, B)
    pt = design.evaluate_ls(scheme, species, delta, 0.0)
    return abs(pt.strength), pt.rates.gamma_ls, pt.zeta_l


def exact_ms_equal(species, B, delta_ms):
    """(Omega_R, rates, zeta_L) at g0 = 1 for configuration 1 with b_sigma = b_pi."""
    scheme = atomic.level_energies(species, B)
    pt = design.evaluate_ms1(scheme, species, delta_ms, 1.0)
    return abs(pt.strength), pt.rates, pt.zeta_l


@dataclass(frozen=True)
class SpeciesRatio:
    gate: str
    exact: float
    predicted: float  # from the first-order closed forms
    scaling: float  # from the delta >> omega_fs limit


def species_ratio_report(species_a, species_b, delta, B):
    """zeta_L(a)/zeta_L(b) for LS (vertical) and MS (config 1, equal amplitudes)."""
    a = atomic.load_species(species_a)
    b = atomic.load_species(species_b)
    pa = AsymptoticInputs.for_species(a, B, delta)
    pb = AsymptoticInputs.for_species(b, B, delta)
    ls = SpeciesRatio(
        "LS",
        exact_ls_vertical(a, B, delta)[2] / exact_ls_vertical(b, B, delta)[2],
        (ls_force_approx(pa) / ls_gamma_approx(pa)) / (ls_force_approx(pb) / ls_gamma_approx(pb)),
        ls_merit_limit(pa) / ls_merit_limit(pb),
    )
    ms = SpeciesRatio(
        "MS",
        exact_ms_equal(a, B, delta)[2] / exact_ms_equal(b, B, delta)[2],
        ms_merit_approx(pa) / ms_merit_approx(pb),
        ms_merit_limit(pa) / ms_merit_limit(pb),
    )
    return {"LS": ls, "MS": ms}


def ls_force_unexpanded(p):
    """Vertical-polarization force from linear Zeeman denominators, before expansion."""
    d, w, dz = p.delta, p.omega_fs, p.delta_z
    up = 1 / (d + w + 2 / 3 * dz) + 2 / (d + dz / 3)
    down = 1 / (d + w - 2 / 3 * dz) + 2 / (d - dz / 3)
    return p.g0**2 / 3 * (down - up)  # sign as ls_force_approx

