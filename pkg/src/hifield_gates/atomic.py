"""Atomic structure of an alkali-like ion: S1/2 ground doublet and the P1/2, P3/2
excited manifolds in a magnetic field.

Frequencies are angular (rad/s) throughout. Level energies are measured from the
S1/2 mJ=-1/2 state (the qubit |down>).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import constants as sc

TWOPI = 2 * np.pi
HBAR = sc.hbar
MU_B = sc.physical_constants["Bohr magneton"][0]
AMU = sc.atomic_mass

B_MAX = 4.5  # tesla; pure-J couplings stop being a good approximation above this

S12, P12, P32 = "S1/2", "P1/2", "P3/2"
UP, DOWN = 0.5, -0.5


class UnknownSpeciesError(KeyError):
    pass


class FieldRangeError(ValueError):
    pass


@dataclass(frozen=True)
class IonSpecies:
    name: str
    mass: float  # kg
    omega0: float  # S1/2 - P3/2 zero-field splitting, rad/s
    omega_fs: float  # P3/2 - P1/2 splitting, rad/s
    gamma: float  # P-state decay rate, rad/s
    wavelength: float  # m

    def __post_init__(self):
        for f in ("mass", "omega0", "omega_fs", "gamma", "wavelength"):
            if not getattr(self, f) > 0:
                raise ValueError(f"{f} must be positive")
        if self.omega_fs >= self.omega0:
            raise ValueError("fine-structure splitting must be below the optical frequency")

    @property
    def mu(self):
        """Cycling-transition dipole moment (C m) from the decay rate."""
        return math.sqrt(3 * np.pi * sc.epsilon_0 * HBAR * sc.c**3 * self.gamma / self.omega0**3)

    @property
    def k(self):
        return TWOPI / self.wavelength


def make_species(name, mass_amu, wavelength_nm, fs_split_ghz, gamma_mhz):
    lam = float(wavelength_nm) * 1e-9
    return IonSpecies(
        name=str(name),
        mass=float(mass_amu) * AMU,
        omega0=TWOPI * sc.c / lam,
        omega_fs=TWOPI * float(fs_split_ghz) * 1e9,
        gamma=TWOPI * float(gamma_mhz) * 1e6,
        wavelength=lam,
    )


# decay rates and fine structure as used throughout the gate analysis; the Be+ width
# is smaller than most literature values on purpose (see README)
_REGISTRY = {
    "be9": dict(name="be9", mass_amu=9.0121822, wavelength_nm=313.0, fs_split_ghz=197.0, gamma_mhz=17.0),
    "mg24": dict(name="mg24", mass_amu=23.9850417, wavelength_nm=279.6, fs_split_ghz=2745.0, gamma_mhz=41.0),
}


def registered_species():
    return sorted(_REGISTRY)


def read_species_file(path):
    """Parse a key=value constants file ('#' starts a comment)."""
    vals = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}: expected key=value, got {raw.strip()!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            vals[key] = val
    need = ("name", "mass_amu", "wavelength_nm", "fs_split_ghz", "gamma_mhz")
    missing = [k for k in need if k not in vals]
    if missing:
        raise ValueError(f"{path}: missing keys {missing}")
    return make_species(**{k: vals[k] for k in need})


def load_species(name):
    """Look up a built-in species, or read one from a constants file path."""
    if isinstance(name, IonSpecies):
        return name
    key = str(name).lower()
    if key in _REGISTRY:
        return make_species(**_REGISTRY[key])
    if os.path.isfile(str(name)):
        return read_species_file(name)
    raise UnknownSpeciesError(f"unknown species {name!r}; registered: {', '.join(registered_species())}")


# ---------------------------------------------------------------- angular momentum


def _half(x):
    f = Fraction(x).limit_denominator(2)
    if abs(float(f) - float(x)) > 1e-9:
        raise ValueError(f"{x} is not a half-integer")
    return f


@lru_cache(maxsize=None)
def _cg(j1, m1, j2, m2, j, m):
    if m1 + m2 != m:
        return 0.0
    if not (abs(j1 - j2) <= j <= j1 + j2):
        return 0.0
    if abs(m1) > j1 or abs(m2) > j2 or abs(m) > j:
        return 0.0
    for v in (j1 + j2 - j, j1 + m1, j2 + m2, j + m, j1 + j2 + j):
        if v.denominator != 1:
            return 0.0
    fac = math.factorial

    def F(v):
        return fac(int(v))

    pre = (2 * j + 1) * F(j1 + j2 - j) * F(j1 - j2 + j) * F(-j1 + j2 + j) / F(j1 + j2 + j + 1)
    pre *= F(j1 + m1) * F(j1 - m1) * F(j2 + m2) * F(j2 - m2) * F(j + m) * F(j - m)
    s = 0.0
    for k in range(0, int(j1 + j2 - j) + 1):
        terms = (j1 + j2 - j - k, j1 - m1 - k, j2 + m2 - k, j - j2 + m1 + k, j - j1 - m2 + k)
        if min(terms) < 0:
            continue
        den = F(k)
        for t in terms:
            den *= F(t)
        s += (-1) ** k / den
    return math.sqrt(pre) * s


def clebsch_gordan(j1, m1, j2, m2, j, m):
    """<j1 m1; j2 m2 | j m> in the Condon-Shortley convention (Racah formula)."""
    return _cg(_half(j1), _half(m1), _half(j2), _half(m2), _half(j), _half(m))


# ---------------------------------------------------------------- levels


@dataclass(frozen=True)
class Level:
    manifold: str
    J: float
    mj: float
    omega: float  # rad/s above S1/2 mJ=-1/2


@dataclass(frozen=True)
class LevelScheme:
    B: float
    delta_z: float
    qubit_splitting: float
    levels: tuple

    def p_levels(self):
        return [lv for lv in self.levels if lv.manifold != S12]

    def omega(self, J, mj):
        for lv in self.levels:
            if lv.manifold != S12 and lv.J == J and lv.mj == mj:
                return lv.omega
        raise KeyError((J, mj))

    def ground_offset(self, i):
        """Energy of qubit state i (mJ=+-1/2) above |down>."""
        return self.qubit_splitting if i > 0 else 0.0


def _zeeman_block(m, dz, omega_fs):
    """P-manifold Hamiltonian in the |J, m> basis (J = 3/2, 1/2), zero at P3/2."""
    Js = [j for j in (1.5, 0.5) if abs(m) <= j]
    H = np.zeros((len(Js), len(Js)))
    for a, Ja in enumerate(Js):
        for b, Jb in enumerate(Js):
            # <Ja m| Lz + 2 Sz |Jb m> from the uncoupled |ml, ms> expansion
            v = 0.0
            for ms in (0.5, -0.5):
                ml = m - ms
                if abs(ml) > 1:
                    continue
                v += clebsch_gordan(1, ml, 0.5, ms, Ja, m) * clebsch_gordan(1, ml, 0.5, ms, Jb, m) * (ml + 2 * ms)
            H[a, b] = dz * v
        if Ja == 0.5:
            H[a, a] -= omega_fs
    return Js, H


def level_energies(species, B):
    """Ground doublet (g=2) plus exactly diagonalised P-manifold energies."""
    B = float(B)
    if not 0.0 <= B <= B_MAX:
        raise FieldRangeError(
            f"B = {B} T outside [0, {B_MAX}] T; pure-J couplings are only a good approximation in this range"
        )
    dz = MU_B * B / HBAR
    split = 2 * dz
    levels = [Level(S12, 0.5, -0.5, 0.0), Level(S12, 0.5, 0.5, split)]
    for m in (-1.5, -0.5, 0.5, 1.5):
        Js, H = _zeeman_block(m, dz, species.omega_fs)
        if len(Js) == 1:
            E = [H[0, 0]]
            labels = Js
        else:
            w, vec = np.linalg.eigh(H)
            # assign each eigenvalue to the J it connects to adiabatically from B=0
            order = np.argmax(np.abs(vec), axis=0)
            labels = [Js[o] for o in order]
            E = list(w)
            if labels[0] == labels[1]:
                labels = [0.5, 1.5]  # eigh sorts ascending, P1/2 lies below
        for Jl, e in zip(labels, E):
            levels.append(Level(P32 if Jl == 1.5 else P12, Jl, m, species.omega0 + e + dz))
    return LevelScheme(B=B, delta_z=dz, qubit_splitting=split, levels=tuple(levels))


# ---------------------------------------------------------------- dipole couplings


def coupling(i, J, mj, q):
    """<J mj| d_q |S1/2 i> / mu for spherical component q (raises mJ by q).

    Pure-J states; d acts on the orbital part only, so the amplitude is a single
    Clebsch-Gordan coefficient. Forbidden transitions give exactly 0.
    """
    if q not in (-1, 0, 1) or mj != i + q:
        return 0.0
    return clebsch_gordan(1, q, 0.5, i, J, mj)


def cartesian_coupling(i, J, mj, pol):
    """<J mj| d.e |S1/2 i> / mu for linear polarization e = pz*z + px*x.

    Horizontal light is taken as equal, in-phase sigma+ and sigma- parts
    (weights px/sqrt2 each), the same decomposition used for the scattering
    amplitudes. Relative to the strict spherical basis this flips the sign of
    the sigma+ part, which only matters for interference between two beams and
    amounts to relabelling phi -> -phi on one of them.
    """
    pz, px = pol
    return pz * coupling(i, J, mj, 0) + px * (coupling(i, J, mj, -1) + coupling(i, J, mj, 1)) / np.sqrt(2)


def coupling_weights(i):
    """Nonzero squared couplings from ground state i: {(J, mj, q): weight}."""
    out = {}
    for J in (1.5, 0.5):
        for q in (-1, 0, 1):
            mj = i + q
            if abs(mj) <= J:
                w = coupling(i, J, mj, q) ** 2
                if w > 0:
                    out[(J, mj, q)] = w
    return out
