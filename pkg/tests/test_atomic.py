import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Rational
from sympy.physics.quantum.cg import CG

from hifield_gates import atomic
from hifield_gates.atomic import DOWN, P12, P32, S12, UP

GHZ = 2 * math.pi * 1e9


def test_builtin_species_constants(be9, mg24):
    assert be9.omega_fs / GHZ == pytest.approx(197.0)
    assert be9.gamma / (2 * math.pi * 1e6) == pytest.approx(17.0)
    assert be9.wavelength == pytest.approx(313e-9)
    assert mg24.omega_fs / GHZ == pytest.approx(2745.0)
    assert mg24.gamma / (2 * math.pi * 1e6) == pytest.approx(41.0)


def test_dipole_from_decay_rate(be9):
    # inverse of the spontaneous-emission rate formula
    c, eps0, hbar = 299792458.0, 8.8541878128e-12, 1.054571817e-34
    gamma = be9.mu**2 * be9.omega0**3 / (3 * math.pi * eps0 * hbar * c**3)
    assert gamma == pytest.approx(be9.gamma, rel=1e-6)


def test_unknown_species_lists_registered():
    with pytest.raises(atomic.UnknownSpeciesError) as e:
        atomic.load_species("ca40")
    assert "be9" in str(e.value) and "mg24" in str(e.value)


def test_species_file(tmp_path):
    p = tmp_path / "ca.txt"
    p.write_text("# calcium\nname = ca40\nmass_amu = 39.96\nwavelength_nm = 393.4\nfs_split_ghz = 6680\ngamma_mhz = 21.6\n")
    sp = atomic.load_species(str(p))
    assert sp.name == "ca40"
    assert sp.omega_fs / GHZ == pytest.approx(6680)
    q = tmp_path / "bad.txt"
    q.write_text("name = x\n")
    with pytest.raises(ValueError):
        atomic.load_species(str(q))


def test_species_field_validation():
    with pytest.raises(ValueError):
        atomic.make_species("x", -1, 300, 100, 10)
    with pytest.raises(ValueError):
        atomic.make_species("x", 1, 300, 2e6, 10)  # fine structure above optical frequency


# ---------------------------------------------------------------- Clebsch-Gordan against sympy

half = st.integers(0, 6).map(lambda n: n / 2)


@settings(max_examples=200, deadline=None)
@given(j1=half, j2=half, data=st.data())
def test_clebsch_gordan_matches_sympy(j1, j2, data):
    j = data.draw(st.sampled_from([abs(j1 - j2) + k for k in range(int(j1 + j2 - abs(j1 - j2)) + 1)]))
    m1 = data.draw(st.sampled_from([-j1 + k for k in range(int(2 * j1) + 1)]))
    m2 = data.draw(st.sampled_from([-j2 + k for k in range(int(2 * j2) + 1)]))
    m = m1 + m2
    R = lambda x: Rational(int(round(2 * x)), 2)
    ref = float(CG(R(j1), R(m1), R(j2), R(m2), R(j), R(m)).doit()) if abs(m) <= j else 0.0
    assert atomic.clebsch_gordan(j1, m1, j2, m2, j, m) == pytest.approx(ref, abs=1e-12)


def test_clebsch_gordan_selection_rule():
    assert atomic.clebsch_gordan(1, 1, 0.5, 0.5, 1.5, 0.5) == 0.0


# ---------------------------------------------------------------- couplings


def test_coupling_examples():
    assert atomic.coupling(UP, 1.5, 1.5, 1) ** 2 == pytest.approx(1.0)
    assert atomic.coupling(UP, 1.5, 0.5, 0) ** 2 == pytest.approx(2 / 3)
    assert atomic.coupling(UP, 0.5, 0.5, 0) ** 2 == pytest.approx(1 / 3)


def test_forbidden_coupling_is_exactly_zero():
    assert atomic.coupling(UP, 1.5, -1.5, -1) == 0.0  # Delta m = -2
    assert atomic.coupling(UP, 0.5, 1.5, 1) == 0.0  # |m| > J
    assert atomic.coupling(DOWN, 1.5, 0.5, 0) == 0.0  # wrong q


@pytest.mark.parametrize("i", [UP, DOWN])
def test_coupling_weight_table(i):
    w = atomic.coupling_weights(i)
    assert sorted(round(v, 12) for v in w.values()) == sorted(round(v, 12) for v in (1, 2 / 3, 1 / 3, 1 / 3, 2 / 3))
    # cycling sigma = 1, P3/2 pi = 2/3, P3/2 weak sigma = 1/3, P1/2 pi = 1/3, P1/2 sigma = 2/3
    s = 1 if i > 0 else -1
    assert w[(1.5, i + s, s)] == pytest.approx(1)
    assert w[(1.5, i, 0)] == pytest.approx(2 / 3)
    assert w[(1.5, i - s, -s)] == pytest.approx(1 / 3)
    assert w[(0.5, i, 0)] == pytest.approx(1 / 3)
    assert w[(0.5, i - s, -s)] == pytest.approx(2 / 3)
    assert sum(w.values()) == pytest.approx(3.0)


@pytest.mark.parametrize("J", [0.5, 1.5])
@pytest.mark.parametrize("q", [-1, 0, 1])
def test_coupling_mirror_symmetry(J, q):
    m = UP + q
    if abs(m) > J:
        return
    assert atomic.coupling(UP, J, m, q) ** 2 == pytest.approx(atomic.coupling(DOWN, J, -m, -q) ** 2)


# ---------------------------------------------------------------- levels


def test_qubit_splitting_at_446(be_446):
    assert be_446.qubit_splitting / GHZ == pytest.approx(124.0, abs=1.0)
    assert be_446.qubit_splitting == pytest.approx(2 * be_446.delta_z)


def test_down_state_is_zero(be_446):
    down = [lv for lv in be_446.levels if lv.manifold == S12 and lv.mj == -0.5]
    assert down[0].omega == 0.0
    assert len(be_446.levels) == 8


def test_zero_field_degeneracy(be9):
    s = atomic.level_energies(be9, 0.0)
    p32 = {lv.omega for lv in s.levels if lv.manifold == P32}
    p12 = {lv.omega for lv in s.levels if lv.manifold == P12}
    assert p32 == {be9.omega0}
    assert len(p12) == 1 and p12.pop() == pytest.approx(be9.omega0 - be9.omega_fs, rel=1e-15)


@settings(max_examples=25, deadline=None)
@given(B=st.floats(0.0, 4.5))
def test_stretched_states_shift_linearly(B):
    sp = atomic.load_species("be9")
    s = atomic.level_energies(sp, B)
    # offsets from the zero-field P3/2 energy, measured from |down> at -delta_z
    for m, sign in ((1.5, 1), (-1.5, -1)):
        off = s.omega(1.5, m) - s.delta_z - sp.omega0
        assert off == pytest.approx(sign * 2 * s.delta_z, abs=10.0)  # rad/s; omega0 ~ 6e15 limits precision


@settings(max_examples=25, deadline=None)
@given(B=st.floats(0.01, 4.5))
def test_levels_monotone_in_mj(B):
    s = atomic.level_energies(atomic.load_species("be9"), B)
    for man in (P32, P12, S12):
        lv = sorted((l for l in s.levels if l.manifold == man), key=lambda l: l.mj)
        assert all(a.omega < b.omega for a, b in zip(lv, lv[1:]))


def test_second_order_perturbation_at_half_tesla(be9):
    B = 0.5
    s = atomic.level_energies(be9, B)
    dz, w = s.delta_z, be9.omega_fs
    for m in (-0.5, 0.5):
        # linear (g_J) term plus second-order repulsion |<3/2 m|Lz+2Sz|1/2 m>|^2 = 2/9 dz^2
        lin32 = 4 / 3 * m * dz
        lin12 = 2 / 3 * m * dz
        shift = 2 / 9 * dz**2 / w
        e32 = s.omega(1.5, m) - dz - be9.omega0
        e12 = s.omega(0.5, m) - dz - (be9.omega0 - w)
        assert e32 == pytest.approx(lin32 + shift, rel=5e-3)
        assert e12 == pytest.approx(lin12 - shift, rel=5e-3)


def test_mixing_correction_bounded_at_446(be9, be_446):
    dz = be_446.delta_z
    for J, base, g in ((1.5, be9.omega0, 4 / 3), (0.5, be9.omega0 - be9.omega_fs, 2 / 3)):
        for m in (-0.5, 0.5):
            lin = base + g * m * dz + dz
            dev = abs(be_446.omega(J, m) - lin)
            assert 0 < dev < 0.1 * dz  # ~7% of mu_B B / hbar at 4.46 T


def test_field_range_error(be9):
    with pytest.raises(atomic.FieldRangeError):
        atomic.level_energies(be9, 4.6)
    with pytest.raises(atomic.FieldRangeError):
        atomic.level_energies(be9, -0.1)


def test_level_energies_at_446_frozen(be9, be_446):
    # regression values from the diagonalised model (GHz, relative to omega0, measured from |down>)
    ref = {(1.5, -1.5): -62.42, (0.5, -0.5): -160.17, (1.5, -0.5): 25.59, (0.5, 0.5): -117.67, (1.5, 0.5): 107.94,
           (1.5, 1.5): 187.27}
    for (J, m), v in ref.items():
        assert (be_446.omega(J, m) - be9.omega0) / GHZ == pytest.approx(v, abs=0.01)
