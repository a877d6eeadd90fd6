import math

import pytest

from hifield_gates import atomic, design, operating
from hifield_gates.sweeps import GHZ, GateContext

BE = atomic.load_species("be9")
S = atomic.level_energies(BE, operating.FIELD)


def test_deviation():
    assert operating.deviation(3.0, 3.0) == 0
    assert operating.deviation(3.3, 3.0, relative=True) == pytest.approx(0.1)
    assert math.isnan(operating.deviation(math.nan, 3.0))


def test_reference_against_itself_has_no_deviation():
    for ref in operating.REFERENCE_POINTS:
        for a, b in ((ref.detuning, ref.detuning), (ref.zeta_l, ref.zeta_l)):
            assert operating.deviation(a, b) == 0
            assert operating.deviation(a, b, relative=True) == 0


def test_reference_evaluation_keeps_reference_coordinates():
    for ref in operating.REFERENCE_POINTS:
        pt = operating.reference_evaluation(ref, BE)
        assert pt.detuning / GHZ == pytest.approx(ref.detuning, abs=1e-12)
        assert pt.gate == ref.gate
        if ref.gate == "LS":
            assert math.degrees(pt.angles["phi_p"]) == pytest.approx(ref.phi_1)
        if ref.gate == "MS2":
            assert math.degrees(pt.angles["phi_sb"]) == pytest.approx(ref.phi_1)
            assert math.degrees(pt.angles["phi_c"]) == pytest.approx(ref.phi_2)


def test_searches_return_null_points():
    ls = operating.ls_null_best(S, BE, (250.0, 320.0), 1.0)
    c = design.stark.stark_coefficients(S, BE, ls.detuning)
    assert abs(ls.residual_acss) < 1e-9 * abs(c.da)
    ms = operating.ms2_best(S, BE, (-150.0, -130.0), 1.0)
    assert ms.gate == "MS2" and ms.angles["phi_sb"] > 0
    assert operating.ms1_best(S, BE).detuning / GHZ == pytest.approx(-41.68, abs=0.01)


def test_empty_search_returns_none():
    # red of the whole P manifold no per-beam ACSS null exists
    assert operating.ls_null_best(S, BE, (-2000.0, -1900.0), 10.0) is None


def test_table2_layout():
    t = operating.table2(context=GateContext(), step=1.0)
    assert t.column("point") == ["1", "2", "3", "4", "5"]
    assert t.column("gate") == ["LS", "LS", "MS1", "MS2", "MS2"]
    for name, unit in t.columns:
        assert unit
    assert all(p > 0 for p in t.column("power_at_ref"))
    assert t.metadata["field_tesla"] == operating.FIELD
