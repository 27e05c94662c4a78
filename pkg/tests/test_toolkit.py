import math

import numpy as np
import pytest

from conftest import cell_of, homogeneous_cell
from thermoband.errors import ExponentialDivergence
from thermoband.floquet import fold
from thermoband.material import DimensionlessGroups, from_ratios
from thermoband.toolkit import (
    JUMP_TOL, SpectrumEngine, _distance, acoustic_branch_error, compare, sweep,
    thread_count, zone_copies,
)


@pytest.fixture(scope="module")
def fig4_fb():
    cell = cell_of("fig4")
    engine = SpectrumEngine(cell)
    return {b: sweep(cell, "fb", (0.01, 3.0), 200, b, engine=engine, threads=1)
            for b in ("shear", "coupled")}


def test_homogeneous_shear_is_a_straight_line():
    cell = from_ratios(DimensionlessGroups())
    c = math.sqrt(cell.phase1.c1212 / cell.phase1.rho)
    for method in ("hom0", "fb"):
        cs = sweep(cell, method, (0.01, 2.0), 40, "shear", threads=1)
        assert len(cs.branches) == 2
        for br in cs.branches:
            w, k = br.arrays()
            if k.real[-1] > 0:
                np.testing.assert_allclose(k.real, w / c, rtol=1e-10)
                np.testing.assert_allclose(k.imag, 0.0, atol=1e-10)


def test_fig4_branch_counts(fig4_fb):
    assert len(fig4_fb["shear"].branches) == 2
    assert len(fig4_fb["coupled"].branches) == 4


def test_branch_continuity(fig4_fb):
    for cs in fig4_fb.values():
        for br in cs.branches:
            k = np.asarray(br.k_bar)
            steps = np.abs(fold(np.diff(k))) / np.maximum(1.0, np.abs(k[:-1]))
            assert np.all(steps <= JUMP_TOL)


def test_coarse_sweep_is_subset(fig4_fb):
    coarse = sweep(cell_of("fig4"), "fb", (0.01, 3.0), 2, "coupled", threads=1)
    fine = fig4_fb["coupled"]
    for w in (0.01, 3.0):
        np.testing.assert_allclose(np.sort_complex(coarse.roots_at(w)),
                                   np.sort_complex(fine.roots_at(w)), rtol=0, atol=1e-12)


def test_threaded_sweep_is_identical():
    cell = cell_of("fig8_tau1")
    a = sweep(cell, "hom2", (0.01, 2.0), 30, "coupled", threads=1)
    b = sweep(cell, "hom2", (0.01, 2.0), 30, "coupled", threads=4)
    assert [s.omega_bar for s in a.samples] == [s.omega_bar for s in b.samples]
    for sa, sb in zip(a.samples, b.samples):
        assert np.array_equal(sa.roots, sb.roots)


def test_compare_with_itself(fig4_fb):
    rep = compare(fig4_fb["coupled"], fig4_fb["coupled"], (0.0, 3.0))
    assert rep.max_error == 0.0 and not rep.warnings
    assert len(rep.errors) == 4


def test_fig6_zeroth_order_long_wave_error():
    cell = cell_of("fig6")
    engine = SpectrumEngine(cell)
    fb = sweep(cell, "fb", (0.01, 0.3), 30, "shear", engine=engine, threads=1)
    hom0 = sweep(cell, "hom0", (0.01, 0.3), 30, "shear", engine=engine, threads=1)
    rep = compare(fb, hom0, (0.0, 0.3))
    assert rep.max_error < 0.02


def test_second_order_equals_zeroth_for_homogeneous_cell():
    cell = homogeneous_cell()
    engine = SpectrumEngine(cell)
    for block in ("shear", "coupled"):
        h0 = sweep(cell, "hom0", (0.01, 2.0), 20, block, engine=engine, threads=1)
        h2 = sweep(cell, "hom2", (0.01, 2.0), 20, block, engine=engine, threads=1)
        assert compare(h0, h2, (0.0, 2.0)).max_error < 1e-10


@pytest.mark.parametrize("block", ["shear", "coupled"])
def test_hierarchy_on_acoustic_branch(set_name, block):
    cell = cell_of(set_name)
    engine = SpectrumEngine(cell)
    omegas = np.linspace(0.01, 0.3, 10)
    e0 = acoustic_branch_error(cell, "hom0", omegas, block, engine)
    e2 = acoustic_branch_error(cell, "hom2", omegas, block, engine)
    assert np.all(e2 <= e0)


def test_branch_count_mismatch_is_reported(fig4_fb):
    rep = compare(fig4_fb["shear"].__class__("fb", "shear", fig4_fb["shear"].branches[:1],
                                             fig4_fb["shear"].samples),
                  fig4_fb["shear"], (0.0, 3.0))
    assert rep.warnings and "branches" in rep.warnings[0]
    with pytest.raises(ValueError):
        compare(fig4_fb["shear"], fig4_fb["coupled"], (0.0, 1.0))


def test_zone_copies(fig4_fb):
    copies = zone_copies(fig4_fb["shear"], 1)
    assert sorted({m for m, _ in copies}) == [-1, 1]
    m, br = copies[0]
    orig = fig4_fb["shear"].branches[br.branch_id]
    np.testing.assert_allclose(np.asarray(br.k_bar) - np.asarray(orig.k_bar), 2 * math.pi * m)
    hom = sweep(cell_of("fig4"), "hom0", (0.01, 1.0), 5, "shear", threads=1)
    assert zone_copies(hom, 2) == []


def test_fold_distance_for_floquet_only():
    a, b = np.array([math.pi - 0.01]), np.array([-math.pi + 0.01])
    assert _distance("fb", a, b)[0, 0] == pytest.approx(0.02)
    assert _distance("hom0", a, b)[0, 0] == pytest.approx(2 * math.pi - 0.02)


def test_solver_errors_are_annotated():
    engine = SpectrumEngine(cell_of("fig4"))
    with pytest.raises(ExponentialDivergence, match="omega_bar=1e\\+20"):
        engine.sample("fb", "coupled", 1e20)


def test_sweep_argument_checks():
    cell = cell_of("fig4")
    with pytest.raises(ValueError):
        sweep(cell, "fb", (0.0, 1.0), 1)
    with pytest.raises(ValueError):
        sweep(cell, "bogus", (0.0, 1.0), 5)
    with pytest.raises(ValueError):
        sweep(cell, "fb", (1.0, 0.5), 5)


def test_thread_count_env(monkeypatch):
    monkeypatch.setenv("THERMOBAND_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("THERMOBAND_THREADS", "zero")
    assert thread_count() == 1


def test_report_table_lists_branches(fig4_fb):
    text = compare(fig4_fb["shear"], fig4_fb["shear"], (0.0, 3.0)).table()
    assert text.splitlines()[0].startswith("fb vs fb (shear)")
    assert len(text.splitlines()) == 2 + 2
