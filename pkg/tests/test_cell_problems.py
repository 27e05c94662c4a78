import time

import numpy as np
import pytest
from scipy.integrate import simpson

import oracles
from conftest import cell_of, homogeneous_cell, pset_of
from thermoband.cell_problems import (
    FUNCTION_NAMES, NAME_TABLE, CellProblem1D, cell_flux, perturbation_set, reconstruct_microfields,
    solve_cell_problem, solve_order1, solve_order2, solve_order3,
)
from thermoband.errors import DegenerateCoefficient, SolvabilityViolated, UnknownFunction
from thermoband.material import FIG2_GROUPS, DimensionlessGroups, from_ratios
from thermoband.piecewise import PiecewisePoly

GRID = np.linspace(0.0, 1.0, 101, endpoint=False) + 0.5 / 101
CLOSED_FORM_SETS = ("fig2", "fig4", "generic")


def scale_of(fn):
    return max(1.0, float(np.max(np.abs(fn.coeffs1))), float(np.max(np.abs(fn.coeffs2))))


def test_trivial_problem_gives_zero():
    z = PiecewisePoly.zero(0.5, 0.5)
    sol = solve_cell_problem(CellProblem1D(2.0, 2.0, z, z))
    assert sol.allclose(z)


def test_thermal_first_order_slopes():
    cell = from_ratios(DimensionlessGroups(k_ratio=3.0, eta=1.0))
    fn = perturbation_set(cell)["M1_2"]
    assert fn.coeffs1[1] == pytest.approx(0.5, abs=1e-14)
    assert fn.coeffs2[1] == pytest.approx(-0.5, abs=1e-14)


def test_mechanical_first_order_slopes():
    cell = from_ratios(DimensionlessGroups(c_ratio=2.0, eta=1.0))
    fn = perturbation_set(cell)["N1_222"]
    assert fn.coeffs1[1] == pytest.approx(1.0 / 3.0, abs=1e-14)
    assert fn.coeffs2[1] == pytest.approx(-1.0 / 3.0, abs=1e-14)


def test_degenerate_coefficient():
    z = PiecewisePoly.zero(0.5, 0.5)
    with pytest.raises(DegenerateCoefficient):
        solve_cell_problem(CellProblem1D(0.0, 1.0, z, z))


def test_solvability_violation():
    z = PiecewisePoly.zero(0.5, 0.5)
    r = PiecewisePoly.constant(1.0, 1.0, 0.5, 0.5)
    with pytest.raises(SolvabilityViolated):
        solve_cell_problem(CellProblem1D(1.0, 1.0, z, r))


def test_homogeneous_cell_gives_zero_functions():
    ps = perturbation_set(homogeneous_cell())
    for name in FUNCTION_NAMES:
        fn = ps[name]
        assert np.max(np.abs(fn.coeffs1)) < 1e-14 and np.max(np.abs(fn.coeffs2)) < 1e-14, name


def test_order_solvers_compose():
    cell = cell_of("fig4")
    o1 = solve_order1(cell)
    o2 = solve_order2(cell, o1)
    o3 = solve_order3(cell, o1, o2)
    ps = pset_of("fig4")
    for name, fn in {**o1.named, **o2.named, **o3.named}.items():
        assert fn.allclose(ps[name]), name


def test_tau1_zero_kills_relaxed_coupling():
    cell = from_ratios(DimensionlessGroups(c_ratio=2.0, alpha1_group=0.1, alpha2_group=0.1,
                                           tau1_group=0.0, tau0_group=0.5))
    fn = perturbation_set(cell)["Ntilde11_2"]
    assert np.all(fn.coeffs1 == 0.0) and np.all(fn.coeffs2 == 0.0)


def test_first_order_thermal_slope_formula():
    cell = cell_of("fig4")
    a, b = cell.phase1, cell.phase2
    slope = (a.alpha22 - b.alpha22) / (b.c2222 * cell.eta + a.c2222)
    assert pset_of("fig4")["Ntilde1_2"].coeffs1[1] == pytest.approx(slope, rel=1e-13)


@pytest.mark.parametrize("set_name", CLOSED_FORM_SETS)
@pytest.mark.parametrize("name", oracles.FIRST_ORDER_NAMES + oracles.SECOND_ORDER_NAMES)
def test_closed_forms(set_name, name):
    cell = cell_of(set_name)
    fn = pset_of(set_name)[name]
    ref = oracles.evaluate_closed_form(name, cell, GRID)
    np.testing.assert_allclose(np.real(fn(GRID)), ref, rtol=0, atol=1e-12)


def test_normalization_and_continuity(set_name):
    ps = pset_of(set_name)
    for name in FUNCTION_NAMES:
        fn = ps[name]
        s = scale_of(fn)
        assert abs(fn.cell_mean()) < 1e-12 * s, name
        j1, j2 = fn.interface_jump()
        assert max(abs(j1), abs(j2)) < 1e-12 * s, name


def test_flux_continuity(set_name):
    ps = pset_of(set_name)
    for name in FUNCTION_NAMES:
        prob = ps.problem_of(name)
        flux = cell_flux(prob, ps[name])
        j1, j2 = flux.interface_jump()
        assert max(abs(j1), abs(j2)) < 1e-10 * scale_of(flux), name


def test_first_order_flux_interface_weights():
    # C (N' + 1) is continuous for the normal-stress problem
    cell = cell_of("fig4")
    fn = pset_of("fig4")["N1_222"]
    one = PiecewisePoly.constant(1.0, 1.0, *cell.fractions)
    j = (fn.derivative() + one).interface_jump(cell.phase1.c2222, cell.phase2.c2222)
    assert max(abs(v) for v in j) < 1e-14


@pytest.mark.parametrize("set_name", ["fig4", "fig5", "fig2"])
def test_finite_difference_oracle(set_name):
    cell = cell_of(set_name)
    ps = pset_of(set_name)
    f1 = cell.fractions[0]
    for name in FUNCTION_NAMES:
        if NAME_TABLE[name][0] < 2:
            continue
        fn = ps[name]
        prob = ps.problem_of(name)
        nodes, w = oracles.fd_periodic_solve(
            prob.a1, prob.a2, f1,
            lambda z: np.real(prob.flux_source(z)),
            lambda z: np.real(prob.volume_source(z)))
        exact = np.real(fn(nodes))
        norm = np.max(np.abs(exact))
        if norm < 1e-14:
            assert np.max(np.abs(w)) < 1e-12, name
            continue
        assert np.max(np.abs(w - exact)) / norm < 1e-6, name


def test_unknown_function_lists_names():
    with pytest.raises(UnknownFunction) as exc:
        pset_of("fig4")["M9_99"]
    assert "M2_22" in str(exc.value)


def test_microfield_without_perturbations_equals_macro():
    ps = perturbation_set(homogeneous_cell())
    amps = {"U1": 0.3, "U2": 1.0 + 0.2j, "T": -0.4}
    xi, f = reconstruct_microfields(ps, amps, omega=0.7, k2=1.3, epsilon=0.1, n=21)
    for fld, var in (("u1", "U1"), ("u2", "U2"), ("v", "T")):
        np.testing.assert_allclose(f[fld], amps[var], atol=1e-14)


def layer_average(xi, vals, fractions, n):
    f1, f2 = fractions
    tot = simpson(vals[:n], x=xi[:n]) + simpson(vals[n:], x=xi[n:])
    return tot / (f1 + f2)


def test_microfield_upscaling_identity():
    ps = pset_of("generic")
    amps = {"U1": 0.3, "U2": 1.0 + 0.2j, "T": -0.4}
    n = 101
    xi, f = reconstruct_microfields(ps, amps, omega=0.7, k2=1.3, epsilon=0.2, n=n)
    for fld, var in (("u1", "U1"), ("u2", "U2"), ("v", "T")):
        avg = layer_average(xi, f[fld], ps.fractions, n)
        assert abs(avg - amps[var]) < 1e-12, fld


def test_microfield_converges_to_macro():
    ps = pset_of("fig4")
    amps = {"U2": 1.0, "T": 0.5}
    errs = []
    for eps in (0.1, 0.01, 0.001):
        _, f = reconstruct_microfields(ps, amps, omega=0.5, k2=1.0, epsilon=eps, n=11)
        errs.append(np.max(np.abs(f["u2"] - 1.0)))
    assert errs[1] < 0.2 * errs[0] and errs[2] < 0.2 * errs[1]


def test_full_set_is_fast():
    t0 = time.perf_counter()
    perturbation_set(from_ratios(FIG2_GROUPS))
    assert time.perf_counter() - t0 < 5.0
