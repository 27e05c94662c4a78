import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from thermoband.errors import ExponentialDivergence
from thermoband.linalg import (
    companion, eigvals, expm, hausdorff, invariants_faddeev, poly_residual, poly_roots,
)

entries = st.floats(-3.0, 3.0, allow_nan=False)
# adds subnormal and tiny values that stress norms and square roots
wide_entries = st.one_of(entries, st.sampled_from([5e-324, 2.2e-313, 1e-307, -1.7e-160, 0.0]))


def test_faddeev_identity():
    np.testing.assert_allclose(invariants_faddeev(np.eye(2)), [1.0, -2.0, 1.0])


def test_faddeev_diagonal():
    np.testing.assert_allclose(invariants_faddeev(np.diag([2.0, 3.0])), [1.0, -5.0, 6.0])


@pytest.mark.parametrize("seed", range(10))
def test_faddeev_random_against_determinant_expansion(seed):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    # det(lambda I - M) sampled at 5 points fixes the quartic exactly
    lam = np.array([-2.0, -1.0, 0.5, 1.5, 3.0])
    vals = [np.linalg.det(l * np.eye(4) - m) for l in lam]
    ref = np.polyfit(lam, vals, 4)
    np.testing.assert_allclose(invariants_faddeev(m), ref, atol=1e-10)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (5, 5), elements=wide_entries),
       arrays(np.float64, (5, 5), elements=wide_entries))
def test_eigvals_are_backward_stable(re, im):
    # forward error is unbounded for defective matrices, so check that every
    # computed eigenvalue makes lambda I - M singular to working precision
    m = re + 1j * im
    scale = max(1.0, np.linalg.norm(m, 2))
    lam = eigvals(m)
    for z in lam:
        smin = np.linalg.svd(z * np.eye(5) - m, compute_uv=False)[-1]
        assert smin < 1e-12 * scale
    assert abs(lam.sum() - np.trace(m)) < 1e-12 * 5 * scale


@pytest.mark.parametrize("seed", range(20))
def test_eigvals_match_lapack_generic(seed):
    # random dense matrices have well-separated eigenvalues
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    assert hausdorff(eigvals(m), np.linalg.eigvals(m)) < 1e-10


def test_eigvals_small_cases():
    assert eigvals(np.array([[2.0]]))[0] == 2.0
    assert eigvals(np.zeros((0, 0))).size == 0
    with pytest.raises(ValueError):
        eigvals(np.zeros((2, 3)))


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (4, 4), elements=st.floats(-20.0, 20.0)),
       arrays(np.float64, (4, 4), elements=st.floats(-20.0, 20.0)))
def test_expm_matches_scipy(re, im):
    m = re + 1j * im
    got, _ = expm(m)
    ref = scipy.linalg.expm(m)
    assert np.linalg.norm(got - ref) <= 1e-11 * max(1.0, np.linalg.norm(ref))


def test_expm_small_norm_needs_no_squaring():
    got, s = expm(np.array([[0.0, 0.1], [-0.1, 0.0]]))
    assert s == 0
    np.testing.assert_allclose(got, scipy.linalg.expm(np.array([[0.0, 0.1], [-0.1, 0.0]])),
                               atol=1e-15)


def test_expm_divergence():
    with pytest.raises(ExponentialDivergence):
        expm(np.array([[1e30, 0.0], [0.0, 0.0]]))
    with pytest.raises(ExponentialDivergence):
        expm(np.array([[np.nan]]))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=5.0, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=6))
def test_poly_roots_recover_roots(roots):
    coeffs = np.poly(roots)
    got = poly_roots(coeffs)
    assert got.shape[0] == len(roots)
    # residual scaled by max(1, |z|)^n: well defined for roots at the origin
    scale = np.polyval(np.abs(coeffs), np.maximum(1.0, np.abs(got)))
    assert np.max(np.abs(np.polyval(coeffs, got)) / scale) < 1e-8


def test_poly_residual_is_backward_error():
    c = np.array([1.0, -3.0, 2.0])
    assert np.all(poly_residual(c, np.array([1.0, 2.0])) == 0.0)
    assert poly_residual(c, np.array([0.0]))[0] == pytest.approx(1.0)


def test_poly_roots_match_numpy():
    c = np.array([1.0, -3.0 + 1j, 2.0, 0.5j, -1.0])
    assert hausdorff(poly_roots(c), np.roots(c)) < 1e-12


def test_companion_spectrum():
    c = np.array([2.0, -6.0, 4.0])
    np.testing.assert_allclose(np.sort(np.linalg.eigvals(companion(c)).real), [1.0, 2.0])


def test_eigvals_subnormal_reflector_pivot():
    # a subnormal complex pivot used to spoil the Householder phase
    tiny = 2.22507386e-313
    m = np.full((5, 5), 2j) + tiny
    m[1, 0] = tiny + 1j * tiny
    scale = np.linalg.norm(m, 2)
    for z in eigvals(m):
        assert np.linalg.svd(z * np.eye(5) - m, compute_uv=False)[-1] < 1e-14 * scale


def test_eigvals_tiny_column_keeps_reflector_unitary():
    # squares of 1e-160 entries are subnormal; unscaled norms lost accuracy
    m = np.full((4, 4), 1.71721651e-160) + 0j
    m[1, 1] += 1j
    assert hausdorff(eigvals(m), np.array([0.0, 0.0, 0.0, 1j])) < 1e-15


def test_poly_roots_with_subnormal_discriminant():
    got = poly_roots(np.poly([4.0, 4.0 + 3.324170307715682e-307j]))
    assert np.all(np.abs(got - 4.0) < 1e-12)
