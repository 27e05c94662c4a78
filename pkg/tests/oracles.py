"""Independent reference computations used by the test-suite.

Nothing here calls the library's solvers: closed-form layered-cell
solutions, a conservative finite-difference periodic solver, averaging
formulas and the bilayer shear dispersion relation are written out
directly.
"""

import math

import numpy as np
from scipy.linalg import solve_banded


# ---------------------------------------------------------------- closed forms
# Centered local coordinate x in each layer; layer thicknesses eta/(1+eta)
# and 1/(1+eta) for a unit period.


def _lin(d1, d2, eta):
    """Layerwise slopes of the first-order function for moduli ``d1, d2``."""
    den = d2 * eta + d1
    return -(d1 - d2) / den, eta * (d1 - d2) / den


def first_order(name, cell):
    """Slopes ``(k1, k2)``; the function is ``k_i * x`` in layer ``i``."""
    a, b = cell.phase1, cell.phase2
    eta = cell.eta
    if name == "N1_222":
        return _lin(a.c2222, b.c2222, eta)
    if name == "N1_211":
        den = b.c2222 * eta + a.c2222
        return -(a.c1122 - b.c1122) / den, eta * (a.c1122 - b.c1122) / den
    if name in ("N1_112", "N1_121"):
        return _lin(a.c1212, b.c1212, eta)
    if name == "M1_2":
        return _lin(a.k22, b.k22, eta)
    if name == "Ntilde1_2":
        den = b.c2222 * eta + a.c2222
        return (a.alpha22 - b.alpha22) / den, -eta * (a.alpha22 - b.alpha22) / den
    if name == "Ntilde11_2":
        den = b.c2222 * eta + a.c2222
        return (a.alpha1_22 - b.alpha1_22) / den, -eta * (a.alpha1_22 - b.alpha1_22) / den
    raise KeyError(name)


def _quad_same_modulus(d1, d2, eta):
    """Second-order quadratic for an equation with a single modulus family."""
    a2 = (d1 - d2) / (2.0 * d2 * eta + 2.0 * d1)
    a0 = -(d1 - d2) * eta * (eta + 2.0) / (24.0 * (d2 * eta + d1) * (eta + 1.0) ** 2)
    return (a2, a0), (-eta * a2, -(2.0 * eta + 1.0) / (eta + 2.0) * a0)


def second_order(name, cell):
    """``((A2, A0), (B2, B0))``: ``A2 x^2 + A0`` in layer 1, ``B2 x^2 + B0`` in layer 2."""
    a, b = cell.phase1, cell.phase2
    eta = cell.eta
    if name == "N2_2222":
        return _quad_same_modulus(a.c2222, b.c2222, eta)
    if name == "N2_1122":
        return _quad_same_modulus(a.c1212, b.c1212, eta)
    if name == "M2_22":
        # denominator read as (eta K2 + K1)
        return _quad_same_modulus(a.k22, b.k22, eta)
    if name == "N2_2211":
        g1, g2 = a.c1212, b.c1212
        c1, c2 = a.c2222, b.c2222
        l1, l2 = a.c1122, b.c1122
        a2 = 0.5 * l1 * (g1 - g2) / ((g2 * eta + g1) * c1)
        a0 = -(g1 - g2) * eta * (l1 * eta ** 2 * c2 + 3 * l1 * eta * c2 + 2 * l2 * c1) / (
            24.0 * (eta + 1) ** 3 * (g2 * eta + g1) * c2 * c1)
        b2 = -eta * l2 * c1 / (c2 * l1) * a2 if l1 != 0.0 else (
            -0.5 * eta * l2 * (g1 - g2) / ((g2 * eta + g1) * c2))
        b0 = (2 * l1 * eta ** 2 * c2 + 3 * eta * l2 * c1 + l2 * c1) * (g1 - g2) * eta / (
            24.0 * (eta + 1) ** 3 * (g2 * eta + g1) * c2 * c1)
        return (a2, a0), (b2, b0)
    if name in ("N22_11", "N22_22"):
        d1, d2 = (a.c1212, b.c1212) if name == "N22_11" else (a.c2222, b.c2222)
        r1, r2 = a.rho, b.rho
        a2 = 0.5 * (r1 - r2) / ((eta + 1) * d1)
        a0 = -(r1 - r2) * eta * (d2 * eta ** 2 + 3 * d2 * eta + 2 * d1) / (
            24.0 * d2 * (eta + 1) ** 4 * d1)
        b2 = -0.5 * (r1 - r2) * eta / ((eta + 1) * d2)
        b0 = (r1 - r2) * eta * (2 * d2 * eta ** 2 + 3 * d1 * eta + d1) / (
            24.0 * d2 * (eta + 1) ** 4 * d1)
        return (a2, a0), (b2, b0)
    raise KeyError(name)


FIRST_ORDER_NAMES = ("N1_222", "N1_211", "N1_112", "N1_121", "M1_2", "Ntilde1_2", "Ntilde11_2")
SECOND_ORDER_NAMES = ("N2_2222", "N2_1122", "N2_2211", "M2_22", "N22_11", "N22_22")


def evaluate_closed_form(name, cell, xi):
    """Closed-form value on the global cell coordinate ``xi`` in ``[0, 1)``."""
    f1 = cell.eta / (1.0 + cell.eta)
    f2 = 1.0 - f1
    xi = np.asarray(xi, dtype=float)
    in1 = xi < f1
    x1 = xi - 0.5 * f1
    x2 = xi - f1 - 0.5 * f2
    if name in FIRST_ORDER_NAMES:
        k1, k2 = first_order(name, cell)
        return np.where(in1, k1 * x1, k2 * x2)
    (a2, a0), (b2, b0) = second_order(name, cell)
    return np.where(in1, a2 * x1 ** 2 + a0, b2 * x2 ** 2 + b0)


# ----------------------------------------------------------- finite differences


def _gauss_integral(fn, lo, hi, npts=6):
    x, w = np.polynomial.legendre.leggauss(npts)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    pts = mid[:, None] + half[:, None] * x[None, :]
    return half * (fn(pts) * w[None, :]).sum(axis=1)


def fd_periodic_solve(a1, a2, f1, flux_source, volume_source, n=10_000):
    """Zero-mean periodic solution of ``(a w' + b)' = r`` by finite volumes.

    Parameters
    ----------
    a1, a2 : float
        Layer coefficients; layer 1 is ``[0, f1)`` and layer 2 ``[f1, 1)``.
    flux_source, volume_source : callable
        ``b`` and ``r`` evaluated on the global coordinate. They are only
        sampled strictly inside layers.
    n : int
        Number of cells; each layer gets a uniform sub-grid and both
        interfaces are grid nodes.

    Returns
    -------
    nodes, values : ndarray
    """
    f2 = 1.0 - f1
    n1 = max(2, int(round(n * f1)))
    n2 = max(2, n - n1)
    nodes = np.concatenate([np.arange(n1) * (f1 / n1), f1 + np.arange(n2) * (f2 / n2)])
    right = np.append(nodes[1:], 1.0)
    h = right - nodes
    coef = np.where(np.arange(n1 + n2) < n1, a1, a2)
    # cell-averaged b over [x_i, x_{i+1}] and exact dual-cell integrals of r
    bbar = _gauss_integral(flux_source, nodes, right) / h
    mids = 0.5 * (nodes + right)
    r_right = _gauss_integral(volume_source, nodes, mids)
    r_left = _gauss_integral(volume_source, mids, right)
    rhs = r_right + np.roll(r_left, 1)
    # flux on edge i: F_i = coef_i (w_{i+1} - w_i)/h_i + bbar_i
    # node j: F_j - F_{j-1} = rhs_j
    g = coef / h
    m = nodes.size
    rhs_j = rhs - (bbar - np.roll(bbar, 1))
    # pin w_0 = 0 and drop equation 0 (redundant since the sources balance)
    diag = -(g + np.roll(g, 1))[1:]
    upper = g[1:-1]
    lower = g[1:-1]
    ab = np.zeros((3, m - 1))
    ab[0, 1:] = upper
    ab[1, :] = diag
    ab[2, :-1] = lower
    w_inner = solve_banded((1, 1), ab, rhs_j[1:])
    w = np.concatenate([[0.0], w_inner])
    # periodic trapezoid mean
    w_next = np.roll(w, -1)
    mean = float(np.sum(0.5 * (w + w_next) * h))
    return nodes, w - mean


# ------------------------------------------------------------------ averages


def harmonic_mean(v1, v2, f1, f2):
    return 1.0 / (f1 / v1 + f2 / v2)


def arithmetic_mean(v1, v2, f1, f2):
    return f1 * v1 + f2 * v2


# -------------------------------------------------------------- wave oracles


def rytov_residual(cell, omega, kbar):
    """``cos(k eps) - rhs(omega)`` for the bilayer shear dispersion relation."""
    a, b = cell.phase1, cell.phase2
    w1 = omega * cell.s1 * math.sqrt(a.rho / a.c1212)
    w2 = omega * cell.s2 * math.sqrt(b.rho / b.c1212)
    z1 = math.sqrt(a.rho * a.c1212)
    z2 = math.sqrt(b.rho * b.c1212)
    rhs = math.cos(w1) * math.cos(w2) - 0.5 * (z1 / z2 + z2 / z1) * math.sin(w1) * math.sin(w2)
    return np.cos(np.asarray(kbar, dtype=complex)) - rhs


def cauchy_biquadratic(c_normal, rho, alpha, alpha1, k, p, p0, omega):
    """Roots ``k`` of the homogeneous generalized-thermoelastic dispersion relation.

    Fields ``exp(i k x + s t)`` with ``s = i omega`` in
    ``C u'' - (alpha + alpha1 d_t) T' = rho u_tt`` and
    ``K T'' = alpha u'_t + p T_t + p0 T_tt``. With ``z = k^2`` the determinant
    is ``(C z + rho s^2)(K z + h) + z s alpha (alpha + alpha1 s)``,
    ``h = p s + p0 s^2``.
    """
    s = 1j * omega
    h = p * s + p0 * s * s
    coef2 = c_normal * k
    coef1 = c_normal * h + rho * s * s * k + (alpha + alpha1 * s) * alpha * s
    coef0 = rho * s * s * h
    z = np.roots([coef2, coef1, coef0])
    return np.concatenate([np.sqrt(z), -np.sqrt(z)])
