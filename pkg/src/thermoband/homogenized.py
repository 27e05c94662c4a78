"""Dispersion of the homogenized continua: zeroth and second order.

With ``s = i omega`` and plane waves ``exp(i chi x2)``, the averaged field
equations become the matrix polynomial ``sum_n chi^n Gamma^(n)(omega)`` with
``Gamma^(n) = sum_j eps^j Gamma^(n,j)``. Rows and columns are ``(u2, T)`` for
the coupled block and ``(u1,)`` for the shear block.
"""

from dataclasses import dataclass, field
import warnings

import numpy as np

from .effective import COUPLED_TABLE, SHEAR_TABLE
from .errors import ConditioningWarning, SingularLeadingBlock, SolverError
from .linalg import eigvals, hausdorff, invariants_faddeev, poly_residual, trim_leading
from . import kernels

# Time convention: d/dt -> S_FACTOR * omega.
S_FACTOR = 1j

GAMMA_INDICES = ((0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2),
                 (2, 0), (2, 1), (2, 2), (3, 1), (3, 2), (4, 2))
BLOCKS = ("shear", "coupled")
SPURIOUS_IM = 50.0
AGREEMENT_TOL = 1e-9
DEGENERATE_TOL = 1e-14
LEADING_TOL = 1e-12

_INDEX = {"u1": 0, "u2": 0, "v": 1, "U1": 0, "U2": 0, "T": 1}


@dataclass
class GammaStack:
    """The twelve ``Gamma^(n,j)`` matrices of one block at one frequency."""

    block: str
    omega: float
    matrices: dict

    def get(self, n, j):
        return self.matrices[(n, j)]

    @property
    def size(self):
        return 1 if self.block == "shear" else 2

    def gamma(self, n, epsilon):
        """``Gamma^(n) = sum_j eps^j Gamma^(n,j)``."""
        out = np.zeros((self.size, self.size), dtype=complex)
        for j in range(3):
            if (n, j) in self.matrices:
                out = out + epsilon ** j * self.matrices[(n, j)]
        return out


@dataclass
class SpectrumSample:
    """Roots ``k_bar`` at one frequency for one method and block."""

    omega_bar: float
    roots: np.ndarray
    residuals: np.ndarray
    method: str
    block: str
    physical: np.ndarray = None
    agreement: float = 0.0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.roots = np.asarray(self.roots, dtype=complex)
        self.residuals = np.asarray(self.residuals, dtype=float)
        if self.physical is None:
            self.physical = np.abs(self.roots.imag) <= SPURIOUS_IM


def assemble_gamma(tensors, omega, block="coupled"):
    """Populate ``Gamma^(n,j)`` for propagation along e2 at frequency ``omega``."""
    if block not in BLOCKS:
        raise ValueError(f"block must be one of {BLOCKS}")
    table, coeffs = ((SHEAR_TABLE, tensors.shear) if block == "shear"
                     else (COUPLED_TABLE, tensors.coupled))
    size = 1 if block == "shear" else 2
    mats = {ij: np.zeros((size, size), dtype=complex) for ij in GAMMA_INDICES}
    s = S_FACTOR * omega
    for name, (order, row, var, d2, t, sign) in table.items():
        j = order - 2
        value = sign * getattr(coeffs, name) * (1j ** d2) * s ** t
        mats[(d2, j)][_INDEX[row], _INDEX[var]] += value
    return GammaStack(block, float(omega), mats)


def _poly_mat_det(coeffs):
    """Scalar determinant polynomial (descending) of ``sum_n chi^n coeffs[n]``."""
    size = coeffs[0].shape[0]
    entry = [[np.array([c[i, j] for c in coeffs[::-1]], dtype=complex)
              for j in range(size)] for i in range(size)]
    if size == 1:
        return entry[0][0]
    return np.polysub(np.polymul(entry[0][0], entry[1][1]),
                      np.polymul(entry[0][1], entry[1][0]))


def determinant_polynomial(stack, epsilon, max_order=4):
    coeffs = [stack.gamma(n, epsilon) for n in range(max_order + 1)]
    return _poly_mat_det(coeffs)


def _snap_zero_roots(det_desc, chi):
    """Set the roots at the origin exactly to zero.

    The multiplicity is the number of vanishing trailing coefficients of the
    determinant polynomial (all ``Gamma^(0,j)`` vanish at ``omega = 0``).
    """
    c = np.asarray(det_desc)
    scale = float(np.max(np.abs(c))) if c.size else 0.0
    zeros = 0
    while zeros < c.shape[0] - 1 and abs(c[-1 - zeros]) <= 1e-14 * scale:
        zeros += 1
    chi = np.asarray(chi, dtype=complex).copy()
    if zeros:
        idx = np.argsort(np.abs(chi))[:zeros]
        chi[idx] = 0.0
    return chi


def _finish(stack, chi, det_desc, method, epsilon_cell, omega_bar, agreement):
    chi = kernels.newton_polish(det_desc[::-1].copy(), np.asarray(chi, dtype=complex), 6)
    chi = _snap_zero_roots(det_desc, chi)
    order = np.lexsort((chi.imag, chi.real))
    chi = chi[order]
    res = poly_residual(det_desc, chi)
    return SpectrumSample(omega_bar, chi * epsilon_cell, res, method, stack.block,
                          agreement=agreement)


def zeroth_order_roots(stack, epsilon_cell=1.0, omega_bar=None):
    """Roots of ``Gamma00 + chi Gamma10 + chi^2 Gamma20``.

    Computed as eigenvalues of the linearization
    ``S = [[-G10 G20^-1, -G00], [G20^-1, 0]]`` and cross-checked against the
    roots of its characteristic polynomial from power traces.
    """
    g0, g1, g2 = stack.get(0, 0), stack.get(1, 0), stack.get(2, 0)
    size = stack.size
    if abs(np.linalg.det(g2)) <= LEADING_TOL * max(1.0, np.max(np.abs(g2))) ** size:
        raise SingularLeadingBlock("Gamma(2,0) is singular")
    g2inv = np.linalg.inv(g2)
    s = np.zeros((2 * size, 2 * size), dtype=complex)
    s[:size, :size] = -g1 @ g2inv
    s[:size, size:] = -g0
    s[size:, :size] = g2inv
    chi = eigvals(s)
    char = invariants_faddeev(s)
    chi_fl = kernels.newton_polish(char[::-1].copy(), eigvals_of_poly(char), 6)
    chi_s = kernels.newton_polish(char[::-1].copy(), chi, 6)
    det_desc = _poly_mat_det([g0, g1, g2])
    chi_s = _snap_zero_roots(det_desc, chi_s)
    chi_fl = _snap_zero_roots(det_desc, chi_fl)
    agreement = hausdorff(chi_s, chi_fl) / max(1.0, float(np.max(np.abs(chi_s))))
    ob = stack.omega if omega_bar is None else omega_bar
    return _finish(stack, chi_s, det_desc, "hom0", epsilon_cell, ob, agreement)


def eigvals_of_poly(coeffs_desc):
    from .linalg import companion
    c = trim_leading(coeffs_desc, 0.0)
    if c.shape[0] <= 1:
        return np.zeros(0, dtype=complex)
    return eigvals(companion(c))


_SHIFTS = (0.0, 0.61 + 0.37j, -0.83 + 0.52j, 0.29 - 0.91j, 1.7 + 1.1j)


def _higher_order_size(stack, epsilon):
    scale = max(np.max(np.abs(stack.get(n, 0))) for n in (0, 1, 2))
    scale = max(scale, 1e-300)
    high = 0.0
    for (n, j), m in stack.matrices.items():
        if j > 0:
            high = max(high, epsilon ** j * float(np.max(np.abs(m))))
    return high / scale


def second_order_roots(stack, epsilon, epsilon_cell=None, omega_bar=None):
    """Roots of the quartic matrix polynomial truncated at ``eps^2``.

    The polynomial is linearized after the change of variable
    ``chi = sigma + 1/mu`` (block companion in ``mu`` with leading block
    ``P(sigma)``), so a singular ``Gamma^(4)`` only produces eigenvalues
    ``mu = 0``, which are discarded. The finite count equals the degree of
    the scalar determinant polynomial. Roots are cross-checked against the
    power-trace characteristic polynomial of the same companion matrix.
    """
    epsilon_cell = epsilon if epsilon_cell is None else epsilon_cell
    ob = stack.omega if omega_bar is None else omega_bar
    if _higher_order_size(stack, epsilon) < DEGENERATE_TOL:
        out = zeroth_order_roots(stack, epsilon_cell, ob)
        out.method = "hom2"
        out.extra["delegated"] = True
        return out
    size = stack.size
    gam = [stack.gamma(n, epsilon) for n in range(5)]
    g4 = gam[4]
    if np.max(np.abs(g4)) < LEADING_TOL:
        warnings.warn("Gamma(4) is negligible; the quartic degenerates to lower degree",
                      ConditioningWarning, stacklevel=2)
    det_desc = trim_leading(_poly_mat_det(gam), LEADING_TOL)
    degree = det_desc.shape[0] - 1
    if degree <= 0:
        raise SingularLeadingBlock("determinant polynomial is constant")

    from math import comb
    for sigma in _SHIFTS:
        shifted = [sum(comb(n, m) * sigma ** (n - m) * gam[n] for n in range(m, 5))
                   for m in range(5)]
        lead = shifted[0]
        cond = np.linalg.cond(lead)
        if np.isfinite(cond) and cond < 1e10:
            break
    else:
        raise SingularLeadingBlock("no shift gives an invertible leading block")
    lead_inv = np.linalg.inv(lead)
    n_blocks = 4
    dim = n_blocks * size
    comp = np.zeros((dim, dim), dtype=complex)
    for k in range(n_blocks - 1):
        comp[k * size:(k + 1) * size, (k + 1) * size:(k + 2) * size] = np.eye(size)
    # reversed polynomial: mu^4 P(sigma + 1/mu) = sum_k shifted[4-k] mu^k
    for k in range(n_blocks):
        comp[(n_blocks - 1) * size:, k * size:(k + 1) * size] = -lead_inv @ shifted[4 - k]
    mu = eigvals(comp)
    mu = mu[np.argsort(-np.abs(mu))][:degree]
    if np.any(mu == 0):
        raise SolverError("linearization lost finite eigenvalues")
    chi = sigma + 1.0 / mu

    # mu^(dim - degree) divides the characteristic polynomial exactly
    char = invariants_faddeev(comp)[:degree + 1]
    mu_fl = eigvals_of_poly(char)
    chi_fl = sigma + 1.0 / mu_fl
    chi_p = kernels.newton_polish(det_desc[::-1].copy(), chi, 8)
    chi_fl = kernels.newton_polish(det_desc[::-1].copy(), chi_fl, 8)
    chi_p = _snap_zero_roots(det_desc, chi_p)
    chi_fl = _snap_zero_roots(det_desc, chi_fl)
    agreement = hausdorff(chi_p, chi_fl) / max(1.0, float(np.max(np.abs(chi_p))))
    out = _finish(stack, chi_p, det_desc, "hom2", epsilon_cell, ob, agreement)
    out.extra["shift"] = sigma
    return out


def cauchy_roots(constants, omega, block="coupled", epsilon_cell=1.0):
    """Wavenumbers of a homogeneous classical (Cauchy) thermoelastic medium.

    Solves the biquadratic
    ``C K k^4 + [C (p s + p0 s^2) + rho K s^2 + s a (a + s a1)] k^2
    + rho s^2 (p s + p0 s^2) = 0`` in closed form (coupled block) or
    ``C k^2 = -rho s^2`` (shear block), ``s = i omega``.
    """
    c = constants
    s = S_FACTOR * omega
    if block == "shear":
        k = np.sqrt(complex(-c.rho * s * s / c.c_shear))
        roots = np.array([k, -k])
    else:
        heat = c.p * s + c.p0 * s * s
        a2 = c.c_normal * c.k
        a1 = c.c_normal * heat + c.rho * c.k * s * s + s * c.alpha * (c.alpha + s * c.alpha1)
        a0 = c.rho * s * s * heat
        disc = np.sqrt(complex(a1 * a1 - 4.0 * a2 * a0))
        q = -0.5 * (a1 + (disc if (np.conj(a1) * disc).real >= 0 else -disc))
        if q == 0:
            z = np.array([0.0, 0.0], dtype=complex)
        else:
            z = np.array([q / a2, a0 / q])
        r = np.sqrt(z)
        roots = np.concatenate([r, -r])
    roots = roots * epsilon_cell
    return roots[np.lexsort((roots.imag, roots.real))]
