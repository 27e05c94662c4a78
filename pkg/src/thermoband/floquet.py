"""Exact Bloch spectrum of the bilayer by the transfer-matrix method.

Each layer is a first-order system ``y' = G y`` in physical fields:

* shear: ``y = (u1, sigma12)``
* coupled: ``y = (u2, T, sigma22, q2)`` with ``q2 = -Kbar T'`` and
  ``Kbar = theta0 * k22``

All fields are continuous across perfectly bonded interfaces, so the cell
transfer matrix is ``exp(G2 s2) exp(G1 s1)``. Bloch waves satisfy
``T y = phi y`` with ``phi = exp(i k2 eps)``.
"""

from dataclasses import dataclass
import cmath
import math

import numpy as np
from scipy.linalg import matrix_balance

from .errors import ExponentialDivergence, SolverError
from .homogenized import S_FACTOR, SpectrumSample
from .linalg import eigvals, expm, hausdorff, invariants_faddeev, poly_residual

SEMIGROUP_TOL = 1e-10
# |det T - 1| above this means cancellation destroyed the small multipliers
UNIMODULAR_TOL = 1e-6


@dataclass(frozen=True)
class LayerStateMatrix:
    shear: np.ndarray
    coupled: np.ndarray


@dataclass(frozen=True)
class TransferMatrix:
    """Cell transfer matrices in physical state variables.

    ``scaled`` holds ``D^-1 T D`` per block, with ``D`` the power-of-two
    diagonal state scaling used during propagation; it has the same
    spectrum and is far better conditioned when units differ widely.
    """

    omega: float
    shear: np.ndarray
    coupled: np.ndarray
    scaled: dict = None

    def block(self, name):
        return self.shear if name == "shear" else self.coupled

    def balanced(self, name):
        if self.scaled is None:
            return self.block(name)
        return self.scaled[name]


def layer_matrix(phase, omega, theta0=1.0):
    """State matrices of one layer at angular frequency ``omega``."""
    s = S_FACTOR * omega
    g_s = np.array([[0.0, 1.0 / phase.c1212],
                    [phase.rho * s * s, 0.0]], dtype=complex)
    c = phase.c2222
    a = phase.alpha22 + s * phase.alpha1_22
    kbar = theta0 * phase.k22
    heat = phase.p * s + phase.p0 * s * s
    g_c = np.zeros((4, 4), dtype=complex)
    g_c[0, 1] = a / c
    g_c[0, 2] = 1.0 / c
    g_c[1, 3] = -1.0 / kbar
    g_c[2, 0] = phase.rho * s * s
    g_c[3, 1] = -theta0 * (s * phase.alpha22 * a / c + heat)
    g_c[3, 2] = -theta0 * s * phase.alpha22 / c
    return LayerStateMatrix(g_s, g_c)


def _propagator(g, length, check=True):
    full, _ = expm(g * length)
    if check:
        half, _ = expm(g * (0.5 * length))
        err = np.linalg.norm(half @ half - full, 1) / max(1.0, np.linalg.norm(full, 1))
        if err > SEMIGROUP_TOL:
            raise SolverError(f"matrix exponential semigroup check failed ({err:.3e})")
    return full


def state_scaling(*mats):
    """Power-of-two diagonal ``d`` balancing ``sum |M|`` (exact similarity)."""
    m = sum(np.abs(a) for a in mats)
    _, (d, _) = matrix_balance(m, permute=False, separate=True)
    return d


def _scaled_product(g1, l1, g2, l2, check):
    d = state_scaling(g1 * l1, g2 * l2)
    sim = (1.0 / d)[:, None] * d[None, :]
    with np.errstate(over="ignore", invalid="ignore"):
        t = _propagator(g2 * sim, l2, check) @ _propagator(g1 * sim, l1, check)
    if not np.all(np.isfinite(t)):
        raise ExponentialDivergence(
            "transfer matrix overflows; attenuation across a layer is too strong")
    with np.errstate(over="ignore", invalid="ignore"):
        phys = t * d[:, None] / d[None, :]
    return phys, t


def transfer_matrix(cell, omega, check=True):
    """Transfer matrix of one period at angular frequency ``omega``."""
    if not omega >= 0.0:
        raise ValueError("omega must be >= 0")
    g1 = layer_matrix(cell.phase1, omega, cell.theta0)
    g2 = layer_matrix(cell.phase2, omega, cell.theta0)
    t_s, b_s = _scaled_product(g1.shear, cell.s1, g2.shear, cell.s2, check)
    t_c, b_c = _scaled_product(g1.coupled, cell.s1, g2.coupled, cell.s2, check)
    return TransferMatrix(float(omega), t_s, t_c, {"shear": b_s, "coupled": b_c})


def palindromic_defect(char_desc):
    """``max |c_k - c_(n-k)|`` of a monic characteristic polynomial."""
    c = np.asarray(char_desc)
    return float(np.max(np.abs(c - c[::-1])))


def fold(kbar):
    """Map ``Re k_bar`` into the first zone ``(-pi, pi]``."""
    k = np.asarray(kbar, dtype=complex)
    re = np.mod(k.real + math.pi, 2.0 * math.pi) - math.pi
    re = np.where(re == -math.pi, math.pi, re)
    return re + 1j * k.imag


def bloch_roots(tm, block="coupled", omega_bar=None):
    """Floquet multipliers of ``tm`` turned into wavenumbers ``k_bar``.

    ``k_bar = -i Log(phi)`` on the principal branch. The multipliers are
    also recomputed as roots of the power-trace characteristic polynomial;
    ``agreement`` stores the distance between both sets and ``extra`` the
    determinant and palindromic defects.
    """
    t = tm.balanced(block)
    det_defect = abs(np.linalg.det(t) - 1.0)
    if not det_defect <= UNIMODULAR_TOL:
        raise SolverError(
            f"transfer matrix is not unimodular (|det T - 1| = {det_defect:.3e}); "
            "attenuation across the cell exceeds double precision")
    phi = eigvals(t)
    char = invariants_faddeev(t)
    from .homogenized import eigvals_of_poly
    phi_fl = eigvals_of_poly(char)
    agreement = hausdorff(phi, phi_fl) / max(1.0, float(np.max(np.abs(phi))))
    k = np.array([-1j * cmath.log(z) for z in phi])
    order = np.lexsort((k.imag, k.real))
    k = k[order]
    phi = phi[order]
    res = poly_residual(char, phi)
    out = SpectrumSample(tm.omega if omega_bar is None else omega_bar, k, res, "fb", block,
                         physical=np.ones(k.shape, dtype=bool), agreement=agreement)
    out.extra["det_defect"] = det_defect
    out.extra["palindromic_defect"] = palindromic_defect(char)
    out.extra["multipliers"] = phi
    return out


def reciprocal_pairing(phi):
    """Largest ``|phi_i phi_j - 1|`` after optimally pairing multipliers."""
    from scipy.optimize import linear_sum_assignment
    phi = np.asarray(phi, dtype=complex)
    inv = 1.0 / phi
    cost = np.abs(phi[:, None] - inv[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(np.max(np.abs(phi[rows] * phi[cols] - 1.0)))


def rytov_cos(cell, omega):
    """Right-hand side of the closed-form bilayer shear dispersion relation."""
    a, b = cell.phase1, cell.phase2
    w1 = omega * cell.s1 * math.sqrt(a.rho / a.c1212)
    w2 = omega * cell.s2 * math.sqrt(b.rho / b.c1212)
    z1 = math.sqrt(a.rho * a.c1212)
    z2 = math.sqrt(b.rho * b.c1212)
    return (math.cos(w1) * math.cos(w2)
            - 0.5 * (z1 / z2 + z2 / z1) * math.sin(w1) * math.sin(w2))


def fb_spectrum(cell, omega_bar, block="coupled"):
    """Bloch roots at a dimensionless frequency."""
    omega = omega_bar * cell.omega_scale
    return bloch_roots(transfer_matrix(cell, omega), block, omega_bar)


__all__ = ["LayerStateMatrix", "TransferMatrix", "layer_matrix", "transfer_matrix",
           "bloch_roots", "fold", "rytov_cos", "reciprocal_pairing",
           "palindromic_defect", "fb_spectrum"]
