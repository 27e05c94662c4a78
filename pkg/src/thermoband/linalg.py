"""Small dense linear algebra: eigenvalues, characteristic polynomials,
scalar polynomial roots and the matrix exponential."""

import math

import numpy as np

from . import kernels
from .errors import ExponentialDivergence, SolverError

MAX_QR_SWEEPS = 60


def eigvals(a):
    """Eigenvalues of a square matrix (Householder Hessenberg + shifted QR)."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("eigvals needs a square matrix")
    n = a.shape[0]
    if n == 0:
        return np.zeros(0, dtype=complex)
    if n == 1:
        return a[0].copy()
    # normalize so squared norms inside the reflections neither under- nor overflow
    scale = float(np.max(np.abs(a)))
    if scale == 0.0:
        return np.zeros(n, dtype=complex)
    if not np.isfinite(scale):
        raise SolverError("matrix has non-finite entries")
    # exact power-of-two scaling, safe for subnormal entries
    e = int(np.frexp(scale)[1])
    unit = np.ldexp(a.real, -e) + 1j * np.ldexp(a.imag, -e)
    h = kernels.hessenberg_reduce(np.ascontiguousarray(unit))
    eig, ok = kernels.hessenberg_eigvals(h, MAX_QR_SWEEPS)
    if not ok:
        raise SolverError("shifted QR iteration did not converge")
    return np.ldexp(eig.real, e) + 1j * np.ldexp(eig.imag, e)


def invariants_faddeev(m):
    """Characteristic polynomial ``det(lambda I - M)`` from power traces.

    Returns coefficients by descending power, leading coefficient 1, using
    ``c_k = -(1/k) sum_{j=1..k} c_{k-j} tr(M^j)``.
    """
    m = np.asarray(m, dtype=np.complex128)
    n = m.shape[0]
    if n == 0:
        return np.ones(1, dtype=complex)
    traces = kernels.power_traces(np.ascontiguousarray(m), n)
    c = np.zeros(n + 1, dtype=np.complex128)
    c[0] = 1.0
    for k in range(1, n + 1):
        acc = 0.0 + 0.0j
        for j in range(1, k + 1):
            acc += c[k - j] * traces[j - 1]
        c[k] = -acc / k
    return c


def companion(coeffs_desc):
    """Frobenius companion matrix of a polynomial (descending coefficients)."""
    c = np.asarray(coeffs_desc, dtype=np.complex128)
    c = c / c[0]
    n = c.shape[0] - 1
    comp = np.zeros((n, n), dtype=np.complex128)
    comp[0, :] = -c[1:]
    if n > 1:
        comp[1:, :-1] = np.eye(n - 1)
    return comp


def trim_leading(coeffs_desc, rtol=1e-12):
    """Drop leading coefficients that are negligible next to the largest."""
    c = np.asarray(coeffs_desc, dtype=np.complex128)
    scale = np.max(np.abs(c)) if c.size else 0.0
    i = 0
    while i < c.shape[0] - 1 and abs(c[i]) <= rtol * scale:
        i += 1
    return c[i:]


def poly_roots(coeffs_desc, polish=True):
    """Roots of a scalar polynomial via companion eigenvalues, Newton-polished."""
    c = np.asarray(coeffs_desc, dtype=np.complex128)
    if c.shape[0] <= 1:
        return np.zeros(0, dtype=complex)
    roots = eigvals(companion(c))
    if polish:
        roots = kernels.newton_polish(c[::-1].copy(), roots, 8)
    return roots


def poly_residual(coeffs_desc, z):
    """``|p(z)| / sum |c_n| |z|^n``: backward-error style residual."""
    c = np.asarray(coeffs_desc, dtype=np.complex128)
    z = np.asarray(z, dtype=np.complex128)
    val = np.polyval(c, z)
    scale = np.polyval(np.abs(c), np.abs(z))
    scale = np.where(scale == 0.0, 1.0, scale)
    return np.abs(val) / scale


def hausdorff(a, b):
    """Hausdorff distance between two finite point sets in the complex plane."""
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.size == 0 and b.size == 0:
        return 0.0
    if a.size == 0 or b.size == 0:
        return math.inf
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


# Matrix exponential: scaling and squaring with diagonal Pade approximants.
_THETA = {7: 9.504178996162932e-1, 9: 2.097847961257068e0, 13: 5.371920351148152e0}
_PADE = {
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
        2162160.0, 110880.0, 3960.0, 90.0, 1.0),
    13: (64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
         1187353796428800.0, 129060195264000.0, 10559470521600.0,
         670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
         960960.0, 16380.0, 182.0, 1.0),
}
MAX_SCALING = 60


def _pade(a, m):
    b = _PADE[m]
    n = a.shape[0]
    ident = np.eye(n, dtype=a.dtype)
    a2 = a @ a
    if m == 13:
        a4 = a2 @ a2
        a6 = a4 @ a2
        u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
                 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
        v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
             + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    else:
        powers = [ident, a2]
        for _ in range((m - 1) // 2 - 1):
            powers.append(powers[-1] @ a2)
        u = a @ sum(b[2 * k + 1] * powers[k] for k in range(len(powers)))
        v = sum(b[2 * k] * powers[k] for k in range(len(powers)))
    return np.linalg.solve(v - u, v + u)


def expm(a):
    """Matrix exponential by scaling and squaring (Pade degree 7, 9 or 13).

    Returns
    -------
    result : ndarray
    scaling : int
        Number of squarings applied.

    Raises
    ------
    ExponentialDivergence
        If the required number of squarings exceeds 60 or the input is not finite.
    """
    a = np.asarray(a)
    a = a.astype(np.complex128 if np.iscomplexobj(a) else np.float64)
    if not np.all(np.isfinite(a)):
        raise ExponentialDivergence("matrix has non-finite entries")
    norm = np.linalg.norm(a, 1)
    for m in (7, 9):
        if norm <= _THETA[m]:
            return _pade(a, m), 0
    s = max(0, int(math.ceil(math.log2(norm / _THETA[13]))))
    if s > MAX_SCALING:
        raise ExponentialDivergence(f"scaling exponent {s} exceeds {MAX_SCALING}")
    r = _pade(a / (2.0 ** s), 13)
    for _ in range(s):
        r = r @ r
    return r, s
