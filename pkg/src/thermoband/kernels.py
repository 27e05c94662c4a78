"""Hot numerical kernels.

Every function here is written so that it runs both under ``numba.njit`` and
as ordinary numpy code; see :mod:`thermoband._accel` for the switch.
"""

import numpy as np

from ._accel import kernel

_EPS = 2.220446049250313e-16


@kernel
def thomas_solve(lower, diag, upper, rhs):
    """Solve a tridiagonal system.

    ``lower[i]`` multiplies ``x[i-1]`` in row ``i`` (``lower[0]`` unused) and
    ``upper[i]`` multiplies ``x[i+1]`` (``upper[-1]`` unused).
    """
    n = diag.shape[0]
    cp = np.empty(n)
    dp = np.empty(n)
    cp[0] = upper[0] / diag[0]
    dp[0] = rhs[0] / diag[0]
    for i in range(1, n):
        m = diag[i] - lower[i] * cp[i - 1]
        cp[i] = upper[i] / m
        dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / m
    x = np.empty(n)
    x[n - 1] = dp[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x


@kernel
def hessenberg_reduce(a):
    """Unitary similarity reduction of a complex square matrix to upper
    Hessenberg form (Householder reflections). Returns a new array."""
    h = a.copy()
    n = h.shape[0]
    v = np.zeros(n, dtype=np.complex128)
    for k in range(n - 2):
        # norms are scaled by the largest entry so squares never go subnormal
        xmax = 0.0
        for i in range(k + 1, n):
            xmax = max(xmax, abs(h[i, k].real), abs(h[i, k].imag))
        if xmax == 0.0:
            continue
        norm_x = 0.0
        for i in range(k + 1, n):
            norm_x += (h[i, k].real / xmax) ** 2 + (h[i, k].imag / xmax) ** 2
        norm_x = xmax * np.sqrt(norm_x)
        x0 = h[k + 1, k]
        if abs(x0) == 0.0:
            phase = 1.0 + 0.0j
        else:
            # angle form stays accurate when x0 is subnormal
            ang = np.arctan2(x0.imag, x0.real)
            phase = complex(np.cos(ang), np.sin(ang))
        alpha = -phase * norm_x
        for i in range(n):
            v[i] = 0.0
        for i in range(k + 1, n):
            v[i] = h[i, k]
        v[k + 1] -= alpha
        vmax = 0.0
        for i in range(k + 1, n):
            vmax = max(vmax, abs(v[i].real), abs(v[i].imag))
        if vmax == 0.0:
            continue
        vnorm = 0.0
        for i in range(k + 1, n):
            v[i] = complex(v[i].real / vmax, v[i].imag / vmax)
            vnorm += v[i].real ** 2 + v[i].imag ** 2
        vnorm = np.sqrt(vnorm)
        for i in range(k + 1, n):
            v[i] = complex(v[i].real / vnorm, v[i].imag / vnorm)
        # left: h <- (I - 2 v v^H) h
        for j in range(n):
            acc = 0.0 + 0.0j
            for i in range(k + 1, n):
                acc += np.conj(v[i]) * h[i, j]
            for i in range(k + 1, n):
                h[i, j] -= 2.0 * v[i] * acc
        # right: h <- h (I - 2 v v^H)
        for i in range(n):
            acc = 0.0 + 0.0j
            for j in range(k + 1, n):
                acc += h[i, j] * v[j]
            for j in range(k + 1, n):
                h[i, j] -= 2.0 * acc * np.conj(v[j])
        for i in range(k + 2, n):
            h[i, k] = 0.0
    return h


_TINY = 2.0 ** -900
_UP = 2.0 ** 600
_DOWN = 2.0 ** -300


@kernel
def _csqrt(z):
    """Complex square root; tiny arguments are rescaled by an exact power of
    two because numba's complex sqrt divides by zero on subnormals."""
    if abs(z) < _TINY:
        return np.sqrt(z * _UP) * _DOWN
    return np.sqrt(z)


@kernel
def hessenberg_eigvals(h_in, max_sweeps):
    """Eigenvalues of a complex upper Hessenberg matrix by the shifted QR
    algorithm (Wilkinson shift, Givens rotations, deflation).

    Returns ``(eigenvalues, converged)``.
    """
    h = h_in.copy()
    n = h.shape[0]
    eig = np.zeros(n, dtype=np.complex128)
    cs = np.zeros(n, dtype=np.complex128)
    sn = np.zeros(n, dtype=np.complex128)
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale = max(scale, abs(h[i, j]))
    if scale == 0.0:
        return eig, True
    hi = n - 1
    its = 0
    total = 0
    converged = True
    while hi >= 0:
        if hi == 0:
            eig[0] = h[0, 0]
            break
        lo = hi
        while lo > 0:
            s = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if s == 0.0:
                s = scale
            # local test, with a tiny normwise floor for blocks far below ||H||
            if abs(h[lo, lo - 1]) <= max(_EPS * s, _EPS * _EPS * scale):
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eig[hi] = h[hi, hi]
            hi -= 1
            its = 0
            continue
        if total > max_sweeps * n:
            converged = False
            for i in range(hi + 1):
                eig[i] = h[i, i]
            break
        a = h[hi - 1, hi - 1]
        b = h[hi - 1, hi]
        c = h[hi, hi - 1]
        d = h[hi, hi]
        half_tr = 0.5 * (a + d)
        disc = _csqrt(half_tr * half_tr - (a * d - b * c))
        mu1 = half_tr + disc
        mu2 = half_tr - disc
        if abs(mu1 - d) < abs(mu2 - d):
            mu = mu1
        else:
            mu = mu2
        if its > 0 and its % 11 == 0:
            # exceptional shift to break cycles
            mu = d + 0.75 * abs(h[hi, hi - 1]) * (1.0 + 0.5j)
        for k in range(lo, hi + 1):
            h[k, k] -= mu
        for k in range(lo, hi):
            x = h[k, k]
            y = h[k + 1, k]
            r = np.sqrt(x.real ** 2 + x.imag ** 2 + y.real ** 2 + y.imag ** 2)
            if r == 0.0:
                cs[k] = 1.0
                sn[k] = 0.0
            else:
                cs[k] = complex(x.real / r, x.imag / r)
                sn[k] = complex(y.real / r, y.imag / r)
            cc = np.conj(cs[k])
            sc = np.conj(sn[k])
            for j in range(k, hi + 1):
                p = h[k, j]
                q = h[k + 1, j]
                h[k, j] = cc * p + sc * q
                h[k + 1, j] = -sn[k] * p + cs[k] * q
        for k in range(lo, hi):
            top = min(k + 2, hi)
            for i in range(lo, top + 1):
                p = h[i, k]
                q = h[i, k + 1]
                h[i, k] = p * cs[k] + q * sn[k]
                h[i, k + 1] = -p * np.conj(sn[k]) + q * np.conj(cs[k])
        for k in range(lo, hi + 1):
            h[k, k] += mu
        its += 1
        total += 1
    return eig, converged


@kernel
def power_traces(m, count):
    """Traces of ``m**1 .. m**count``."""
    n = m.shape[0]
    out = np.zeros(count, dtype=np.complex128)
    p = np.eye(n, dtype=np.complex128)
    for k in range(count):
        q = np.zeros((n, n), dtype=np.complex128)
        for i in range(n):
            for l in range(n):
                pil = p[i, l]
                if pil != 0.0:
                    for j in range(n):
                        q[i, j] += pil * m[l, j]
        p = q
        t = 0.0 + 0.0j
        for i in range(n):
            t += p[i, i]
        out[k] = t
    return out


@kernel
def newton_polish(coeffs, roots, max_iter):
    """Newton refinement of polynomial roots.

    ``coeffs`` holds coefficients by ascending power. The update is accepted
    only while it lowers the residual.
    """
    deg = coeffs.shape[0] - 1
    out = roots.copy()
    for r in range(out.shape[0]):
        z = out[r]
        for _ in range(max_iter):
            val = coeffs[deg] + 0.0j
            der = 0.0 + 0.0j
            for k in range(deg - 1, -1, -1):
                der = der * z + val
                val = val * z + coeffs[k]
            if abs(der) <= _TINY:
                break
            step = val / der
            # a huge step means the derivative is flat; keep the input root
            if not abs(step) <= 1e100 * (1.0 + abs(z)):
                break
            z_new = z - step
            v_new = coeffs[deg] + 0.0j
            for k in range(deg - 1, -1, -1):
                v_new = v_new * z_new + coeffs[k]
            if abs(v_new) >= abs(val):
                break
            z = z_new
            if abs(step) <= 4.0 * _EPS * abs(z):
                break
        out[r] = z
    return out
