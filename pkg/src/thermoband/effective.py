"""Averaged coefficients of the higher-order macroscopic equations.

Coefficients are specialized to propagation along e2 (no x1 dependence).
Each one is the exact cell mean of a product of material constants and
perturbation functions. :data:`COUPLED_TABLE` and :data:`SHEAR_TABLE` record
where each coefficient enters the macroscopic operator: the row, the macro
monomial ``(var, d/dx2 count, d/dt count)`` and its sign.
"""

from dataclasses import dataclass, fields

from .cell_problems import Key
from .errors import IncompleteSet
from .piecewise import PiecewisePoly

# name: (order, row, var, d2, t, sign)
COUPLED_TABLE = {
    # mechanical row, order 2
    "n2": (2, "u2", "U2", 2, 0, +1),
    "n22": (2, "u2", "U2", 0, 2, -1),
    "ntilde21": (2, "u2", "T", 1, 1, -1),
    "ntilde2": (2, "u2", "T", 1, 0, -1),
    # order 3
    "n3": (3, "u2", "U2", 3, 0, +1),
    "ntilde3": (3, "u2", "T", 2, 0, +1),
    "ntilde31": (3, "u2", "T", 2, 1, +1),
    "n32": (3, "u2", "U2", 1, 2, +1),
    "ntt32": (3, "u2", "T", 0, 2, +1),
    "ntt33": (3, "u2", "T", 0, 3, +1),
    # order 4
    "n4": (4, "u2", "U2", 4, 0, +1),
    "ntilde4": (4, "u2", "T", 3, 0, +1),
    "ntilde41_k3": (4, "u2", "T", 3, 1, +1),
    "n42": (4, "u2", "U2", 2, 2, +1),
    "ntt42": (4, "u2", "T", 1, 2, +1),
    "ntt43": (4, "u2", "T", 1, 3, +1),
    "n41": (4, "u2", "U2", 2, 1, -1),
    "ntilde41_k1": (4, "u2", "T", 1, 1, -1),
    "n44": (4, "u2", "U2", 0, 4, -1),
    # thermal row, order 2
    "m2": (2, "v", "T", 2, 0, +1),
    "mtilde21": (2, "v", "U2", 1, 1, -1),
    "m21": (2, "v", "T", 0, 1, -1),
    "m22": (2, "v", "T", 0, 2, -1),
    # order 3
    "m3": (3, "v", "T", 3, 0, +1),
    "mtilde31": (3, "v", "U2", 2, 1, +1),
    "m31": (3, "v", "T", 1, 1, +1),
    "m32": (3, "v", "T", 1, 2, +1),
    "mtilde33": (3, "v", "U2", 0, 3, +1),
    # order 4
    "m4": (4, "v", "T", 4, 0, +1),
    "mtilde41": (4, "v", "U2", 3, 1, +1),
    "m41": (4, "v", "T", 2, 1, +1),
    "m42": (4, "v", "T", 2, 2, +1),
    "mtilde43": (4, "v", "U2", 1, 3, +1),
    "mtilde42": (4, "v", "U2", 1, 2, -1),
    "mtt42": (4, "v", "T", 0, 2, -1),
    "m43": (4, "v", "T", 0, 3, -1),
    "m44": (4, "v", "T", 0, 4, -1),
}

SHEAR_TABLE = {
    "n2": (2, "u1", "U1", 2, 0, +1),
    "n22": (2, "u1", "U1", 0, 2, -1),
    "n3": (3, "u1", "U1", 3, 0, +1),
    "n32": (3, "u1", "U1", 1, 2, +1),
    "n4": (4, "u1", "U1", 4, 0, +1),
    "n42": (4, "u1", "U1", 2, 2, +1),
    "n44": (4, "u1", "U1", 0, 4, -1),
}


@dataclass(frozen=True)
class ShearCoefficients:
    n2: float
    n22: float
    n3: float
    n32: float
    n4: float
    n42: float
    n44: float


@dataclass(frozen=True)
class CoupledCoefficients:
    n2: float
    n22: float
    ntilde2: float
    ntilde21: float
    n3: float
    ntilde3: float
    ntilde31: float
    n32: float
    ntt32: float
    ntt33: float
    n4: float
    n41: float
    n42: float
    n44: float
    ntilde4: float
    ntilde41_k1: float
    ntilde41_k3: float
    ntt42: float
    ntt43: float
    m2: float
    mtilde21: float
    m21: float
    m22: float
    m3: float
    mtilde31: float
    m31: float
    m32: float
    mtilde33: float
    m4: float
    m41: float
    m42: float
    mtilde41: float
    mtilde42: float
    mtilde43: float
    mtt42: float
    m43: float
    m44: float


@dataclass(frozen=True)
class EffectiveTensors:
    """Averaged coefficients of the shear and compressional-thermal blocks."""

    shear: ShearCoefficients
    coupled: CoupledCoefficients

    def rows(self):
        """Flat ``(name, value)`` list, block-prefixed, in declaration order."""
        out = []
        for block, obj in (("shear", self.shear), ("coupled", self.coupled)):
            for f in fields(obj):
                out.append((f"{block}.{f.name}", getattr(obj, f.name)))
        return out


_REQUIRED = (
    "N1_222", "N1_112", "Ntilde1_2", "Ntilde11_2", "M1_2",
    "N2_2222", "N2_1122", "Ntilde2_22", "Ntilde21_22", "N22_11", "N22_22",
    "Mtilde21_22", "M21", "M22_fn", "M2_22",
    "N3_22222", "N3_11222", "Ntilde3_222", "Ntilde31_222", "N32_222", "N32_112",
    "Ntt32_2", "Ntt33_2", "N31_222", "Ntt31_2", "M3_222", "Mtilde31_222",
    "M31_2", "M32_2", "Mtilde33_2",
)


def _const(cell, name):
    a, b = cell.phase1, cell.phase2
    f1, f2 = cell.fractions
    return PiecewisePoly.constant(getattr(a, name), getattr(b, name), f1, f2)


def compute_effective(cell, pset):
    """Evaluate every coefficient from its defining cell mean.

    Raises
    ------
    IncompleteSet
        If ``pset`` lacks a perturbation function a formula needs.
    """
    missing = [n for n in _REQUIRED if n not in pset]
    if missing:
        raise IncompleteSet("missing perturbation functions: " + ", ".join(missing))
    F = pset.functions

    def d(name):
        return F[name].derivative()

    def mean(p):
        return float(p.cell_mean())

    C = _const(cell, "c2222")
    G = _const(cell, "c1212")
    rho = _const(cell, "rho")
    al = _const(cell, "alpha22")
    al1 = _const(cell, "alpha1_22")
    K = _const(cell, "k22")
    p = _const(cell, "p")
    p0 = _const(cell, "p0")

    shear = ShearCoefficients(
        n2=mean(G * (1.0 + d("N1_112"))),
        n22=mean(rho),
        n3=mean(G * d("N2_1122") + G * F["N1_112"]),
        n32=mean(G * d("N22_11") - rho * F["N1_112"]),
        n4=mean(G * d("N3_11222") + G * F["N2_1122"]),
        n42=mean(G * F["N22_11"] + G * d("N32_112") - rho * F["N2_1122"]),
        n44=mean(rho * F["N22_11"]),
    )

    N1, Nt1, Nt11, M1 = F["N1_222"], F["Ntilde1_2"], F["Ntilde11_2"], F["M1_2"]
    N2, Nt2, Nt21, N22 = F["N2_2222"], F["Ntilde2_22"], F["Ntilde21_22"], F["N22_22"]
    Mt21, M21, M22, M2 = F["Mtilde21_22"], F["M21"], F["M22_fn"], F["M2_22"]
    N3, Nt3, Nt31 = F["N3_22222"], F["Ntilde3_222"], F["Ntilde31_222"]
    N32, Ntt32, Ntt33 = F["N32_222"], F["Ntt32_2"], F["Ntt33_2"]
    N31, Ntt31 = F["N31_222"], F["Ntt31_2"]
    M3, Mt31, M31, M32, Mt33 = (F["M3_222"], F["Mtilde31_222"], F["M31_2"],
                                F["M32_2"], F["Mtilde33_2"])
    D = lambda f: f.derivative()  # noqa: E731

    coupled = CoupledCoefficients(
        n2=mean(C * (1.0 + D(N1))),
        n22=mean(rho),
        ntilde2=mean(al - C * D(Nt1)),
        ntilde21=mean(al1 - C * D(Nt11)),
        n3=mean(C * D(N2) + C * N1),
        ntilde3=mean(C * Nt1 + C * D(Nt2) - al * M1),
        ntilde31=mean(C * Nt11 + C * D(Nt21) - al1 * M1),
        n32=mean(C * D(N22) - rho * N1),
        ntt32=-mean(rho * Nt1),
        ntt33=-mean(rho * Nt11),
        n4=mean(C * D(N3) + C * N2),
        n41=mean(al * Mt21 - C * D(N31)),
        n42=mean(C * N22 + C * D(N32) - rho * N2 - al1 * Mt21),
        n44=mean(rho * N22),
        ntilde4=mean(C * Nt2 + C * D(Nt3) - al * M2),
        ntilde41_k1=mean(al * M21 - C * D(Ntt31)),
        ntilde41_k3=mean(C * Nt21 + C * D(Nt31) - al1 * M2),
        ntt42=mean(C * D(Ntt32) - rho * Nt2 - al * M22 - al1 * M21),
        ntt43=mean(C * D(Ntt33) - rho * Nt21 - al1 * M22),
        m2=mean(K * (1.0 + D(M1))),
        mtilde21=mean(al * D(N1) + al),
        m21=mean(p + al * D(Nt1)),
        m22=mean(p0 + al * D(Nt11)),
        m3=mean(K * M1 + K * D(M2)),
        mtilde31=mean(K * D(Mt21) - al * D(N2) - al * N1),
        m31=mean(K * D(M21) - p * M1 - al * Nt1 - al * D(Nt2)),
        m32=mean(K * D(M22) - p0 * M1 - al * Nt11 - al * D(Nt21)),
        mtilde33=-mean(al * D(N22)),
        m4=mean(K * M2 + K * D(M3)),
        m41=mean(K * M21 + K * D(M31) - p * M2 - al * Nt2 - al * D(Nt3)),
        m42=mean(K * M22 + K * D(M32) - p0 * M2 - al * Nt21 - al * D(Nt31)),
        mtilde41=mean(K * Mt21 + K * D(Mt31) - al * N2 - al * D(N3)),
        mtilde42=mean(p * Mt21 + al * D(N31)),
        mtilde43=mean(K * D(Mt33) - p0 * Mt21 - al * N22 - al * D(N32)),
        mtt42=mean(p * M21 + al * D(Ntt31)),
        m43=mean(p * M22 + p0 * M21 + al * D(Ntt32)),
        m44=mean(p0 * M22 + al * D(Ntt33)),
    )
    return EffectiveTensors(shear, coupled)


def operator_from_table(tensors):
    """Rebuild the averaged operator ``{order: {row: {Key: value}}}`` from the
    named coefficients and their sign table."""
    out = {n: {"u1": {}, "u2": {}, "v": {}} for n in (2, 3, 4)}
    for block, table in ((tensors.shear, SHEAR_TABLE), (tensors.coupled, COUPLED_TABLE)):
        for name, (order, row, var, d2, t, sign) in table.items():
            out[order][row][Key(var, 0, d2, t)] = sign * getattr(block, name)
    return out


@dataclass(frozen=True)
class CauchyConstants:
    """First-order (classical) homogenized constants for propagation along e2."""

    c_shear: float
    c_normal: float
    rho: float
    alpha: float
    alpha1: float
    k: float
    p: float
    p0: float


def first_order_constitutive(tensors):
    """Identify classical constants from the order-2 coefficients."""
    c = tensors.coupled
    return CauchyConstants(
        c_shear=tensors.shear.n2,
        c_normal=c.n2,
        rho=c.n22,
        alpha=c.ntilde2,
        alpha1=c.ntilde21,
        k=c.m2,
        p=c.m21,
        p0=c.m22,
    )
