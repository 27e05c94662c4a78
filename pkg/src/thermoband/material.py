"""Phase data, the two-layer periodic cell and its dimensionless description."""

from dataclasses import dataclass, fields, replace
import math

from .errors import InconsistentRatios, NonPositiveDefinite, ValidationError


@dataclass(frozen=True)
class PhaseProperties:
    """Constants of one orthotropic thermoelastic layer (axis e1).

    ``k11``/``k22`` are conductivities divided by the reference temperature
    and ``p`` is ``rho * C_E / theta0``.
    """

    c1111: float
    c2222: float
    c1122: float
    c1212: float
    alpha11: float
    alpha22: float
    tau0: float
    tau1: float
    rho: float
    k11: float
    k22: float
    p: float

    @property
    def alpha1_11(self):
        return self.alpha11 * self.tau1

    @property
    def alpha1_22(self):
        return self.alpha22 * self.tau1

    @property
    def p0(self):
        return self.p * self.tau0

    def violations(self, prefix=""):
        out = []
        for name in ("c1111", "c2222", "c1212", "rho", "p", "k22"):
            value = getattr(self, name)
            if not value > 0.0:
                out.append(f"{prefix}{name} must be > 0 (got {value!r})")
        for name in ("tau0", "tau1"):
            value = getattr(self, name)
            if not value >= 0.0:
                out.append(f"{prefix}{name} must be >= 0 (got {value!r})")
        det = self.c1111 * self.c2222 - self.c1122 ** 2
        if not det > 0.0:
            out.append(f"{prefix}c1111*c2222 - c1122**2 must be > 0 (got {det!r})")
        for f in fields(self):
            value = getattr(self, f.name)
            if not math.isfinite(value):
                out.append(f"{prefix}{f.name} must be finite (got {value!r})")
        return out

    def classical(self):
        """Copy with both relaxation times set to zero."""
        return replace(self, tau0=0.0, tau1=0.0)


@dataclass(frozen=True)
class LayeredCell:
    """Periodic bilayer: phase 1 of thickness ``s1`` followed by phase 2."""

    phase1: PhaseProperties
    phase2: PhaseProperties
    s1: float
    s2: float
    theta0: float = 1.0

    @property
    def epsilon(self):
        return self.s1 + self.s2

    @property
    def eta(self):
        return self.s1 / self.s2

    @property
    def fractions(self):
        """Layer thicknesses on the unit cell, (s1/eps, s2/eps)."""
        eps = self.epsilon
        return self.s1 / eps, self.s2 / eps

    @property
    def omega_scale(self):
        """Factor turning omega_bar into a dimensional angular frequency."""
        return 1.0 / (self.epsilon * math.sqrt(self.phase1.rho / self.phase1.c2222))

    def classical(self):
        return replace(self, phase1=self.phase1.classical(), phase2=self.phase2.classical())


def nondimensionalize(cell):
    """The same cell in units with ``eps = C1_2222 = rho1 = theta0 = 1``.

    Dimensionless frequencies and wavenumbers are unchanged. Cells that are
    already normalized come back with identical values.
    """
    length = cell.epsilon
    stress = cell.phase1.c2222
    density = cell.phase1.rho
    temp = cell.theta0
    time = length * math.sqrt(density / stress)
    units = {
        "c1111": stress, "c2222": stress, "c1122": stress, "c1212": stress,
        "alpha11": stress / temp, "alpha22": stress / temp,
        "tau0": time, "tau1": time, "rho": density,
        "k11": stress * length ** 2 / (time * temp ** 2),
        "k22": stress * length ** 2 / (time * temp ** 2),
        "p": stress / temp ** 2,
    }

    def scale(ph):
        return replace(ph, **{k: getattr(ph, k) / units[k] for k in units})

    return LayeredCell(scale(cell.phase1), scale(cell.phase2),
                       cell.s1 / length, cell.s2 / length, 1.0)


def omega_bar(cell, omega):
    """Dimensionless frequency omega * eps * sqrt(rho1 / C1_2222)."""
    return omega / cell.omega_scale


def k_bar(cell, k):
    """Dimensionless wavenumber k * eps."""
    return k * cell.epsilon


def validate(cell):
    """List every violated invariant of ``cell`` (empty when valid)."""
    out = []
    out += cell.phase1.violations("phase1.")
    out += cell.phase2.violations("phase2.")
    for name in ("s1", "s2", "theta0"):
        value = getattr(cell, name)
        if not (value > 0.0 and math.isfinite(value)):
            out.append(f"{name} must be > 0 (got {value!r})")
    return out


def plane_moduli(young, poisson, plane="strain"):
    """Map (E, nu) to the in-plane pair (E~, nu~)."""
    if plane == "strain":
        return young / (1.0 - poisson ** 2), poisson / (1.0 - poisson)
    if plane == "stress":
        return young, poisson
    raise ValidationError(f"plane must be 'strain' or 'stress', got {plane!r}")


def isotropic_moduli(e_t, nu_t):
    """(c1111, c2222, c1122, c1212) from in-plane (E~, nu~)."""
    c = e_t / (1.0 - nu_t ** 2)
    return c, c, e_t * nu_t / (1.0 - nu_t ** 2), e_t / (2.0 * (1.0 + nu_t))


@dataclass(frozen=True)
class DimensionlessGroups:
    """Ratio description of a cell, as used in figure captions.

    Scale groups refer to phase 1 and ``c = sqrt(C1_2222 / rho1)``:

    * ``alpha1_group = alpha1 theta0 / C1``, ``alpha2_group = alpha2 theta0 / C2``
    * ``k1_group = K1bar theta0 / (C1 eps c)``
    * ``p1_group = p1 theta0 eps c / K1bar``
    * ``tau0_group = tau0_1 c / eps``, ``tau1_group = tau1_1 c / eps``
    """

    p_ratio: float = 1.0
    c_ratio: float = 1.0
    rho_ratio: float = 1.0
    k_ratio: float = 1.0
    alpha1_group: float = 0.0
    alpha2_group: float = 0.0
    k1_group: float = 1.0
    p1_group: float = 1.0
    tau0_group: float = 0.0
    tau1_group: float = 0.0
    tau0_ratio: float = 1.0
    tau1_ratio: float = 1.0
    nu1: float = 0.0
    nu2: float = 0.0
    eta: float = 1.0

    RATIO_KEYS = (
        "p_ratio", "c_ratio", "rho_ratio", "k_ratio", "alpha1_group",
        "alpha2_group", "k1_group", "p1_group", "tau0_group", "tau1_group",
        "tau0_ratio", "tau1_ratio", "nu1", "nu2", "eta",
    )

    def as_dict(self):
        return {k: getattr(self, k) for k in self.RATIO_KEYS}


def from_ratios(groups):
    """Build a dimensional cell with C1_2222 = rho1 = eps = theta0 = 1."""
    g = groups
    for key in g.RATIO_KEYS:
        if not math.isfinite(getattr(g, key)):
            raise ValidationError(f"{key} must be finite")
    for key in ("nu1", "nu2"):
        nu = getattr(g, key)
        if not -1.0 < nu < 0.5:
            raise ValidationError(f"{key} must lie in (-1, 0.5), got {nu}")
    for key in ("c_ratio", "rho_ratio", "p_ratio", "k_ratio", "k1_group", "p1_group", "eta"):
        if not getattr(g, key) > 0.0:
            raise ValidationError(f"{key} must be > 0")
    if g.tau0_group < 0.0 or g.tau1_group < 0.0 or g.tau0_ratio < 0.0 or g.tau1_ratio < 0.0:
        raise ValidationError("relaxation-time groups must be >= 0")
    for base, ratio in (("tau0_group", "tau0_ratio"), ("tau1_group", "tau1_ratio")):
        if getattr(g, base) == 0.0 and getattr(g, ratio) != 1.0:
            raise InconsistentRatios(
                f"{ratio}={getattr(g, ratio)} is meaningless with {base}=0; use 1")

    theta0 = 1.0
    eps = 1.0
    rho1 = 1.0
    c1 = 1.0
    speed = math.sqrt(c1 / rho1)

    e1 = c1 * (1.0 - g.nu1 ** 2)
    e2 = g.c_ratio * c1 * (1.0 - g.nu2 ** 2)
    m1 = isotropic_moduli(e1, g.nu1)
    m2 = isotropic_moduli(e2, g.nu2)

    alpha1 = g.alpha1_group * m1[1] / theta0
    alpha2 = g.alpha2_group * m2[1] / theta0
    kbar1 = g.k1_group * c1 * eps * speed / theta0
    kbar2 = g.k_ratio * kbar1
    p1 = g.p1_group * kbar1 / (theta0 * eps * speed)
    p2 = g.p_ratio * p1
    tau0_1 = g.tau0_group * eps / speed
    tau1_1 = g.tau1_group * eps / speed

    def phase(moduli, alpha, kbar, p, rho, tau0, tau1):
        c1111, c2222, c1122, c1212 = moduli
        k = kbar / theta0
        return PhaseProperties(c1111, c2222, c1122, c1212, alpha, alpha,
                               tau0, tau1, rho, k, k, p)

    ph1 = phase(m1, alpha1, kbar1, p1, rho1, tau0_1, tau1_1)
    ph2 = phase(m2, alpha2, kbar2, p2, g.rho_ratio * rho1,
                g.tau0_ratio * tau0_1, g.tau1_ratio * tau1_1)
    for ph, tag in ((ph1, "phase1"), (ph2, "phase2")):
        if not ph.c1111 * ph.c2222 - ph.c1122 ** 2 > 0.0:
            raise NonPositiveDefinite(f"{tag} elasticity is not positive definite")
    s2 = eps / (1.0 + g.eta)
    s1 = eps - s2
    return LayeredCell(ph1, ph2, s1, s2, theta0)


def extract_ratios(cell):
    """Inverse of :func:`from_ratios` for cells built with isotropic phases."""
    a, b = cell.phase1, cell.phase2
    eps = cell.epsilon
    theta0 = cell.theta0
    speed = math.sqrt(a.c2222 / a.rho)
    kbar1 = a.k22 * theta0
    kbar2 = b.k22 * theta0

    def nu_tilde(ph):
        return ph.c1122 / ph.c2222

    tau0_group = a.tau0 * speed / eps
    tau1_group = a.tau1 * speed / eps
    return DimensionlessGroups(
        p_ratio=b.p / a.p,
        c_ratio=b.c2222 / a.c2222,
        rho_ratio=b.rho / a.rho,
        k_ratio=kbar2 / kbar1,
        alpha1_group=a.alpha22 * theta0 / a.c2222,
        alpha2_group=b.alpha22 * theta0 / b.c2222,
        k1_group=kbar1 * theta0 / (a.c2222 * eps * speed),
        p1_group=a.p * theta0 * eps * speed / kbar1,
        tau0_group=tau0_group,
        tau1_group=tau1_group,
        tau0_ratio=b.tau0 / a.tau0 if a.tau0 > 0.0 else 1.0,
        tau1_ratio=b.tau1 / a.tau1 if a.tau1 > 0.0 else 1.0,
        nu1=nu_tilde(a),
        nu2=nu_tilde(b),
        eta=cell.eta,
    )


# Parameter sets of the published figures (caption values).
FIG4_GROUPS = DimensionlessGroups(
    p_ratio=3.0, c_ratio=2.0, rho_ratio=3.0, k_ratio=3.0,
    alpha1_group=0.01, alpha2_group=0.1, k1_group=1.0, p1_group=1.0,
    tau0_group=1.0, tau1_group=3.0, tau0_ratio=2.0, tau1_ratio=2.0,
    nu1=0.2, nu2=0.2, eta=1.0,
)

FIG6_GROUPS = DimensionlessGroups(c_ratio=2.0, rho_ratio=2.0, nu1=0.2, nu2=0.2, eta=1.0)

FIG2_GROUPS = DimensionlessGroups(
    c_ratio=2.0, k_ratio=3.0, nu1=0.3, nu2=0.3, eta=1.0,
    alpha1_group=0.01, alpha2_group=0.1,
)


def fig8_groups(tau):
    """Caption set of the relaxation-time study with tau0 = tau1 = ``tau``."""
    return replace(FIG4_GROUPS, tau0_group=tau, tau1_group=tau, tau0_ratio=1.0, tau1_ratio=1.0)


def fig5_groups():
    return replace(FIG4_GROUPS, eta=10.0)
