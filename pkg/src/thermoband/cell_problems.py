"""Recursive cell problems of the layered cell and their perturbation functions.

Every cell problem reduces to the canonical periodic form

    (a f' + b)' = r,    <r> = 0,    <f> = 0,

with ``a`` constant per layer, ``b`` and ``r`` piecewise polynomials, ``f``
continuous and the flux ``a f' + b`` continuous across both interfaces.

The recursion works on micro fields ``u1, u2`` (displacement) and ``v``
(temperature). The order-``m`` field is a sum over monomials
``key = (var, d1, d2, t)`` of a cell function times
``d^d1/dx1 d^d2/dx2 d^t/dt`` applied to the macro variable ``var`` in
``('U1', 'U2', 'T')``. Time derivatives are carried as the Laplace variable
``s``. Every order contributes the averaged source ``<S^(n)>``; the sum over
``n`` of ``eps^(n-2) <S^(n)>`` is the macroscopic field equation.
"""

from dataclasses import dataclass, field
from collections import namedtuple

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import DegenerateCoefficient, SolvabilityViolated, UnknownFunction
from .piecewise import PiecewisePoly

Key = namedtuple("Key", "var d1 d2 t")
FIELDS = ("u1", "u2", "v")
MACRO = {"u1": "U1", "u2": "U2", "v": "T"}

SOLVABILITY_TOL = 1e-10


@dataclass(frozen=True)
class CellProblem1D:
    """Data of ``(a f' + b)' = r`` on the two-layer unit cell."""

    a1: float
    a2: float
    flux_source: PiecewisePoly
    volume_source: PiecewisePoly


def solve_cell_problem(problem, tol=SOLVABILITY_TOL):
    """Unique zero-mean periodic solution of a canonical cell problem.

    Raises
    ------
    DegenerateCoefficient
        If a layer coefficient is not strictly positive.
    SolvabilityViolated
        If the volume source has a cell mean above ``tol`` (relative to its
        magnitude).
    """
    a1, a2 = float(problem.a1), float(problem.a2)
    if not (a1 > 0.0 and a2 > 0.0):
        raise DegenerateCoefficient(f"layer coefficients must be > 0, got ({a1}, {a2})")
    b = problem.flux_source
    r = problem.volume_source
    b._check(r)
    f1, f2 = r.f1, r.f2
    h1, h2 = 0.5 * f1, 0.5 * f2

    scale = max(1.0, float(np.max(np.abs(r.coeffs1))), float(np.max(np.abs(r.coeffs2))))
    mean_r = r.cell_mean()
    if abs(mean_r) > tol * scale:
        raise SolvabilityViolated(f"volume source has cell mean {mean_r!r}")

    # flux F = R + c per layer, continuous at the internal interface
    R1 = P.polyint(r.coeffs1)
    R2 = P.polyint(r.coeffs2)
    shift2 = P.polyval(h1, R1) - P.polyval(-h2, R2)
    # f' = (F - b)/a; integrate with the flux level c1 as unknown
    g1 = P.polysub(R1, b.coeffs1) / a1
    g2 = P.polysub(P.polyadd(R2, [shift2]), b.coeffs2) / a2
    G1 = P.polyint(g1)
    G2 = P.polyint(g2)
    inc1 = P.polyval(h1, G1) - P.polyval(-h1, G1)
    inc2 = P.polyval(h2, G2) - P.polyval(-h2, G2)
    # zero net increment over the period fixes c1
    c1 = -(inc1 + inc2) / (f1 / a1 + f2 / a2)
    G1 = P.polyadd(G1, P.polyint([c1 / a1]))
    G2 = P.polyadd(G2, P.polyint([c1 / a2]))
    # continuity at the internal interface: G1(h1) + d1 = G2(-h2) + d2
    jump = P.polyval(h1, G1) - P.polyval(-h2, G2)
    I1 = P.polyint(G1)
    I2 = P.polyint(G2)
    int1 = P.polyval(h1, I1) - P.polyval(-h1, I1)
    int2 = P.polyval(h2, I2) - P.polyval(-h2, I2)
    # d2 = d1 + jump; mean zero: int1 + int2 + d1 f1 + d2 f2 = 0
    d1 = -(int1 + int2 + jump * f2) / (f1 + f2)
    d2 = d1 + jump
    return PiecewisePoly(P.polyadd(G1, [d1]), P.polyadd(G2, [d2]), f1, f2)


def cell_flux(problem, solution):
    """The flux ``a f' + b`` of a solved problem."""
    return solution.derivative().layer_scale(problem.a1, problem.a2) + problem.flux_source


# --------------------------------------------------------------------------
# expansions: dict Key -> PiecewisePoly


def _add_into(acc, exp, factor=1.0):
    for k, f in exp.items():
        term = f if factor == 1.0 else f.scale(factor)
        acc[k] = acc[k] + term if k in acc else term
    return acc


def _sum(*exps):
    acc = {}
    for e in exps:
        _add_into(acc, e)
    return acc


def _shift(exp, d1=0, d2=0, t=0):
    return {Key(k.var, k.d1 + d1, k.d2 + d2, k.t + t): f for k, f in exp.items()}


def _layer(exp, w1, w2):
    if w1 == 1.0 and w2 == 1.0:
        return dict(exp)
    return {k: f.layer_scale(w1, w2) for k, f in exp.items()}


def _deriv(exp):
    return {k: f.derivative() for k, f in exp.items()}


def _neg(exp):
    return {k: -f for k, f in exp.items()}


def _prune(exp, max_d1):
    return {k: f for k, f in exp.items() if k.d1 <= max_d1}


@dataclass
class _Material:
    """Per-layer constant pairs used by the recursion."""

    c1111: tuple
    c2222: tuple
    c1122: tuple
    c1212: tuple
    alpha11: tuple
    alpha22: tuple
    alpha1_11: tuple
    alpha1_22: tuple
    rho: tuple
    k11: tuple
    k22: tuple
    p: tuple
    p0: tuple

    @classmethod
    def of(cls, cell):
        a, b = cell.phase1, cell.phase2
        names = ("c1111", "c2222", "c1122", "c1212", "alpha11", "alpha22",
                 "alpha1_11", "alpha1_22", "rho", "k11", "k22", "p", "p0")
        return cls(*[(getattr(a, n), getattr(b, n)) for n in names])


@dataclass
class OrderSolution:
    """Micro-field expansion of one order: field -> {Key: PiecewisePoly}."""

    order: int
    fields: dict
    problems: dict = field(default_factory=dict)

    def function(self, fld, key):
        key = Key(*key)
        f = self.fields[fld].get(key)
        if f is None:
            some = next(iter(self.fields[fld].values()), None)
            if some is None:
                raise KeyError(key)
            return PiecewisePoly.zero(some.f1, some.f2)
        return f


class _Recursion:
    """Builds orders and averaged sources from the order-0 macro state."""

    def __init__(self, cell, full_d1_orders=2):
        self.cell = cell
        self.mat = _Material.of(cell)
        self.f1, self.f2 = cell.fractions
        self.full_d1_orders = full_d1_orders
        one = PiecewisePoly.constant(1.0, 1.0, self.f1, self.f2)
        self.orders = {
            -1: {fld: {} for fld in FIELDS},
            0: {fld: {Key(MACRO[fld], 0, 0, 0): one} for fld in FIELDS},
        }
        self.problems = {}

    # stresses and fluxes --------------------------------------------------
    def _u(self, m, fld):
        return self.orders[m][fld] if m in self.orders else {}

    def _lay(self, exp, name):
        w = getattr(self.mat, name)
        return _layer(exp, w[0], w[1])

    def _relax(self, exp, alpha, alpha1):
        """(alpha + alpha1 d/dt) applied to ``exp``."""
        return _sum(self._lay(exp, alpha), self._lay(_shift(exp, t=1), alpha1))

    def sig12_nd(self, m):
        return self._lay(_sum(_shift(self._u(m, "u2"), d1=1), _shift(self._u(m, "u1"), d2=1)), "c1212")

    def sig12(self, m):
        return _sum(self.sig12_nd(m), self._lay(_deriv(self._u(m + 1, "u1")), "c1212"))

    def sig22_nd(self, m):
        return _sum(self._lay(_shift(self._u(m, "u2"), d2=1), "c2222"),
                    self._lay(_shift(self._u(m, "u1"), d1=1), "c1122"),
                    _neg(self._relax(self._u(m, "v"), "alpha22", "alpha1_22")))

    def sig22(self, m):
        return _sum(self.sig22_nd(m), self._lay(_deriv(self._u(m + 1, "u2")), "c2222"))

    def sig11(self, m):
        strain22 = _sum(_shift(self._u(m, "u2"), d2=1), _deriv(self._u(m + 1, "u2")))
        return _sum(self._lay(_shift(self._u(m, "u1"), d1=1), "c1111"),
                    self._lay(strain22, "c1122"),
                    _neg(self._relax(self._u(m, "v"), "alpha11", "alpha1_11")))

    def h2_nd(self, m):
        return self._lay(_shift(self._u(m, "v"), d2=1), "k22")

    def h2(self, m):
        return _sum(self.h2_nd(m), self._lay(_deriv(self._u(m + 1, "v")), "k22"))

    def h1(self, m):
        return self._lay(_shift(self._u(m, "v"), d1=1), "k11")

    # sources of the order-n balance ---------------------------------------
    def sources(self, n):
        """Volume sources S^(n) of the three balance equations."""
        m = n - 2
        if m < 0:
            return {fld: {} for fld in FIELDS}
        s1 = _sum(_shift(self.sig11(m), d1=1), _shift(self.sig12(m), d2=1),
                  _neg(self._lay(_shift(self._u(m, "u1"), t=2), "rho")))
        s2 = _sum(_shift(self.sig12(m), d1=1), _shift(self.sig22(m), d2=1),
                  _neg(self._lay(_shift(self._u(m, "u2"), t=2), "rho")))
        coupling = _sum(self._lay(_shift(self._u(m, "u1"), d1=1), "alpha11"),
                        self._lay(_sum(_shift(self._u(m, "u2"), d2=1),
                                       _deriv(self._u(m + 1, "u2"))), "alpha22"))
        sv = _sum(_shift(self.h1(m), d1=1), _shift(self.h2(m), d2=1),
                  _neg(_shift(coupling, t=1)),
                  _neg(self._lay(_shift(self._u(m, "v"), t=1), "p")),
                  _neg(self._lay(_shift(self._u(m, "v"), t=2), "p0")))
        return {"u1": s1, "u2": s2, "v": sv}

    def flux_sources(self, n):
        m = n - 1
        return {"u1": self.sig12_nd(m), "u2": self.sig22_nd(m), "v": self.h2_nd(m)}

    def averaged(self, n):
        """Cell means <S^(n)> per row and key (the order n-2 macro operator)."""
        src = self.sources(n)
        out = {}
        for fld in FIELDS:
            row = {}
            for k, f in src[fld].items():
                if n > self.full_d1_orders and k.d1 > 0:
                    continue
                row[k] = float(f.cell_mean())
            out[fld] = row
        return out

    def solve(self, n):
        """Solve every cell problem of order ``n`` and store the result."""
        src = self.sources(n)
        flux = self.flux_sources(n)
        diffusivity = {"u1": self.mat.c1212, "u2": self.mat.c2222, "v": self.mat.k22}
        max_d1 = 10 ** 6 if n <= self.full_d1_orders else 0
        zero = PiecewisePoly.zero(self.f1, self.f2)
        fields, problems = {}, {}
        for fld in FIELDS:
            s = _prune(src[fld], max_d1)
            b = _prune(flux[fld], max_d1)
            a1, a2 = diffusivity[fld]
            sol = {}
            for key in sorted(set(s) | set(b)):
                sk = s.get(key, zero)
                rhs = sk.cell_mean() - sk
                # zero mean by construction; strip rounding left by cancellation
                m = rhs.cell_mean()
                if m != 0.0:
                    rhs = rhs - PiecewisePoly.constant(m, m, self.f1, self.f2)
                prob = CellProblem1D(a1, a2, b.get(key, zero), rhs)
                sol[key] = solve_cell_problem(prob)
                problems[(fld, key)] = prob
            fields[fld] = sol
        self.orders[n] = fields
        self.problems.update({(n,) + k: v for k, v in problems.items()})
        return OrderSolution(n, fields, problems)


# --------------------------------------------------------------------------
# named perturbation functions (propagation along e2)

NAME_TABLE = {
    # order 1
    "N1_211": (1, "u2", Key("U1", 1, 0, 0)),
    "N1_222": (1, "u2", Key("U2", 0, 1, 0)),
    "N1_112": (1, "u1", Key("U1", 0, 1, 0)),
    "N1_121": (1, "u1", Key("U2", 1, 0, 0)),
    "Ntilde1_2": (1, "u2", Key("T", 0, 0, 0)),
    "Ntilde11_2": (1, "u2", Key("T", 0, 0, 1)),
    "M1_2": (1, "v", Key("T", 0, 1, 0)),
    # order 2
    "N2_1111": (2, "u1", Key("U1", 2, 0, 0)),
    "N2_2211": (2, "u2", Key("U2", 2, 0, 0)),
    "N2_2222": (2, "u2", Key("U2", 0, 2, 0)),
    "N2_1122": (2, "u1", Key("U1", 0, 2, 0)),
    "Ntilde2_11": (2, "u1", Key("T", 1, 0, 0)),
    "Ntilde2_22": (2, "u2", Key("T", 0, 1, 0)),
    "Ntilde21_11": (2, "u1", Key("T", 1, 0, 1)),
    "Ntilde21_22": (2, "u2", Key("T", 0, 1, 1)),
    "N22_11": (2, "u1", Key("U1", 0, 0, 2)),
    "N22_22": (2, "u2", Key("U2", 0, 0, 2)),
    "Mtilde21_11": (2, "v", Key("U1", 1, 0, 1)),
    "Mtilde21_22": (2, "v", Key("U2", 0, 1, 1)),
    "M21": (2, "v", Key("T", 0, 0, 1)),
    "M22_fn": (2, "v", Key("T", 0, 0, 2)),
    "M2_22": (2, "v", Key("T", 0, 2, 0)),
    # order 3
    "N3_22222": (3, "u2", Key("U2", 0, 3, 0)),
    "N3_11222": (3, "u1", Key("U1", 0, 3, 0)),
    "Ntilde3_222": (3, "u2", Key("T", 0, 2, 0)),
    "Ntilde31_222": (3, "u2", Key("T", 0, 2, 1)),
    "N32_222": (3, "u2", Key("U2", 0, 1, 2)),
    "N32_112": (3, "u1", Key("U1", 0, 1, 2)),
    "Ntt32_2": (3, "u2", Key("T", 0, 0, 2)),
    "Ntt33_2": (3, "u2", Key("T", 0, 0, 3)),
    "N31_222": (3, "u2", Key("U2", 0, 1, 1)),
    "Ntt31_2": (3, "u2", Key("T", 0, 0, 1)),
    "M3_222": (3, "v", Key("T", 0, 3, 0)),
    "Mtilde31_222": (3, "v", Key("U2", 0, 2, 1)),
    "M31_2": (3, "v", Key("T", 0, 1, 1)),
    "M32_2": (3, "v", Key("T", 0, 1, 2)),
    "Mtilde33_2": (3, "v", Key("U2", 0, 0, 3)),
}

FUNCTION_NAMES = tuple(NAME_TABLE)


def _named(solution, order):
    return {name: solution.function(fld, key)
            for name, (o, fld, key) in NAME_TABLE.items() if o == order}


@dataclass
class PerturbationSet:
    """Named perturbation functions of orders 1-3 plus the raw expansions.

    ``averaged[n]`` holds ``<S^(n)>`` for ``n = 2, 3, 4`` as
    ``{row: {Key: value}}`` with rows ``u1, u2, v``. ``problems`` maps
    ``(order, field, Key)`` to the :class:`CellProblem1D` that was solved.
    """

    functions: dict
    orders: dict
    averaged: dict
    fractions: tuple
    problems: dict = field(default_factory=dict)

    def problem_of(self, name):
        """The cell problem whose solution is the named function."""
        self[name]  # raises UnknownFunction
        order, fld, key = NAME_TABLE[name]
        return self.problems[(order, fld, key)]

    def __getitem__(self, name):
        try:
            return self.functions[name]
        except KeyError:
            raise UnknownFunction(
                f"unknown perturbation function {name!r}; valid names: "
                + ", ".join(sorted(self.functions))) from None

    def __contains__(self, name):
        return name in self.functions

    @property
    def names(self):
        return tuple(self.functions)


def solve_order1(cell):
    """Order-1 functions of ``cell`` (an :class:`OrderSolution` with names)."""
    rec = _Recursion(cell)
    sol = rec.solve(1)
    sol.named = _named(sol, 1)
    sol.recursion = rec
    return sol


def solve_order2(cell, order1):
    rec = getattr(order1, "recursion", None) or _rebuild(cell, order1)
    sol = rec.solve(2)
    sol.named = _named(sol, 2)
    sol.recursion = rec
    return sol


def solve_order3(cell, order1, order2):
    rec = getattr(order2, "recursion", None) or _rebuild(cell, order1, order2)
    sol = rec.solve(3)
    sol.named = _named(sol, 3)
    sol.recursion = rec
    return sol


def _rebuild(cell, *solutions):
    rec = _Recursion(cell)
    for s in solutions:
        rec.orders[s.order] = s.fields
    return rec


def perturbation_set(cell):
    """Solve orders 1-3 and collect named functions and averaged sources."""
    o1 = solve_order1(cell)
    o2 = solve_order2(cell, o1)
    o3 = solve_order3(cell, o1, o2)
    rec = o3.recursion
    functions = {}
    for s in (o1, o2, o3):
        functions.update(s.named)
    averaged = {n: rec.averaged(n) for n in (2, 3, 4)}
    orders = {n: rec.orders[n] for n in (0, 1, 2, 3)}
    return PerturbationSet(functions, orders, averaged, cell.fractions, dict(rec.problems))


def reconstruct_microfields(pset, amplitudes, omega, k2, epsilon, n=101, x2=0.0):
    """Micro fields of a plane macro wave sampled over one cell.

    The macro state is ``var(x2, t) = amplitude * exp(i k2 x2 + s t)`` with
    ``s = i omega`` and ``amplitudes = {'U1': .., 'U2': .., 'T': ..}``. The
    micro field is the two-scale expansion truncated after ``eps^2`` at the
    macro point ``x2``.

    Returns
    -------
    xi : ndarray
        Cell coordinate of the samples.
    fields : dict
        Complex samples for ``u1``, ``u2`` and ``v``.
    """
    s = 1j * omega
    phase = np.exp(1j * k2 * x2)
    out = {}
    xi = None
    for fld in FIELDS:
        total = None
        for order in (0, 1, 2):
            for key, f in pset.orders[order][fld].items():
                if key.d1 > 0:
                    continue
                amp = amplitudes.get(key.var, 0.0)
                if amp == 0.0:
                    continue
                factor = (epsilon ** order) * amp * phase * (1j * k2) ** key.d2 * s ** key.t
                xi, vals = f.sample(n)
                term = factor * vals
                total = term if total is None else total + term
        if total is None:
            xi, _ = PiecewisePoly.zero(*pset.fractions).sample(n)
            total = np.zeros(2 * n, dtype=complex)
        out[fld] = total
    return xi, out
