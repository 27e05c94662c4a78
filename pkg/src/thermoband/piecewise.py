"""Exact per-layer polynomials on the periodic unit cell.

Each layer carries its own centered coordinate: layer 1 spans
``[-f1/2, f1/2]`` and layer 2 spans ``[-f2/2, f2/2]`` where ``f1, f2`` are
the layer fractions. On the global cell coordinate ``xi`` in ``[0, 1)``
layer 1 occupies ``[0, f1]`` and layer 2 occupies ``[f1, 1]``.
"""

from dataclasses import dataclass
import csv
import io

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import PartitionMismatch


def _trim(c):
    c = np.atleast_1d(np.asarray(c))
    if c.dtype.kind not in "fc":
        c = c.astype(float)
    n = c.shape[0]
    while n > 1 and c[n - 1] == 0:
        n -= 1
    return c[:n].copy()


@dataclass(frozen=True, eq=False)
class PiecewisePoly:
    """Polynomial ``coeffs1`` on layer 1 and ``coeffs2`` on layer 2.

    Coefficients are stored by ascending power of the local coordinate.
    """

    coeffs1: np.ndarray
    coeffs2: np.ndarray
    f1: float
    f2: float

    def __post_init__(self):
        object.__setattr__(self, "coeffs1", _trim(self.coeffs1))
        object.__setattr__(self, "coeffs2", _trim(self.coeffs2))

    # construction -------------------------------------------------------
    @classmethod
    def constant(cls, v1, v2, f1, f2):
        return cls(np.array([v1]), np.array([v2]), f1, f2)

    @classmethod
    def zero(cls, f1, f2):
        return cls.constant(0.0, 0.0, f1, f2)

    @classmethod
    def local_coordinate(cls, f1, f2):
        """The centered coordinate itself on both layers."""
        return cls(np.array([0.0, 1.0]), np.array([0.0, 1.0]), f1, f2)

    # basic properties ---------------------------------------------------
    @property
    def degree(self):
        return max(self.coeffs1.shape[0], self.coeffs2.shape[0]) - 1

    @property
    def half_widths(self):
        return 0.5 * self.f1, 0.5 * self.f2

    @property
    def is_complex(self):
        return self.coeffs1.dtype.kind == "c" or self.coeffs2.dtype.kind == "c"

    def _check(self, other):
        if self.f1 != other.f1 or self.f2 != other.f2:
            raise PartitionMismatch(
                f"layer fractions differ: ({self.f1}, {self.f2}) vs ({other.f1}, {other.f2})")

    def _lift(self, other):
        if isinstance(other, PiecewisePoly):
            self._check(other)
            return other
        return PiecewisePoly.constant(other, other, self.f1, self.f2)

    # algebra ------------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        return PiecewisePoly(P.polyadd(self.coeffs1, other.coeffs1),
                             P.polyadd(self.coeffs2, other.coeffs2), self.f1, self.f2)

    __radd__ = __add__

    def __neg__(self):
        return PiecewisePoly(-self.coeffs1, -self.coeffs2, self.f1, self.f2)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        return PiecewisePoly(P.polymul(self.coeffs1, other.coeffs1),
                             P.polymul(self.coeffs2, other.coeffs2), self.f1, self.f2)

    __rmul__ = __mul__

    def scale(self, factor):
        return PiecewisePoly(self.coeffs1 * factor, self.coeffs2 * factor, self.f1, self.f2)

    def layer_scale(self, w1, w2):
        """Multiply layer 1 by ``w1`` and layer 2 by ``w2``."""
        return PiecewisePoly(self.coeffs1 * w1, self.coeffs2 * w2, self.f1, self.f2)

    # calculus -----------------------------------------------------------
    def derivative(self):
        return PiecewisePoly(P.polyder(self.coeffs1), P.polyder(self.coeffs2), self.f1, self.f2)

    def antiderivative(self):
        """Per-layer antiderivative vanishing at each layer center."""
        return PiecewisePoly(P.polyint(self.coeffs1), P.polyint(self.coeffs2), self.f1, self.f2)

    def layer_integrals(self):
        h1, h2 = self.half_widths
        i1 = P.polyint(self.coeffs1)
        i2 = P.polyint(self.coeffs2)
        return (P.polyval(h1, i1) - P.polyval(-h1, i1),
                P.polyval(h2, i2) - P.polyval(-h2, i2))

    def cell_mean(self):
        """Exact average over the unit cell (period length 1)."""
        a, b = self.layer_integrals()
        return (a + b) / (self.f1 + self.f2)

    # evaluation ---------------------------------------------------------
    def edge_values(self):
        """(p1(-h1), p1(h1), p2(-h2), p2(h2))."""
        h1, h2 = self.half_widths
        return (P.polyval(-h1, self.coeffs1), P.polyval(h1, self.coeffs1),
                P.polyval(-h2, self.coeffs2), P.polyval(h2, self.coeffs2))

    def interface_jump(self, weight1=1.0, weight2=1.0):
        """Jumps of the weighted function at the two interfaces.

        Each jump is the value just below the interface minus the value just
        above it, walking along increasing ``xi``: the internal interface has
        layer 1 below, the periodic one has layer 2 below.
        """
        lo1, hi1, lo2, hi2 = self.edge_values()
        return weight1 * hi1 - weight2 * lo2, weight2 * hi2 - weight1 * lo1

    def local(self, layer, x):
        coeffs = self.coeffs1 if layer == 1 else self.coeffs2
        return P.polyval(np.asarray(x), coeffs)

    def __call__(self, xi):
        """Evaluate on the global cell coordinate (taken modulo 1)."""
        xi = np.mod(np.asarray(xi, dtype=float), self.f1 + self.f2)
        in1 = xi < self.f1
        x1 = xi - 0.5 * self.f1
        x2 = xi - self.f1 - 0.5 * self.f2
        return np.where(in1, P.polyval(x1, self.coeffs1), P.polyval(x2, self.coeffs2))

    def sample(self, n=101):
        """Values on ``n`` points per layer including both layer edges.

        Interface points appear twice, once per side, so that jumps show.
        """
        h1, h2 = self.half_widths
        x1 = np.linspace(-h1, h1, n)
        x2 = np.linspace(-h2, h2, n)
        xi = np.concatenate([x1 + h1, x2 + self.f1 + h2])
        val = np.concatenate([P.polyval(x1, self.coeffs1), P.polyval(x2, self.coeffs2)])
        return xi, val

    def to_csv(self, n=101, name="value"):
        xi, val = self.sample(n)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["xi2", name])
        for x, v in zip(xi, val):
            w.writerow([format_float(x), format_float(np.real(v))])
        return buf.getvalue()

    def allclose(self, other, atol=0.0):
        self._check(other)
        d = self - other
        return max(np.max(np.abs(d.coeffs1)), np.max(np.abs(d.coeffs2))) <= atol

    def __repr__(self):
        return (f"PiecewisePoly(layer1={self.coeffs1.tolist()}, "
                f"layer2={self.coeffs2.tolist()}, f=({self.f1}, {self.f2}))")


def format_float(x):
    """17 significant digits, round-trip exact."""
    return format(float(x), ".17g")
