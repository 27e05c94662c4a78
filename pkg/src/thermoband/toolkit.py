"""Frequency sweeps, branch tracking, zone folding and method comparison."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math
import os
import warnings

import numpy as np
from scipy.optimize import linear_sum_assignment

from .cell_problems import perturbation_set
from .effective import compute_effective
from .errors import BranchCountMismatch, SolverError
from .floquet import fb_spectrum, fold
from .material import nondimensionalize
from .homogenized import assemble_gamma, second_order_roots, zeroth_order_roots

METHODS = ("hom0", "hom2", "fb")
JUMP_TOL = 0.5
MAX_HALVINGS = 6


def thread_count():
    """Worker threads for sweeps, capped by ``THERMOBAND_THREADS``."""
    raw = os.environ.get("THERMOBAND_THREADS", "").strip()
    cap = os.cpu_count() or 1
    if raw:
        try:
            cap = max(1, int(raw))
        except ValueError:
            cap = 1
    return cap


@dataclass
class Branch:
    """One dispersion curve: ordered samples of ``(omega_bar, k_bar)``."""

    branch_id: int
    omega_bar: list = field(default_factory=list)
    k_bar: list = field(default_factory=list)
    residual: list = field(default_factory=list)
    physical: list = field(default_factory=list)
    refined: list = field(default_factory=list)

    def arrays(self):
        return (np.asarray(self.omega_bar, dtype=float), np.asarray(self.k_bar, dtype=complex))


@dataclass
class DispersionCurveSet:
    method: str
    block: str
    branches: list
    samples: list
    warnings: list = field(default_factory=list)

    def roots_at(self, omega_bar):
        for s in self.samples:
            if s.omega_bar == omega_bar:
                return s.roots
        raise KeyError(omega_bar)


class SpectrumEngine:
    """Per-frequency root computation for one cell; coefficients are cached.

    Roots are computed on the nondimensionalized cell, which leaves
    ``(omega_bar, k_bar)`` unchanged and keeps the arithmetic well scaled.
    """

    def __init__(self, cell):
        self.cell = nondimensionalize(cell)
        self._tensors = None

    @property
    def tensors(self):
        if self._tensors is None:
            self._tensors = compute_effective(self.cell, perturbation_set(self.cell))
        return self._tensors

    def sample(self, method, block, omega_bar):
        cell = self.cell
        try:
            if method == "fb":
                return fb_spectrum(cell, omega_bar, block)
            omega = omega_bar * cell.omega_scale
            stack = assemble_gamma(self.tensors, omega, block)
            if method == "hom0":
                return zeroth_order_roots(stack, cell.epsilon, omega_bar)
            if method == "hom2":
                return second_order_roots(stack, cell.epsilon, cell.epsilon, omega_bar)
        except SolverError as exc:
            raise type(exc)(f"{exc} (omega_bar={omega_bar!r}, method={method})") from exc
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def _distance(method, a, b):
    d = np.asarray(a)[:, None] - np.asarray(b)[None, :]
    if method == "fb":
        d = fold(d)
    return np.abs(d)


def _match(method, prev, cur, mask=None):
    """Assignment of current roots to previous ones, and the largest jump.

    ``mask`` restricts the jump to selected previous roots (spurious roots
    of the truncated higher-order model move fast and are not tracked
    for refinement).
    """
    cost = _distance(method, prev, cur)
    rows, cols = linear_sum_assignment(cost)
    scale = np.maximum(1.0, np.abs(np.asarray(prev))[rows])
    jumps = cost[rows, cols] / scale
    if mask is not None:
        jumps = jumps[np.asarray(mask)[rows]]
    jump = float(jumps.max()) if jumps.size else 0.0
    return rows, cols, jump


def sweep(cell, method, omega_range, n_samples, block="coupled", engine=None,
          jump_tol=JUMP_TOL, threads=None):
    """Roots on a uniform grid of ``omega_bar`` followed by branch tracking.

    Consecutive samples are matched by minimum-cost assignment on complex
    distance (distance modulo the zone width for ``fb``). When the largest
    matched jump, relative to ``max(1, |k|)``, exceeds ``jump_tol`` the interval is halved, up to
    ``MAX_HALVINGS`` times, and the refined samples join the branches.
    """
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    a, b = omega_range
    if not a < b:
        raise ValueError("omega range must satisfy start < end")
    engine = engine or SpectrumEngine(cell)
    if method != "fb":
        engine.tensors  # build once before threading
    grid = [float(w) for w in np.linspace(a, b, n_samples)]
    threads = thread_count() if threads is None else threads
    caught = []
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        if threads > 1:
            with ThreadPoolExecutor(max_workers=min(threads, n_samples)) as pool:
                samples = list(pool.map(lambda w: engine.sample(method, block, w), grid))
        else:
            samples = [engine.sample(method, block, w) for w in grid]
        ordered = [samples[0]]
        refined_flags = [False]
        for cur in samples[1:]:
            _refine(engine, method, block, ordered, refined_flags, cur, jump_tol, 0)
        caught = sorted({str(w.message) for w in rec})

    branches = _track(method, ordered, refined_flags)
    return DispersionCurveSet(method, block, branches, ordered, caught)


def _refine(engine, method, block, ordered, flags, cur, jump_tol, depth):
    prev = ordered[-1]
    if prev.roots.size == cur.roots.size and prev.roots.size:
        _, _, jump = _match(method, prev.roots, cur.roots, prev.physical)
        if jump > jump_tol and depth < MAX_HALVINGS:
            mid = engine.sample(method, block, 0.5 * (prev.omega_bar + cur.omega_bar))
            _refine(engine, method, block, ordered, flags, mid, jump_tol, depth + 1)
            flags[-1] = True
            _refine(engine, method, block, ordered, flags, cur, jump_tol, depth + 1)
            return
    ordered.append(cur)
    flags.append(False)


def _track(method, samples, flags):
    branches = []
    current = []
    for i, s in enumerate(samples):
        if i == 0 or not current or len(current) != s.roots.size:
            current = []
            for j in range(s.roots.size):
                br = Branch(len(branches))
                branches.append(br)
                current.append(br)
            order = np.arange(s.roots.size)
        else:
            prev = np.array([br.k_bar[-1] for br in current], dtype=complex)
            rows, cols, _ = _match(method, prev, s.roots)
            order = np.empty(s.roots.size, dtype=int)
            order[rows] = cols
        for br, j in zip(current, order):
            br.omega_bar.append(s.omega_bar)
            br.k_bar.append(complex(s.roots[j]))
            br.residual.append(float(s.residuals[j]))
            br.physical.append(bool(s.physical[j]))
            br.refined.append(bool(flags[i]))
    return branches


def zone_copies(curves, zones):
    """Translated copies ``k_bar + 2 pi m`` for ``0 < |m| <= zones`` (fb only)."""
    out = []
    if curves.method != "fb" or zones <= 0:
        return out
    for br in curves.branches:
        for m in range(-zones, zones + 1):
            if m == 0:
                continue
            shifted = Branch(br.branch_id, list(br.omega_bar),
                             [k + 2.0 * math.pi * m for k in br.k_bar],
                             list(br.residual), list(br.physical), list(br.refined))
            out.append((m, shifted))
    return out


@dataclass
class BranchError:
    ref_branch: int
    test_branch: int
    max_rel: float
    mean_rel: float
    n_points: int


@dataclass
class ComparisonReport:
    method_ref: str
    method_test: str
    block: str
    window: tuple
    errors: list
    warnings: list = field(default_factory=list)

    @property
    def max_error(self):
        return max((e.max_rel for e in self.errors), default=0.0)

    def table(self):
        lines = [f"{self.method_test} vs {self.method_ref} ({self.block}), "
                 f"omega_bar in [{self.window[0]:g}, {self.window[1]:g}]",
                 f"{'ref':>5} {'test':>5} {'max rel err':>14} {'mean rel err':>14} {'points':>7}"]
        for e in self.errors:
            lines.append(f"{e.ref_branch:>5} {e.test_branch:>5} {e.max_rel:>14.6e} "
                         f"{e.mean_rel:>14.6e} {e.n_points:>7}")
        for w in self.warnings:
            lines.append(f"warning: {w}")
        return "\n".join(lines)


def _branch_points(br, window):
    w, k = br.arrays()
    mask = (w >= window[0]) & (w <= window[1]) & (np.abs(k.real) <= math.pi)
    return {float(x): y for x, y in zip(w[mask], k[mask])}


def compare(ref, test, omega_window):
    """Relative error of ``test`` branches against matched ``ref`` branches.

    Branches are paired by minimum total mean distance over the shared
    frequencies of the window; only samples with ``|Re k_bar| <= pi`` count.
    Unequal branch counts are reported as warnings.
    """
    warn = []
    if ref.block != test.block:
        raise ValueError("compare needs curve sets of the same block")
    rp = [_branch_points(b, omega_window) for b in ref.branches]
    tp = [_branch_points(b, omega_window) for b in test.branches]
    rp_ids = [i for i, p in enumerate(rp) if p]
    tp_ids = [i for i, p in enumerate(tp) if p]
    if len(rp_ids) != len(tp_ids):
        warn.append(str(BranchCountMismatch(
            f"{len(rp_ids)} reference branches vs {len(tp_ids)} test branches")))
    cost = np.full((len(rp_ids), len(tp_ids)), np.inf)
    for a, i in enumerate(rp_ids):
        for b, j in enumerate(tp_ids):
            shared = sorted(set(rp[i]) & set(tp[j]))
            if shared:
                cost[a, b] = float(np.mean([abs(tp[j][w] - rp[i][w]) for w in shared]))
    finite = np.where(np.isfinite(cost), cost, 1e300)
    errors = []
    if finite.size:
        rows, cols = linear_sum_assignment(finite)
        for a, b in zip(rows, cols):
            if not np.isfinite(cost[a, b]):
                continue
            i, j = rp_ids[a], tp_ids[b]
            shared = sorted(set(rp[i]) & set(tp[j]))
            rel = [abs(tp[j][w] - rp[i][w]) / abs(rp[i][w]) for w in shared if rp[i][w] != 0]
            if not rel:
                rel = [0.0]
            errors.append(BranchError(i, j, float(max(rel)), float(np.mean(rel)), len(shared)))
    return ComparisonReport(ref.method, test.method, ref.block, tuple(omega_window), errors, warn)


def acoustic_wavenumber(tensors, block, omega_bar, cell):
    """Long-wave estimate ``k_bar = omega_bar * eps * sqrt(rho / C)`` of the
    acoustic branch, used to pick it out of a root set."""
    coeffs = tensors.shear if block == "shear" else tensors.coupled
    omega = omega_bar * cell.omega_scale
    return omega * math.sqrt(coeffs.n22 / coeffs.n2) * cell.epsilon


def pick_acoustic(roots, k_guess):
    roots = np.asarray(roots, dtype=complex)
    cand = roots[roots.real > 0] if np.any(roots.real > 0) else roots
    return complex(cand[np.argmin(np.abs(cand - k_guess))])


def acoustic_branch_error(cell, method, omegas, block="coupled", engine=None):
    """Relative error of ``method`` against Floquet-Bloch on the acoustic branch.

    Returns the per-frequency errors; the acoustic root is the one with
    positive real part closest to the long-wave estimate.
    """
    engine = engine or SpectrumEngine(cell)
    cell = engine.cell
    errs = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for w in omegas:
            guess = acoustic_wavenumber(engine.tensors, block, w, cell)
            k_fb = pick_acoustic(engine.sample("fb", block, w).roots, guess)
            k_m = pick_acoustic(engine.sample(method, block, w).roots, guess)
            errs.append(abs(k_m - k_fb) / abs(k_fb))
    return np.asarray(errs)


def thermal_branch(roots, k_acoustic):
    """The decaying (``Im > 0``) root farthest from the acoustic pair."""
    roots = np.asarray(roots, dtype=complex)
    far = roots[np.abs(np.abs(roots) - abs(k_acoustic)) > 1e-9 * max(1.0, abs(k_acoustic))]
    far = far[far.imag > 0] if np.any(far.imag > 0) else far
    return complex(far[np.argmax(np.abs(far.imag))])
