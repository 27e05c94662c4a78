"""Command-line entry point: ``thermoband <command> --config run.ini``.

Commands
--------
cell-functions NAME   CSV samples (and SVG plot) of one perturbation function
spectrum              dispersion curves per method and block
compare               error of hom0/hom2 against the Floquet-Bloch reference
tensors               averaged coefficients and first-order constants

Exit codes: 0 success, 2 invalid input, 3 solver failure.
"""

import argparse
import csv
import io
import os
import sys
from dataclasses import fields, replace

import numpy as np

from . import svg
from .cell_problems import perturbation_set
from .config import (load_config, parse_block, parse_formats, parse_methods,
                     parse_omega)
from .effective import compute_effective, first_order_constitutive
from .errors import SolverError, ValidationError
from .piecewise import format_float
from .toolkit import SpectrumEngine, compare, sweep, zone_copies

EXIT_OK, EXIT_INVALID, EXIT_SOLVER = 0, 2, 3


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_float(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _outdir(cfg):
    os.makedirs(cfg.directory, exist_ok=True)
    return cfg.directory


# ------------------------------------------------------------------ commands


def cmd_cell_functions(cfg, name):
    """Write ``<name>.csv`` and optionally ``<name>.svg``; return the paths."""
    pset = perturbation_set(cfg.cell)
    fn = pset[name]
    out = _outdir(cfg)
    paths = []
    if "csv" in cfg.formats:
        p = os.path.join(out, f"{name}.csv")
        _write(p, fn.to_csv(cfg.samples, name))
        paths.append(p)
    if "svg" in cfg.formats:
        xi, vals = fn.sample(cfg.samples)
        vals = np.real(vals)
        # one polyline per layer
        n = cfg.samples
        segs = [([float(x) for x in xi[:n]], [float(v) for v in vals[:n]]),
                ([float(x) for x in xi[n:]], [float(v) for v in vals[n:]])]
        panel = svg.Panel("xi2", name, [svg.Series(name, segs)])
        p = os.path.join(out, f"{name}.svg")
        _write(p, svg.render([panel], f"{name} over the unit cell"))
        paths.append(p)
    return paths


SPECTRUM_HEADER = ("method", "block", "branch", "omega_bar", "re_k", "im_k", "residual")


def spectrum_rows(curves, zones=0):
    rows = []
    for br in curves.branches:
        for w, k, r in zip(br.omega_bar, br.k_bar, br.residual):
            rows.append((curves.method, curves.block, str(br.branch_id), float(w),
                         float(k.real), float(k.imag), float(r)))
    for m, br in zone_copies(curves, zones):
        label = f"{br.branch_id}{m:+d}"
        for w, k, r in zip(br.omega_bar, br.k_bar, br.residual):
            rows.append((curves.method, curves.block, label, float(w),
                         float(k.real), float(k.imag), float(r)))
    return rows


def _run_sweeps(cfg, methods, blocks):
    engine = SpectrumEngine(cfg.cell)
    out = {}
    for block in blocks:
        for method in methods:
            out[(method, block)] = sweep(cfg.cell, method, (cfg.omega.start, cfg.omega.stop),
                                         cfg.omega.samples, block, engine=engine)
    return out


def _segments(br, part):
    """Split a branch into polylines wherever a sample is non-physical."""
    segs, xs, ys = [], [], []
    for w, k, ok in zip(br.omega_bar, br.k_bar, br.physical):
        if ok:
            xs.append(float(w))
            ys.append(float(k.real if part == "re" else k.imag))
        elif xs:
            segs.append((xs, ys))
            xs, ys = [], []
    if xs:
        segs.append((xs, ys))
    return segs


def spectrum_svg(curve_sets, block, zones=0):
    styles = {"fb": ("#1f77b4", False), "hom0": ("#d62728", True), "hom2": ("#2ca02c", True)}
    panels = []
    for part, label in (("re", "Re k_bar"), ("im", "Im k_bar")):
        series = []
        for cs in curve_sets:
            color, dashed = styles.get(cs.method, ("#000000", False))
            segs = []
            for br in cs.branches:
                segs.extend(_segments(br, part))
            for _, br in zone_copies(cs, zones):
                segs.extend(_segments(br, part))
            series.append(svg.Series(cs.method, segs, color, dashed))
        panels.append(svg.Panel("omega_bar", label, series))
    return svg.render(panels, f"{block} block")


def cmd_spectrum(cfg):
    sweeps = _run_sweeps(cfg, cfg.methods, cfg.blocks)
    out = _outdir(cfg)
    paths = []
    for block in cfg.blocks:
        sets = [sweeps[(m, block)] for m in cfg.methods]
        if "csv" in cfg.formats:
            for cs in sets:
                p = os.path.join(out, f"spectrum_{cs.method}_{block}.csv")
                _write(p, _csv_text(SPECTRUM_HEADER, spectrum_rows(cs, cfg.zones)))
                paths.append(p)
        if "svg" in cfg.formats:
            p = os.path.join(out, f"spectrum_{block}.svg")
            _write(p, spectrum_svg(sets, block, cfg.zones))
            paths.append(p)
        for cs in sets:
            for w in cs.warnings:
                print(f"warning [{cs.method}/{block}]: {w}", file=sys.stderr)
    return paths


COMPARE_HEADER = ("ref_method", "test_method", "block", "ref_branch", "test_branch",
                  "max_rel_error", "mean_rel_error", "points")


def cmd_compare(cfg):
    tests = [m for m in cfg.methods if m != "fb"] or ["hom0", "hom2"]
    sweeps = _run_sweeps(cfg, ["fb"] + tests, cfg.blocks)
    window = (cfg.omega.start, cfg.omega.stop)
    out = _outdir(cfg)
    rows, tables = [], []
    for block in cfg.blocks:
        for m in tests:
            rep = compare(sweeps[("fb", block)], sweeps[(m, block)], window)
            tables.append(rep.table())
            for e in rep.errors:
                rows.append(("fb", m, block, str(e.ref_branch), str(e.test_branch),
                             float(e.max_rel), float(e.mean_rel), str(e.n_points)))
            for w in rep.warnings:
                print(f"warning [{m}/{block}]: {w}", file=sys.stderr)
    paths = []
    if "csv" in cfg.formats:
        p = os.path.join(out, "compare.csv")
        _write(p, _csv_text(COMPARE_HEADER, rows))
        paths.append(p)
    p = os.path.join(out, "compare.txt")
    _write(p, "\n\n".join(tables) + "\n")
    paths.append(p)
    print("\n\n".join(tables))
    return paths


def cmd_tensors(cfg):
    tensors = compute_effective(cfg.cell, perturbation_set(cfg.cell))
    rows = [(name, float(v)) for name, v in tensors.rows()]
    const = first_order_constitutive(tensors)
    rows += [(f"first_order.{f.name}", float(getattr(const, f.name))) for f in fields(const)]
    out = _outdir(cfg)
    p = os.path.join(out, "tensors.csv")
    _write(p, _csv_text(("name", "value"), rows))
    return [p]


# ---------------------------------------------------------------------- main


def build_parser():
    ap = argparse.ArgumentParser(prog="thermoband", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="INI run configuration")
        p.add_argument("--method", help="comma-separated subset of fb,hom0,hom2")
        p.add_argument("--block", help="shear, coupled or both")
        p.add_argument("--omega", help="frequency grid start:stop:samples (dimensionless)")
        p.add_argument("--zones", type=int, help="extra Brillouin-zone copies of fb branches")
        p.add_argument("--out", help="output directory")
        p.add_argument("--format", help="comma-separated subset of csv,svg")

    p = sub.add_parser("cell-functions", help="sample one perturbation function")
    p.add_argument("name", nargs="?", help="function name, e.g. M2_22")
    p.add_argument("--samples", type=int, help="points per layer")
    common(p)
    for name, text in (("spectrum", "dispersion curves"), ("compare", "method comparison"),
                       ("tensors", "averaged coefficients")):
        common(sub.add_parser(name, help=text))
    return ap


def _apply_overrides(cfg, args):
    kw = {}
    if args.method is not None:
        kw["methods"] = parse_methods(args.method)
    if args.block is not None:
        kw["block"] = parse_block(args.block)
    if args.omega is not None:
        kw["omega"] = parse_omega(args.omega)
    if args.zones is not None:
        if args.zones < 0:
            raise ValidationError("zones must be >= 0")
        kw["zones"] = args.zones
    if args.out is not None:
        kw["directory"] = args.out
    if args.format is not None:
        kw["formats"] = parse_formats(args.format)
    if getattr(args, "samples", None) is not None:
        if args.samples < 2:
            raise ValidationError("samples must be >= 2")
        kw["samples"] = args.samples
    if getattr(args, "name", None):
        kw["function"] = args.name
    return replace(cfg, **kw)


def run(argv=None):
    args = build_parser().parse_args(argv)
    cfg = _apply_overrides(load_config(args.config), args)
    if args.command == "cell-functions":
        if not cfg.function:
            raise ValidationError("cell-functions needs a function name")
        return cmd_cell_functions(cfg, cfg.function)
    if args.command == "spectrum":
        return cmd_spectrum(cfg)
    if args.command == "compare":
        return cmd_compare(cfg)
    return cmd_tensors(cfg)


def main(argv=None):
    try:
        paths = run(argv)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    for p in paths:
        print(p)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
