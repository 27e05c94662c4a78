"""INI run configuration.

Sections::

    [cell]     s1, s2, theta0, plane        (dimensional input)
    [phase1]   c1111 c2222 c1122 c1212 alpha11 alpha22 tau0 tau1 rho k11 k22 p
               (or young + poisson in place of the four moduli, mapped
               through ``plane`` = strain | stress)
    [phase2]   same keys as [phase1]
    [ratios]   dimensionless caption groups (replaces [cell]/[phase*])
    [run]      methods, block, omega, zones, function, samples
    [output]   directory, formats

``alpha11`` and ``k11`` default to ``alpha22`` and ``k22``. Unknown
sections or keys raise :class:`ValidationError`.
"""

import configparser
from dataclasses import dataclass, fields, replace

from .errors import ValidationError
from .material import (DimensionlessGroups, LayeredCell, PhaseProperties, from_ratios,
                       isotropic_moduli, plane_moduli, validate)
from .toolkit import METHODS

BLOCKS = ("shear", "coupled", "both")
FORMATS = ("csv", "svg")
PHASE_KEYS = tuple(f.name for f in fields(PhaseProperties))
MODULI_KEYS = ("c1111", "c2222", "c1122", "c1212")
ISOTROPIC_KEYS = ("young", "poisson")
CELL_KEYS = ("s1", "s2", "theta0", "plane")
RUN_KEYS = ("methods", "block", "omega", "zones", "function", "samples")
OUTPUT_KEYS = ("directory", "formats")
SECTIONS = ("cell", "phase1", "phase2", "ratios", "run", "output")


@dataclass(frozen=True)
class OmegaRange:
    start: float
    stop: float
    samples: int


@dataclass(frozen=True)
class RunConfig:
    cell: LayeredCell
    methods: tuple = ("fb", "hom0", "hom2")
    block: str = "both"
    omega: OmegaRange = OmegaRange(0.01, 3.0, 200)
    zones: int = 0
    function: str = ""
    samples: int = 101
    directory: str = "out"
    formats: tuple = ("csv",)

    @property
    def blocks(self):
        return ("shear", "coupled") if self.block == "both" else (self.block,)


def parse_omega(text):
    """``'a:b:n'`` to :class:`OmegaRange`."""
    parts = [p.strip() for p in str(text).split(":")]
    if len(parts) != 3:
        raise ValidationError(f"omega range must be 'start:stop:samples', got {text!r}")
    try:
        rng = OmegaRange(float(parts[0]), float(parts[1]), int(parts[2]))
    except ValueError as exc:
        raise ValidationError(f"bad omega range {text!r}: {exc}") from None
    if not rng.start < rng.stop:
        raise ValidationError("omega range start must be < stop")
    if rng.start < 0.0:
        raise ValidationError("omega range start must be >= 0")
    if rng.samples < 2:
        raise ValidationError("omega range needs at least 2 samples")
    return rng


def parse_list(text):
    return tuple(p.strip() for p in str(text).replace(";", ",").split(",") if p.strip())


def parse_methods(text):
    methods = parse_list(text)
    if not methods:
        raise ValidationError("method list is empty")
    for m in methods:
        if m not in METHODS:
            raise ValidationError(f"unknown method {m!r}; expected one of {', '.join(METHODS)}")
    return methods


def parse_block(text):
    if text not in BLOCKS:
        raise ValidationError(f"unknown block {text!r}; expected one of {', '.join(BLOCKS)}")
    return text


def parse_formats(text):
    formats = parse_list(text)
    if not formats:
        raise ValidationError("format list is empty")
    for f in formats:
        if f not in FORMATS:
            raise ValidationError(f"unknown output format {f!r}; expected csv and/or svg")
    return formats


def _float(section, key, value):
    try:
        return float(value)
    except ValueError:
        raise ValidationError(f"[{section}] {key} must be a number, got {value!r}") from None


def _int(section, key, value):
    try:
        return int(value)
    except ValueError:
        raise ValidationError(f"[{section}] {key} must be an integer, got {value!r}") from None


def _check_keys(parser, section, allowed):
    if not parser.has_section(section):
        return {}
    items = dict(parser.items(section))
    unknown = sorted(set(items) - set(allowed))
    if unknown:
        raise ValidationError(f"unknown key(s) in [{section}]: {', '.join(unknown)}")
    return items


def _phase(items, name, plane):
    vals = {k: _float(name, k, v) for k, v in items.items()}
    if any(k in vals for k in ISOTROPIC_KEYS):
        if any(k in vals for k in MODULI_KEYS):
            raise ValidationError(f"[{name}] give either young/poisson or c-moduli, not both")
        if not all(k in vals for k in ISOTROPIC_KEYS):
            raise ValidationError(f"[{name}] needs both young and poisson")
        e_t, nu_t = plane_moduli(vals.pop("young"), vals.pop("poisson"), plane)
        vals.update(zip(MODULI_KEYS, isotropic_moduli(e_t, nu_t)))
    vals.setdefault("alpha11", vals.get("alpha22", 0.0))
    vals.setdefault("k11", vals.get("k22", 0.0))
    vals.setdefault("tau0", 0.0)
    vals.setdefault("tau1", 0.0)
    missing = [k for k in PHASE_KEYS if k not in vals]
    if missing:
        raise ValidationError(f"[{name}] missing key(s): {', '.join(missing)}")
    return PhaseProperties(**{k: vals[k] for k in PHASE_KEYS})


def build_cell(parser):
    ratios = _check_keys(parser, "ratios", DimensionlessGroups.RATIO_KEYS)
    cell_items = _check_keys(parser, "cell", CELL_KEYS)
    p1 = _check_keys(parser, "phase1", PHASE_KEYS + ISOTROPIC_KEYS)
    p2 = _check_keys(parser, "phase2", PHASE_KEYS + ISOTROPIC_KEYS)
    plane = cell_items.get("plane", "strain").strip()
    if parser.has_section("ratios"):
        if p1 or p2 or any(k in cell_items for k in ("s1", "s2")):
            raise ValidationError("give either [ratios] or dimensional [phase1]/[phase2], not both")
        groups = replace(DimensionlessGroups(),
                         **{k: _float("ratios", k, v) for k, v in ratios.items()})
        return from_ratios(groups)
    if not (parser.has_section("phase1") and parser.has_section("phase2")):
        raise ValidationError("config needs [ratios] or both [phase1] and [phase2]")
    for key in ("s1", "s2"):
        if key not in cell_items:
            raise ValidationError(f"[cell] missing {key}")
    cell = LayeredCell(_phase(p1, "phase1", plane), _phase(p2, "phase2", plane),
                       _float("cell", "s1", cell_items["s1"]),
                       _float("cell", "s2", cell_items["s2"]),
                       _float("cell", "theta0", cell_items.get("theta0", "1")))
    problems = validate(cell)
    if problems:
        raise ValidationError("invalid cell: " + "; ".join(problems))
    return cell


def load_config(path):
    """Parse and validate an INI run configuration."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read config {path!r}: {exc}") from None
    except configparser.Error as exc:
        raise ValidationError(f"malformed config {path!r}: {exc}") from None
    unknown = sorted(set(parser.sections()) - set(SECTIONS))
    if unknown:
        raise ValidationError(f"unknown section(s): {', '.join(unknown)}")
    cell = build_cell(parser)
    run = _check_keys(parser, "run", RUN_KEYS)
    out = _check_keys(parser, "output", OUTPUT_KEYS)
    kw = {}
    if "methods" in run:
        kw["methods"] = parse_methods(run["methods"])
    if "block" in run:
        kw["block"] = parse_block(run["block"].strip())
    if "omega" in run:
        kw["omega"] = parse_omega(run["omega"])
    if "zones" in run:
        kw["zones"] = _int("run", "zones", run["zones"])
    if "function" in run:
        kw["function"] = run["function"].strip()
    if "samples" in run:
        kw["samples"] = _int("run", "samples", run["samples"])
    if "directory" in out:
        kw["directory"] = out["directory"].strip()
    if "formats" in out:
        kw["formats"] = parse_formats(out["formats"])
    cfg = RunConfig(cell, **kw)
    if cfg.zones < 0:
        raise ValidationError("zones must be >= 0")
    if cfg.samples < 2:
        raise ValidationError("samples must be >= 2")
    return cfg
