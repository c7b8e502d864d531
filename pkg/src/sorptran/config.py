"""Run configuration files.

The format is line oriented: one ``key = value`` assignment per line, keys
are dotted paths (``isotherm.p``, ``scheme.newton.abs_tol``), values are
numbers, words, or comma separated lists. Blank lines and ``#`` comments
are ignored. parse_config collects every problem it can find, syntax
errors, unknown or duplicate or missing keys, and constraint violations of
the underlying types, and raises one ConfigError listing all of them.

serialize_config writes the normalized form: every applicable key in a
fixed order, defaults included, floats in shortest round-trip notation.
Parsing the output reproduces the same RunConfigFile.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError
from .experiments import ic_gauss4_1d, ic_gauss4_2d, ic_step_1d
from .grids import Grid1D, Grid2D
from .isotherm import IsothermSpec, NewtonConfig
from .stepping import (DirichletBC, OutflowBC, Problem1D, Problem2D,
                       SchemeConfig)
from .velocity import (ConstantVelocity, ConstantVelocity2D, CosineVelocity,
                       RotationVelocity, TabulatedVelocity)

SCHEMES_1D = ("explicit1", "explicit2", "implicit1", "compact2", "hires_weno")
SCHEMES_2D = ("implicit1", "hires_weno")
VELOCITY_KINDS_1D = ("constant", "cosine", "tabulated")
VELOCITY_KINDS_2D = ("rotation", "constant2d")
IC_KINDS_1D = ("step", "gauss4", "constant")
IC_KINDS_2D = ("gauss2d", "constant")
REFERENCE_KINDS = ("exact", "oracle", "none")
OUTPUT_FORMATS = ("profile", "convergence")

# value parsers keyed by grammar type name
_INT = "int"
_FLOAT = "float"
_WORD = "word"
_FLOATS = "float list"
_WORDS = "word list"

# every key the grammar knows, in serialization order:
# (key, type, required, condition) where condition is a predicate on the
# raw key-value dict deciding whether the key applies at all
_ALWAYS = None

_KEYS = (
    ("dimension", _INT, True, _ALWAYS),
    ("domain.x_left", _FLOAT, True, _ALWAYS),
    ("domain.x_right", _FLOAT, True, _ALWAYS),
    ("grid.M", _INT, True, _ALWAYS),
    ("time.t0", _FLOAT, False, _ALWAYS),
    ("time.T", _FLOAT, True, _ALWAYS),
    ("time.N", _INT, True, _ALWAYS),
    ("isotherm.a", _FLOAT, True, _ALWAYS),
    ("isotherm.p", _FLOAT, True, _ALWAYS),
    ("scheme.name", _WORD, True, _ALWAYS),
    ("scheme.omega", _FLOAT, False, _ALWAYS),
    ("scheme.newton.abs_tol", _FLOAT, False, _ALWAYS),
    ("scheme.newton.max_iter", _INT, False, _ALWAYS),
    ("scheme.newton.reg_floor", _FLOAT, False, _ALWAYS),
    ("scheme.sweep.tol", _FLOAT, False, _ALWAYS),
    ("scheme.sweep.max_sweeps", _INT, False, _ALWAYS),
    ("scheme.weno_eps", _FLOAT, False, _ALWAYS),
    ("scheme.corrector_rounds", _INT, False, _ALWAYS),
    ("velocity.kind", _WORD, True, _ALWAYS),
    ("velocity.value", _FLOAT, True,
     lambda raw: raw.get("velocity.kind") == "constant"),
    ("velocity.amplitude", _FLOAT, True,
     lambda raw: raw.get("velocity.kind") == "cosine"),
    ("velocity.x", _FLOATS, True,
     lambda raw: raw.get("velocity.kind") == "tabulated"),
    ("velocity.v", _FLOATS, True,
     lambda raw: raw.get("velocity.kind") == "tabulated"),
    ("velocity.rate", _FLOAT, False,
     lambda raw: raw.get("velocity.kind") == "rotation"),
    ("velocity.vx", _FLOAT, True,
     lambda raw: raw.get("velocity.kind") == "constant2d"),
    ("velocity.vy", _FLOAT, True,
     lambda raw: raw.get("velocity.kind") == "constant2d"),
    ("ic.kind", _WORD, True, _ALWAYS),
    ("ic.value", _FLOAT, True,
     lambda raw: raw.get("ic.kind") == "constant"),
    ("bc.left", _WORD, True, lambda raw: raw.get("dimension") == "1"),
    ("bc.right", _WORD, True, lambda raw: raw.get("dimension") == "1"),
    ("bc.all", _WORD, True, lambda raw: raw.get("dimension") == "2"),
    ("reference.kind", _WORD, False, _ALWAYS),
    ("reference.refine", _INT, False,
     lambda raw: raw.get("reference.kind") == "oracle"),
    ("output.dir", _WORD, False, _ALWAYS),
    ("output.formats", _WORDS, False, _ALWAYS),
)


@dataclass(frozen=True)
class RunConfigFile:
    """A fully validated run description."""

    dimension: int
    x_left: float
    x_right: float
    m: int
    n: int
    t0: float
    t_final: float
    isotherm: IsothermSpec
    scheme: SchemeConfig
    velocity_kind: str
    velocity_params: tuple[tuple[str, object], ...]
    ic_kind: str
    ic_params: tuple[tuple[str, object], ...]
    bc_left: str
    bc_right: str
    reference_kind: str = "none"
    oracle_refine: int = 4
    output_dir: str = "out"
    output_formats: tuple[str, ...] = ("profile", "convergence")

    def velocity(self):
        """Instantiate the velocity field object."""
        params = dict(self.velocity_params)
        if self.velocity_kind == "constant":
            return ConstantVelocity(params["value"])
        if self.velocity_kind == "cosine":
            return CosineVelocity(params["amplitude"])
        if self.velocity_kind == "tabulated":
            return TabulatedVelocity(params["x"], params["v"])
        if self.velocity_kind == "rotation":
            return RotationVelocity(**params)
        return ConstantVelocity2D(params["vx"], params["vy"])

    def initial_condition(self, grid) -> np.ndarray:
        """Sample the initial concentration on the interior cells."""
        params = dict(self.ic_params)
        if self.ic_kind == "step":
            return ic_step_1d(grid)
        if self.ic_kind == "gauss4":
            return ic_gauss4_1d(grid)
        if self.ic_kind == "gauss2d":
            return ic_gauss4_2d(grid)
        if self.dimension == 1:
            return np.full(grid.m, params["value"])
        return np.full((grid.m, grid.m), params["value"])

    def problem(self):
        """Build the grid and problem description."""
        if self.dimension == 1:
            grid = Grid1D(self.x_left, self.x_right, self.m)
            return Problem1D(grid=grid, isotherm=self.isotherm,
                             velocity=self.velocity(),
                             bc_left=_bc_object(self.bc_left),
                             bc_right=_bc_object(self.bc_right), t0=self.t0)
        grid = Grid2D(self.x_left, self.x_right, self.m)
        return Problem2D(grid=grid, isotherm=self.isotherm,
                         velocity=self.velocity(),
                         bc=_bc_object(self.bc_left), t0=self.t0)

    @property
    def tau(self) -> float:
        return (self.t_final - self.t0) / self.n


def _bc_object(spec: str):
    if spec == "outflow":
        return OutflowBC()
    return DirichletBC(float(spec.split(":", 1)[1]))


def _bc_valid(spec: str) -> bool:
    if spec == "outflow":
        return True
    if spec.startswith("dirichlet:"):
        try:
            float(spec.split(":", 1)[1])
            return True
        except ValueError:
            return False
    return False


def _parse_value(kind: str, text: str):
    if kind == _INT:
        return int(text)
    if kind == _FLOAT:
        return float(text)
    if kind == _FLOATS:
        return tuple(float(part.strip()) for part in text.split(","))
    if kind == _WORDS:
        return tuple(part.strip() for part in text.split(","))
    return text


def _format_value(kind: str, value) -> str:
    if kind == _FLOAT:
        return repr(float(value))
    if kind == _FLOATS:
        return ", ".join(repr(float(v)) for v in value)
    if kind == _WORDS:
        return ", ".join(value)
    return str(value)


def _scan_lines(text: str, bad: list[str]) -> dict[str, tuple[str, int]]:
    """First pass: raw key -> (value text, line number), syntax checked."""
    raw: dict[str, tuple[str, int]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            bad.append(f"line {lineno}: expected 'key = value', got {stripped!r}")
            continue
        key, value = stripped.split("=", 1)
        key, value = key.strip(), value.strip()
        if not key or not value:
            bad.append(f"line {lineno}: empty key or value")
            continue
        if key in raw:
            bad.append(f"line {lineno}: duplicate key {key!r} "
                       f"(first set on line {raw[key][1]})")
            continue
        raw[key] = (value, lineno)
    return raw


def parse_config(text: str) -> RunConfigFile:
    """Parse and validate a configuration file.

    Raises ConfigError carrying every violation found; returns the
    validated RunConfigFile otherwise.
    """
    bad: list[str] = []
    raw = _scan_lines(text, bad)
    raw_values = {k: v for k, (v, _) in raw.items()}

    known = {key for key, _, _, _ in _KEYS}
    applicable = {key: (cond is _ALWAYS or cond(raw_values))
                  for key, _, _, cond in _KEYS}
    for key, (_, lineno) in raw.items():
        if key not in known:
            bad.append(f"line {lineno}: unknown key {key!r}")
        elif not applicable[key]:
            bad.append(f"line {lineno}: key {key!r} does not apply here")

    values: dict[str, object] = {}
    for key, kind, required, _ in _KEYS:
        if not applicable[key]:
            continue
        if key not in raw:
            if required:
                bad.append(f"missing required key {key!r}")
            continue
        value_text, lineno = raw[key]
        try:
            values[key] = _parse_value(kind, value_text)
        except ValueError:
            bad.append(f"line {lineno}: {key} expects a {kind}, "
                       f"got {value_text!r}")

    def have(*keys: str) -> bool:
        return all(k in values for k in keys)

    def complain(key: str, message: str) -> None:
        bad.append(f"{key}: {message}")

    if have("dimension") and values["dimension"] not in (1, 2):
        complain("dimension", f"must be 1 or 2, got {values['dimension']}")
    if have("domain.x_left", "domain.x_right") \
            and not values["domain.x_left"] < values["domain.x_right"]:
        complain("domain", "x_left must be below x_right")
    if have("grid.M") and values["grid.M"] < 2:
        complain("grid.M", f"must be at least 2, got {values['grid.M']}")
    if have("time.N") and values["time.N"] < 1:
        complain("time.N", f"must be at least 1, got {values['time.N']}")
    t0 = values.get("time.t0", 0.0)
    if have("time.T") and not values["time.T"] > t0:
        complain("time.T", f"must exceed t0 = {t0}")

    iso = None
    if have("isotherm.a", "isotherm.p"):
        try:
            iso = IsothermSpec(a=values["isotherm.a"], p=values["isotherm.p"])
        except DomainError as exc:
            complain("isotherm.p" if "exponent" in str(exc) else "isotherm.a",
                     str(exc))

    dim = values.get("dimension")
    scheme = None
    if have("scheme.name"):
        name = values["scheme.name"]
        allowed = SCHEMES_2D if dim == 2 else SCHEMES_1D
        if name not in allowed:
            complain("scheme.name",
                     f"must be one of {', '.join(allowed)}, got {name!r}")
        else:
            try:
                scheme = SchemeConfig(
                    scheme=name,
                    omega=values.get("scheme.omega", 0.5),
                    newton=NewtonConfig(
                        abs_tol=values.get("scheme.newton.abs_tol", 1e-12),
                        max_iter=values.get("scheme.newton.max_iter", 50),
                        reg_floor=values.get("scheme.newton.reg_floor", 1e-6)),
                    sweep_tol=values.get("scheme.sweep.tol", 1e-10),
                    max_sweeps=values.get("scheme.sweep.max_sweeps", 100),
                    weno_eps=values.get("scheme.weno_eps", 1e-6),
                    corrector_rounds=values.get("scheme.corrector_rounds", 1))
            except DomainError as exc:
                complain("scheme", str(exc))

    vkind = values.get("velocity.kind")
    if vkind is not None:
        allowed = VELOCITY_KINDS_2D if dim == 2 else VELOCITY_KINDS_1D
        if vkind not in allowed:
            complain("velocity.kind",
                     f"must be one of {', '.join(allowed)}, got {vkind!r}")
        elif vkind == "tabulated" and have("velocity.x", "velocity.v"):
            try:
                TabulatedVelocity(values["velocity.x"], values["velocity.v"])
            except ValueError as exc:
                complain("velocity", str(exc))

    ikind = values.get("ic.kind")
    if ikind is not None:
        allowed = IC_KINDS_2D if dim == 2 else IC_KINDS_1D
        if ikind not in allowed:
            complain("ic.kind",
                     f"must be one of {', '.join(allowed)}, got {ikind!r}")
        elif ikind == "constant" and have("ic.value") \
                and values["ic.value"] < 0.0:
            complain("ic.value", "concentration must be nonnegative")

    for key in ("bc.left", "bc.right", "bc.all"):
        if key in values and not _bc_valid(values[key]):
            complain(key, f"must be 'outflow' or 'dirichlet:<number>', "
                          f"got {values[key]!r}")

    rkind = values.get("reference.kind", "none")
    if rkind not in REFERENCE_KINDS:
        complain("reference.kind",
                 f"must be one of {', '.join(REFERENCE_KINDS)}, got {rkind!r}")
    elif rkind == "exact":
        if not (dim == 1 and ikind == "step" and vkind == "constant"):
            complain("reference.kind", "exact reference needs dimension 1, "
                                       "ic.kind step, velocity.kind constant")
        elif have("velocity.value") and not values["velocity.value"] > 0.0:
            complain("reference.kind", "exact reference needs a positive "
                                       "constant velocity")
    if "reference.refine" in values and values["reference.refine"] < 4:
        complain("reference.refine",
                 f"must be at least 4, got {values['reference.refine']}")

    formats = values.get("output.formats", OUTPUT_FORMATS)
    for fmt in formats:
        if fmt not in OUTPUT_FORMATS:
            complain("output.formats",
                     f"unknown format {fmt!r}, expected "
                     f"{', '.join(OUTPUT_FORMATS)}")

    if bad:
        raise ConfigError(bad)

    vparams = tuple((k.split(".", 1)[1], values[k])
                    for k in ("velocity.value", "velocity.amplitude",
                              "velocity.x", "velocity.v", "velocity.rate",
                              "velocity.vx", "velocity.vy") if k in values)
    iparams = tuple((k.split(".", 1)[1], values[k])
                    for k in ("ic.value",) if k in values)
    if dim == 1:
        bc_left, bc_right = values["bc.left"], values["bc.right"]
    else:
        bc_left = bc_right = values["bc.all"]
    return RunConfigFile(
        dimension=dim, x_left=values["domain.x_left"],
        x_right=values["domain.x_right"], m=values["grid.M"],
        n=values["time.N"], t0=t0, t_final=values["time.T"],
        isotherm=iso, scheme=scheme,
        velocity_kind=vkind, velocity_params=vparams,
        ic_kind=ikind, ic_params=iparams,
        bc_left=bc_left, bc_right=bc_right,
        reference_kind=rkind,
        oracle_refine=values.get("reference.refine", 4),
        output_dir=values.get("output.dir", "out"),
        output_formats=tuple(formats))


def serialize_config(cfg: RunConfigFile) -> str:
    """Write the normalized text form; parse_config inverts it exactly."""
    values = {
        "dimension": cfg.dimension,
        "domain.x_left": cfg.x_left,
        "domain.x_right": cfg.x_right,
        "grid.M": cfg.m,
        "time.t0": cfg.t0,
        "time.T": cfg.t_final,
        "time.N": cfg.n,
        "isotherm.a": cfg.isotherm.a,
        "isotherm.p": cfg.isotherm.p,
        "scheme.name": cfg.scheme.scheme,
        "scheme.omega": cfg.scheme.omega,
        "scheme.newton.abs_tol": cfg.scheme.newton.abs_tol,
        "scheme.newton.max_iter": cfg.scheme.newton.max_iter,
        "scheme.newton.reg_floor": cfg.scheme.newton.reg_floor,
        "scheme.sweep.tol": cfg.scheme.sweep_tol,
        "scheme.sweep.max_sweeps": cfg.scheme.max_sweeps,
        "scheme.weno_eps": cfg.scheme.weno_eps,
        "scheme.corrector_rounds": cfg.scheme.corrector_rounds,
        "velocity.kind": cfg.velocity_kind,
        "ic.kind": cfg.ic_kind,
        "reference.kind": cfg.reference_kind,
        "output.dir": cfg.output_dir,
        "output.formats": cfg.output_formats,
    }
    for name, value in cfg.velocity_params:
        values[f"velocity.{name}"] = value
    for name, value in cfg.ic_params:
        values[f"ic.{name}"] = value
    if cfg.dimension == 1:
        values["bc.left"] = cfg.bc_left
        values["bc.right"] = cfg.bc_right
    else:
        values["bc.all"] = cfg.bc_left
    if cfg.reference_kind == "oracle":
        values["reference.refine"] = cfg.oracle_refine
    lines = []
    for key, kind, _, _ in _KEYS:
        if key in values:
            lines.append(f"{key} = {_format_value(kind, values[key])}")
    return "\n".join(lines) + "\n"
