"""Sweep configuration files and command-line overrides.

A configuration is an INI-style file with optional sections ``[sweep]``,
``[grid]``, ``[physics]``, ``[numerics]`` and ``[output]``. Flags given on
the command line win over file values.
"""

import ast
import configparser
import math
import operator
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .model import DEFAULT_LAMBDA_MAX, DEFAULT_N_MAX, QubitSpec

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
}
_IMPLICIT_PI = re.compile(r"(\d)\s*pi")


def parse_angle(text):
    """Evaluate a real expression such as ``pi/2``, ``-3pi/4`` or ``0.25``."""
    src = _IMPLICIT_PI.sub(r"\1*pi", str(text).strip())
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"invalid angle expression {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError(f"invalid angle expression {text!r}")

    value = ev(tree)
    if not math.isfinite(value):
        raise ValueError(f"angle {text!r} is not finite")
    return value


@dataclass
class SweepConfig:
    engine: str = "unitary"
    states: list = field(default_factory=lambda: [QubitSpec.parse("g")])
    phis: list = field(default_factory=lambda: [0.0])
    axis: str = "r"
    r_min: float = 0.0
    r_max: float = 0.0
    r_steps: int = 1
    r: float = 0.0
    gamma_tau: float = 0.1
    gamma_tau_min: float = 1e-3
    gamma_tau_max: float = 1.0
    gamma_tau_steps: int = 10
    gamma_tau_spacing: str = "log"
    kappa_over_gamma: float = 1e-3
    theta: float = 0.0
    rotation_angle: float = math.pi
    n_max: int = DEFAULT_N_MAX
    steps: int = 2000
    seed: int = 0
    lambda_max: float = DEFAULT_LAMBDA_MAX
    unsafe_lambda: bool = False
    fmt: str = "csv"
    analytic: bool = True
    jobs: int = 1

    def grid(self):
        """Values of the swept axis, in emission order."""
        if self.axis == "r":
            if self.r_steps < 1:
                raise ConfigError("r grid is empty (r_steps must be >= 1)")
            return list(np.linspace(self.r_min, self.r_max, self.r_steps))
        if self.gamma_tau_steps < 1:
            raise ConfigError("gamma_tau grid is empty (gamma_tau_steps must be >= 1)")
        if self.gamma_tau_spacing == "log":
            return list(np.geomspace(self.gamma_tau_min, self.gamma_tau_max, self.gamma_tau_steps))
        return list(np.linspace(self.gamma_tau_min, self.gamma_tau_max, self.gamma_tau_steps))


def _int(v):
    f = float(v)
    if f != int(f):
        raise ValueError(f"expected an integer, got {v!r}")
    return int(f)


def _bool(v):
    t = v.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {v!r}")


def _list(parse):
    def inner(v):
        items = [x.strip() for x in v.split(",") if x.strip()]
        if not items:
            raise ValueError("empty list")
        return [parse(x) for x in items]

    return inner


def _choice(*options):
    def inner(v):
        t = v.strip()
        if t not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got {t!r}")
        return t

    return inner


def _nonneg(v):
    f = float(v)
    if f < 0:
        raise ValueError(f"must be >= 0, got {v}")
    return f


# (section, key) -> (attribute, parser)
KEYS = {
    ("sweep", "engine"): ("engine", _choice("unitary", "lindblad", "perturbative")),
    ("sweep", "states"): ("states", _list(QubitSpec.parse)),
    ("sweep", "phis"): ("phis", _list(parse_angle)),
    ("grid", "axis"): ("axis", _choice("r", "gamma_tau")),
    ("grid", "r_min"): ("r_min", _nonneg),
    ("grid", "r_max"): ("r_max", _nonneg),
    ("grid", "r_steps"): ("r_steps", _int),
    ("grid", "r"): ("r", _nonneg),
    ("grid", "gamma_tau_min"): ("gamma_tau_min", float),
    ("grid", "gamma_tau_max"): ("gamma_tau_max", float),
    ("grid", "gamma_tau_steps"): ("gamma_tau_steps", _int),
    ("grid", "gamma_tau_spacing"): ("gamma_tau_spacing", _choice("log", "linear")),
    ("physics", "gamma_tau"): ("gamma_tau", float),
    ("physics", "kappa_over_gamma"): ("kappa_over_gamma", float),
    ("physics", "theta"): ("theta", parse_angle),
    ("physics", "rotation_angle"): ("rotation_angle", parse_angle),
    ("physics", "n_max"): ("n_max", _int),
    ("numerics", "steps"): ("steps", _int),
    ("numerics", "seed"): ("seed", _int),
    ("numerics", "lambda_max"): ("lambda_max", float),
    ("numerics", "unsafe_lambda"): ("unsafe_lambda", _bool),
    ("numerics", "jobs"): ("jobs", _int),
    ("output", "format"): ("fmt", _choice("csv", "jsonl")),
    ("output", "analytic"): ("analytic", _bool),
}


def _line_index(text):
    """Map ``(section, key)`` to the 1-based line where it is set."""
    index = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#;":
            continue
        m = re.match(r"^\[([^\]]+)\]$", line)
        if m:
            section = m.group(1).strip().lower()
            index[(section, None)] = lineno
            continue
        m = re.match(r"^([^=:]+?)\s*[=:]", line)
        if m and section is not None:
            index[(section, m.group(1).strip().lower())] = lineno
    return index


def load_config(path, cfg=None):
    """Read a configuration file into ``cfg`` (a fresh default if omitted)."""
    cfg = cfg or SweepConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", path=path) from exc
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=str(path))
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if exc.errors else None
        raise ConfigError("unparseable line", line=lineno, path=path) from exc
    except configparser.Error as exc:
        raise ConfigError(str(exc).splitlines()[0], line=getattr(exc, "lineno", None), path=path) from exc
    lines = _line_index(text)
    for section in parser.sections():
        for key, value in parser.items(section):
            where = lines.get((section, key))
            if (section, key) not in KEYS:
                raise ConfigError(f"unknown key {key!r} in [{section}]", line=where, path=path)
            attr, parse = KEYS[(section, key)]
            try:
                setattr(cfg, attr, parse(value))
            except ValueError as exc:
                raise ConfigError(f"[{section}] {key}: {exc}", line=where, path=path) from exc
    return cfg
