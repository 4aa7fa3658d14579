"""Declarative run configurations.

A run file is a sectioned ``key = value`` text file::

    [system]
    potential = linear
    a = 0.5

    [state]
    n = 0 0
    l = 0 0
    L = 0

    [method]
    phi = fixed:2, dos, calibrate:2.753

    [oracle]
    enabled = true
    qstar_max = 18

    [output]
    format = table

Unknown sections or keys are rejected, and every error names the line.
"""
from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field

from .errors import EnvelopeError
from .model import (
    CustomKinetic,
    CustomPotential,
    ExponentialWell,
    PowerLawKinetic,
    PowerLawPotential,
    StateSpec,
    SystemSpec,
)

__all__ = ["ConfigError", "PhiMode", "RunConfig", "parse_config", "load_config"]

_KEYS = {
    "system": {"N", "D", "K", "kinetic", "F", "alpha", "kinetic_expression",
               "potential", "a", "b", "gamma", "expression"},
    "state": {"n", "l", "L", "sigma", "level"},
    "method": {"phi"},
    "oracle": {"enabled", "qstar_max", "quad_order"},
    "output": {"format", "precision"},
}
_POTENTIALS = {"linear", "coulomb", "gaussian", "powerlaw", "expwell", "custom"}


class ConfigError(EnvelopeError):
    """Malformed run configuration; ``lineno`` is 1-based or None."""

    def __init__(self, message, lineno=None):
        where = f"line {lineno}: " if lineno else ""
        super().__init__(where + message)
        self.lineno = lineno


@dataclass(frozen=True)
class PhiMode:
    """``kind`` is ``fixed``, ``dos`` or ``calibrate``; ``value`` the number attached."""

    kind: str
    value: float | None = None

    @property
    def label(self) -> str:
        if self.kind == "fixed":
            return f"{self.value:g}"
        return "DOS" if self.kind == "dos" else "GS"


@dataclass(frozen=True)
class RunConfig:
    system: SystemSpec
    state: StateSpec
    phi_modes: tuple = (PhiMode("fixed", 2.0),)
    level: int = 0
    oracle: bool = False
    qstar_max: int = 18
    quad_order: int = 80
    format: str = "table"
    precision: int = 4
    potential_name: str = field(default="custom", compare=False)


class _Lines:
    """Line lookup for ``section``/``key`` pairs of the raw text."""

    def __init__(self, text):
        self.index = {}
        section = None
        for no, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            m = re.fullmatch(r"\[([^\]]+)\]", line)
            if m:
                section = m.group(1).strip()
                self.index.setdefault((section, None), no)
            elif section and "=" in line and not line.startswith(("#", ";")):
                key = line.split("=", 1)[0].strip()
                self.index.setdefault((section, key), no)

    def __call__(self, section, key=None):
        return self.index.get((section, key))


def _num(sec, key, lines, cast=float, default=None):
    if key not in sec:
        if default is None:
            raise ConfigError(f"missing key '{key}' in [{sec.name}]", lines(sec.name))
        return default
    try:
        return cast(sec[key])
    except ValueError:
        raise ConfigError(f"bad value for '{key}': {sec[key]!r}", lines(sec.name, key)) from None


def _lambdify(expr_text, var, where):
    import sympy

    x = sympy.Symbol(var, positive=True)
    try:
        expr = sympy.sympify(expr_text, locals={var: x})
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ConfigError(f"cannot parse expression {expr_text!r}: {exc}", where) from None
    if expr.free_symbols - {x}:
        raise ConfigError(f"expression may only depend on {var}", where)
    d1, d2 = sympy.diff(expr, x), sympy.diff(expr, x, 2)
    return tuple(sympy.lambdify(x, e, "numpy") for e in (expr, d1, d2))


def _kinetic(sec, lines):
    kind = sec.get("kinetic", "nonrelativistic").strip().lower()
    if kind == "nonrelativistic":
        return PowerLawKinetic(0.5, 2.0)
    if kind == "powerlaw":
        return PowerLawKinetic(_num(sec, "F", lines), _num(sec, "alpha", lines))
    if kind == "custom":
        if "kinetic_expression" not in sec:
            raise ConfigError("custom kinetic needs 'kinetic_expression'", lines("system"))
        f, d1, d2 = _lambdify(sec["kinetic_expression"], "p", lines("system", "kinetic_expression"))
        return CustomKinetic(f, d1, d2)
    raise ConfigError(f"unknown kinetic {kind!r}", lines("system", "kinetic"))


def _potential(sec, lines):
    name = sec.get("potential", "").strip().lower()
    if name not in _POTENTIALS:
        raise ConfigError(
            f"potential must be one of {sorted(_POTENTIALS)}", lines("system", "potential")
        )
    if name == "linear":
        return name, PowerLawPotential(_num(sec, "a", lines, default=0.5), 1.0)
    if name == "coulomb":
        return name, PowerLawPotential(_num(sec, "a", lines, default=3.0), -1.0)
    if name == "gaussian":
        return name, ExponentialWell(
            _num(sec, "a", lines, default=200.0), _num(sec, "b", lines, default=1.0), 2.0
        )
    if name == "powerlaw":
        return name, PowerLawPotential(_num(sec, "a", lines), _num(sec, "b", lines))
    if name == "expwell":
        return name, ExponentialWell(
            _num(sec, "a", lines), _num(sec, "b", lines), _num(sec, "gamma", lines, default=2.0)
        )
    if "expression" not in sec:
        raise ConfigError("custom potential needs 'expression'", lines("system"))
    f, d1, d2 = _lambdify(sec["expression"], "r", lines("system", "expression"))
    return name, CustomPotential(f, d1, d2)


def _ints(sec, key, lines):
    try:
        return [int(v) for v in sec[key].replace(",", " ").split()]
    except (KeyError, ValueError):
        raise ConfigError(
            f"'{key}' must be a list of integers", lines(sec.name, key) or lines(sec.name)
        ) from None


def _phi_modes(text, where):
    modes = []
    for item in filter(None, (t.strip() for t in text.split(","))):
        kind, _, value = item.partition(":")
        kind = kind.strip().lower()
        try:
            if kind == "dos" and not value:
                modes.append(PhiMode("dos"))
            elif kind in ("fixed", "calibrate") and value:
                modes.append(PhiMode(kind, float(value)))
            else:
                raise ValueError
        except ValueError:
            raise ConfigError(f"bad phi mode {item!r}", where) from None
    if not modes:
        raise ConfigError("no phi mode given", where)
    return tuple(modes)


def _bool(sec, key, lines):
    try:
        return sec.getboolean(key, fallback=False)
    except ValueError:
        raise ConfigError(f"'{key}' must be a boolean", lines(sec.name, key)) from None


def parse_config(text: str) -> RunConfig:
    """Parse run-file text into a :class:`RunConfig`.

    Raises
    ------
    ConfigError
        On syntax errors, unknown sections or keys and invalid values.
    """
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError("key outside any [section]", exc.lineno) from None
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if exc.errors else None
        raise ConfigError("syntax error", lineno) from None
    except configparser.DuplicateOptionError as exc:
        raise ConfigError(f"duplicate key '{exc.option}'", exc.lineno) from None
    except configparser.DuplicateSectionError as exc:
        raise ConfigError(f"duplicate section [{exc.section}]", exc.lineno) from None
    lines = _Lines(text)
    for name in cp.sections():
        if name not in _KEYS:
            raise ConfigError(f"unknown section [{name}]", lines(name))
        for key in cp[name]:
            if key not in _KEYS[name]:
                raise ConfigError(f"unknown key '{key}' in [{name}]", lines(name, key))
    for name in ("system", "state"):
        if name not in cp:
            raise ConfigError(f"missing section [{name}]")

    sys_sec = cp["system"]
    pot_name, potential = _potential(sys_sec, lines)
    N = _num(sys_sec, "N", lines, int, default=3)
    D = _num(sys_sec, "D", lines, int, default=3)
    K = _num(sys_sec, "K", lines, int, default=N)
    kinetic = _kinetic(sys_sec, lines)
    try:
        system = SystemSpec(N, D, kinetic, ((K, potential),))
    except EnvelopeError as exc:
        raise ConfigError(str(exc), lines("system")) from None

    st = cp["state"]
    n = _ints(st, "n", lines) if "n" in st else [0] * (N - 1)
    l = _ints(st, "l", lines) if "l" in st else [0] * (N - 1)
    if len(n) != N - 1 or len(l) != N - 1:
        raise ConfigError(f"need {N - 1} values for n and l", lines("state"))
    try:
        state = StateSpec(
            tuple(zip(n, l)),
            sigma=_num(st, "sigma", lines, int, default=1),
            L=_num(st, "L", lines, int) if "L" in st else None,
        )
    except EnvelopeError as exc:
        raise ConfigError(str(exc), lines("state")) from None

    phi = ("fixed:2",) if "method" not in cp else (cp["method"].get("phi", "fixed:2"),)
    modes = _phi_modes(phi[0], lines("method", "phi"))

    orc = cp["oracle"] if "oracle" in cp else cp[cp.default_section]
    out = cp["output"] if "output" in cp else cp[cp.default_section]
    fmt = out.get("format", "table").strip().lower()
    if fmt not in ("table", "csv"):
        raise ConfigError("format must be 'table' or 'csv'", lines("output", "format"))
    return RunConfig(
        system=system,
        state=state,
        phi_modes=modes,
        level=_num(st, "level", lines, int, default=0),
        oracle=_bool(orc, "enabled", lines) if "oracle" in cp else False,
        qstar_max=_num(orc, "qstar_max", lines, int, default=18),
        quad_order=_num(orc, "quad_order", lines, int, default=80),
        format=fmt,
        precision=_num(out, "precision", lines, int, default=4),
        potential_name=pot_name,
    )


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
