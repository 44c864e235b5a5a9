"""Run configuration: one INI file with [domain], [measure], [problem], [command].

Measure presets name the operator instances the toolkit ships ready-made:

    C1       delta_1                      classical p-Laplacian
    C2       delta_s                      one fractional order (param s)
    C3       delta_1 + delta_s            mixed local/fractional sum
    C5       delta_1 - alpha * delta_s    sign-changing perturbation
    serie1   positive Dirac series, truncated at k with reported tail
    serie2   positive head + small negative tail, truncated likewise
    function tabulated density, Gauss-Legendre quadratured

Scalar CLI flags only override seeds; everything else lives in the file so a
run can be archived and replayed.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

from .grid import Domain
from .measure import MeasureAtom, SpectralMeasure, discretize_density, truncate_series, validate

__all__ = ["ConfigError", "RunConfig", "load_config", "build_domain",
           "build_measure", "build_validated", "parse_lambda"]


class ConfigError(ValueError):
    """Bad or missing configuration entry."""


@dataclass
class RunConfig:
    domain: dict = field(default_factory=dict)
    measure: dict = field(default_factory=dict)
    problem: dict = field(default_factory=dict)
    command: dict = field(default_factory=dict)
    path: str = ""


def load_config(path):
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        read = parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if not read:
        raise ConfigError(f"config file not found: {path}")
    cfg = RunConfig(path=str(path))
    for section in ("domain", "measure", "problem", "command"):
        if parser.has_section(section):
            setattr(cfg, section, dict(parser.items(section)))
    if not cfg.domain:
        raise ConfigError(f"{path}: missing [domain] section")
    if not cfg.measure:
        raise ConfigError(f"{path}: missing [measure] section")
    return cfg


def _get(table, section, key, cast=str, default=None, required=False):
    raw = table.get(key)
    if raw is None:
        if required:
            raise ConfigError(f"[{section}] is missing required key '{key}'")
        return default
    try:
        if cast is bool:
            return raw.strip().lower() in ("1", "true", "yes", "on")
        return cast(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r}: {exc}") from exc


def _floats(raw):
    return [float(tok) for tok in raw.replace(";", ",").split(",") if tok.strip()]


def build_domain(cfg):
    sec = cfg.domain
    dim = _get(sec, "domain", "dim", int, required=True)
    res = _get(sec, "domain", "resolution", int, required=True)
    box = _floats(_get(sec, "domain", "box", str, required=True))
    mask = _get(sec, "domain", "mask", str, "interval" if dim == 1 else "rectangle")
    try:
        if dim == 1:
            if mask != "interval":
                raise ConfigError(f"1-d mask must be 'interval', got {mask!r}")
            (lo, hi) = box
            return Domain.interval(lo, hi, res)
        if dim == 2:
            x0, x1, y0, y1 = box
            if mask == "rectangle":
                return Domain.rectangle(((x0, x1), (y0, y1)), res)
            if mask == "disk":
                return Domain.disk(((x0, x1), (y0, y1)), res)
            raise ConfigError(f"unknown 2-d mask {mask!r}")
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[domain]: {exc}") from exc
    raise ConfigError(f"[domain] dim must be 1 or 2, got {dim}")


def _preset_measure(sec):
    name = sec["preset"]
    s = _get(sec, "measure", "s", float, 0.5)
    alpha = _get(sec, "measure", "alpha", float, 0.1)
    if name == "C1":
        return SpectralMeasure([MeasureAtom(1.0, 1.0)], []), 1.0
    if name == "C2":
        return SpectralMeasure([MeasureAtom(s, 1.0)], []), s
    if name == "C3":
        return SpectralMeasure([MeasureAtom(1.0, 1.0), MeasureAtom(s, 1.0)], []), 1.0
    if name == "C5":
        if alpha <= 0.0:
            raise ConfigError("[measure] preset C5 needs alpha > 0")
        return SpectralMeasure([MeasureAtom(1.0, 1.0)], [MeasureAtom(s, alpha)]), 1.0
    if name in ("serie1", "serie2"):
        terms = _get(sec, "measure", "terms", int, 32)
        cut = _get(sec, "measure", "k", int, 8 if name == "serie1" else 16)
        orders = [1.0 / (k + 1) for k in range(terms)]
        if name == "serie1":
            weights = [2.0 ** -(k + 1) for k in range(terms)]
            tail_extra = 2.0**-terms
            s_bar = 1.0
        else:
            kbar = _get(sec, "measure", "kbar", int, 3)
            if not 0 <= kbar < cut:
                raise ConfigError("[measure] serie2 needs 0 <= kbar < k")
            weights = [2.0 ** -(k + 1) if k <= kbar else -alpha * 2.0 ** -(k + 1)
                       for k in range(terms)]
            tail_extra = -alpha * 2.0**-terms
            s_bar = 1.0 / (kbar + 1)
        return truncate_series(orders, weights, cut, tail_extra=tail_extra), s_bar
    if name == "function":
        s_sharp = _get(sec, "measure", "s_sharp", float, 0.6)
        gam = _get(sec, "measure", "gamma", float, 0.3)
        m = _get(sec, "measure", "m", int, 24)
        neg = -gam * (1.0 - s_sharp) / s_sharp

        def dens(t):
            return 1.0 if t > s_sharp else neg

        atoms = discretize_density(dens, m)
        return SpectralMeasure.from_signed_atoms(atoms), s_sharp
    raise ConfigError(f"[measure] unknown preset {name!r}")


def build_measure(cfg):
    """SpectralMeasure plus the configured s_bar."""
    sec = cfg.measure
    if "preset" in sec:
        m, s_bar = _preset_measure(sec)
        return m, _get(sec, "measure", "s_bar", float, s_bar)
    s_bar = _get(sec, "measure", "s_bar", float, required=True)
    atoms = []
    raw = sec.get("atoms")
    if raw:
        for tok in raw.split(","):
            tok = tok.strip()
            if not tok:
                continue
            try:
                order, weight = tok.split(":")
                atoms.append(MeasureAtom(float(order), float(weight)))
            except ValueError as exc:
                raise ConfigError(f"[measure] atoms entry {tok!r}: {exc}") from exc
    if "density_s" in sec or "density_f" in sec:
        s_tab = _floats(_get(sec, "measure", "density_s", str, required=True))
        f_tab = _floats(_get(sec, "measure", "density_f", str, required=True))
        m = _get(sec, "measure", "density_m", int, 16)
        atoms.extend(discretize_density((s_tab, f_tab), m))
    if not atoms:
        raise ConfigError("[measure] needs a preset, atoms, or a density table")
    return SpectralMeasure.from_signed_atoms(atoms), s_bar


def build_validated(cfg):
    m, s_bar = build_measure(cfg)
    return validate(m, s_bar)


def parse_lambda(cfg):
    """Returns (value, auto_factor); value is None when lambda is 'auto[:f]'."""
    raw = cfg.problem.get("lambda", "0").strip().lower()
    if raw.startswith("auto"):
        factor = 0.9
        if ":" in raw:
            try:
                factor = float(raw.split(":", 1)[1])
            except ValueError as exc:
                raise ConfigError(f"[problem] lambda = {raw!r}: {exc}") from exc
        return None, factor
    try:
        return float(raw), None
    except ValueError as exc:
        raise ConfigError(f"[problem] lambda = {raw!r}: {exc}") from exc
