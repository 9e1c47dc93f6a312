"""Flat ``key = value`` configuration files.

Example::

    # free-electron gas
    v_f_cm_s = 1e8
    m_g = 9.1e-28 g
    gamma_hz_per_g = 2.8 MHz/G
    d_cm = 0
    delta_hz = 1.2 GHz

A value may carry a unit suffix; only the suffixes listed in ``UNITS`` for
its key are accepted. Frequencies and gyromagnetic ratios are given in Hz
and converted to rad/s here.
"""

import math

from .errors import ConfigError, UnitError, ValidationError
from .units import PhysicalParams

REQUIRED = ("v_f_cm_s", "m_g", "gamma_hz_per_g")
DEFAULTS = {"d_cm": 0.0, "delta_hz": 1.2e9, "projection": "spin-half"}

_HZ = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9, "thz": 1e12}
UNITS = {
    "v_f_cm_s": {"cm/s": 1.0},
    "m_g": {"g": 1.0},
    "d_cm": {"cm": 1.0, "nm": 1e-7, "um": 1e-4},
    "delta_hz": _HZ,
    "gamma_hz_per_g": {k + "/g": v for k, v in _HZ.items()},
}


def _parse_number(key, text, lineno):
    parts = text.split(None, 1)
    try:
        value = float(parts[0])
    except ValueError:
        raise ConfigError(f"line {lineno}: {key} expects a number, got {text!r}", lines=(lineno,)) from None
    if len(parts) == 2:
        suffix = parts[1].strip()
        factors = UNITS[key]
        if suffix.lower() not in factors:
            allowed = ", ".join(sorted(factors))
            raise UnitError(f"line {lineno}: bad unit {suffix!r} for {key} (accepted: {allowed})",
                            lines=(lineno,))
        value *= factors[suffix.lower()]
    if not math.isfinite(value):
        raise ConfigError(f"line {lineno}: {key} must be finite", lines=(lineno,))
    return value


def parse_config_text(text, source="<config>"):
    """Parse config text into ``(PhysicalParams, options)``.

    ``options`` holds the resolved raw values (Hz units) for the manifest.
    """
    seen = {}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}, line {lineno}: expected 'key = value', got {raw.strip()!r}", lines=(lineno,))
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in UNITS and key != "projection":
            known = ", ".join(list(UNITS) + ["projection"])
            raise ConfigError(f"{source}, line {lineno}: unknown key {key!r} (known keys: {known})", lines=(lineno,))
        if key in seen:
            raise ConfigError(f"{source}: duplicate key {key!r} on lines {seen[key]} and {lineno}",
                              lines=(seen[key], lineno))
        seen[key] = lineno
        values[key] = value if key == "projection" else _parse_number(key, value, lineno)

    missing = [k for k in REQUIRED if k not in values]
    if missing:
        raise ConfigError(f"{source}: missing required key(s): {', '.join(missing)}")
    resolved = {**DEFAULTS, **values}
    try:
        params = PhysicalParams(
            v_f=resolved["v_f_cm_s"], mass=resolved["m_g"], d=resolved["d_cm"],
            delta=2.0 * math.pi * resolved["delta_hz"], gamma=2.0 * math.pi * resolved["gamma_hz_per_g"],
            projection=resolved["projection"],
        )
    except ValidationError as exc:
        key = {"v_f": "v_f_cm_s", "mass": "m_g", "d": "d_cm", "delta": "delta_hz",
               "gamma": "gamma_hz_per_g"}.get(exc.field, exc.field)
        line = seen.get(key)
        where = f", line {line}" if line else ""
        raise ConfigError(f"{source}{where}: {key}: {exc}", lines=(line,) if line else ()) from exc
    return params, resolved


def parse_config(path):
    """Read and validate a config file; returns ``(PhysicalParams, options)``."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror or exc}") from exc
    return parse_config_text(text, source=str(path))


def default_params():
    """Free-electron gas (v_F = 1e8 cm/s, free mass) at 1.2 GHz with ``d = 0``."""
    return parse_config_text("v_f_cm_s = 1e8\nm_g = 9.1e-28\ngamma_hz_per_g = 2.8e6\n")[0]
