from dataclasses import fields, replace

import yaml

from dynamics.errors import DomainError

from .model import DEFAULT_SETTINGS, SolverSettings


def _coerce(name: str, raw: object) -> object:
    """Convert a raw YAML/CLI value to the type of the named settings field."""
    field_types = {f.name: f.type for f in fields(SolverSettings)}
    if name not in field_types:
        raise DomainError(f"Unknown setting '{name}'")

    target = field_types[name]
    try:
        if target in (int, "int"):
            return int(raw)  # type: ignore[call-overload]
        return float(raw)  # type: ignore[arg-type]
    except (TypeError, ValueError) as e:
        raise DomainError(f"Setting '{name}' expects a number, got {raw!r}") from e


def load_settings(filepath: str) -> SolverSettings:
    """Load solver settings from a YAML file; missing keys keep their defaults."""
    with open(filepath) as f:
        data = yaml.safe_load(f) or {}

    if not isinstance(data, dict):
        raise DomainError(f"Settings file {filepath} must contain a mapping")

    values = {name: _coerce(name, raw) for name, raw in data.items()}
    return replace(DEFAULT_SETTINGS, **values)


def apply_overrides(settings: SolverSettings, overrides: list[str]) -> SolverSettings:
    """Apply ``key=value`` overrides, as passed on the command line."""
    values = {}
    for item in overrides:
        if "=" not in item:
            raise DomainError(f"Override '{item}' is not of the form key=value")
        name, raw = item.split("=", 1)
        values[name.strip()] = _coerce(name.strip(), raw.strip())

    return replace(settings, **values)
