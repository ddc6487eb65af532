"""Load, validate, and serialize scenario files.

A scenario file is TOML. Every table maps onto one dataclass; unknown keys and
out-of-range values are rejected with the dotted key path and, where it can be
found, the line number in the file.
"""

import re
from dataclasses import fields, replace
from pathlib import Path

import toml

from .command_errors import ModelError, ScenarioError
from .firm_side import TechShock
from .mobility import MobilityPolicy
from .model_core import Params
from .sim_engine import EconomySpec, OutputSpec, PricingSpec, Scenario, SpatialSpec


SCHEMA_VERSION = 1
DEFAULT_SCENARIO = Path(__file__).parent / "scenarios" / "default.toml"

# Table name -> dataclass. Optional tables stay None when absent.
SECTIONS = {
    "params": Params,
    "economy": EconomySpec,
    "mobility": MobilityPolicy,
    "output": OutputSpec,
    "pricing": PricingSpec,
    "spatial": SpatialSpec,
}
OPTIONAL_SECTIONS = ("pricing", "spatial")
TOP_LEVEL_KEYS = ("schema_version", "seed", "periods", "shocks") + tuple(SECTIONS)


def load_scenario(path):
    """Read and fully validate a scenario file."""
    path = Path(path)
    if not path.exists():
        raise ScenarioError(f"Scenario file not found: {path.as_posix()}")

    text = path.read_text()
    try:
        data = toml.loads(text)
    except toml.TomlDecodeError as exc:
        raise ScenarioError(f"Could not parse {path.name}: {exc.msg}", line=exc.lineno) from exc

    return parse_scenario(data, text)


def parse_scenario(data, text=""):
    """Build a Scenario from an already parsed TOML document."""
    _reject_unknown(data, TOP_LEVEL_KEYS, "", text)

    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ScenarioError(
            f"Unsupported schema_version {version!r}; expected {SCHEMA_VERSION}",
            key_path="schema_version",
            line=_find_line(text, "", "schema_version"),
        )

    sections = {}
    for name, cls in SECTIONS.items():
        table = data.get(name)
        if table is None:
            sections[name] = None if name in OPTIONAL_SECTIONS else cls()
            continue
        if not isinstance(table, dict):
            raise ScenarioError(f"[{name}] must be a table", key_path=name, line=_find_line(text, "", name))
        sections[name] = _build(cls, table, name, text)

    shocks = []
    for index, table in enumerate(data.get("shocks", [])):
        shocks.append(_build(TechShock, table, f"shocks[{index}]", text))

    top = {key: data[key] for key in ("seed", "periods") if key in data}
    for key, value in top.items():
        if isinstance(value, bool) or not isinstance(value, int):
            raise ScenarioError(f"{key} must be an integer", key_path=key, line=_find_line(text, "", key))

    try:
        return Scenario(shocks=tuple(shocks), **sections, **top)
    except ModelError as exc:
        key = _blamed_key(exc.message, ("periods", "seed")) or "shocks"
        raise ScenarioError(exc.message, key_path=key, line=_find_line(text, "", key)) from exc


def scenario_to_dict(scenario):
    """Plain TOML-ready dict; load(dump(s)) rebuilds an identical Scenario."""
    data = {"schema_version": SCHEMA_VERSION, "seed": scenario.seed, "periods": scenario.periods}
    for name in SECTIONS:
        section = getattr(scenario, name)
        if section is not None:
            data[name] = _to_table(section)
    if scenario.shocks:
        data["shocks"] = [_to_table(shock) for shock in scenario.shocks]
    return data


def dump_scenario(scenario):
    return toml.dumps(scenario_to_dict(scenario))


def apply_override(scenario, dotted_path, raw_value):
    """Return a copy of the scenario with one value replaced.

    dotted_path is "periods", "seed", or "<table>.<key>"; raw_value may be a string
    from the command line and is coerced to the field's type.
    """
    parts = dotted_path.split(".")
    if len(parts) == 1 and parts[0] in ("periods", "seed"):
        value = _coerce(int, raw_value, dotted_path)
        try:
            return replace(scenario, **{parts[0]: value})
        except ModelError as exc:
            raise ScenarioError(exc.message, key_path=dotted_path) from exc

    if len(parts) != 2 or parts[0] not in SECTIONS:
        raise ScenarioError(f"Cannot resolve parameter path {dotted_path!r}", key_path=dotted_path)

    name, key = parts
    cls = SECTIONS[name]
    field_types = {f.name: f.type for f in fields(cls)}
    if key not in field_types:
        raise ScenarioError(f"Unknown key {key!r} in [{name}]", key_path=dotted_path)

    section = getattr(scenario, name) or cls()
    value = _coerce(field_types[key], raw_value, dotted_path)
    try:
        return replace(scenario, **{name: replace(section, **{key: value})})
    except ModelError as exc:
        raise ScenarioError(exc.message, key_path=dotted_path) from exc


# --- Helper functions ---

def _build(cls, table, prefix, text):
    field_types = {f.name: f.type for f in fields(cls)}
    _reject_unknown(table, field_types, prefix, text)

    values = {}
    for key, raw in table.items():
        values[key] = _coerce(field_types[key], raw, f"{prefix}.{key}", text, prefix)

    try:
        return cls(**values)
    except ModelError as exc:
        key = _blamed_key(exc.message, field_types)
        key_path = f"{prefix}.{key}" if key else prefix
        raise ScenarioError(exc.message, key_path=key_path, line=_find_line(text, prefix, key)) from exc


def _reject_unknown(table, allowed, prefix, text):
    for key in table:
        if key not in allowed:
            key_path = f"{prefix}.{key}" if prefix else key
            raise ScenarioError(f"Unknown key {key!r}", key_path=key_path, line=_find_line(text, prefix, key))


def _coerce(expected, raw, key_path, text="", section=""):
    """Convert a TOML or command-line value to the field's declared type."""
    line = _find_line(text, section, key_path.rsplit(".", 1)[-1]) if text else None
    if isinstance(raw, bool) and expected is not bool:
        raise ScenarioError(f"Expected a number for {key_path}, got a boolean", key_path=key_path, line=line)

    try:
        if expected is int:
            if isinstance(raw, float) and not raw.is_integer():
                raise ValueError(raw)
            return int(raw)
        if expected is float:
            return float(raw)
        if expected is tuple:
            if isinstance(raw, str):
                raw = [item for item in raw.split(",") if item.strip()]
            return tuple(_number(item) for item in raw)
        if expected is str:
            if not isinstance(raw, str):
                raise ValueError(raw)
            return raw
    except (TypeError, ValueError):
        raise ScenarioError(
            f"Invalid value {raw!r} for {key_path}: expected {expected.__name__}", key_path=key_path, line=line
        )
    return raw


def _number(item):
    if isinstance(item, str):
        item = item.strip()
        return int(item) if re.fullmatch(r"[+-]?\d+", item) else float(item)
    return item


def _to_table(section):
    table = {}
    for f in fields(section):
        value = getattr(section, f.name)
        if value is None:
            continue
        table[f.name] = list(value) if isinstance(value, tuple) else value
    return table


def _blamed_key(message, candidates):
    """The field a validation message starts with, if any."""
    match = re.match(r"(\w+)", message)
    if match and match.group(1) in candidates:
        return match.group(1)
    return None


def _find_line(text, section, key):
    """1-based line of `key = ...` inside [section], or None."""
    if not text or not key:
        return None

    table = section.split("[")[0]
    in_section = not table
    seen = -1
    index = int(section.split("[")[1].rstrip("]")) if "[" in section else None
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        header = re.match(r"^\[\[?\s*([\w.]+)\s*\]\]?", stripped)
        if header:
            if table and header.group(1) == table:
                seen += 1
                in_section = index is None or seen == index
            else:
                in_section = False
            continue
        if in_section and re.match(rf"^{re.escape(key)}\s*=", stripped):
            return number
    return None
