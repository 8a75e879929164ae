"""
Reader for the line-oriented key-value configuration grammar.

    # comment            ; comment
    [section]
    key = value          # trailing comment
    list_key = a, b, c

Section and key names are case-insensitive. Every value remembers the line it
came from so that semantic errors raised later can point back into the file.
"""

import hashlib
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

from .exceptions import ConfigError

_SECTION_RE = re.compile(r"^\[\s*([A-Za-z_][\w.-]*)\s*\]$")
_KEY_RE = re.compile(r"^([A-Za-z_][\w.:-]*)\s*=\s*(.*)$")
_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


class ConfigParseError(ConfigError):
    """Raised for syntax or value errors, with the offending line"""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        location = f"{path or '<config>'}:{line}" if line else (path or "<config>")
        super().__init__(f"{location}: {message}", details={"path": path, "line": line})
        self.path = path
        self.line = line


@dataclass(frozen=True)
class ConfigEntry:
    """A raw value and the line it was read from (0 for overrides)"""
    value: str
    line: int


@dataclass
class ConfigDocument:
    """Parsed configuration: section -> key -> entry"""
    sections: Dict[str, Dict[str, ConfigEntry]] = field(default_factory=dict)
    path: Optional[str] = None

    def has(self, section: str, key: str) -> bool:
        return key.lower() in self.sections.get(section.lower(), {})

    def keys(self, section: str) -> List[str]:
        return list(self.sections.get(section.lower(), {}).keys())

    def entry(self, section: str, key: str) -> Optional[ConfigEntry]:
        return self.sections.get(section.lower(), {}).get(key.lower())

    def error(self, section: str, key: str, message: str) -> ConfigParseError:
        """Build an error located at the line of ``section.key``"""
        entry = self.entry(section, key)
        return ConfigParseError(f"[{section}] {key}: {message}", self.path,
                                entry.line if entry else None)

    def get(self, section: str, key: str, default: Optional[str] = None) -> Optional[str]:
        entry = self.entry(section, key)
        return entry.value if entry is not None else default

    def get_str(self, section: str, key: str, default: Optional[str] = None) -> Optional[str]:
        value = self.get(section, key)
        return value if value not in (None, "") else default

    def get_int(self, section: str, key: str, default: Optional[int] = None) -> Optional[int]:
        value = self.get(section, key)
        if value in (None, ""):
            return default
        try:
            return int(value)
        except ValueError:
            raise self.error(section, key, f"expected an integer, got '{value}'")

    def get_float(self, section: str, key: str, default: Optional[float] = None) -> Optional[float]:
        value = self.get(section, key)
        if value in (None, ""):
            return default
        try:
            return float(value)
        except ValueError:
            raise self.error(section, key, f"expected a number, got '{value}'")

    def get_bool(self, section: str, key: str, default: Optional[bool] = None) -> Optional[bool]:
        value = self.get(section, key)
        if value in (None, ""):
            return default
        lowered = value.lower()
        if lowered in _TRUE:
            return True
        if lowered in _FALSE:
            return False
        raise self.error(section, key, f"expected true/false, got '{value}'")

    def get_list(self, section: str, key: str, default: Optional[List[str]] = None) -> List[str]:
        value = self.get(section, key)
        if value is None:
            return list(default or [])
        return [item.strip() for item in value.split(",") if item.strip()]

    def set(self, section: str, key: str, value: str, line: int = 0) -> None:
        self.sections.setdefault(section.lower(), {})[key.lower()] = ConfigEntry(value, line)

    def apply_overrides(self, overrides: Iterable[str]) -> None:
        """Apply ``section.key=value`` overrides from the command line"""
        for override in overrides:
            if "=" not in override or "." not in override.split("=", 1)[0]:
                raise ConfigParseError(f"override '{override}' must look like section.key=value")
            target, value = override.split("=", 1)
            section, key = target.split(".", 1)
            self.set(section.strip(), key.strip(), value.strip())

    def normalized(self) -> Dict[str, Dict[str, str]]:
        """Sorted plain-dict view used for hashing and reports"""
        return {
            section: {key: entry.value for key, entry in sorted(entries.items())}
            for section, entries in sorted(self.sections.items())
        }

    def digest(self) -> str:
        """SHA-256 of the normalized configuration"""
        payload = json.dumps(self.normalized(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def parse_config_text(text: str, path: Optional[str] = None) -> ConfigDocument:
    """
    Parse configuration text.

    Raises:
        ConfigParseError: On any syntax error, with the 1-based line number
    """
    document = ConfigDocument(path=path)
    current: Optional[str] = None

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#;":
            continue
        # Trailing comments need whitespace before the marker
        line = re.split(r"\s+[#;]", line, maxsplit=1)[0].strip()

        section_match = _SECTION_RE.match(line)
        if section_match:
            current = section_match.group(1).lower()
            document.sections.setdefault(current, {})
            continue

        key_match = _KEY_RE.match(line)
        if not key_match:
            raise ConfigParseError(f"cannot parse '{raw.strip()}'", path, number)
        if current is None:
            raise ConfigParseError("key outside of any [section]", path, number)

        key = key_match.group(1).lower()
        if key in document.sections[current]:
            first = document.sections[current][key].line
            raise ConfigParseError(f"duplicate key '{key}' (first set on line {first})", path, number)
        document.sections[current][key] = ConfigEntry(key_match.group(2).strip(), number)

    return document


def load_config_file(path: Any) -> ConfigDocument:
    """Read and parse a configuration file"""
    config_path = Path(path)
    if not config_path.is_file():
        raise ConfigError(f"configuration file not found: {config_path}", details={"path": str(config_path)})
    return parse_config_text(config_path.read_text(encoding="utf-8"), str(config_path))
