"""Configuration — config.yaml defaults, .env overrides and caps parsing."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml
from dotenv import load_dotenv

from src.series import UsageError

load_dotenv()

log = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parent.parent
DEFAULT_CONFIG = PROJECT_ROOT / "config.yaml"

CAPS_ENV = "QLATTICE_CAPS"
UNIFORM = "*"


@dataclass
class Settings:
    cap: int = 4
    numeric_cap: int = 40
    tol: float = 1e-6
    json_output: bool = False
    log_level: str = "WARNING"
    log_dir: str = ""


def _load_config(path: str | Path) -> dict:
    if os.path.exists(path):
        with open(path) as f:
            return yaml.safe_load(f) or {}
    return {}


def load_settings(path: str | Path | None = None) -> Settings:
    config = _load_config(path or DEFAULT_CONFIG)
    defaults = config.get("defaults", {}) or {}
    output = config.get("output", {}) or {}
    logging_cfg = config.get("logging", {}) or {}
    try:
        settings = Settings(
            cap=int(defaults.get("cap", 4)),
            numeric_cap=int(defaults.get("numeric_cap", 40)),
            tol=float(defaults.get("tol", 1e-6)),
            json_output=bool(output.get("json", False)),
            log_level=str(logging_cfg.get("level", "WARNING")),
            log_dir=str(logging_cfg.get("log_dir", "") or ""),
        )
    except (TypeError, ValueError) as e:
        raise UsageError(f"Bad value in {path or DEFAULT_CONFIG}: {e}")
    if settings.cap < 0 or settings.numeric_cap < 1 or settings.tol <= 0:
        raise UsageError(f"Defaults out of range: cap={settings.cap}, numeric_cap={settings.numeric_cap}, tol={settings.tol}")
    return settings


def parse_caps(text: str) -> dict[str, int]:
    """'q=3,t=4' -> {'q': 3, 't': 4}; a bare integer '3' sets every variable ({'*': 3})."""
    text = (text or "").strip()
    if not text:
        return {}
    if "=" not in text:
        try:
            value = int(text)
        except ValueError:
            raise UsageError(f"Caps must look like var=n,... or a single integer, got {text!r}")
        if value < 0:
            raise UsageError(f"Caps must be non-negative, got {value}")
        return {UNIFORM: value}
    caps = {}
    for item in text.split(","):
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or not name:
            raise UsageError(f"Malformed caps entry {item!r}")
        try:
            cap = int(value)
        except ValueError:
            raise UsageError(f"Cap for {name} is not an integer: {value!r}")
        if cap < 0:
            raise UsageError(f"Cap for {name} must be non-negative, got {cap}")
        if name in caps:
            raise UsageError(f"Cap for {name} given twice")
        caps[name] = cap
    return caps


@dataclass
class CapsChoice:
    named: dict[str, int] = field(default_factory=dict)
    uniform: int | None = None
    source: str = "config"

    def default(self, fallback: int) -> int:
        return fallback if self.uniform is None else self.uniform


def resolve_caps(cli_caps: str | None) -> CapsChoice:
    """Caps from the CLI flag, else QLATTICE_CAPS; the config default fills the rest."""
    source = "config"
    text = cli_caps
    if text:
        source = "flag"
    else:
        text = os.getenv(CAPS_ENV, "")
        if text:
            source = CAPS_ENV
    caps = parse_caps(text or "")
    uniform = caps.pop(UNIFORM, None)
    log.debug(f"caps from {source}: named={caps} uniform={uniform}")
    return CapsChoice(named=caps, uniform=uniform, source=source)


def parse_floats(text: str, what: str) -> tuple[float, ...]:
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise UsageError(f"{what} must be a comma-separated list of numbers, got {text!r}")
    if not values:
        raise UsageError(f"{what} is empty")
    return values


def parse_ints(text: str, what: str) -> tuple[int, ...]:
    try:
        values = tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise UsageError(f"{what} must be a comma-separated list of integers, got {text!r}")
    if not values:
        raise UsageError(f"{what} is empty")
    return values
