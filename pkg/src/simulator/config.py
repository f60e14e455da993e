"""
Scenario Configuration
======================

Scenario files are flat `key=value` text. Blank lines and `#` comments are
ignored. Every error carries the line number it was found on.

    # two vehicles, one RSU, honest network
    vehicles=2
    rsus=1
    epochs=1
    tamper_rate=0.0

Recognized keys are the fields of `ScenarioConfig` plus the adversary keys
`drop_rate`, `replay_rate`, `tamper_rate` and `forgeries_per_epoch`.
"""
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

from src.errors import ScenarioConfigError
from src.protocols.cipher import CIPHERS
from settings import (
    DEFAULT_AGGREGATE_CHUNK,
    DEFAULT_BACKEND,
    DEFAULT_BEACON_RATE,
    DEFAULT_CIPHER,
    DEFAULT_EPOCHS,
    DEFAULT_FRESHNESS_WINDOW,
    DEFAULT_REPLAY_DELAY,
    DEFAULT_RSUS,
    DEFAULT_SEED,
    DEFAULT_STP_BATCH,
    DEFAULT_TRACE_SAMPLE,
    DEFAULT_VEHICLES,
    SUPPORTED_BACKENDS,
)


@dataclass(frozen=True)
class AdversaryPolicy:
    """Network adversary without private keys: drops, replays, tampers and forges."""
    drop_rate: float = 0.0
    replay_rate: float = 0.0
    tamper_rate: float = 0.0
    forgeries_per_epoch: int = 0

    def __post_init__(self):
        for name in ("drop_rate", "replay_rate", "tamper_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ScenarioConfigError(f"{name} must be in [0, 1], got {value}")
        if self.forgeries_per_epoch < 0:
            raise ScenarioConfigError(f"forgeries_per_epoch must be >= 0, got {self.forgeries_per_epoch}")

    @property
    def is_passive(self) -> bool:
        return not (self.drop_rate or self.replay_rate or self.tamper_rate or self.forgeries_per_epoch)


@dataclass(frozen=True)
class ScenarioConfig:
    vehicles: int = DEFAULT_VEHICLES
    rsus: int = DEFAULT_RSUS
    epochs: int = DEFAULT_EPOCHS
    beacon_rate: int = DEFAULT_BEACON_RATE
    stp_batch: int = DEFAULT_STP_BATCH
    seed: int = DEFAULT_SEED
    backend: str = DEFAULT_BACKEND
    cipher: str = DEFAULT_CIPHER
    freshness_window: int = DEFAULT_FRESHNESS_WINDOW
    aggregate_chunk: int = DEFAULT_AGGREGATE_CHUNK
    trace_sample: int = DEFAULT_TRACE_SAMPLE
    replay_delay: int = DEFAULT_REPLAY_DELAY
    strict_trace: bool = True
    adversary: AdversaryPolicy = field(default_factory=AdversaryPolicy)

    def __post_init__(self):
        for name in ("vehicles", "rsus", "epochs", "beacon_rate", "stp_batch", "aggregate_chunk"):
            if getattr(self, name) <= 0:
                raise ScenarioConfigError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("freshness_window", "trace_sample", "replay_delay"):
            if getattr(self, name) < 0:
                raise ScenarioConfigError(f"{name} must be >= 0, got {getattr(self, name)}")
        if not 0 <= self.seed < 2 ** 64:
            raise ScenarioConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.backend not in SUPPORTED_BACKENDS:
            raise ScenarioConfigError(f"backend must be one of {SUPPORTED_BACKENDS}, got {self.backend!r}")
        if self.cipher not in CIPHERS:
            raise ScenarioConfigError(f"cipher must be one of {sorted(CIPHERS)}, got {self.cipher!r}")
        if self.beacon_rate > self.stp_batch:
            raise ScenarioConfigError(
                f"beacon_rate ({self.beacon_rate}) exceeds stp_batch ({self.stp_batch}); "
                "every beacon in an epoch needs its own STP"
            )

    def with_overrides(self, **overrides: Any) -> "ScenarioConfig":
        """Apply CLI overrides; None values are ignored."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def effective_lines(self) -> List[str]:
        """The configuration as `key=value` lines, in a form load_scenario accepts."""
        lines = [
            f"{f.name}={_render(getattr(self, f.name))}"
            for f in fields(self) if f.name != "adversary"
        ]
        lines.extend(
            f"{f.name}={_render(getattr(self.adversary, f.name))}"
            for f in fields(self.adversary)
        )
        return lines


def _render(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _parse_bool(raw: str) -> bool:
    lowered = raw.lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected a boolean, got {raw!r}")


def _parse_int(raw: str) -> int:
    return int(raw, 10)


def _parse_rate(raw: str) -> float:
    value = float(raw)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"rate must be in [0, 1], got {value}")
    return value


_SCENARIO_KEYS: Dict[str, Callable[[str], Any]] = {
    "vehicles": _parse_int,
    "rsus": _parse_int,
    "epochs": _parse_int,
    "beacon_rate": _parse_int,
    "stp_batch": _parse_int,
    "seed": _parse_int,
    "backend": str,
    "cipher": str,
    "freshness_window": _parse_int,
    "aggregate_chunk": _parse_int,
    "trace_sample": _parse_int,
    "replay_delay": _parse_int,
    "strict_trace": _parse_bool,
}

_ADVERSARY_KEYS: Dict[str, Callable[[str], Any]] = {
    "drop_rate": _parse_rate,
    "replay_rate": _parse_rate,
    "tamper_rate": _parse_rate,
    "forgeries_per_epoch": _parse_int,
}


def parse_scenario(text: str) -> ScenarioConfig:
    """
    Parse scenario text into a validated ScenarioConfig.

    Raises:
        ScenarioConfigError: with the 1-based line number of the first problem.
    """
    values: Dict[str, Tuple[Any, int]] = {}
    for line_number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioConfigError(f"expected key=value, got {raw_line.strip()!r}", line_number)
        key, raw_value = (part.strip() for part in line.split("=", 1))
        parser = _SCENARIO_KEYS.get(key) or _ADVERSARY_KEYS.get(key)
        if parser is None:
            raise ScenarioConfigError(f"unknown key {key!r}", line_number)
        if key in values:
            raise ScenarioConfigError(f"duplicate key {key!r} (first set on line {values[key][1]})", line_number)
        if not raw_value:
            raise ScenarioConfigError(f"missing value for {key!r}", line_number)
        try:
            values[key] = (parser(raw_value), line_number)
        except ValueError as e:
            raise ScenarioConfigError(f"bad value for {key!r}: {e}", line_number) from e

    adversary_kwargs = {k: v for k, (v, _) in values.items() if k in _ADVERSARY_KEYS}
    scenario_kwargs = {k: v for k, (v, _) in values.items() if k in _SCENARIO_KEYS}
    try:
        adversary = AdversaryPolicy(**adversary_kwargs)
        return ScenarioConfig(adversary=adversary, **scenario_kwargs)
    except ScenarioConfigError as e:
        raise ScenarioConfigError(str(e), _line_of(str(e), values)) from e


def _line_of(message: str, values: Dict[str, Tuple[Any, int]]) -> Optional[int]:
    # Range checks run after parsing; point at the first key the message names.
    for key, (_, line_number) in sorted(values.items(), key=lambda item: item[1][1]):
        if message.startswith(key) or f"({key})" in message or f" {key} " in message:
            return line_number
    return None


def load_scenario(path: Union[str, Path]) -> ScenarioConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioConfigError(f"cannot read scenario file {path}: {e}") from e
    return parse_scenario(text)
