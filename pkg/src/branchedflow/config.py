"""Run configuration: defaults, config-file parsing, flag overrides.

Config files are plain text, one `key = value` per line, keys namespaced
(grid.N, ensemble.realizations, seed.master, ...). Precedence is
defaults < paper-scale swap < file < explicit overrides. Zero means "auto"
for grid.M and grid.T: M follows the synthesis/dynamics resolution rule,
T follows five white-noise branching times of the point being run.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

from .errors import ConfigError

_INT_KEYS = {"grid.N", "grid.M", "ensemble.realizations", "ensemble.particles",
             "seed.master", "run.workers"}
_FLOAT_KEYS = {"grid.L", "grid.T"}
_BOOL_KEYS = {"run.share_seeds"}

DEFAULTS = {
    "grid.L": 100.0,
    "grid.N": 4096,
    "grid.M": 0,          # auto
    "grid.T": 0.0,        # auto: 5 * t_b^wn of the run's point
    "ensemble.realizations": 20,
    "ensemble.particles": 1000,
    "seed.master": 1234,
    "run.share_seeds": True,
    "run.workers": 1,
}

# full-size settings; desk defaults above are scaled down from these
PAPER_SCALE = {
    "grid.N": 8192,
    "ensemble.realizations": 104,
    "ensemble.particles": 4000,
}

_FIELD_BY_KEY = {
    "grid.L": "L", "grid.N": "N", "grid.M": "M", "grid.T": "T",
    "ensemble.realizations": "realizations",
    "ensemble.particles": "particles",
    "seed.master": "master_seed",
    "run.share_seeds": "share_seeds",
    "run.workers": "workers",
}
_KEY_BY_FIELD = {v: k for k, v in _FIELD_BY_KEY.items()}


@dataclass(frozen=True)
class RunConfig:
    L: float = 100.0
    N: int = 4096
    M: int = 0
    T: float = 0.0
    realizations: int = 20
    particles: int = 1000
    master_seed: int = 1234
    share_seeds: bool = True
    workers: int = 1
    paper_scale: bool = False

    def __post_init__(self):
        if self.L <= 0:
            raise ConfigError(f"grid.L must be positive, got {self.L}")
        for key in ("N", "M", "realizations", "particles", "workers"):
            val = getattr(self, key)
            if val < 0 or (key in ("N", "realizations", "particles", "workers")
                           and val == 0):
                raise ConfigError(f"{_KEY_BY_FIELD.get(key, key)} must be positive, got {val}")
        if self.T < 0:
            raise ConfigError(f"grid.T must be >= 0, got {self.T}")

    def provenance_items(self) -> list[tuple[str, object]]:
        """Ordered key=value pairs for output headers; reconstructs the run."""
        items = [(_KEY_BY_FIELD[f.name], getattr(self, f.name))
                 for f in fields(self) if f.name in _KEY_BY_FIELD]
        items.append(("run.paper_scale", self.paper_scale))
        return items


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _BOOL_KEYS:
            low = raw.lower()
            if low in ("true", "1", "yes", "on"):
                return True
            if low in ("false", "0", "no", "off"):
                return False
            raise ValueError(raw)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None
    raise ConfigError(f"unknown config key: {key}")


def parse_config_file(path) -> dict[str, object]:
    """Read `key = value` lines; '#' starts a comment, blank lines skipped."""
    values: dict[str, object] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ConfigError(f"{path}:{lineno}: expected key = value, got {text!r}")
            key, raw = (part.strip() for part in text.split("=", 1))
            if key not in DEFAULTS:
                raise ConfigError(f"{path}:{lineno}: unknown config key: {key}")
            values[key] = _parse_value(key, raw)
    return values


def resolve_config(file=None, overrides: dict[str, object] | None = None,
                   paper_scale: bool = False) -> RunConfig:
    """Layer defaults, the optional file, then explicit overrides."""
    merged = dict(DEFAULTS)
    if paper_scale:
        merged.update(PAPER_SCALE)
    if file is not None:
        merged.update(parse_config_file(file))
    for key, value in (overrides or {}).items():
        if key not in DEFAULTS:
            raise ConfigError(f"unknown config key: {key}")
        merged[key] = _parse_value(key, str(value)) if isinstance(value, str) else value
    kwargs = {_FIELD_BY_KEY[k]: v for k, v in merged.items()}
    return RunConfig(paper_scale=paper_scale, **kwargs)


def with_updates(config: RunConfig, **field_updates) -> RunConfig:
    return replace(config, **field_updates)
