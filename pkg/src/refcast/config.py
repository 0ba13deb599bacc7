"""Optional JSON configuration, located by ``--config`` or ``REFCAST_CONFIG``.

Example::

    {
      "dataset_store_path": "~/.refcast/store",
      "tiers": [{"name": "contract", "p_level": 0.3, "owner": "contract manager"},
                {"name": "project", "p_level": 0.5, "owner": "project manager"},
                {"name": "funder", "p_level": 0.8, "owner": "project funder"}],
      "window": 11,
      "confidence": 0.95,
      "format": "text"
    }
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from refcast.errors import DomainError
from refcast.regime import DEFAULT_TIERS, TierSpec, check_tiers
from refcast.report import FORMATS

ENV_VAR = "REFCAST_CONFIG"


@dataclass(frozen=True)
class Config:
    dataset_store_path: Path = Path(".refcast-store")
    tiers: tuple[TierSpec, ...] = DEFAULT_TIERS
    window: int = 11
    confidence: float = 0.95
    format: str = "text"

    def __post_init__(self) -> None:
        check_tiers(self.tiers)
        if self.window < 1 or self.window % 2 == 0:
            raise DomainError("config: window must be an odd integer >= 1")
        if not 0 < self.confidence < 1:
            raise DomainError("config: confidence must lie in (0, 1)")
        if self.format not in FORMATS:
            raise DomainError(f"config: format must be one of {', '.join(FORMATS)}")


def load_config(path: str | Path | None = None) -> Config:
    if path is None:
        path = os.environ.get(ENV_VAR)
    if not path:
        return Config()
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read config {path}: {exc}") from exc
    unknown = set(raw) - {"dataset_store_path", "tiers", "window", "confidence", "format"}
    if unknown:
        raise DomainError(f"config: unknown keys {', '.join(sorted(unknown))}")
    kwargs: dict = {}
    if "dataset_store_path" in raw:
        kwargs["dataset_store_path"] = Path(raw["dataset_store_path"]).expanduser()
    if "tiers" in raw:
        kwargs["tiers"] = tuple(
            TierSpec(t["name"], float(t["p_level"]), t.get("owner", "")) for t in raw["tiers"]
        )
    for key in ("window", "confidence", "format"):
        if key in raw:
            kwargs[key] = raw[key]
    return Config(**kwargs)
