"""Runtime configuration for analysis runs.

Every tunable of the pipeline lives here: the file ordering of the global
axis, session and aggregation gaps, detector parameters and scoring rules.
A configuration hashes to a stable digest so cached reports can tell whether
they were produced under the same settings.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Mapping

from .events import canonical_json
from .patterns import DetectorParams
from .recording import LONG_IDLE_THRESHOLD_MS, SHORT_IDLE_FLOOR_MS
from .scoring import ScoringRules
from .spatial import ALPHABETICAL, ORDERING_RULES
from .track import MAX_GAP_MS

ENV_VAR = "TRACELENS_CONFIG"


@dataclass(frozen=True)
class Config:
    ordering_rule: str = ALPHABETICAL
    session_gap_ms: int = LONG_IDLE_THRESHOLD_MS
    idle_floor_ms: int = SHORT_IDLE_FLOOR_MS
    aggregation_gap_ms: int = MAX_GAP_MS
    detectors: DetectorParams = DetectorParams()
    scoring: ScoringRules = ScoringRules()

    def to_mapping(self) -> dict:
        return {
            "ordering_rule": self.ordering_rule,
            "session_gap_ms": self.session_gap_ms,
            "idle_floor_ms": self.idle_floor_ms,
            "aggregation_gap_ms": self.aggregation_gap_ms,
            "detectors": {
                "oscillate": vars(self.detectors.oscillate),
                "restart": vars(self.detectors.restart),
                "phase": vars(self.detectors.phase),
                "doc_files": list(self.detectors.doc_files),
                "pmd_patterns": list(self.detectors.pmd_patterns),
            },
            "scoring": {
                name: getattr(self.scoring, name)
                for name in ScoringRules.__dataclass_fields__
            },
        }

    def digest(self) -> str:
        payload = canonical_json(self.to_mapping()).encode("utf-8")
        return hashlib.sha256(payload).hexdigest()[:16]

    @staticmethod
    def from_mapping(raw: Mapping[str, Any]) -> "Config":
        known = {
            "ordering_rule",
            "session_gap_ms",
            "idle_floor_ms",
            "aggregation_gap_ms",
            "detectors",
            "scoring",
        }
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        config = Config()
        simple = {
            key: raw[key]
            for key in ("ordering_rule", "session_gap_ms", "idle_floor_ms", "aggregation_gap_ms")
            if key in raw
        }
        if simple:
            config = replace(config, **simple)
        if config.ordering_rule not in ORDERING_RULES:
            raise ValueError(f"unknown ordering rule {config.ordering_rule!r}")
        if "detectors" in raw:
            config = replace(config, detectors=DetectorParams.from_mapping(raw["detectors"]))
        if "scoring" in raw:
            config = replace(config, scoring=ScoringRules.from_mapping(raw["scoring"]))
        return config


def load_config(path: str | Path | None = None) -> Config:
    """Load configuration from a JSON or TOML file.

    Args:
        path: Explicit file; when None, the TRACELENS_CONFIG environment
            variable is consulted, and defaults apply if it is unset.

    Returns:
        The effective configuration.
    """
    if path is None:
        env = os.environ.get(ENV_VAR)
        if not env:
            return Config()
        path = env
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError:
            import tomli as tomllib
        raw = tomllib.loads(text)
    else:
        raw = json.loads(text)
    return Config.from_mapping(raw)
