"""Deterministic artifact writers: every file embeds the toolkit version and
a hash of the configuration that produced it, and repeated runs at a fixed
seed are byte-identical."""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

from . import __version__


def config_hash(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def write_json(path: Path, payload: dict, config: dict) -> None:
    doc = {
        "meta": {"toolkit_version": __version__, "config_hash": config_hash(config)},
        **payload,
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def write_csv(path: Path, header: list[str], rows: list[list], config: dict) -> None:
    lines = [
        f"# toolkit_version={__version__} config_hash={config_hash(config)}",
        ",".join(header),
    ]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)
