"""Run manifests: every artifact-producing command writes one beside its
output, recording the subcommand, full flag set, input content hashes, tool
version and seed.  Two runs with equal manifests (timestamps aside) produce
byte-identical primary outputs in single-worker mode."""
from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone
from pathlib import Path

from . import __version__

# fields legitimately differing between otherwise identical runs
VOLATILE_KEYS = frozenset({"started_at", "finished_at", "timing_seconds"})


def file_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def source_digest(path: str | Path) -> str:
    """Digest of a file, or of a directory's files (names and contents)."""
    path = Path(path)
    if path.is_file():
        return file_digest(path)
    h = hashlib.sha256()
    for file in sorted(p for p in path.rglob("*") if p.is_file()):
        rel = file.relative_to(path).as_posix()
        h.update(f"{rel}:{file_digest(file)}\n".encode("utf-8"))
    return h.hexdigest()


def write_json(path: str | Path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, ensure_ascii=False, indent=1, sort_keys=True)
        fh.write("\n")
    return path


def manifest_path_for(artifact: str | Path) -> Path:
    artifact = Path(artifact)
    if artifact.is_dir():
        return artifact / "manifest.json"
    return artifact.with_name(artifact.name + ".manifest.json")


def write_manifest(
    artifact: str | Path,
    subcommand: str,
    arguments: dict,
    inputs: list[str | Path],
    seed: int | None,
    started_at: str,
) -> Path:
    manifest = {
        "tool": "premsel",
        "version": __version__,
        "subcommand": subcommand,
        "arguments": {k: (str(v) if v is not None else None) for k, v in sorted(arguments.items())},
        "inputs": {str(p): source_digest(p) for p in inputs},
        "seed": seed,
        "started_at": started_at,
        "finished_at": datetime.now(timezone.utc).isoformat(),
    }
    return write_json(manifest_path_for(artifact), manifest)


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


def strip_volatile(obj):
    """Copy of a JSON-like object with volatile (timing/timestamp) keys
    removed at every level; lets callers compare artifacts for equality."""
    if isinstance(obj, dict):
        return {k: strip_volatile(v) for k, v in obj.items() if k not in VOLATILE_KEYS}
    if isinstance(obj, list):
        return [strip_volatile(v) for v in obj]
    return obj
