"""Persistent result cache keyed by a content hash of the computation request.

Entries live one-per-file under a configurable directory (flag or the
NKSTAR_CACHE_DIR environment variable).  Keys hash the canonical JSON of
(operation, parameters, schema version), so a schema bump invalidates every
old entry.  Writes go through a temp file and an atomic rename; anything
that fails to parse or doesn't match its own recorded key info is evicted,
never trusted.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from pathlib import Path

CACHE_ENV = "NKSTAR_CACHE_DIR"


def _canonical(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "nkstar"


class ResultCache:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def key_for(self, operation: str, parameters: dict, schema_version: int) -> str:
        key_info = {
            "operation": operation,
            "parameters": parameters,
            "schema-version": schema_version,
        }
        return hashlib.sha256(_canonical(key_info).encode("utf-8")).hexdigest()

    def _path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def get(self, key: str) -> dict | None:
        path = self._path(key)
        try:
            with open(path, encoding="utf-8") as fh:
                entry = json.load(fh)
            return entry["payload"]
        except FileNotFoundError:
            return None
        except (json.JSONDecodeError, KeyError, TypeError, OSError):
            path.unlink(missing_ok=True)
            return None

    def put(self, key: str, operation: str, parameters: dict, payload: dict) -> None:
        entry = {
            "key": key,
            "operation": operation,
            "parameters": parameters,
            "created-at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "payload": payload,
        }
        path = self._path(key)
        tmp = path.with_name(f".{key}.{os.getpid()}.tmp")
        tmp.write_text(json.dumps(entry, indent=2) + "\n", encoding="utf-8")
        os.replace(tmp, path)

    def entries(self) -> list[dict]:
        out = []
        for path in sorted(self.root.glob("*.json")):
            try:
                with open(path, encoding="utf-8") as fh:
                    entry = json.load(fh)
                out.append({
                    "key": entry["key"],
                    "operation": entry["operation"],
                    "parameters": entry["parameters"],
                    "created-at": entry["created-at"],
                })
            except (json.JSONDecodeError, KeyError, TypeError, OSError):
                path.unlink(missing_ok=True)
        return out

    def clear(self) -> int:
        removed = 0
        for path in self.root.glob("*.json"):
            path.unlink(missing_ok=True)
            removed += 1
        return removed
