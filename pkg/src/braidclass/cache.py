"""On-disk JSON cache for expensive results.

Entries are keyed by a content hash of (version, operation, parameters) where
groups enter through their Cayley-table hash, so equal groups share entries
no matter how they were named.  Writes go to a temp file in the same
directory followed by ``os.replace``, which keeps concurrent runs safe.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

CACHE_ENV = "BRAIDCLASS_CACHE_DIR"
CACHE_VERSION = "1"


def default_cache_dir() -> Path:
    if os.environ.get(CACHE_ENV):
        return Path(os.environ[CACHE_ENV])
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "braidclass"


def cache_key(parts) -> str:
    blob = json.dumps([CACHE_VERSION, parts], sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


class DiskCache:
    def __init__(self, root: str | os.PathLike | None = None):
        self.root = Path(root) if root is not None else default_cache_dir()

    def _path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def get(self, parts):
        key = cache_key(parts)
        path = self._path(key)
        try:
            record = json.loads(path.read_text())
        except (OSError, ValueError):
            return None
        if record.get("version") != CACHE_VERSION or record.get("key") != key:
            return None
        return record["value"]

    def put(self, parts, value) -> None:
        key = cache_key(parts)
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        record = {"key": key, "version": CACHE_VERSION, "value": value}
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(record, fh, sort_keys=True)
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
