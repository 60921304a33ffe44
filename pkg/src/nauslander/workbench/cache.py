"""Content-addressed disk cache for Ext tables and similar small JSON results."""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from ..austransform import InvariantViolation

CACHE_ENV = "NAUSLANDER_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "nauslander"


def content_key(operation: str, *parts: str) -> str:
    h = hashlib.sha256(operation.encode())
    for part in parts:
        h.update(b"\0")
        h.update(part.encode())
    return h.hexdigest()


class DiskCache:
    """JSON values stored at ``<root>/<key[:2]>/<key>.json``.

    A fraction ``spot_check`` of hits is recomputed (seeded) and compared
    byte for byte; a mismatch raises :class:`InvariantViolation`.
    """

    def __init__(self, root: Optional[Path] = None, spot_check: float = 0.1, seed: int = 0):
        self.root = Path(root) if root is not None else default_cache_dir()
        self.spot_check = spot_check
        self.rng = np.random.default_rng(seed)
        self.hits = self.misses = self.checked = 0

    def _path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def get(self, key: str):
        path = self._path(key)
        try:
            return json.loads(path.read_text())
        except (OSError, ValueError):
            return None

    def put(self, key: str, value) -> None:
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(value, fh, sort_keys=True)
        os.replace(tmp, path)

    def fetch(self, key: str, compute: Callable[[], object]):
        value = self.get(key)
        if value is None:
            self.misses += 1
            value = compute()
            self.put(key, value)
            return value
        self.hits += 1
        if self.rng.random() < self.spot_check:
            self.checked += 1
            fresh = compute()
            if json.dumps(fresh, sort_keys=True) != json.dumps(value, sort_keys=True):
                raise InvariantViolation(f"cache entry {key[:12]} differs from recomputation")
        return value

    def stats(self) -> dict:
        return {"hits": self.hits, "misses": self.misses, "spot_checked": self.checked}


def cached_ext_dims(cache: Optional[DiskCache], ext_dims_fn, M, N, max_k: int):
    if cache is None:
        return ext_dims_fn(M, N, max_k)
    key = content_key("ext_dims", M.key, N.key, str(max_k))
    return cache.fetch(key, lambda: [int(x) for x in ext_dims_fn(M, N, max_k)])
