"""Content-addressed block cache.

Each cached block is one canonical JSON file named by the SHA-256 of its key.
The file stores the key, the payload and the SHA-256 of the canonical payload;
a mismatch on load moves the file to ``quarantine/`` and reports a miss, so
the block is recomputed.  Writes go through a temporary file and
``os.replace`` (single writer, many readers).  Reads touch the file's mtime,
which drives least-recently-used eviction in :func:`cache_gc`.
"""

from __future__ import annotations

import hashlib
import json
import os
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

__all__ = ["BlockCache", "GcSummary", "cache_gc", "default_cache_dir", "canonical", "CACHE_ENV"]

CACHE_ENV = "VOALAB_CACHE_DIR"
LOCK_NAME = "run.lock"


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "voalab"


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)


def digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class BlockCache:
    """Directory of canonical JSON block files addressed by key hash."""

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0
        self.quarantined: List[str] = []

    def path_for(self, key) -> Path:
        return self.root / f"{digest(canonical(key))}.json"

    def get(self, key) -> Optional[Any]:
        p = self.path_for(key)
        if not p.exists():
            self.misses += 1
            return None
        try:
            obj = json.loads(p.read_text())
            ok = (obj.get("key") == json.loads(canonical(key))
                  and obj.get("sha256") == digest(canonical(obj.get("payload"))))
        except (OSError, ValueError, AttributeError):
            ok = False
        if not ok:
            self._quarantine(p)
            self.misses += 1
            return None
        os.utime(p)
        self.hits += 1
        return obj["payload"]

    def put(self, key, payload) -> Path:
        p = self.path_for(key)
        body = {"key": json.loads(canonical(key)), "payload": json.loads(canonical(payload)),
                "sha256": digest(canonical(payload))}
        tmp = p.with_suffix(f".tmp{os.getpid()}")
        tmp.write_text(canonical(body))
        os.replace(tmp, p)
        return p

    def _quarantine(self, p: Path):
        qdir = self.root / "quarantine"
        qdir.mkdir(exist_ok=True)
        os.replace(p, qdir / p.name)
        self.quarantined.append(p.name)

    @contextmanager
    def run_lock(self):
        """Mark a run in progress so that garbage collection leaves the cache alone."""
        lock = self.root / LOCK_NAME
        lock.write_text(str(os.getpid()))
        try:
            yield self
        finally:
            try:
                lock.unlink()
            except FileNotFoundError:
                pass


@dataclass
class GcSummary:
    files_before: int = 0
    bytes_before: int = 0
    evicted: List[str] = field(default_factory=list)
    bytes_after: int = 0
    skipped_reason: str = ""

    def to_obj(self) -> Dict[str, Any]:
        return {"files_before": self.files_before, "bytes_before": self.bytes_before,
                "evicted": self.evicted, "bytes_after": self.bytes_after,
                "skipped_reason": self.skipped_reason}


def _pid_alive(pid: int) -> bool:
    try:
        os.kill(pid, 0)
    except ProcessLookupError:
        return False
    except PermissionError:
        return True
    return True


def cache_gc(root, max_bytes: int) -> GcSummary:
    """Evict least recently used block files until the cache holds at most ``max_bytes``.

    Does nothing while a live run holds the run lock.  IO errors propagate.
    """
    root = Path(root)
    summary = GcSummary()
    if not root.exists():
        return summary
    lock = root / LOCK_NAME
    if lock.exists():
        try:
            pid = int(lock.read_text().strip() or 0)
        except ValueError:
            pid = 0
        if pid and _pid_alive(pid):
            summary.skipped_reason = f"run in progress (pid {pid})"
            return summary
    files = sorted((p for p in root.glob("*.json")), key=lambda p: (p.stat().st_mtime, p.name))
    sizes = {p: p.stat().st_size for p in files}
    total = sum(sizes.values())
    summary.files_before = len(files)
    summary.bytes_before = total
    for p in files:
        if total <= max_bytes:
            break
        p.unlink()
        total -= sizes[p]
        summary.evicted.append(p.name)
    summary.bytes_after = total
    return summary
