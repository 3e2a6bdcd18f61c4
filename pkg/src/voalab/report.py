"""Machine-readable verification reports."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .core import State

ENGINE_VERSION = "0.1.0"

__all__ = ["Item", "VerificationReport", "ENGINE_VERSION"]


@dataclass
class Item:
    """One checked identity.

    ``difference`` holds the exact State lhs - rhs on failure; ``witness`` is a
    free-form JSON-able object (e.g. a serialized linear combination).
    """

    id: str
    anchor: str
    status: str  # pass | fail | skipped
    detail: str = ""
    difference: Optional[State] = None
    witness: Any = None
    seconds: float = 0.0

    def to_obj(self):
        obj = {"id": self.id, "anchor": self.anchor, "status": self.status,
               "seconds": round(self.seconds, 3)}
        if self.detail:
            obj["detail"] = self.detail
        if self.difference is not None:
            obj["difference"] = self.difference.to_json_obj()
        if self.witness is not None:
            obj["witness"] = self.witness
        return obj


@dataclass
class VerificationReport:
    suite: str
    items: List[Item] = field(default_factory=list)
    config: Dict[str, Any] = field(default_factory=dict)
    sign_adjustments: List[Dict[str, Any]] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(i.status != "fail" for i in self.items) and bool(self.items)

    def failures(self) -> List[Item]:
        return [i for i in self.items if i.status == "fail"]

    def add(self, id: str, anchor: str, ok: bool, detail: str = "", difference: State = None,
            witness=None, seconds: float = 0.0) -> Item:
        item = Item(id, anchor, "pass" if ok else "fail", detail,
                    None if ok else difference, witness, seconds)
        self.items.append(item)
        return item

    def check_equal(self, id: str, anchor: str, lhs: State, rhs: State, detail: str = "") -> bool:
        t0 = time.perf_counter()
        diff = lhs - rhs
        ok = diff.is_zero()
        self.add(id, anchor, ok, detail, diff, seconds=time.perf_counter() - t0)
        return ok

    def skip(self, id: str, anchor: str, detail: str):
        self.items.append(Item(id, anchor, "skipped", detail))

    @contextmanager
    def timed(self, id: str, anchor: str):
        """Context manager yielding a dict; set ``ok`` (and optionally other Item fields)."""
        box: Dict[str, Any] = {"ok": False}
        t0 = time.perf_counter()
        try:
            yield box
        finally:
            self.add(id, anchor, bool(box.get("ok")), box.get("detail", ""),
                     box.get("difference"), box.get("witness"), time.perf_counter() - t0)

    def merge(self, other: "VerificationReport", prefix: str = ""):
        for it in other.items:
            it = Item(prefix + it.id, it.anchor, it.status, it.detail, it.difference,
                      it.witness, it.seconds)
            self.items.append(it)
        self.sign_adjustments.extend(other.sign_adjustments)
        for k, v in other.data.items():
            self.data[prefix + k] = v

    def to_obj(self, timings: bool = True):
        items = [i.to_obj() for i in self.items]
        if not timings:
            for i in items:
                i.pop("seconds", None)
        return {
            "suite": self.suite,
            "engine_version": ENGINE_VERSION,
            "status": "pass" if self.passed else "fail",
            "config": self.config,
            "sign_adjustments": self.sign_adjustments,
            "items": items,
            "data": self.data,
        }

    def to_json(self, timings: bool = True) -> str:
        return json.dumps(self.to_obj(timings), sort_keys=True, indent=2, default=str)

    def summary_lines(self) -> List[str]:
        return [f"{i.status.upper():7s} {self.suite}:{i.id}" for i in self.items]
