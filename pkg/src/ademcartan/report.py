"""Uniform pass/fail records for verification sweeps."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable


@dataclass(frozen=True)
class CheckResult:
    check: str
    params: dict[str, Any] = field(default_factory=dict)
    ok: bool = True
    detail: str = ""

    def sort_key(self) -> tuple:
        return (self.check, json.dumps(self.params, sort_keys=True, default=str))

    def record(self) -> dict[str, Any]:
        rec: dict[str, Any] = {"check": self.check, **self.params, "ok": self.ok}
        if self.detail:
            rec["detail"] = self.detail
        return rec

    def text(self) -> str:
        params = " ".join(f"{k}={v}" for k, v in self.params.items())
        line = f"{'PASS' if self.ok else 'FAIL'} {self.check} {params}".rstrip()
        if self.detail:
            line += f" :: {self.detail}"
        return line


def all_ok(results: Iterable[CheckResult]) -> bool:
    return all(r.ok for r in results)


def failures(results: Iterable[CheckResult]) -> list[CheckResult]:
    return [r for r in results if not r.ok]
