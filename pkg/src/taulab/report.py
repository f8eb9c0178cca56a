from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    """Tabular result of a scan or verification run.

    ``rows`` are plain dicts sharing one key order; ``summary`` must be
    recomputable from ``rows`` and ``parameters`` alone, so no timings or
    other run-dependent values go in either.
    """

    experiment_id: str
    parameters: dict[str, Any] = field(default_factory=dict)
    rows: list[dict[str, Any]] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)
    incomplete_count: int = 0

    @property
    def columns(self) -> list[str]:
        return list(self.rows[0]) if self.rows else []
