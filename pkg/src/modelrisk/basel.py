"""Market-risk capital charge under usual conditions.

    CC = max(VaR_0, (lambda / 60) * sum_{i=1}^{60} VaR_{-i})

History files are CSV with header ``day,var``: ``day`` is 0 for today's VaR
and -1 ... -60 for past figures, ``var`` a positive decimal.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError, ValidationError

HISTORY_DAYS = 60
LAMBDA_MIN = 3.0
LAMBDA_MAX = 4.0


@dataclass(frozen=True)
class BaselInput:
    var0: float
    history: tuple
    lam: float = LAMBDA_MIN

    def __post_init__(self):
        object.__setattr__(self, "history", tuple(float(v) for v in self.history))
        if len(self.history) != HISTORY_DAYS:
            raise ValidationError(
                f"history length must be {HISTORY_DAYS}, got {len(self.history)}"
            )
        values = (self.var0,) + self.history
        if not all(math.isfinite(v) and v > 0 for v in values):
            raise ValidationError("positivity: every VaR figure must be positive and finite")
        if not LAMBDA_MIN <= self.lam <= LAMBDA_MAX:
            raise ValidationError(f"multiplier must lie in [3, 4], got {self.lam}")


def capital_charge(b: BaselInput) -> float:
    return max(b.var0, b.lam / HISTORY_DAYS * math.fsum(b.history))


def ingest_history(path, lam: float = LAMBDA_MIN) -> BaselInput:
    """Read a ``day,var`` CSV into a validated :class:`BaselInput`."""
    by_day = {}
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != ["day", "var"]:
            raise ParseError(f"expected header 'day,var', got {header!r}", line=1)
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 2:
                raise ParseError(f"expected 2 fields, got {len(row)}", line=line)
            try:
                day = int(row[0])
                value = float(row[1])
            except ValueError as exc:
                raise ParseError(str(exc), line=line) from None
            if not -HISTORY_DAYS <= day <= 0:
                raise ParseError(f"day offset {day} outside [-60, 0]", line=line)
            if day in by_day:
                raise ParseError(f"duplicate day {day}", line=line)
            by_day[day] = value
    if 0 not in by_day:
        raise ValidationError("missing today's VaR (day 0)")
    history = [by_day[d] for d in sorted(by_day, reverse=True) if d != 0]
    return BaselInput(by_day[0], history, lam)
