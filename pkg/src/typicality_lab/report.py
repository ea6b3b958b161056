"""Claim rows, deterministic JSON reports and CSV/histogram emission."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import TypicalityError

RELATIONS = ("<=", ">=", "==", "in")


@dataclass(frozen=True)
class Claim:
    """One checked statement: ``estimate <relation> bound`` up to ``slack``.

    ``bound`` is a pair ``(lo, hi)`` for the relation ``"in"``.  ``slack`` is the
    statistical allowance, normally three standard errors.
    """

    name: str
    anchor: str
    estimate: float
    stderr: float
    bound: float | tuple[float, float]
    relation: str
    slack: float = 0.0

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise TypicalityError(f"unknown relation {self.relation!r}")

    @property
    def passed(self) -> bool:
        x, s = self.estimate, self.slack
        if self.relation == "<=":
            return x <= self.bound + s
        if self.relation == ">=":
            return x >= self.bound - s
        if self.relation == "==":
            return abs(x - self.bound) <= s
        lo, hi = self.bound
        return lo - s <= x <= hi + s

    def as_dict(self) -> dict:
        bound = list(self.bound) if self.relation == "in" else self.bound
        return {
            "name": self.name,
            "anchor": self.anchor,
            "estimate": self.estimate,
            "stderr": self.stderr,
            "bound": bound,
            "slack": self.slack,
            "relation": self.relation,
            "passed": self.passed,
        }


def within(name, anchor, est, expected, k: float = 3.0) -> Claim:
    """``est == expected`` within ``k`` standard errors of an :class:`Estimate`."""
    return Claim(name, anchor, est.value, est.stderr, expected, "==", k * est.stderr)


def _plain(x):
    """Recursively convert numpy scalars and non-finite floats to JSON-safe values."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    return x


def write_json(obj, path) -> None:
    text = json.dumps(_plain(obj), indent=2, allow_nan=False)
    Path(path).write_text(text + "\n", encoding="utf-8", newline="\n")


def write_csv(path, header, columns) -> None:
    """Write equal-length columns under ``header`` with LF line endings."""
    columns = [np.asarray(c) for c in columns]
    if len(columns) != len(header):
        raise TypicalityError("one header entry per column")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([repr(float(v)) for v in row])


def emit_histogram(values, bins: int, path, range: tuple[float, float] | None = None) -> np.ndarray:
    """Write a ``bin_left,count`` histogram CSV and return the counts.

    Examples
    --------
    Values ``[0, 1]`` with 2 bins give rows ``0.0,1`` and ``0.5,1``.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size == 0:
        raise TypicalityError("cannot histogram an empty sample")
    if int(bins) < 1:
        raise TypicalityError("need at least one bin")
    counts, edges = np.histogram(v, bins=int(bins), range=range)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["bin_left", "count"])
        for left, c in zip(edges[:-1], counts):
            w.writerow([repr(float(left)), int(c)])
    return counts
