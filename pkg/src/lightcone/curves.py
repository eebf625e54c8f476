"""Bound/observable curves on a time grid, and their CSV round-trip.

CSV layout is deliberately plain so acceptance tests can diff artifacts:

    # version: 0.1.0
    # config: {"bound": "thm3", ...}
    t,value,label
    0,0,thm3
    ...

Floats are emitted with 17 significant digits, which round-trips IEEE
doubles exactly, making identical configs produce bit-identical files.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from ._version import __version__
from .errors import InvalidParams, IoError

__all__ = ["BoundCurve", "evaluate_curve", "write_curves_csv", "read_curves_csv"]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class BoundCurve:
    times: tuple[float, ...]
    values: tuple[float, ...]
    label: str
    # truncation metadata: path-length or genus cutoff when the producer
    # could not enumerate exhaustively (None = exact/complete)
    l_max: int | None = None
    g_max: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.times) != len(self.values):
            raise InvalidParams("times and values length mismatch")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise InvalidParams("times must be strictly increasing")
        if any(v < 0 for v in self.values):
            raise InvalidParams("curve values must be nonnegative")

    def __iter__(self):
        return iter(zip(self.times, self.values))


def evaluate_curve(
    fn: Callable[[float], float],
    times: Sequence[float],
    label: str,
    l_max: int | None = None,
    g_max: int | None = None,
) -> BoundCurve:
    return BoundCurve(
        times=tuple(times),
        values=tuple(fn(t) for t in times),
        label=label,
        l_max=l_max,
        g_max=g_max,
    )


def write_curves_csv(dest, curves: Iterable[BoundCurve], config: dict | None = None) -> None:
    """Write curves in long format with a self-describing comment header."""

    def _write(fh) -> None:
        fh.write(f"# version: {__version__}\n")
        fh.write(f"# config: {json.dumps(config or {}, sort_keys=True)}\n")
        fh.write("t,value,label\n")
        for curve in curves:
            for t, v in curve:
                fh.write(f"{_fmt(t)},{_fmt(v)},{curve.label}\n")

    if isinstance(dest, (str, bytes)):
        try:
            with open(dest, "w", newline="") as fh:
                _write(fh)
        except OSError as exc:
            raise IoError(f"cannot write {dest!r}: {exc}") from exc
    else:
        _write(dest)


def read_curves_csv(src) -> tuple[list[BoundCurve], dict]:
    """Inverse of write_curves_csv; returns (curves, config echo)."""
    if isinstance(src, (str, bytes)):
        try:
            with open(src, "r", newline="") as fh:
                text = fh.read()
        except OSError as exc:
            raise IoError(f"cannot read {src!r}: {exc}") from exc
    else:
        text = src.read()
    config: dict = {}
    per_label: dict[str, list[tuple[float, float]]] = {}
    order: list[str] = []
    saw_header = False
    for line in io.StringIO(text):
        line = line.rstrip("\n")
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("config:"):
                try:
                    config = json.loads(body[len("config:"):].strip())
                except json.JSONDecodeError as exc:
                    raise IoError(f"bad config echo: {exc}") from exc
            continue
        if not saw_header:
            if line != "t,value,label":
                raise IoError(f"unexpected CSV header {line!r}")
            saw_header = True
            continue
        t_str, v_str, label = line.split(",", 2)
        if label not in per_label:
            per_label[label] = []
            order.append(label)
        per_label[label].append((float(t_str), float(v_str)))
    curves = [
        BoundCurve(
            times=tuple(t for t, _ in rows),
            values=tuple(v for _, v in rows),
            label=label,
        )
        for label, rows in ((lab, per_label[lab]) for lab in order)
    ]
    return curves, config
