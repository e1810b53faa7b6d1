"""Readers and writers for pmf files and model description documents."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any, Sequence

from .core_dist import (
    DEFAULT_TAIL_TOLERANCE,
    DiscreteDistribution,
    Explicit,
    Geometric,
    Poisson,
)


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def parse_pmf(text: str, **kwargs) -> Explicit:
    """Parse either one probability per line or two-column ``index,probability`` CSV.

    Blank lines and lines starting with ``#`` are skipped; a non-numeric
    first row of a CSV is taken as a header.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("pmf file is empty")
    if any("," in ln for ln in lines):
        rows = list(csv.reader(lines))
        if not all(_is_number(v) for v in rows[0]):
            rows = rows[1:]
        entries = {}
        for row in rows:
            if len(row) != 2:
                raise ValueError(f"expected two columns, got {row!r}")
            idx = float(row[0])
            if idx != int(idx) or idx < 0:
                raise ValueError(f"index must be a non-negative integer, got {row[0]!r}")
            if int(idx) in entries:
                raise ValueError(f"duplicate index {int(idx)}")
            entries[int(idx)] = float(row[1])
        probs = [0.0] * (max(entries) + 1)
        for k, v in entries.items():
            probs[k] = v
    else:
        probs = [float(ln) for ln in lines]
    return Explicit(probs, **kwargs)


def read_pmf(path: str | Path, **kwargs) -> Explicit:
    return parse_pmf(Path(path).read_text(), **kwargs)


def format_pmf(probs: Sequence[float], fmt: str = "csv") -> str:
    """Render a pmf as ``index,probability`` CSV or as one value per line."""
    if fmt == "text":
        return "".join(f"{p:.17g}\n" for p in probs)
    if fmt != "csv":
        raise ValueError(f"unknown pmf format {fmt!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "probability"])
    for k, p in enumerate(probs):
        writer.writerow([k, f"{p:.17g}"])
    return buf.getvalue()


def write_pmf(path: str | Path, probs: Sequence[float], fmt: str = "csv") -> None:
    Path(path).write_text(format_pmf(probs, fmt))


def dist_to_dict(dist: DiscreteDistribution) -> dict[str, Any]:
    if isinstance(dist, Poisson):
        return {"kind": "poisson", "params": {"lambda": dist.lam}}
    if isinstance(dist, Geometric):
        return {"kind": "geometric", "params": {"q": dist.q}}
    if isinstance(dist, Explicit):
        return {"kind": "explicit", "pmf": dist.probabilities.tolist()}
    raise TypeError(f"cannot serialize {type(dist).__name__}")


def dist_from_dict(doc: dict[str, Any], tail_tolerance: float = DEFAULT_TAIL_TOLERANCE):
    kind = doc.get("kind")
    params = doc.get("params", {})
    if kind == "poisson":
        return Poisson(float(params["lambda"]), tail_tolerance=tail_tolerance)
    if kind == "geometric":
        return Geometric(float(params["q"]), tail_tolerance=tail_tolerance)
    if kind == "explicit":
        return Explicit(doc["pmf"], tail_tolerance=tail_tolerance)
    raise ValueError(f"unknown distribution kind {kind!r}")


def model_document(dist: DiscreteDistribution, n: int) -> dict[str, Any]:
    return {"base": dist_to_dict(dist), "n": n, "tail_tolerance": dist.tail_tolerance}


def load_model_document(path: str | Path) -> tuple[DiscreteDistribution, int]:
    """Read ``{base, n, tail_tolerance}`` and return the base law and dimension."""
    doc = json.loads(Path(path).read_text())
    try:
        tol = float(doc.get("tail_tolerance", DEFAULT_TAIL_TOLERANCE))
        return dist_from_dict(doc["base"], tol), int(doc["n"])
    except KeyError as exc:
        raise ValueError(f"model document is missing {exc}") from None
