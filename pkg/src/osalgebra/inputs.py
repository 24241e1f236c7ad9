"""Reading matroids from JSON files or the built-in corpus."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from . import corpus
from .errors import ParseError, ValidationError
from .matroid import Matroid, PointedMatroid, parse_rational

FORMS = ("circuits", "bases", "matrix", "lines")


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{where}: expected an integer, got {value!r}")
    return value


def _sets(value: Any, where: str, offset: int) -> list[list[int]]:
    if not isinstance(value, list):
        raise ParseError(f"{where}: expected a list of lists of integers")
    out = []
    for i, item in enumerate(value):
        if not isinstance(item, list):
            raise ParseError(f"{where}[{i}]: expected a list of integers, got {item!r}")
        out.append([_int(x, f"{where}[{i}]") - offset for x in item])
    return out


def matroid_from_json(data: Any, source: str = "<json>") -> Matroid | PointedMatroid:
    """Build a validated matroid from the JSON object form.

    An optional integer ``basepoint`` (in the declared labeling) yields a
    pointed matroid.
    """
    if not isinstance(data, dict):
        raise ParseError(f"{source}: top level must be an object")
    if "n" not in data:
        raise ParseError(f"{source}: missing field 'n'")
    n = _int(data["n"], f"{source}: n")
    if n < 0:
        raise ParseError(f"{source}: n must be non-negative")
    labeling = data.get("labeling", "0-based")
    if labeling not in ("0-based", "1-based"):
        raise ParseError(f"{source}: labeling must be '0-based' or '1-based', got {labeling!r}")
    offset = 1 if labeling == "1-based" else 0
    rank = data.get("rank")
    if rank is not None:
        rank = _int(rank, f"{source}: rank")
    given = [f for f in FORMS if f in data]
    if len(given) != 1:
        raise ParseError(f"{source}: exactly one of {', '.join(FORMS)} is required, found {given or 'none'}")
    form = given[0]
    where = f"{source}: {form}"
    value = data[form]
    if form == "circuits":
        m = Matroid.from_circuits(n, _sets(value, where, offset), rank=rank)
    elif form == "bases":
        m = Matroid.from_bases(n, _sets(value, where, offset))
    elif form == "lines":
        if rank != 3:
            raise ParseError(f"{source}: the lines form needs \"rank\": 3")
        m = Matroid.from_lines(n, _sets(value, where, offset))
    else:
        if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
            raise ParseError(f"{where}: expected a list of rows")
        rows = []
        for i, row in enumerate(value):
            try:
                rows.append([parse_rational(x) for x in row])
            except (ValueError, ZeroDivisionError, ValidationError) as exc:
                raise ParseError(f"{where}[{i}]: {exc}") from None
        m = Matroid.from_matrix(rows)
        if m.n != n:
            raise ParseError(f"{where}: {m.n} columns but n = {n}")
    if rank is not None and m.rank() != rank:
        raise ValidationError(f"{source}: declared rank {rank} but the matroid has rank {m.rank()}")
    if "basepoint" in data:
        return PointedMatroid(m, _int(data["basepoint"], f"{source}: basepoint") - offset)
    return m


def parse_matroid(spec: str) -> Matroid | PointedMatroid:
    """``corpus:<name>`` or a path to a JSON file."""
    if spec.startswith("corpus:"):
        return corpus.get(spec[len("corpus:"):]).matroid
    path = Path(spec)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{spec}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{spec}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return matroid_from_json(data, spec)


def lines_json(m: Matroid, one_based: bool = False) -> dict:
    """The rank-3 lines form of m (only lines with three or more points are listed)."""
    if m.rank() != 3:
        raise ValidationError("the lines form exists only for rank 3")
    off = 1 if one_based else 0
    lines = sorted(sorted(i + off for i in x) for x in m.lines() if len(x) >= 3)
    return {"n": m.n, "labeling": "1-based" if one_based else "0-based", "rank": 3, "lines": lines}
