"""Deterministic report assembly and rendering."""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from typing import Any, Sequence

from .algebra import is_quadratic, kadic_dims, nbb_counts, nbc_counts, os_dims, phi3_formula, phi3_nullity
from .fields import ScalarField
from .matroid import Matroid, truncate
from .resonance import DEFAULT_PARTITION_BUDGET, poly1, poly1_to_json, resonance_q


def matroid_digest(m: Matroid) -> str:
    canon = json.dumps({"n": m.n, "circuits": sorted(sorted(c) for c in m.circuit_sets())}, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def field_descriptor(field: ScalarField) -> str:
    return field.descriptor()


def kadic_table(m: Matroid, field: ScalarField) -> dict[str, list[int]]:
    return {str(k): kadic_dims(m, k, field) for k in range(2, max(m.rank(), 2) + 1)}


def resonance_summary(m: Matroid, budget: int = DEFAULT_PARTITION_BUDGET) -> dict:
    comps = resonance_q(m, budget)
    kinds = Counter(c.kind for c in comps)
    return {
        "components": len(comps),
        "local": kinds.get("local", 0),
        "nonlocal": kinds.get("nonlocal", 0),
        "dims": sorted(c.dimension for c in comps),
    }


def invariant_report(
    m: Matroid,
    field: ScalarField,
    order: Sequence[int] | None = None,
    resonance: bool = True,
    budget: int = DEFAULT_PARTITION_BUDGET,
) -> dict:
    """The full battery of invariants for one matroid, as plain JSON data."""
    nullity = phi3_nullity(m, field)
    formula = phi3_formula(m, field)
    if nullity != formula:
        raise AssertionError(f"phi3 nullity {nullity} != closed formula {formula}")
    order_list = list(order) if order is not None else list(range(m.n))
    out: dict[str, Any] = {
        "matroid_digest": matroid_digest(m),
        "n": m.n,
        "rank": m.rank(),
        "field": field_descriptor(field),
        "betti": os_dims(m, field),
        "whitney": m.whitney_vector(),
        "phi3": nullity,
        "kadic": kadic_table(m, field),
        "quadratic": is_quadratic(m, field),
        "line_closed": m.is_line_closed(),
        "nbc_counts": nbc_counts(m, order_list),
        "nbb_counts": {"order": order_list, "counts": nbb_counts(m, order_list)},
    }
    if resonance:
        out["resonance"] = resonance_summary(m, budget)
    return out


def battery(m: Matroid, field: ScalarField, with_poly1: bool = True) -> dict:
    """Invariants compared by the isomorphism demonstration."""
    out: dict[str, Any] = {
        "betti": os_dims(m, field),
        "phi3": phi3_nullity(m, field),
        "kadic": kadic_table(m, field),
    }
    if with_poly1:
        out["poly1"] = poly1_to_json(poly1(m))
    if m.rank() >= 3:
        t = truncate(m)
        out["truncation"] = {"betti": os_dims(t, field), "phi3": phi3_nullity(t, field)}
    return out


def to_json_text(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _flatten(prefix: str, value: Any, out: list[str]) -> None:
    if isinstance(value, dict) and value:
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else str(k), value[k], out)
    else:
        out.append(f"{prefix}: {json.dumps(value, sort_keys=True)}")


def to_text(report: dict) -> str:
    """One ``key.path: value`` line per leaf, values in JSON notation."""
    lines: list[str] = []
    _flatten("", report, lines)
    return "\n".join(lines) + "\n"
