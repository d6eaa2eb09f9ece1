"""Machine-readable run reports with reproducible canonical serialisation.

Report files carry two top-level sections: `meta` (timestamps, argv; free to
vary between runs) and `body` (everything the verification produced).  The
body is canonicalised -- sorted keys, floats round-tripped through 17
significant digits -- so identical runs produce byte-identical bodies, which
`meta.body_sha256` records for cheap diffing.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

__all__ = ["canonicalize", "canonical_json", "body_digest", "write_report",
           "summarize_verdicts", "report_to_dict"]

TOOL_VERSION = "0.1.0"


def canonicalize(obj):
    """Recursively normalise a JSON-ish structure for byte-stable dumps."""
    if isinstance(obj, dict):
        return {str(k): canonicalize(v) for k, v in sorted(obj.items())}
    if isinstance(obj, (list, tuple)):
        return [canonicalize(v) for v in obj]
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return float(f"{obj:.17g}")
    if dataclasses.is_dataclass(obj):
        return canonicalize(dataclasses.asdict(obj))
    return canonicalize(str(obj))


def canonical_json(body) -> str:
    return json.dumps(canonicalize(body), sort_keys=True, separators=(",", ":"))


def body_digest(body) -> str:
    return hashlib.sha256(canonical_json(body).encode()).hexdigest()


def report_to_dict(report) -> dict:
    """Flatten a CheckReport/LKReport dataclass into a JSON-ready dict."""
    d = dataclasses.asdict(report)
    ineq = d.pop("inequality_id", None) or d.pop("form", None)
    d["id"] = ineq
    return d


def summarize_verdicts(reports) -> dict:
    counts = {"holds": 0, "fails": 0, "indeterminate": 0, "trivial": 0}
    for rep in reports:
        v = rep["verdict"] if isinstance(rep, dict) else rep.verdict
        counts[v] = counts.get(v, 0) + 1
    return counts


def write_report(path, body: dict, extra_meta: dict | None = None) -> dict:
    """Write {meta, body} JSON; returns the full document."""
    body = canonicalize(body)
    meta = {
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "argv": sys.argv,
        "body_sha256": body_digest(body),
    }
    if extra_meta:
        meta.update(extra_meta)
    doc = {"meta": meta, "body": body}
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    return doc
