"""Serialization of command results: JSON documents, aligned text and scan CSV."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .ow import OWReport

FORMATS = ("json", "text", "csv")
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RunConfig:
    tol: float | None = None
    seed: int = 0
    samples: int = 1
    fmt: str = "json"
    output: str | None = None

    def __post_init__(self):
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tolerance must be positive")
        if self.samples < 1:
            raise ValueError("sample count must be at least 1")
        if self.fmt not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")


@dataclass(frozen=True)
class ScanRecord:
    seed: int
    params: dict
    value: float
    max_gap: float
    verdict: bool
    tol: float
    wall_time: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if self.verdict != (self.max_gap <= self.tol):
            raise ValueError("verdict disagrees with max gap and tolerance")

    def row(self) -> dict:
        # wall time stays out of files so reruns are byte-identical
        out = {"seed": self.seed}
        out.update(self.params)
        out.update(value=self.value, max_gap=self.max_gap, verdict="OW" if self.verdict else "not-OW")
        return out


def _clean(obj):
    """Replace non-finite floats so the output is strict JSON."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def document(kind: str, config: RunConfig | None = None, **payload) -> dict:
    """Report envelope; the seed announced here is the only source of randomness."""
    doc = {"schema": SCHEMA_VERSION, "kind": kind}
    if config is not None:
        doc["seed"] = config.seed
    doc.update(payload)
    return _clean(doc)


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _num(v, width=12):
    if v is None:
        return "-".rjust(width)
    if isinstance(v, float):
        return f"{v:.{width - 4}g}".rjust(width) if abs(v) >= 1e-3 or v == 0 else f"{v:.3e}".rjust(width)
    return str(v).rjust(width)


def render_ow(rep: dict) -> str:
    """Aligned context table followed by the verdict line."""
    ctxs = rep["contexts"]
    keys = [k for k in ctxs[0] if k in "xyzabc"] if ctxs else []
    head = "  ".join(k.rjust(2) for k in keys) + "".join(
        h.rjust(14) for h in ("weight", "<B>", "lambda_max", "gap"))
    lines = [f"direction {rep['direction']}  tol {rep['tol']:g}", head]
    for c in ctxs:
        idx = "  ".join(str(c[k]).rjust(2) for k in keys)
        vals = "".join(_num(c[k], 14) for k in ("weight", "expectation", "lambda_max", "gap"))
        lines.append(idx + vals + ("  zero weight" if c.get("zero_weight") else ""))
    lines.append(f"max gap {rep['max_gap']:.3e}  verdict {rep['verdict']}")
    return "\n".join(lines) + "\n"


def render_text(doc: dict) -> str:
    out = []
    skip = {"schema", "kind", "table", "report", "realization", "records", "rows"}
    out.append(f"# {doc['kind']}")
    for k, v in doc.items():
        if k in skip or v is None or isinstance(v, (dict, list)):
            continue
        out.append(f"{k}: {v}")
    for k, v in doc.items():
        if isinstance(v, dict) and k not in ("report", "realization"):
            out.append(f"{k}: " + ", ".join(f"{kk}={vv}" for kk, vv in v.items()))
    text = "\n".join(out) + "\n"
    if "table" in doc:
        text += "\n" + doc["table"]
    if "report" in doc and doc["report"] is not None:
        text += "\n" + render_ow(doc["report"])
    for extra in doc.get("reports", []):
        text += "\n" + render_ow(extra)
    if "rows" in doc and "table" not in doc:
        text += "\n" + render_rows(doc["rows"])
    if "records" in doc:
        text += "\n" + to_csv(doc["records"])
    return text


def render_rows(rows: list[dict]) -> str:
    if not rows:
        return ""
    keys = list(rows[0])
    lines = ["".join(k.rjust(14) for k in keys)]
    for r in rows:
        lines.append("".join(_num(r[k], 14) if not isinstance(r[k], str) else r[k].rjust(14) for k in keys))
    return "\n".join(lines) + "\n"


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
    return buf.getvalue()


def emit_report(doc: dict, config: RunConfig) -> str:
    """Serialize ``doc`` in the configured format and write it if an output path is set."""
    if config.fmt == "json":
        text = to_json(doc)
    elif config.fmt == "text":
        text = render_text(doc)
    else:
        rows = doc.get("records") or doc.get("rows")
        if rows is None and isinstance(doc.get("report"), dict):
            rows = doc["report"]["contexts"]
        if rows is None:
            raise ValueError(f"{doc['kind']} output has no tabular form; use json or text")
        text = to_csv(rows)
    if config.output:
        Path(config.output).write_text(text)
    return text


def ow_dict(rep: OWReport | None) -> dict | None:
    return None if rep is None else rep.to_dict()
