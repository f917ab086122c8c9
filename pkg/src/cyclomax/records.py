"""Line-delimited JSON result records with append-only checkpoint/resume."""

from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field, fields
from pathlib import Path

from cyclomax import __version__
from cyclomax.numcyclo import factor, num_divisors
from cyclomax.search import BudgetExceeded, SearchOptions, SearchResult, compute_B, compute_C

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
MEASURE_NAMES = {"B": "height", "C": "length"}


class ParseError(ValueError):
    def __init__(self, message: str, lineno: int | None = None, field_name: str | None = None):
        where = f"line {lineno}: " if lineno is not None else ""
        what = f" (field {field_name!r})" if field_name else ""
        super().__init__(f"{where}{message}{what}")
        self.lineno = lineno
        self.field = field_name


@dataclass
class RecordLine:
    n: int
    measure: str
    value: int | None
    factorization: str = ""
    witness_count: int = 0
    witnesses: list = field(default_factory=list)
    escalated: bool = False
    nodes_visited: int = 0
    elapsed_ms: int = 0
    method: str = "exhaustive"
    reason: str | None = None
    schema_version: int = SCHEMA_VERSION
    tool_version: str = __version__
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.factorization:
            self.factorization = str(factor(self.n))

    @property
    def key(self) -> tuple[int, str]:
        return self.n, self.measure

    @property
    def skipped(self) -> bool:
        return self.value is None

    @classmethod
    def from_result(cls, r: SearchResult) -> RecordLine:
        return cls(
            n=r.n,
            measure="B" if r.measure == "height" else "C",
            value=r.value,
            witness_count=r.witness_total,
            witnesses=[list(w) for w in r.witnesses],
            escalated=r.escalated,
            nodes_visited=r.nodes_visited,
            elapsed_ms=round(r.elapsed * 1000),
            method=r.method,
        )


_FIELDS = [f.name for f in fields(RecordLine) if f.name != "extra"]
_TYPES = {
    "n": int, "measure": str, "factorization": str, "witness_count": int, "witnesses": list,
    "escalated": bool, "nodes_visited": int, "elapsed_ms": int, "method": str,
    "schema_version": int, "tool_version": str,
}


def emit_record(r: RecordLine) -> str:
    """One JSON object, no trailing newline."""
    obj = {name: getattr(r, name) for name in _FIELDS}
    if obj["reason"] is None:
        del obj["reason"]
    obj.update(r.extra)
    return json.dumps(obj, separators=(",", ":"))


def parse_record(line: str, lineno: int | None = None) -> RecordLine:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", lineno) from None
    if not isinstance(obj, dict):
        raise ParseError("record is not an object", lineno)
    for name in ("n", "measure", "value"):
        if name not in obj:
            raise ParseError("missing required field", lineno, name)
    for name, typ in _TYPES.items():
        if name not in obj:
            continue
        v = obj[name]
        if not isinstance(v, typ) or (typ is int and isinstance(v, bool)):
            raise ParseError(f"expected {typ.__name__}", lineno, name)
    if obj["measure"] not in MEASURE_NAMES:
        raise ParseError(f"unknown measure {obj['measure']!r}", lineno, "measure")
    if obj["value"] is not None and (not isinstance(obj["value"], int) or isinstance(obj["value"], bool)):
        raise ParseError("expected integer or null", lineno, "value")
    known = {k: obj.pop(k) for k in list(obj) if k in _FIELDS}
    return RecordLine(**known, extra=obj)


def load_records(path: str | Path) -> dict[tuple[int, str], RecordLine]:
    """Records by ``(n, measure)``; later lines win.

    A final line without a newline is a torn write and is skipped with a
    warning; any other malformed line raises :class:`ParseError`.
    """
    path = Path(path)
    out: dict[tuple[int, str], RecordLine] = {}
    if not path.exists():
        return out
    text = path.read_text(encoding="utf-8")
    lines = text.split("\n")
    torn = lines.pop() if lines else ""
    for i, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        rec = parse_record(line, i)
        old = out.get(rec.key)
        if old is not None and old.value != rec.value:
            log.warning("line %d: n=%d %s: %s supersedes %s", i, rec.n, rec.measure, rec.value, old.value)
        out[rec.key] = rec
    if torn.strip():
        try:
            rec = parse_record(torn, len(lines) + 1)
        except ParseError:
            log.warning("line %d: skipping partial record", len(lines) + 1)
        else:
            out[rec.key] = rec
    return out


def _repair_tail(path: Path) -> None:
    """Cut a torn final line so that appends start on a fresh line."""
    if not path.exists() or path.stat().st_size == 0:
        return
    with open(path, "rb+") as fh:
        data = fh.read()
        if data.endswith(b"\n"):
            return
        cut = data.rfind(b"\n") + 1
        try:
            parse_record(data[cut:].decode("utf-8"))
        except (ParseError, UnicodeDecodeError):
            fh.truncate(cut)
            log.warning("%s: dropped partial final record", path)
        else:
            fh.write(b"\n")


def _compute_one(n: int, measure: str, opts: SearchOptions) -> RecordLine:
    fn = compute_B if measure == "B" else compute_C
    try:
        return RecordLine.from_result(fn(n, opts))
    except BudgetExceeded as exc:
        return RecordLine(n=n, measure=measure, value=None, reason=f"budget: {exc}",
                          extra={"max_divisors": opts.max_divisors})


def _needs_work(rec: RecordLine | None, n: int, opts: SearchOptions) -> bool:
    if rec is None:
        return True
    return rec.skipped and num_divisors(n) <= opts.max_divisors


def run_range(lo: int, hi: int, measure: str, opts: SearchOptions | None, checkpoint_path: str | Path,
              *, workers: int = 1) -> dict:
    """Compute every n in ``[lo, hi]`` not already in the checkpoint, appending as we go."""
    if not 1 <= lo <= hi:
        raise ValueError("need 1 <= lo <= hi")
    if measure not in MEASURE_NAMES:
        raise ValueError(f"measure must be B or C, got {measure!r}")
    opts = opts or SearchOptions()
    path = Path(checkpoint_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    _repair_tail(path)
    have = load_records(path)
    todo = [n for n in range(lo, hi + 1) if _needs_work(have.get((n, measure)), n, opts)]
    summary = {"requested": hi - lo + 1, "already_present": hi - lo + 1 - len(todo),
               "computed": 0, "skipped_budget": 0}
    with open(path, "a", encoding="utf-8") as out:
        def write(rec: RecordLine) -> None:
            out.write(emit_record(rec) + "\n")
            out.flush()
            os.fsync(out.fileno())
            summary["computed"] += 1
            summary["skipped_budget"] += rec.skipped

        if workers <= 1:
            for n in todo:
                write(_compute_one(n, measure, opts))
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [pool.submit(_compute_one, n, measure, opts) for n in todo]
                for fut in as_completed(futures):
                    write(fut.result())
    return summary
