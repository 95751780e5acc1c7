"""Line-record ingestion: interchange parsing, page statistics, gold alignment.

The interchange unit is a *line record*: one physical text line plus its
layout metadata (font, position, page geometry).  Records travel either
as JSONL (one JSON object per line, field names exactly as in
``JSONL_FIELDS``) or as CSV with the column order of ``GOLD_CSV_COLUMNS``
(the CSV carries an extra trailing ``label`` column holding the gold
class of each line).

Gold class labels: 0 regular text, 1 top-level section header,
2 subsection header, 3 sub-subsection header.
"""

from __future__ import annotations

import csv
import difflib
import io
import json
import statistics
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, NamedTuple, TextIO

JSONL_FIELDS = (
    "text", "x_start", "x_end", "y_start", "y_end", "font_size",
    "font_weight", "font_family", "is_bold", "is_italic", "page_number",
    "page_width", "page_height", "file_id", "line_index",
)

GOLD_CSV_COLUMNS = (
    "file_id", "line_index", "text", "font_size", "font_weight",
    "font_family", "is_bold", "is_italic", "x_start", "x_end", "y_start",
    "y_end", "page_number", "page_width", "page_height", "label",
)

_FLOAT_FIELDS = ("x_start", "x_end", "y_start", "y_end", "font_size",
                 "font_weight", "page_width", "page_height")
_INT_FIELDS = ("page_number", "line_index")
_BOOL_FIELDS = ("is_bold", "is_italic")


class LineLabel(IntEnum):
    REGULAR_TEXT = 0
    TOP_LEVEL_HEADER = 1
    SUBSECTION_HEADER = 2
    SUBSUBSECTION_HEADER = 3


@dataclass(frozen=True, slots=True)
class LineRecord:
    """One physical text line with its layout metadata."""

    text: str
    x_start: float
    x_end: float
    y_start: float
    y_end: float
    font_size: float
    font_weight: float
    font_family: str
    is_bold: bool
    is_italic: bool
    page_number: int
    page_width: float
    page_height: float
    file_id: str
    line_index: int

    def check(self) -> list[str]:
        """Return invariant violations (empty list when well formed)."""
        problems = []
        if self.x_start > self.x_end:
            problems.append("x_start > x_end")
        if self.y_start > self.y_end:
            problems.append("y_start > y_end")
        if self.font_size <= 0:
            problems.append("font_size <= 0")
        if self.page_number < 1:
            problems.append("page_number < 1")
        if self.line_index < 0:
            problems.append("line_index < 0")
        return problems


@dataclass(frozen=True, slots=True)
class PageStats:
    """Per-page layout averages used by the feature extractor."""

    page_number: int
    avg_font_size: float
    avg_font_weight: float
    avg_line_spacing: float


class TocEntry(NamedTuple):
    title: str
    level: int


class RowError(NamedTuple):
    """A record-level parse problem: the 1-based row and what went wrong."""

    row: int
    field: str | None
    message: str


@dataclass(slots=True)
class ParseResult:
    documents: dict[str, list[LineRecord]]
    errors: list[RowError] = field(default_factory=list)


@dataclass(slots=True)
class LabeledDocument:
    """Lines paired with gold labels plus the TOC they were aligned to."""

    lines: list[tuple[LineRecord, LineLabel]]
    toc_entries: list[TocEntry]
    unmatched: list[TocEntry] = field(default_factory=list)


def _coerce_bool(value, fieldname: str) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("true", "1"):
        return True
    if text in ("false", "0"):
        return False
    raise ValueError(f"{fieldname}: not a boolean: {value!r}")


def _record_from_mapping(raw: dict) -> LineRecord:
    """Build a LineRecord from a parsed row; raises KeyError/ValueError."""
    values: dict = {}
    for name in JSONL_FIELDS:
        if name not in raw or raw[name] is None or raw[name] == "":
            raise KeyError(name)
        values[name] = raw[name]
    for name in _FLOAT_FIELDS:
        try:
            values[name] = float(values[name])
        except (TypeError, ValueError):
            raise ValueError(f"{name}: not numeric: {values[name]!r}") from None
    for name in _INT_FIELDS:
        try:
            values[name] = int(values[name])
        except (TypeError, ValueError):
            raise ValueError(f"{name}: not an integer: {values[name]!r}") from None
    for name in _BOOL_FIELDS:
        values[name] = _coerce_bool(values[name], name)
    values["text"] = str(values["text"])
    values["file_id"] = str(values["file_id"])
    values["font_family"] = str(values["font_family"])
    return LineRecord(**values)


def _text_stream(stream) -> TextIO:
    if isinstance(stream, (bytes, bytearray)):
        return io.StringIO(stream.decode("utf-8"))
    if isinstance(stream, str):
        return io.StringIO(stream)
    first = getattr(stream, "read", None)
    if first is None:
        raise TypeError("stream must be bytes, str or a file object")
    if isinstance(stream, io.TextIOBase):
        return stream
    return io.TextIOWrapper(stream, encoding="utf-8")


def _collect(rows: Iterable[tuple[int, dict]], errors: list[RowError],
             ) -> dict[str, list[LineRecord]]:
    documents: dict[str, list[LineRecord]] = {}
    for row_no, raw in rows:
        try:
            record = _record_from_mapping(raw)
        except KeyError as exc:
            errors.append(RowError(row_no, exc.args[0],
                                   f"missing required field {exc.args[0]!r}"))
            continue
        except ValueError as exc:
            name = str(exc).split(":", 1)[0]
            errors.append(RowError(row_no, name, str(exc)))
            continue
        problems = record.check()
        if problems:
            errors.append(RowError(row_no, None, "; ".join(problems)))
            continue
        documents.setdefault(record.file_id, []).append(record)
    for records in documents.values():
        records.sort(key=lambda r: (r.page_number, r.line_index))
    return documents


def parse_line_records(stream, fmt: str = "jsonl") -> ParseResult:
    """Parse a JSONL or CSV stream of line records, grouped by file id.

    Parameters
    ----------
    stream : bytes, str or file object
        UTF-8 encoded record data.
    fmt : {"jsonl", "csv"}
        ``jsonl`` expects one JSON object per line with the fields of
        ``JSONL_FIELDS``; ``csv`` expects a header row naming at least
        those fields (a ``label`` column, if present, is ignored here;
        use :func:`read_gold_csv` to keep it).

    Returns
    -------
    ParseResult
        Records grouped per ``file_id`` and sorted by
        ``(page_number, line_index)``.  Malformed rows are reported in
        ``errors`` with their 1-based row number; they never abort the
        parse.  An empty stream yields an empty result.
    """
    fmt = fmt.lower()
    if fmt not in ("jsonl", "csv"):
        raise ValueError(f"unknown format: {fmt!r}")
    text = _text_stream(stream)
    errors: list[RowError] = []

    if fmt == "jsonl":
        def rows():
            for row_no, line in enumerate(text, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    raw = json.loads(line)
                except json.JSONDecodeError as exc:
                    errors.append(RowError(row_no, None, f"invalid JSON: {exc}"))
                    continue
                if not isinstance(raw, dict):
                    errors.append(RowError(row_no, None, "row is not an object"))
                    continue
                yield row_no, raw
        documents = _collect(rows(), errors)
    else:
        reader = csv.DictReader(text)
        def rows():
            # header is row 1, first data row is row 2
            for row_no, raw in enumerate(reader, start=2):
                raw.pop("label", None)
                raw.pop(None, None)
                yield row_no, raw
        documents = _collect(rows(), errors)
    return ParseResult(documents=documents, errors=errors)


def record_to_dict(record: LineRecord) -> dict:
    return {name: getattr(record, name) for name in JSONL_FIELDS}


def write_jsonl(records: Iterable[LineRecord], out: TextIO) -> None:
    """Serialize records as interchange JSONL (inverse of parse)."""
    for record in records:
        out.write(json.dumps(record_to_dict(record), ensure_ascii=False))
        out.write("\n")


def write_gold_csv(labeled: Iterable[tuple[LineRecord, int]], out: TextIO) -> None:
    """Write (record, label) pairs in the fixed gold CSV column order."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(GOLD_CSV_COLUMNS)
    for record, label in labeled:
        row = []
        for name in GOLD_CSV_COLUMNS[:-1]:
            value = getattr(record, name)
            if isinstance(value, bool):
                value = "true" if value else "false"
            row.append(value)
        row.append(int(label))
        writer.writerow(row)


def read_gold_csv(stream) -> tuple[dict[str, list[tuple[LineRecord, LineLabel]]],
                                   list[RowError]]:
    """Read a gold CSV back into per-document (record, label) lists."""
    text = _text_stream(stream)
    reader = csv.DictReader(text)
    errors: list[RowError] = []
    documents: dict[str, list[tuple[LineRecord, LineLabel]]] = {}
    for row_no, raw in enumerate(reader, start=2):
        label_raw = raw.pop("label", None)
        if label_raw is None or label_raw == "":
            errors.append(RowError(row_no, "label", "missing required field 'label'"))
            continue
        try:
            label = LineLabel(int(label_raw))
        except ValueError:
            errors.append(RowError(row_no, "label", f"invalid label: {label_raw!r}"))
            continue
        try:
            record = _record_from_mapping(raw)
        except KeyError as exc:
            errors.append(RowError(row_no, exc.args[0],
                                   f"missing required field {exc.args[0]!r}"))
            continue
        except ValueError as exc:
            errors.append(RowError(row_no, str(exc).split(":", 1)[0], str(exc)))
            continue
        documents.setdefault(record.file_id, []).append((record, label))
    for pairs in documents.values():
        pairs.sort(key=lambda pair: (pair[0].page_number, pair[0].line_index))
    return documents, errors


def page_statistics(lines: list[LineRecord]) -> dict[int, PageStats]:
    """Compute per-page average font size, font weight and line spacing.

    Line spacing is the mean absolute gap between ``y_start`` values of
    successive lines on the page (in line order); a single-line page has
    spacing 0.  Empty input yields an empty map.
    """
    pages: dict[int, list[LineRecord]] = {}
    for line in lines:
        pages.setdefault(line.page_number, []).append(line)
    stats: dict[int, PageStats] = {}
    for page_number, page_lines in sorted(pages.items()):
        page_lines = sorted(page_lines, key=lambda r: r.line_index)
        gaps = [abs(a.y_start - b.y_start)
                for a, b in zip(page_lines, page_lines[1:])]
        # statistics.mean averages exactly, so a constant-font page
        # reports exactly that font size
        stats[page_number] = PageStats(
            page_number=page_number,
            avg_font_size=statistics.mean(r.font_size for r in page_lines),
            avg_font_weight=statistics.mean(r.font_weight for r in page_lines),
            avg_line_spacing=statistics.mean(gaps) if gaps else 0.0,
        )
    return stats


def similarity_ratio(a: str, b: str) -> float:
    """Gestalt pattern-matching similarity of two strings, in [0, 1].

    Returns ``2*M / (len(a) + len(b))`` where ``M`` is the total size of
    the matching blocks found by recursive longest-common-substring
    search.  The raw matcher is order-sensitive in rare tie cases, so the
    pair is put in canonical (lexicographic) order first, making the
    ratio symmetric.  Two empty strings are defined to match exactly.
    """
    if not a and not b:
        return 1.0
    if b < a:
        a, b = b, a
    return difflib.SequenceMatcher(None, a, b, autojunk=False).ratio()


def align_gold_toc(doc: list[LineRecord], toc: list[TocEntry] | list[tuple[str, int]],
                   threshold: float = 0.85) -> LabeledDocument:
    """Align TOC entries to document lines and emit per-line gold labels.

    Entries are consumed in order: each one matches the first
    not-yet-consumed line whose ``similarity_ratio`` with the entry title
    reaches ``threshold``, and that line receives the entry level as its
    label.  Lines never matched keep label 0.  Entries that match no line
    are reported in ``unmatched`` rather than raised, since a miss is an
    expected outcome of threshold alignment.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    entries = [TocEntry(title, int(level)) for title, level in toc]
    for entry in entries:
        if entry.level not in (1, 2, 3):
            raise ValueError(f"TOC level must be 1..3, got {entry.level}")
    labels = [LineLabel.REGULAR_TEXT] * len(doc)
    unmatched: list[TocEntry] = []
    cursor = 0
    for entry in entries:
        for i in range(cursor, len(doc)):
            if similarity_ratio(entry.title, doc[i].text) >= threshold:
                labels[i] = LineLabel(entry.level)
                cursor = i + 1
                break
        else:
            unmatched.append(entry)
    return LabeledDocument(
        lines=list(zip(doc, labels)),
        toc_entries=entries,
        unmatched=unmatched,
    )
