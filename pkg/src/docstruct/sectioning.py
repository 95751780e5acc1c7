"""Section-level classification, level repair, boundary detection and TOC.

A document arrives as an ordered list of (line text, label) pairs with
labels 0 (regular text), 1 (top-level header), 2 (subsection header) and
3 (sub-subsection header).  Splitting partitions the line stream at
header lines of the requested depth and returns a nested tree whose
in-order flattening reproduces the input exactly; the table of contents
is the pre-order walk of that tree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, NamedTuple, Sequence

from .classifiers.rnn import RnnModel


class SplitLevel(Enum):
    TOP_LEVEL = 1
    SUBSECTION = 2
    SUBSUBSECTION = 3


@dataclass
class SectionNode:
    """One section: its header line, body lines and nested subsections.

    ``title_index`` is the position of the header line in the input
    stream (-1 for the untitled preamble node that collects lines seen
    before the first header).
    """

    title: str
    text: list[str]
    subsections: list["SectionNode"]
    level: int
    title_index: int = -1

    @property
    def is_preamble(self) -> bool:
        return self.title_index < 0

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "text": list(self.text),
            "subsections": [child.to_dict() for child in self.subsections],
        }


class TocItem(NamedTuple):
    title: str
    level: int
    line_index: int


@dataclass
class Toc:
    entries: list[TocItem] = field(default_factory=list)

    def render(self) -> str:
        """Indented plain text, two spaces per nesting level."""
        return "\n".join("  " * (entry.level - 1) + entry.title
                         for entry in self.entries)


def classify_section_levels(headers: Sequence[str], model: RnnModel) -> list[int]:
    """Predict a level in {1, 2, 3} for every header line.

    The model must be a 3-class text-mode network; the level is the
    argmax class position plus one.  Empty header text is encoded as the
    end-of-sequence symbol alone and classified like any other line.
    """
    if model.n_classes != 3:
        raise ValueError(f"section-level model must have 3 classes, "
                         f"got {model.n_classes}")
    if not headers:
        return []
    probs = model.predict_proba(list(headers))
    return [int(row.argmax()) + 1 for row in probs]


def _level_of(item) -> int:
    return item[1] if isinstance(item, tuple) else item


def repair_level_sequence(levels: Sequence) -> list:
    """Force a header-level walk to valid transitions.

    The first header becomes level 1; every later header may open at most
    one level deeper than its predecessor, so deeper jumps are demoted to
    the deepest currently-open level plus one.  Moving back up to any
    open level is always allowed.  Items are either bare levels or
    (line_index, level) pairs; shape and length are preserved.
    """
    repaired = []
    previous = 0
    for item in levels:
        level = _level_of(item)
        if level not in (1, 2, 3):
            raise ValueError(f"header level must be 1..3, got {level}")
        fixed = min(level, previous + 1)
        previous = fixed
        if isinstance(item, tuple):
            repaired.append((item[0], fixed))
        else:
            repaired.append(fixed)
    return repaired


def is_valid_level_sequence(levels: Sequence[int]) -> bool:
    """Check the transition rules: starts at 1, never deepens by more
    than one level at a time."""
    previous = 0
    for level in levels:
        if level < 1 or level > previous + 1:
            return False
        previous = level
    return True


def split_document(lines: Sequence[tuple[str, int]],
                   split_level: SplitLevel = SplitLevel.TOP_LEVEL,
                   ) -> list[SectionNode]:
    """Partition labeled lines into a nested section tree.

    Splitting happens at header labels down to ``split_level``; deeper
    header lines stay in section bodies as plain text.  Lines before the
    first header form an untitled preamble node.  Concatenating titles
    and texts of the flattened tree reproduces the input stream exactly.
    """
    max_level = split_level.value
    indexed = [(i, text, int(label)) for i, (text, label) in enumerate(lines)]

    def build(block, level):
        positions = [i for i, (_, _, label) in enumerate(block) if label == level]
        if not positions:
            return [text for _, text, _ in block], []
        leading = [text for _, text, _ in block[:positions[0]]]
        children = []
        bounds = positions + [len(block)]
        for start, end in zip(bounds, bounds[1:]):
            index, title, _ = block[start]
            body = block[start + 1:end]
            if level < max_level:
                own_text, subsections = build(body, level + 1)
            else:
                own_text, subsections = [text for _, text, _ in body], []
            children.append(SectionNode(title=title, text=own_text,
                                        subsections=subsections, level=level,
                                        title_index=index))
        return leading, children

    leading, children = build(indexed, 1)
    nodes: list[SectionNode] = []
    if leading:
        nodes.append(SectionNode(title="", text=leading, subsections=[],
                                 level=1, title_index=-1))
    nodes.extend(children)
    return nodes


def flatten_lines(tree: Iterable[SectionNode]) -> list[str]:
    """In-order line stream of a tree: titles and texts as they appeared."""
    out: list[str] = []
    for node in tree:
        if not node.is_preamble:
            out.append(node.title)
        out.extend(node.text)
        out.extend(flatten_lines(node.subsections))
    return out


def iter_sections(tree: Iterable[SectionNode],
                  prefix: str = "") -> Iterator[tuple[str, SectionNode]]:
    """Depth-first (path, node) pairs; paths are dotted child positions."""
    for i, node in enumerate(tree):
        path = f"{prefix}{i}"
        yield path, node
        yield from iter_sections(node.subsections, prefix=f"{path}.")


def build_toc(tree: Iterable[SectionNode]) -> Toc:
    """Pre-order table of contents; preamble nodes are omitted."""
    entries: list[TocItem] = []

    def walk(nodes: Iterable[SectionNode]) -> None:
        for node in nodes:
            if not node.is_preamble:
                entries.append(TocItem(node.title, node.level, node.title_index))
            walk(node.subsections)

    walk(tree)
    return Toc(entries=entries)


def tree_to_json(tree: Iterable[SectionNode]) -> str:
    return json.dumps([node.to_dict() for node in tree], ensure_ascii=False,
                      indent=2)


def tree_from_json(payload: str) -> list[SectionNode]:
    def revive(data: dict, level: int, index: int) -> SectionNode:
        return SectionNode(
            title=data["title"],
            text=list(data["text"]),
            subsections=[revive(child, level + 1, i)
                         for i, child in enumerate(data["subsections"])],
            level=level,
            title_index=0 if data["title"] else -1,
        )

    return [revive(item, 1, i) for i, item in enumerate(json.loads(payload))]
