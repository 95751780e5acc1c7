"""docstruct: logical and semantic structure recovery for large documents.

The pipeline consumes line-level layout records and produces a nested
section tree, a table of contents, per-section topic labels and
extractive summaries.  See the README for the CLI walkthrough.
"""

from ._kernels import BACKEND_NAME
from .records import (
    LabeledDocument,
    LineLabel,
    LineRecord,
    PageStats,
    TocEntry,
    align_gold_toc,
    page_statistics,
    parse_line_records,
    similarity_ratio,
)
from .sectioning import (
    SectionNode,
    SplitLevel,
    Toc,
    build_toc,
    classify_section_levels,
    repair_level_sequence,
    split_document,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "LabeledDocument", "LineLabel", "LineRecord", "PageStats", "TocEntry",
    "align_gold_toc", "page_statistics", "parse_line_records",
    "similarity_ratio",
    "SectionNode", "SplitLevel", "Toc", "build_toc",
    "classify_section_levels", "repair_level_sequence", "split_document",
    "__version__",
]
