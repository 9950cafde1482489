"""Deterministic readers and writers for triples files, matrices, and trees."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .diversity import ActivityReport
from .model import DataError, TaggingEvent
from .percolation import IslandTree
from .projection import CorrelationMatrix

logger = logging.getLogger(__name__)

_HEADER = ("user", "item", "tag")
_DELIMITERS = {"tsv": "\t", "csv": ","}

#: DOT node width in inches per sqrt(member count).
DOT_WIDTH_SCALE = 0.5


def read_triples(path, fmt: str = "tsv", strict: bool = False) -> Iterator[TaggingEvent]:
    """Yield tagging events from a user/item/tag triples file.

    Lines are grouped by (user, item) with tags unioned in first-use order.
    A 'user item tag' header row is auto-detected and skipped. Malformed
    lines are skipped with a warning, or abort the read in strict mode.
    """
    try:
        delimiter = _DELIMITERS[fmt]
    except KeyError:
        raise ValueError(f"unknown triples format: {fmt!r}") from None

    raw = Path(path).read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: undecodable byte at offset {exc.start}") from exc

    reader = csv.reader(io.StringIO(text, newline=""), delimiter=delimiter)
    groups: dict[tuple[str, str], list[str]] = {}
    saw_first_row = False
    for row in reader:
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        fields = [f.strip() for f in row]
        if not saw_first_row:
            saw_first_row = True
            if tuple(fields) == _HEADER:
                continue
        if len(fields) != 3 or not all(fields):
            message = f"{path}:{reader.line_num}: malformed record {row!r}"
            if strict:
                raise DataError(message)
            logger.warning("skipping %s", message)
            continue
        user, item, tag = fields
        group = groups.setdefault((user, item), [])
        if tag not in group:
            group.append(tag)

    for (user, item), tags in groups.items():
        yield TaggingEvent(user, item, tuple(tags))


def write_triples(events: Iterable[TaggingEvent], path, fmt: str = "tsv") -> None:
    """Write one user/item/tag line per attribution, in event order."""
    try:
        delimiter = _DELIMITERS[fmt]
    except KeyError:
        raise ValueError(f"unknown triples format: {fmt!r}") from None
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        for event in events:
            for tag in event.tags:
                writer.writerow([event.user, event.item, tag])


def write_matrix(C: CorrelationMatrix, path) -> None:
    """CSV with a member-name header row and column; 6 decimal places."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([""] + list(C.names))
        for k, name in enumerate(C.names):
            row = C.row_dense(k)
            writer.writerow([name] + [f"{float(v):.6f}" for v in row])


def read_matrix(path) -> tuple[list[str], np.ndarray]:
    """Read back a matrix written by write_matrix; returns (names, values)."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DataError(f"{path}: empty matrix file")
    names = rows[0][1:]
    values = np.array([[float(v) for v in row[1:]] for row in rows[1:]])
    return names, values


def write_tree_json(tree: IslandTree, path, report: ActivityReport | None = None) -> None:
    """JSON document of the sweep: levels plus one record per island.

    Islands appear in (level, smallest member id) order with the virtual
    root first; singletons are kept and carry a rendering-hint marker.
    """
    _check_report(tree, report)
    islands = []
    for island in tree.islands:
        entry = {
            "id": island.id,
            "level": island.level,
            "phi": island.phi,
            "members": sorted(tree.names[m] for m in island.members),
            "size": island.size,
            "parent": island.parent,
            "characteristic": tree.names[island.characteristic],
            "singleton": island.is_singleton,
        }
        if report is not None:
            record = report.records[island.id]
            entry["p_sample"] = record.p_sample
            entry["p_user"] = record.p_user
            entry["r"] = record.ratio
            entry["color"] = list(record.color)
        islands.append(entry)
    doc = {
        "family": tree.family,
        "levels": tree.levels,
        "root": tree.root.id,
        "islands": islands,
    }
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_tree_dot(
    tree: IslandTree,
    path,
    report: ActivityReport | None = None,
    include_singletons: bool = False,
) -> None:
    """DOT digraph of the island forest, edges parent -> child.

    Nodes are squares with width proportional to sqrt(member count) and the
    characteristic name as label. Singleton islands are omitted unless
    include_singletons is set; the root is always drawn. Activity colors
    fill the nodes when a report is given.
    """
    _check_report(tree, report)
    lines = [
        "digraph islands {",
        "  rankdir=TB;",
        "  node [shape=square, fixedsize=true];",
    ]
    rendered = set()
    for island in tree.islands:
        if island.level >= 0 and island.is_singleton and not include_singletons:
            continue
        rendered.add(island.id)
        width = DOT_WIDTH_SCALE * math.sqrt(island.size)
        label = _dot_escape(tree.names[island.characteristic])
        attrs = [f'label="{label}"', f"width={width:.3f}", f"height={width:.3f}"]
        if report is not None:
            color = report.records[island.id].color
            attrs.append("style=filled")
            attrs.append(f'fillcolor="#{color[0]:02x}{color[1]:02x}{color[2]:02x}"')
        lines.append(f"  n{island.id} [{', '.join(attrs)}];")
    for island in tree.islands:
        if island.parent is None:
            continue
        if island.id in rendered and island.parent in rendered:
            lines.append(f"  n{island.parent} -> n{island.id};")
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _check_report(tree: IslandTree, report: ActivityReport | None) -> None:
    if report is None:
        return
    if set(report.records) != {island.id for island in tree.islands}:
        raise ValueError("activity report does not cover this tree")


def _dot_escape(label: str) -> str:
    return label.replace("\\", "\\\\").replace('"', '\\"')
