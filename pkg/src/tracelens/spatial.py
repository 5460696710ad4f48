"""Global line index and line genealogy for edited files.

All original lines of all files map onto one global axis: files are
concatenated in a configurable order and a file's lines occupy the slots
after the lines of every preceding file. Plotting positions stay stable
under editing through a per-file genealogy: original lines are anchors that
never renumber, inserted lines become pockets attached to the nearest
preceding surviving anchor, and deleted anchors are tombstoned. A pocket is
plotted collapsed onto its anchor's global slot, so tracks from differently
edited copies of the same files stay comparable.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Any, Iterable, Mapping

from .events import Event
from .recording import FileEntry, Recording

ALPHABETICAL = "alphabetical"
DIRECTORY_STRUCTURE = "directory-structure"
MANIFEST_ORDER = "manifest"

ORDERING_RULES = (ALPHABETICAL, DIRECTORY_STRUCTURE, MANIFEST_ORDER)


class EditOutOfRange(ValueError):
    """An edit or lookup addresses a line outside the current file state."""


class ManifestMismatch(ValueError):
    """Two recordings do not share the same original file manifest."""


@dataclass(frozen=True)
class OriginalPosition:
    """Identity of a current line in original-file coordinates.

    anchor is the original line number owning the slot; pocket 0 means the
    line is that original line itself, pocket j >= 1 the j-th line inserted
    under the anchor. anchor 0 is the virtual anchor for insertions before
    the first original line.
    """

    anchor: int
    pocket: int = 0


def _byte_key(path: str) -> bytes:
    return path.encode("utf-8")


def _directory_order(paths: list[str]) -> list[str]:
    # Depth-first over path components, files before subdirectories,
    # names compared byte-wise at each level.
    files = sorted((p for p in paths if "/" not in p), key=_byte_key)
    by_dir: dict[str, list[str]] = {}
    for path in paths:
        if "/" in path:
            head, rest = path.split("/", 1)
            by_dir.setdefault(head, []).append(rest)
    out = list(files)
    for head in sorted(by_dir, key=_byte_key):
        out.extend(f"{head}/{rest}" for rest in _directory_order(by_dir[head]))
    return out


def build_order(files: Iterable[FileEntry], rule: str = MANIFEST_ORDER) -> list[str]:
    """Order manifest paths according to an ordering rule.

    Args:
        files: Manifest entries.
        rule: One of ORDERING_RULES.

    Returns:
        The paths in index order.
    """
    paths = [entry.path for entry in files]
    if rule == MANIFEST_ORDER:
        return paths
    if rule == ALPHABETICAL:
        return sorted(paths, key=_byte_key)
    if rule == DIRECTORY_STRUCTURE:
        return _directory_order(paths)
    raise ValueError(f"unknown ordering rule {rule!r}")


class GlobalIndex:
    """Bijection between (file, original line) pairs and global slots.

    Global slots run from 1 to the sum of all initial line counts; a file's
    offset is the number of lines in all preceding files.
    """

    def __init__(self, files: Iterable[FileEntry], rule: str = MANIFEST_ORDER):
        entries = list(files)
        counts = {entry.path: entry.initial_line_count for entry in entries}
        self.rule = rule
        self.ordered_paths = build_order(entries, rule)
        self.offsets: dict[str, int] = {}
        self.line_counts = counts
        offset = 0
        self._starts: list[int] = []
        for path in self.ordered_paths:
            self.offsets[path] = offset
            self._starts.append(offset)
            offset += counts[path]
        self.total_lines = offset

    def to_global(self, file: str, line: int) -> int:
        """Map an original (file, line) pair to its global slot."""
        if file not in self.offsets:
            raise KeyError(f"file {file!r} is not in the index")
        if not 1 <= line <= self.line_counts[file]:
            raise EditOutOfRange(
                f"line {line} outside {file!r} with "
                f"{self.line_counts[file]} original lines"
            )
        return self.offsets[file] + line

    def from_global(self, position: int) -> tuple[str, int]:
        """Map a global slot back to its (file, original line) pair."""
        if not 1 <= position <= self.total_lines:
            raise EditOutOfRange(
                f"global position {position} outside 1..{self.total_lines}"
            )
        idx = bisect.bisect_right(self._starts, position - 1) - 1
        # Skip zero-line files that share the same start offset.
        while self.line_counts[self.ordered_paths[idx]] == 0:
            idx -= 1
        path = self.ordered_paths[idx]
        return path, position - self.offsets[path]

    def file_span(self, file: str) -> tuple[int, int]:
        """Inclusive global span of a file's original lines."""
        if file not in self.offsets:
            raise KeyError(f"file {file!r} is not in the index")
        start = self.offsets[file] + 1
        return start, self.offsets[file] + max(1, self.line_counts[file])

    def anchor_global(self, file: str, origin: OriginalPosition) -> int:
        """Plotting slot of a line identity: pockets collapse onto anchors.

        The virtual anchor 0 plots at the file's first slot.
        """
        anchor = origin.anchor if origin.anchor >= 1 else 1
        return self.offsets[file] + anchor


@dataclass(frozen=True)
class LineDelta:
    """Line-structure effect of one code change.

    line/col locate the change in current coordinates; deleted_newlines and
    inserted_newlines count the line boundaries removed and added. A delta
    with both counts zero leaves the line structure untouched.
    """

    line: int
    col: int
    deleted_newlines: int
    inserted_newlines: int

    @property
    def structural(self) -> bool:
        return self.deleted_newlines > 0 or self.inserted_newlines > 0


def delta_from_event(event: Event) -> LineDelta:
    """Derive the line delta of a CodeChangeEvent."""
    payload = event.payload
    return LineDelta(
        line=payload["line"],
        col=payload["col"],
        deleted_newlines=payload["deleted"].count("\n"),
        inserted_newlines=payload["inserted"].count("\n"),
    )


class LineMap:
    """Line genealogy of one file under an edit script.

    Current lines map to OriginalPosition values; original anchors keep
    their number forever, insertions become pockets numbered in insertion
    order per anchor, deletions tombstone anchors or drop pockets.
    """

    def __init__(self, original_line_count: int):
        if original_line_count < 0:
            raise ValueError("original_line_count must be non-negative")
        self.original_line_count = original_line_count
        self._rows: list[OriginalPosition] = [
            OriginalPosition(k) for k in range(1, original_line_count + 1)
        ]
        self._tombstoned: set[int] = set()
        self._pocket_seq: dict[int, int] = {}

    @property
    def current_line_count(self) -> int:
        return len(self._rows)

    @property
    def tombstoned_anchors(self) -> frozenset[int]:
        return frozenset(self._tombstoned)

    def map_to_original(self, current_line: int) -> OriginalPosition:
        """Return the identity of a current line (1-based)."""
        if not 1 <= current_line <= len(self._rows):
            raise EditOutOfRange(
                f"current line {current_line} outside 1..{len(self._rows)}"
            )
        return self._rows[current_line - 1]

    def _nearest_anchor_above(self, row_index: int) -> int:
        # row_index is 0-based, exclusive: scan rows [0, row_index) backwards.
        for i in range(row_index - 1, -1, -1):
            row = self._rows[i]
            if row.pocket == 0:
                return row.anchor
        return 0

    def _new_pockets(self, anchor: int, count: int) -> list[OriginalPosition]:
        seq = self._pocket_seq.get(anchor, 0)
        pockets = [OriginalPosition(anchor, seq + j) for j in range(1, count + 1)]
        self._pocket_seq[anchor] = seq + count
        return pockets

    def apply_edit(self, delta: LineDelta) -> None:
        """Apply one line delta to the genealogy.

        Deletion convention: a deletion starting at column 0 consumes the
        named rows themselves (their identities die, the following row
        survives the merge); a deletion starting mid-line joins the
        following rows into the named one. Insertion convention mirrors it:
        at column 0 the new rows push the original row down, mid-line the
        new rows open below it.
        """
        line, col = delta.line, delta.col
        d, i = delta.deleted_newlines, delta.inserted_newlines
        if not delta.structural:
            return
        rows = self._rows

        if d > 0:
            if line < 1:
                raise EditOutOfRange(f"deletion at line {line}")
            if col == 0:
                dead = range(line - 1, line - 1 + d)
            else:
                dead = range(line, line + d)
            if dead.stop > len(rows):
                raise EditOutOfRange(
                    f"deletion of {d} line(s) at line {line} exceeds "
                    f"{len(rows)} current lines"
                )
            for idx in dead:
                row = rows[idx]
                if row.pocket == 0:
                    self._tombstoned.add(row.anchor)
            del rows[dead.start : dead.stop]

        if i > 0:
            if not rows:
                if line != 1:
                    raise EditOutOfRange(f"insertion at line {line} in empty file")
                insert_at = 0
            elif col == 0:
                if not 1 <= line <= len(rows) + 1:
                    raise EditOutOfRange(f"insertion at line {line}")
                insert_at = line - 1
            else:
                if not 1 <= line <= len(rows):
                    raise EditOutOfRange(f"insertion at line {line}")
                insert_at = line
            anchor = self._nearest_anchor_above(insert_at)
            rows[insert_at:insert_at] = self._new_pockets(anchor, i)


def initial_maps(files: Iterable[FileEntry]) -> dict[str, LineMap]:
    """Fresh LineMaps for every manifest file."""
    return {entry.path: LineMap(entry.initial_line_count) for entry in files}


@dataclass
class AlignedIndex:
    """Shared global axis plus per-recording final line genealogies."""

    index: GlobalIndex
    maps: dict[str, dict[str, LineMap]]


def replay_maps(recording: Recording) -> dict[str, LineMap]:
    """Replay all structural edits of a recording into final LineMaps."""
    maps = initial_maps(recording.files)
    for event in recording.events:
        if event.type == "CodeChangeEvent":
            delta = delta_from_event(event)
            if delta.structural:
                maps[event.payload["file"]].apply_edit(delta)
    return maps


def align_recordings(
    rec_a: Recording, rec_b: Recording, rule: str = MANIFEST_ORDER
) -> AlignedIndex:
    """Build a shared global index over two recordings of the same files.

    Args:
        rec_a, rec_b: Recordings whose headers must declare the same paths
            with the same initial line counts.
        rule: Ordering rule for the shared axis.

    Returns:
        The shared index and each recording's replayed line genealogy.

    Raises:
        ManifestMismatch: The manifests differ in paths or line counts.
    """
    manifest_a = rec_a.line_counts()
    manifest_b = rec_b.line_counts()
    if manifest_a != manifest_b:
        raise ManifestMismatch(
            f"recordings {rec_a.recording_id!r} and {rec_b.recording_id!r} "
            "do not share a manifest"
        )
    # A shared axis needs a content-identical ordering; manifest order may
    # legitimately differ between headers, so sort deterministically then.
    files_a = rec_a.files
    if rule == MANIFEST_ORDER and rec_a.manifest_paths() != rec_b.manifest_paths():
        files_a = sorted(files_a, key=lambda e: _byte_key(e.path))
        rule = ALPHABETICAL
    index = GlobalIndex(files_a, rule)
    return AlignedIndex(
        index=index,
        maps={
            rec_a.recording_id: replay_maps(rec_a),
            rec_b.recording_id: replay_maps(rec_b),
        },
    )
