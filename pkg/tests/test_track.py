"""Track building, keystroke aggregation, edit outcomes and level-of-detail."""

from __future__ import annotations

import random

import pytest

from conftest import StreamBuilder, entries, recording_of
from tracelens import track as trk
from tracelens.spatial import ALPHABETICAL, GlobalIndex


# ---------------------------------------------------------------- aggregation


def test_one_burst_of_insertions_is_one_group():
    b = StreamBuilder()
    b.edit("a.py", 1, 0, inserted="h", dt=100)
    b.edit("a.py", 1, 1, inserted="i", dt=100)
    groups = trk.aggregate_edits(b.events, entries(("a.py", 3)))
    assert len(groups) == 1
    g = groups[0]
    assert (g.before, g.after) == ("", "hi")
    assert (g.origin.anchor, g.origin.pocket) == (1, 0)
    assert not g.contains_deletion


def test_deletion_escapes_into_a_new_group():
    # Type "a", "b", delete the "b", type "c": the deletion closes the first
    # group and opens the one that corrects the line.
    b = StreamBuilder()
    b.edit("a.py", 1, 0, inserted="a", dt=100)
    b.edit("a.py", 1, 1, inserted="b", dt=100)
    b.edit("a.py", 1, 1, deleted="b", dt=100)
    b.edit("a.py", 1, 1, inserted="c", dt=100)
    groups = trk.aggregate_edits(b.events, entries(("a.py", 3)))
    assert [(g.before, g.after) for g in groups] == [("", "ab"), ("ab", "ac")]
    assert [g.contains_deletion for g in groups] == [False, True]


@pytest.mark.parametrize("gap_ms,expected_groups", [(2_000, 1), (2_001, 2)])
def test_silence_above_two_seconds_splits(gap_ms, expected_groups):
    b = StreamBuilder()
    b.edit("a.py", 1, 0, inserted="x", dt=100)
    b.edit("a.py", 1, 1, inserted="y", dt=gap_ms)
    groups = trk.aggregate_edits(b.events, entries(("a.py", 3)))
    assert len(groups) == expected_groups


def test_interleaved_non_edit_events_do_not_split():
    b = StreamBuilder()
    b.edit("a.py", 1, 0, inserted="x", dt=100)
    b.save("a.py", dt=100)
    b.cursor("a.py", 1, dt=100)
    b.edit("a.py", 1, 1, inserted="y", dt=100)
    groups = trk.aggregate_edits(b.events, entries(("a.py", 3)))
    assert len(groups) == 1
    assert groups[0].after == "xy"


def test_switching_lines_splits():
    b = StreamBuilder()
    b.edit("a.py", 1, 0, inserted="x", dt=100)
    b.edit("a.py", 2, 0, inserted="y", dt=100)
    groups = trk.aggregate_edits(b.events, entries(("a.py", 3)))
    assert [g.origin.anchor for g in groups] == [1, 2]


def test_newline_event_terminates_and_joins_no_group():
    b = StreamBuilder()
    b.edit("a.py", 1, 0, inserted="x", dt=100)
    newline = b.edit("a.py", 1, 1, inserted="\n", dt=100)
    b.edit("a.py", 2, 0, inserted="y", dt=100)
    groups = trk.aggregate_edits(b.events, entries(("a.py", 1)))
    assert [(g.before, g.after) for g in groups] == [("", "x"), ("", "y")]
    assert [(g.origin.anchor, g.origin.pocket) for g in groups] == [(1, 0), (1, 1)]
    covered = {eid for g in groups for eid in (g.start_event_id, g.end_event_id)}
    assert newline.id not in covered


def test_deleting_unknown_text_back_fills_the_before_state():
    # Nothing was ever typed on the line, so the deletion itself is the only
    # witness of what stood there.
    b = StreamBuilder()
    b.edit("a.py", 2, 0, deleted="old", dt=100)
    groups = trk.aggregate_edits(b.events, entries(("a.py", 5)))
    assert [(g.before, g.after) for g in groups] == [("old", "")]


def random_inline_script(rng, line_count=6, steps=50):
    """Single-line keystrokes over one file, with an independent text oracle.

    Deletions only cover text the script already wrote, so the oracle can
    track exact before/after states without back-fill.
    """
    b = StreamBuilder()
    buffer = {line: "" for line in range(1, line_count + 1)}
    pre_text: dict[int, str] = {}
    post_text: dict[int, str] = {}
    for _ in range(steps):
        line = rng.randint(1, line_count)
        text = buffer[line]
        dt = rng.choice([40, 300, 900, 1_500, 2_500])
        if text and rng.random() < 0.35:
            start = rng.randrange(0, len(text))
            end = rng.randint(start + 1, len(text))
            event = b.edit("a.py", line, start, deleted=text[start:end], dt=dt)
            buffer[line] = text[:start] + text[end:]
        else:
            col = rng.randint(0, len(text))
            ins = rng.choice("abcdefgh") * rng.randint(1, 3)
            event = b.edit("a.py", line, col, inserted=ins, dt=dt)
            buffer[line] = text[:col] + ins + text[col:]
        pre_text[event.id] = text
        post_text[event.id] = buffer[line]
    return b.events, buffer, pre_text, post_text


def test_aggregation_agrees_with_a_naive_buffer_on_random_scripts():
    for seed in range(60):
        rng = random.Random(seed)
        events, buffer, pre_text, post_text = random_inline_script(rng)
        files = entries(("a.py", 6))
        groups = trk.aggregate_edits(events, files)
        by_event = {e.id: e for e in events}

        last_after: dict[int, str] = {}
        previous: dict[int, trk.AggregatedEdit] = {}
        for g in groups:
            line = g.origin.anchor
            assert g.before == pre_text[g.start_event_id]
            assert g.after == post_text[g.end_event_id]
            members = [
                e
                for e in events
                if g.start_event_id <= e.id <= g.end_event_id
                and e.payload["line"] == line
            ]
            # Groups never interleave: the id range holds only own events.
            assert len(members) == sum(
                1 for e in events if g.start_event_id <= e.id <= g.end_event_id
            )
            for e in members[1:]:
                assert e.payload["deleted"] == ""
            for prev, nxt in zip(members, members[1:]):
                assert nxt.timestamp_ms - prev.timestamp_ms <= trk.MAX_GAP_MS
            if line in previous:
                prev = previous[line]
                # A split is always justified: silence, a deletion opening
                # this group, or another line edited in between.
                gap = (
                    by_event[g.start_event_id].timestamp_ms
                    - by_event[prev.end_event_id].timestamp_ms
                )
                first_deletes = by_event[g.start_event_id].payload["deleted"] != ""
                intervened = any(
                    e.payload["line"] != line
                    for e in events
                    if prev.end_event_id < e.id < g.start_event_id
                )
                assert gap > trk.MAX_GAP_MS or first_deletes or intervened
                assert g.before == prev.after
            previous[line] = g
            last_after[line] = g.after
        for line, text in buffer.items():
            assert last_after.get(line, "") == text


def test_outcomes_classify_surviving_and_reverted_lines():
    b = StreamBuilder()
    b.edit("a.py", 1, 0, inserted="keep", dt=100)
    b.edit("a.py", 2, 0, inserted="tmp", dt=100)
    b.edit("a.py", 2, 0, deleted="tmp", dt=100)
    outcomes = trk.edit_outcomes(b.events, entries(("a.py", 3)))
    by_line = {o.origin.anchor: o for o in outcomes}
    assert by_line[1].surviving and by_line[1].final_text == "keep"
    assert not by_line[2].surviving and by_line[2].final_text == ""


def test_deleting_the_edited_line_reverts_it():
    b = StreamBuilder()
    b.edit("a.py", 2, 0, inserted="gone", dt=100)
    b.edit("a.py", 2, 0, deleted="gone\n", dt=3_000)
    outcomes = trk.edit_outcomes(b.events, entries(("a.py", 3)))
    assert len(outcomes) == 1
    assert not outcomes[0].surviving
    assert outcomes[0].final_text is None


def test_clearing_unknown_text_survives():
    # The line changed from "old" to empty and stayed that way.
    b = StreamBuilder()
    b.edit("a.py", 1, 0, deleted="old", dt=100)
    outcomes = trk.edit_outcomes(b.events, entries(("a.py", 2)))
    assert outcomes[0].surviving


# ------------------------------------------------------------- track building


def test_second_file_plots_after_the_first():
    files = entries(("a.py", 100), ("b.py", 200))
    b = StreamBuilder()
    b.cursor("a.py", 1, dt=100)
    b.cursor("b.py", 1, dt=100)
    track = trk.build_track(recording_of(files, b.events), GlobalIndex(files, ALPHABETICAL))
    assert [p.global_pos for p in track.points] == [1, 101]


def test_scroll_plots_at_target_window_centre():
    files = entries(("a.py", 100),)
    b = StreamBuilder()
    b.scroll("a.py", 20, 50, dt=100)
    track = trk.build_track(recording_of(files, b.events), GlobalIndex(files))
    point = track.points[0]
    assert point.visible_span == (20, 50)
    assert point.global_pos == 35
    assert not point.marker


def test_selection_plots_at_its_start_line():
    files = entries(("a.py", 100),)
    b = StreamBuilder()
    b.add(
        "TextSelectionEvent",
        {"file": "a.py", "start_line": 42, "start_col": 0, "end_line": 44, "end_col": 3},
        dt=100,
    )
    track = trk.build_track(recording_of(files, b.events), GlobalIndex(files))
    assert track.points[0].global_pos == 42


def test_inserted_lines_collapse_onto_their_anchor():
    files = entries(("a.py", 100),)
    b = StreamBuilder()
    b.edit("a.py", 10, 5, inserted="\n", dt=100)
    b.cursor("a.py", 11, dt=100)
    b.cursor("a.py", 12, dt=100)
    track = trk.build_track(recording_of(files, b.events), GlobalIndex(files))
    assert [p.global_pos for p in track.points[1:]] == [10, 11]


def test_positions_survive_filtering_out_the_edits():
    # Filtering drops points but the genealogy still advances.
    files = entries(("a.py", 100),)
    b = StreamBuilder()
    b.edit("a.py", 10, 5, inserted="\n", dt=100)
    b.cursor("a.py", 12, dt=100)
    spec = trk.FilterSpec(include_categories=frozenset({"Navigation"}))
    track = trk.build_track(recording_of(files, b.events), GlobalIndex(files), spec)
    assert [(p.type, p.global_pos) for p in track.points] == [
        ("EditorTextCursorEvent", 11)
    ]


def test_positionless_events_become_markers_at_the_last_position():
    files = entries(("a.py", 100),)
    b = StreamBuilder()
    b.cursor("a.py", 30, dt=100)
    b.search("needle", dt=100)
    track = trk.build_track(recording_of(files, b.events), GlobalIndex(files))
    marker = track.points[1]
    assert marker.marker
    assert marker.global_pos == 30


def test_visible_range_falls_back_for_position_and_span():
    from tracelens.events import EventContext

    files = entries(("a.py", 100),)
    b = StreamBuilder()
    b.add(
        "EditorEvent",
        {"editor_id": "e1", "action": "focus"},
        context=EventContext(file="a.py", visible_range=(10, 30)),
        dt=100,
    )
    track = trk.build_track(recording_of(files, b.events), GlobalIndex(files))
    point = track.points[0]
    assert point.visible_span == (10, 30)
    assert point.global_pos == 20
    assert not point.marker


def test_filter_spec_window_and_files():
    files = entries(("a.py", 100), ("b.md", 10))
    b = StreamBuilder()
    b.cursor("a.py", 1, dt=1_000)
    b.cursor("b.md", 1, dt=1_000)
    b.cursor("a.py", 2, dt=10_000)
    by_window = trk.FilterSpec(window=(0, 5_000))
    by_files = trk.FilterSpec(files=("*.py",))
    track_w = trk.build_track(recording_of(files, b.events), GlobalIndex(files), by_window)
    track_f = trk.build_track(recording_of(files, b.events), GlobalIndex(files), by_files)
    assert [p.event_id for p in track_w.points] == [1, 2]
    assert [p.file for p in track_f.points] == ["a.py", "a.py"]


# ------------------------------------------------------------ level of detail


def make_track(positions, times=None):
    points = [
        trk.TrackPoint(
            event_id=i + 1,
            timestamp_ms=times[i] if times else (i + 1) * 1_000,
            type="EditorTextCursorEvent",
            category="Navigation",
            file="a.py",
            global_pos=pos,
            visible_span=None,
        )
        for i, pos in enumerate(positions)
    ]
    index = GlobalIndex(entries(("a.py", max(positions) + 10)))
    return trk.Track("rec", index, points)


def random_walk(rng, n=300, span=4_000):
    pos = span // 2
    out = []
    for _ in range(n):
        pos = min(max(pos + rng.randint(-120, 120), 1), span)
        out.append(pos)
    return out


def chord_deviation(p, a, b):
    dx = b.timestamp_ms - a.timestamp_ms
    if dx == 0:
        base = (a.global_pos + b.global_pos) / 2
    else:
        f = (p.timestamp_ms - a.timestamp_ms) / dx
        base = a.global_pos + (b.global_pos - a.global_pos) * f
    return abs(p.global_pos - base)


def test_level_zero_is_identity_and_negative_levels_raise():
    track = make_track([5, 9, 2, 14])
    assert trk.simplify(track, 0).points == track.points
    with pytest.raises(ValueError):
        trk.simplify(track, -1)


def test_retained_sets_nest_and_keep_endpoints():
    for seed in range(20):
        track = make_track(random_walk(random.Random(seed)))
        kept_before = None
        for level in range(0, 11):
            ids = {p.event_id for p in trk.simplify(track, level).points}
            assert track.points[0].event_id in ids
            assert track.points[-1].event_id in ids
            if kept_before is not None:
                assert ids <= kept_before
            kept_before = ids


def test_anchor_events_survive_every_level():
    track = make_track(random_walk(random.Random(7)))
    anchors = frozenset({50, 120, 200})
    for level in (1, 6, 12):
        ids = {p.event_id for p in trk.simplify(track, level, anchors).points}
        assert anchors <= ids


def test_dropped_points_stay_within_the_level_tolerance():
    for seed in range(12):
        track = make_track(random_walk(random.Random(seed)))
        anchors = frozenset({77}) if seed % 2 else frozenset()
        for level in (1, 3, 5, 8):
            kept = trk.simplify(track, level, anchors).points
            tol = 2.0**level
            index_of = {p.event_id: i for i, p in enumerate(track.points)}
            ks = [index_of[p.event_id] for p in kept]
            assert ks == sorted(ks)
            for a, b in zip(ks, ks[1:]):
                for i in range(a + 1, b):
                    dev = chord_deviation(
                        track.points[i], track.points[a], track.points[b]
                    )
                    assert dev <= tol + 1e-9


def test_level_point_counts_match_actual_simplification():
    track = make_track(random_walk(random.Random(3)))
    counts = trk.level_point_counts(track, up_to=10)
    assert counts == [len(trk.simplify(track, level).points) for level in range(11)]
    assert counts[0] == len(track.points)
    assert all(a >= b for a, b in zip(counts, counts[1:]))


def test_tiny_tracks_simplify_to_themselves():
    track = make_track([4, 9])
    assert len(trk.simplify(track, 9).points) == 2
    assert trk.level_point_counts(track, up_to=3) == [2, 2, 2, 2]
