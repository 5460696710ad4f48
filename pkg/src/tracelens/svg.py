"""Deterministic SVG rendering of tracks and score trajectories.

Output is assembled from strings with fixed two-decimal coordinates, so the
same input always yields identical bytes. A track chart puts the global line
axis horizontally and time flowing downward; every event glyph is a <use>
of its category's symbol whose x/y attributes are the exact chart
coordinates, so tooling can invert positions without geometry parsing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .patterns import PatternMatch, PhaseSpan
from .scoring import ScoreTrajectory
from .track import Track

CATEGORY_SYMBOLS = {
    "Activity": "sym-activity",
    "Execution": "sym-execution",
    "Edit": "sym-edit",
    "Environment": "sym-environment",
    "Navigation": "sym-navigation",
    "Solution": "sym-solution",
}

PATTERN_LETTERS = {
    "Oscillate": "O",
    "Restart": "R",
    "DocSwitch": "D",
    "DebuggerUse": "B",
    "PoorMansDebugger": "P",
    "ValidationLaunch": "V",
}

_SYMBOL_DEFS = """\
<defs>
<g id="sym-activity"><circle r="3"/></g>
<g id="sym-execution"><path d="M0 -3.5 L3 2.5 L-3 2.5 Z"/></g>
<g id="sym-edit"><rect x="-2.6" y="-2.6" width="5.2" height="5.2"/></g>
<g id="sym-environment"><path d="M0 -3.5 L3.5 0 L0 3.5 L-3.5 0 Z"/></g>
<g id="sym-navigation"><path d="M-2.5 -2.5 L2.5 2.5 M-2.5 2.5 L2.5 -2.5" class="stroke"/></g>
<g id="sym-solution"><path d="M0 -3 L0 3 M-3 0 L3 0" class="stroke"/></g>
</defs>"""

_STYLE = """\
<style>
.track-line{fill:none;stroke:#8899aa;stroke-width:0.8}
.glyph{fill:#334455}.glyph.marker{fill:#bbc4cc}
.stroke{fill:none;stroke:#334455;stroke-width:1.2}
.phase-Investigation{fill:#4477cc;fill-opacity:0.08}
.phase-Edit{fill:#cc8844;fill-opacity:0.10}
.phase-Validation{fill:#44aa66;fill-opacity:0.10}
.pattern-mark circle{fill:#fff;stroke:#aa3355;stroke-width:1.2}
.pattern-mark text{font:8px sans-serif;fill:#aa3355;text-anchor:middle}
.score-line{fill:none;stroke:#aa3355;stroke-width:1.5}
.band{fill:#4477cc;fill-opacity:0.12}
.trigger-pos{fill:#44aa66}.trigger-neg{fill:#aa3355}.trigger-zero{fill:#8899aa}
.frame{fill:none;stroke:#ccd2d8;stroke-width:1}
</style>"""


def _fmt(value: float) -> str:
    return f"{value:.2f}"


@dataclass(frozen=True)
class Viewport:
    width: int = 1000
    height: int = 600
    margin_left: int = 50
    margin_top: int = 20
    margin_right: int = 20
    margin_bottom: int = 30

    @property
    def plot_width(self) -> int:
        return self.width - self.margin_left - self.margin_right

    @property
    def plot_height(self) -> int:
        return self.height - self.margin_top - self.margin_bottom


class TrackTransform:
    """Affine map between (global line, timestamp) and chart pixels."""

    def __init__(self, viewport: Viewport, total_lines: int, t0: int, t1: int):
        self.viewport = viewport
        self.total_lines = max(total_lines, 1)
        self.t0 = t0
        self.span_ms = max(t1 - t0, 1)

    def x(self, position: float) -> float:
        frac = (position - 1) / max(self.total_lines - 1, 1)
        return self.viewport.margin_left + frac * self.viewport.plot_width

    def y(self, timestamp_ms: float) -> float:
        frac = (timestamp_ms - self.t0) / self.span_ms
        return self.viewport.margin_top + frac * self.viewport.plot_height

    def invert(self, x: float, y: float) -> tuple[float, float]:
        pos = 1 + (x - self.viewport.margin_left) / self.viewport.plot_width * max(
            self.total_lines - 1, 1
        )
        ts = self.t0 + (y - self.viewport.margin_top) / self.viewport.plot_height * (
            self.span_ms
        )
        return pos, ts


def _open_svg(viewport: Viewport) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{viewport.width}" '
        f'height="{viewport.height}" viewBox="0 0 {viewport.width} {viewport.height}">',
        _STYLE,
        _SYMBOL_DEFS,
        f'<rect class="frame" x="{viewport.margin_left}" y="{viewport.margin_top}" '
        f'width="{viewport.plot_width}" height="{viewport.plot_height}"/>',
    ]


def render_track_svg(
    track: Track,
    patterns: Sequence[PatternMatch] = (),
    phases: Sequence[PhaseSpan] = (),
    viewport: Viewport = Viewport(),
    edge_categories: frozenset[str] | None = None,
) -> str:
    """Render a track chart.

    Args:
        track: Track at any level of detail.
        patterns: Matches to mark at their closing event's position.
        phases: Phase spans drawn as horizontal time bands.
        viewport: Chart geometry.
        edge_categories: Categories joined by the track line; None joins all.

    Returns:
        Complete SVG document text.
    """
    points = track.points
    if points:
        t0, t1 = points[0].timestamp_ms, points[-1].timestamp_ms
    else:
        t0, t1 = 0, 1
    tr = TrackTransform(viewport, track.index.total_lines, t0, t1)
    out = _open_svg(viewport)

    for span in phases:
        top = tr.y(span.start_ms)
        out.append(
            f'<rect class="phase-{span.label}" x="{viewport.margin_left}" '
            f'y="{_fmt(top)}" width="{viewport.plot_width}" '
            f'height="{_fmt(max(tr.y(span.end_ms) - top, 0.0))}"/>'
        )

    edge_points = [
        p
        for p in points
        if edge_categories is None or p.category in edge_categories
    ]
    if len(edge_points) >= 2:
        coords = " ".join(
            f"{_fmt(tr.x(p.global_pos))},{_fmt(tr.y(p.timestamp_ms))}"
            for p in edge_points
        )
        out.append(f'<polyline class="track-line" points="{coords}"/>')

    for p in points:
        cls = "glyph marker" if p.marker else "glyph"
        out.append(
            f'<use href="#{CATEGORY_SYMBOLS[p.category]}" '
            f'x="{_fmt(tr.x(p.global_pos))}" y="{_fmt(tr.y(p.timestamp_ms))}" '
            f'class="{cls}" data-event-id="{p.event_id}"/>'
        )

    by_id = {p.event_id: p for p in points}
    for match in patterns:
        anchor = by_id.get(match.end_event_id) or by_id.get(match.start_event_id)
        if anchor is None:
            continue
        cx = _fmt(tr.x(anchor.global_pos))
        cy = _fmt(tr.y(anchor.timestamp_ms))
        letter = PATTERN_LETTERS.get(match.kind, "?")
        out.append(
            f'<g class="pattern-mark" data-kind="{match.kind}" '
            f'data-event-id="{match.end_event_id}" '
            f'transform="translate({cx} {cy})">'
            f'<circle r="6"/><text y="2.5">{letter}</text></g>'
        )

    out.append("</svg>")
    return "\n".join(out)


def render_score_svg(
    trajectory: ScoreTrajectory, viewport: Viewport = Viewport(width=1000, height=300)
) -> str:
    """Render a score trajectory: step line, distinct-file band, triggers."""
    samples = trajectory.samples
    out = _open_svg(viewport)
    if not samples:
        out.append("</svg>")
        return "\n".join(out)

    t0, t1 = samples[0].timestamp_ms, samples[-1].timestamp_ms
    span_ms = max(t1 - t0, 1)
    lo = min(0, min(s.score for s in samples))
    hi = max(max(s.score for s in samples), max(s.distinct_files for s in samples), 1)

    def x(ts: int) -> float:
        return viewport.margin_left + (ts - t0) / span_ms * viewport.plot_width

    def y(value: float) -> float:
        frac = (value - lo) / (hi - lo) if hi > lo else 0.5
        return viewport.margin_top + (1 - frac) * viewport.plot_height

    band = [f"{_fmt(x(samples[0].timestamp_ms))},{_fmt(y(0))}"]
    level = 0
    for s in samples:
        band.append(f"{_fmt(x(s.timestamp_ms))},{_fmt(y(level))}")
        level = s.distinct_files
        band.append(f"{_fmt(x(s.timestamp_ms))},{_fmt(y(level))}")
    band.append(f"{_fmt(x(t1))},{_fmt(y(level))}")
    band.append(f"{_fmt(x(t1))},{_fmt(y(0))}")
    out.append(f'<polygon class="band" points="{" ".join(band)}"/>')

    line = []
    level = 0
    for s in samples:
        line.append(f"{_fmt(x(s.timestamp_ms))},{_fmt(y(level))}")
        level = s.score
        line.append(f"{_fmt(x(s.timestamp_ms))},{_fmt(y(level))}")
    out.append(f'<polyline class="score-line" points="{" ".join(line)}"/>')

    for trigger in trajectory.triggers:
        cls = (
            "trigger-pos"
            if trigger.delta > 0
            else "trigger-neg"
            if trigger.delta < 0
            else "trigger-zero"
        )
        out.append(
            f'<circle class="{cls}" r="2.5" cx="{_fmt(x(trigger.timestamp_ms))}" '
            f'cy="{_fmt(viewport.margin_top + 6)}" data-kind="{trigger.kind}" '
            f'data-event-id="{trigger.event_id}"/>'
        )

    out.append("</svg>")
    return "\n".join(out)
