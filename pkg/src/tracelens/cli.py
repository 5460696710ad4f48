"""Command-line front end.

Subcommands cover the whole offline workflow: validate a recording, write
its analysis report, render SVG charts, compare several recordings,
generate synthetic material, and serve the read-only HTTP API. Exit codes
separate usage mistakes (1) from recording/config validation failures (2)
and I/O trouble (3).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .config import load_config
from .events import CATEGORIES, canonical_json
from .recording import Recording, load_recording, save_recording, split_sessions
from .report import analyze
from .scoring import compare
from .svg import render_score_svg, render_track_svg
from .synth import ARCHETYPES, generate_synthetic
from .track import FilterSpec, FilterSyntaxError, simplify

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; the contract here wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tracelens", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ingest = sub.add_parser("ingest", help="validate a recording and print a summary")
    ingest.add_argument("file")

    analyze_cmd = sub.add_parser("analyze", help="write the analysis report")
    analyze_cmd.add_argument("file")
    analyze_cmd.add_argument("--config", default=None)
    analyze_cmd.add_argument("--out", default=None, help="output directory")

    render = sub.add_parser("render", help="write track and score SVG charts")
    render.add_argument("file")
    render.add_argument("--config", default=None)
    render.add_argument("--lod", type=int, default=0)
    render.add_argument("--filter", dest="filter_spec", default=None)
    render.add_argument(
        "--edges", default=None, help="comma-separated categories joined by edges"
    )
    render.add_argument("--out", default=None, help="output directory")

    compare_cmd = sub.add_parser("compare", help="rank recordings against each other")
    compare_cmd.add_argument("files", nargs="+")
    compare_cmd.add_argument("--config", default=None)
    compare_cmd.add_argument("--out", default=None, help="output directory")

    generate = sub.add_parser("generate", help="write a synthetic recording")
    generate.add_argument(
        "--scenario",
        required=True,
        help="archetype name, or names joined by '+' for a composition",
    )
    generate.add_argument("--seed", type=int, default=0)
    generate.add_argument("--out", required=True)
    generate.add_argument(
        "--params", default=None, help="JSON object merged into the scenario spec"
    )

    serve = sub.add_parser("serve", help="start the read-only HTTP API")
    serve.add_argument("--dir", required=True)
    serve.add_argument("--config", default=None)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    return parser


def _out_dir(arg: str | None, source: str) -> Path:
    directory = Path(arg) if arg is not None else Path(source).resolve().parent
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def _load(path: str) -> Recording:
    return load_recording(path)


def cmd_ingest(args) -> int:
    recording = _load(args.file)
    sessions = split_sessions(recording)
    print(f"recording_id: {recording.recording_id}")
    print(f"files: {len(recording.files)}")
    print(f"events: {len(recording.events)}")
    print(f"duration_ms: {recording.duration_ms}")
    print(f"sessions: {len(sessions)}")
    return EXIT_OK


def _report_path(directory: Path, recording_id: str) -> Path:
    return directory / f"{recording_id}.report.json"


def cmd_analyze(args) -> int:
    config = load_config(args.config)
    recording = _load(args.file)
    directory = _out_dir(args.out, args.file)
    target = _report_path(directory, recording.recording_id)
    if target.exists():
        try:
            digest = json.loads(target.read_text(encoding="utf-8"))["config_digest"]
        except (json.JSONDecodeError, KeyError):
            digest = None
        if digest == config.digest():
            print(f"unchanged: {target}")
            return EXIT_OK
    report, _ = analyze(recording, config)
    target.write_text(report.serialize() + "\n", encoding="utf-8")
    print(f"wrote: {target}")
    return EXIT_OK


def cmd_render(args) -> int:
    config = load_config(args.config)
    recording = _load(args.file)
    spec = FilterSpec.parse(args.filter_spec) if args.filter_spec else None
    edges = None
    if args.edges is not None:
        edges = frozenset(filter(None, (s.strip() for s in args.edges.split(","))))
        unknown = edges - set(CATEGORIES)
        if unknown:
            raise FilterSyntaxError(f"unknown edge categories {sorted(unknown)}")
    report, track = analyze(recording, config, filter_spec=spec)
    directory = _out_dir(args.out, args.file)
    track_svg = render_track_svg(
        simplify(track, args.lod),
        patterns=report.patterns,
        phases=report.phases,
        edge_categories=edges,
    )
    track_path = directory / f"{recording.recording_id}.track.svg"
    track_path.write_text(track_svg, encoding="utf-8")
    score_path = directory / f"{recording.recording_id}.score.svg"
    score_path.write_text(render_score_svg(report.trajectory), encoding="utf-8")
    print(f"wrote: {track_path}")
    print(f"wrote: {score_path}")
    return EXIT_OK


def cmd_compare(args) -> int:
    config = load_config(args.config)
    summaries = []
    trajectories = {}
    manifests = {}
    for path in args.files:
        recording = _load(path)
        report, _ = analyze(recording, config)
        summaries.append(report.summary)
        trajectories[recording.recording_id] = report.trajectory
        manifests[recording.recording_id] = recording.line_counts()
    if len(summaries) < 2:
        print("compare needs at least two recordings", file=sys.stderr)
        return EXIT_USAGE
    result = compare(summaries, trajectories, manifests)
    directory = _out_dir(args.out, args.files[0])
    target = directory / "comparison.json"
    target.write_text(canonical_json(result) + "\n", encoding="utf-8")
    print(f"wrote: {target}")
    return EXIT_OK


def _scenario_spec(scenario: str, params: str | None) -> dict:
    extra = {}
    if params is not None:
        try:
            extra = json.loads(params)
        except json.JSONDecodeError as exc:
            raise FilterSyntaxError(f"--params is not valid JSON: {exc}") from None
        if not isinstance(extra, dict):
            raise FilterSyntaxError("--params must be a JSON object")
    names = scenario.split("+")
    unknown = [n for n in names if n not in ARCHETYPES]
    if unknown:
        raise FilterSyntaxError(
            f"unknown scenario {unknown[0]!r}; choose from {', '.join(ARCHETYPES)}"
        )
    if len(names) == 1:
        return {"archetype": names[0], **extra}
    return {"compose": [{"archetype": n} for n in names], **extra}


def cmd_generate(args) -> int:
    spec = _scenario_spec(args.scenario, args.params)
    recording, truth = generate_synthetic(spec, seed=args.seed)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_recording(recording, out)
    sidecar = out.with_name(f"{out.stem}.truth.json")
    sidecar.write_text(canonical_json(truth.to_mapping()) + "\n", encoding="utf-8")
    print(f"wrote: {out}")
    print(f"wrote: {sidecar}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    config = load_config(args.config)
    app = create_app(Path(args.dir), config)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


_COMMANDS = {
    "ingest": cmd_ingest,
    "analyze": cmd_analyze,
    "render": cmd_render,
    "compare": cmd_compare,
    "generate": cmd_generate,
    "serve": cmd_serve,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ValueError as exc:
        # RecordingError, FilterSyntaxError, bad config values, bad JSON.
        print(f"tracelens: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"tracelens: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
