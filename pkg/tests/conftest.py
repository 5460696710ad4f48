"""Shared stream-building helpers for the analysis tests."""

from __future__ import annotations

from tracelens.events import Event, EventContext
from tracelens.recording import FileEntry, Recording


def pytest_runtest_logreport(report):
    """One visible PASS/FAIL line per release criterion."""
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    verdict = "PASS" if report.passed else "FAIL"
    name = report.nodeid.split("::")[-1]
    print(f"\nACCEPTANCE {verdict}: {name} ({report.duration:.2f}s)")


class StreamBuilder:
    """Hand-rolled event streams with auto ids and a running clock."""

    def __init__(self, start_ms: int = 0):
        self.events: list[Event] = []
        self.now = start_ms
        self._next_id = 1

    def at(self, ts_ms: int) -> "StreamBuilder":
        self.now = ts_ms
        return self

    def add(self, type_: str, payload: dict, context=None, dt: int = 0) -> Event:
        self.now += dt
        event = Event(
            id=self._next_id,
            timestamp_ms=self.now,
            type=type_,
            payload=payload,
            context=context or EventContext(),
        )
        self._next_id += 1
        self.events.append(event)
        return event

    def edit(self, file, line, col, inserted="", deleted="", dt=0) -> Event:
        return self.add(
            "CodeChangeEvent",
            {
                "file": file,
                "line": line,
                "col": col,
                "inserted": inserted,
                "deleted": deleted,
            },
            dt=dt,
        )

    def scroll(self, file, first, last, dt=0) -> Event:
        return self.add(
            "ScrollEvent",
            {
                "file": file,
                "from_first": first,
                "from_last": last,
                "to_first": first,
                "to_last": last,
            },
            dt=dt,
        )

    def open_file(self, path, dt=0) -> Event:
        return self.add("FileEvent", {"path": path, "action": "open"}, dt=dt)

    def cursor(self, file, line, col=0, dt=0) -> Event:
        return self.add(
            "EditorTextCursorEvent", {"file": file, "line": line, "col": col}, dt=dt
        )

    def launch(self, mode="run", target="Main", dt=0) -> Event:
        return self.add("LaunchEvent", {"mode": mode, "target": target}, dt=dt)

    def debug(self, kind, file, line, dt=0) -> Event:
        return self.add("DebugEvent", {"kind": kind, "file": file, "line": line}, dt=dt)

    def save(self, file, dt=0) -> Event:
        return self.add("SaveEvent", {"file": file}, dt=dt)

    def search(self, query, dt=0) -> Event:
        return self.add("SearchEvent", {"query": query, "scope": "project"}, dt=dt)


def entries(*pairs) -> list[FileEntry]:
    return [FileEntry(path, count) for path, count in pairs]


def recording_of(files, events, recording_id="rec") -> Recording:
    return Recording(recording_id=recording_id, files=list(files), events=list(events))
