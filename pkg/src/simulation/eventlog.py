"""Append-only simulation event log with JSON Lines export."""

import json
from collections.abc import Iterable, Iterator
from pathlib import Path
from typing import Any

from src.errors import InputError
from src.models.simulation import EventKind, SimEvent

# Field order of every exported line
EVENT_FIELDS: tuple[str, ...] = ("tick", "seq", "kind", "payload")


class EventLog:
    """Events in (tick, seq) order; seq is global and strictly increasing."""

    def __init__(self) -> None:
        self._events: list[SimEvent] = []
        self._last_tick = 0

    def emit(self, tick: int, kind: EventKind, **payload: Any) -> SimEvent:
        if tick < self._last_tick:
            raise InputError(f"event at tick {tick} after tick {self._last_tick}")
        event = SimEvent(tick=tick, seq=len(self._events), kind=kind, payload=payload)
        self._events.append(event)
        self._last_tick = tick
        return event

    @property
    def events(self) -> list[SimEvent]:
        return self._events

    def __len__(self) -> int:
        return len(self._events)

    def __iter__(self) -> Iterator[SimEvent]:
        return iter(self._events)

    def of_kind(self, kind: EventKind) -> list[SimEvent]:
        return [e for e in self._events if e.kind is kind]


def is_ordered(events: Iterable[SimEvent]) -> bool:
    """True when events are strictly increasing in (tick, seq)."""
    previous: tuple[int, int] | None = None
    for event in events:
        key = (event.tick, event.seq)
        if previous is not None and key <= previous:
            return False
        previous = key
    return True


def event_to_line(event: SimEvent) -> str:
    return json.dumps(event.to_record(), separators=(",", ":"))


def export_events(events: Iterable[SimEvent], path: Path) -> Path:
    """Write one JSON object per line."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        for event in events:
            f.write(event_to_line(event))
            f.write("\n")
    return path


def import_events(path: Path) -> list[SimEvent]:
    events = []
    with path.open(encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                events.append(
                    SimEvent(
                        tick=int(record["tick"]),
                        seq=int(record["seq"]),
                        kind=EventKind(record["kind"]),
                        payload=dict(record["payload"]),
                    )
                )
            except (KeyError, ValueError, TypeError) as e:
                raise InputError(f"{path}:{number}: malformed event line ({e})") from e
    return events
