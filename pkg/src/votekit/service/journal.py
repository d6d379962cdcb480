"""File-backed event journal with snapshots and crash recovery.

Layout inside the data directory:

    journal_<seq>.jsonl    one canonical-JSON event per line
    snapshot_<seq>.json    full state at the moment journal_<seq> started

A write is acknowledged only after the line, newline included, is
fsynced.  Recovery applies lines strictly in order; a trailing segment
without its newline is an unacknowledged partial write and is discarded
(and truncated away before new appends).  A malformed line anywhere else
means real corruption and refuses to load.
"""

from __future__ import annotations

import json
import os
import re
import threading
from pathlib import Path

from ..canon import canonical_json
from ..errors import CorruptJournal

_SNAPSHOT_RE = re.compile(r"^snapshot_(\d+)\.json$")


class Journal:
    def __init__(self, data_dir):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.seq = 0
        self._fh = None
        self._lock = threading.Lock()  # appends and rotation share the handle

    def journal_path(self, seq: int | None = None) -> Path:
        return self.data_dir / f"journal_{self.seq if seq is None else seq}.jsonl"

    def snapshot_path(self, seq: int | None = None) -> Path:
        return self.data_dir / f"snapshot_{self.seq if seq is None else seq}.json"

    # -- recovery ------------------------------------------------------------

    def _latest_snapshot_seq(self) -> int:
        best = 0
        for name in os.listdir(self.data_dir):
            match = _SNAPSHOT_RE.match(name)
            if match:
                best = max(best, int(match.group(1)))
        return best

    def load(self) -> tuple[dict | None, list[dict]]:
        """Read the latest snapshot and replay its journal segment.

        Returns (snapshot_doc or None, events).  Afterwards the journal is
        open for appends, with any partial trailing record truncated away.
        """
        self.seq = self._latest_snapshot_seq()
        snapshot = None
        if self.snapshot_path().exists():
            snapshot = json.loads(self.snapshot_path().read_text(encoding="utf-8"))

        events: list[dict] = []
        path = self.journal_path()
        valid_bytes = 0
        if path.exists():
            raw = path.read_bytes()
            offset = 0
            while True:
                newline = raw.find(b"\n", offset)
                if newline == -1:
                    break  # trailing bytes without newline: unacknowledged partial
                line = raw[offset:newline]
                try:
                    events.append(json.loads(line.decode("utf-8")))
                except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                    raise CorruptJournal(
                        f"malformed journal line at byte {offset} of {path.name}"
                    ) from exc
                offset = newline + 1
                valid_bytes = offset
            if valid_bytes < len(raw):
                with open(path, "r+b") as fh:
                    fh.truncate(valid_bytes)
        self._open_for_append()
        return snapshot, events

    def _open_for_append(self) -> None:
        if self._fh is not None:
            self._fh.close()
        self._fh = open(self.journal_path(), "ab")

    # -- writes ----------------------------------------------------------------

    def append(self, event: dict) -> None:
        """Durably append one event; returns only after fsync."""
        with self._lock:
            if self._fh is None:
                self._open_for_append()
            self._fh.write(canonical_json(event).encode("utf-8") + b"\n")
            self._fh.flush()
            os.fsync(self._fh.fileno())

    def write_snapshot(self, state_doc: dict) -> None:
        """Atomically persist a snapshot and rotate to a fresh journal segment.

        Replay of events that are also captured in the snapshot must be
        idempotent; the state layer guarantees that.
        """
        with self._lock:
            next_seq = self.seq + 1
            tmp = self.data_dir / f"snapshot_{next_seq}.json.tmp"
            tmp.write_text(canonical_json(state_doc), encoding="utf-8")
            with open(tmp, "rb") as fh:
                os.fsync(fh.fileno())
            tmp.rename(self.data_dir / f"snapshot_{next_seq}.json")
            self.seq = next_seq
            self._open_for_append()

    def close(self) -> None:
        with self._lock:
            if self._fh is not None:
                self._fh.close()
                self._fh = None
