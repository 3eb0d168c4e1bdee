"""Background optimizer for live mode: one worker, snapshot handoff."""

from __future__ import annotations

import threading
from typing import Callable

from ..archive import EpsArchive
from ..engine import Checkpoint, EvMogaConfig, RunResult, run
from ..frontio import FrontDocument, build_front_export, front_from_payload
from ..market_data import AssetUniverse
from ..portfolio import Bounds
from .schemas import ProgressEntry, ProgressResponse


class LiveRunner:
    """Runs the engine on a daemon thread, publishing a complete front
    document at every checkpoint; readers only ever see immutable snapshots."""

    def __init__(self, universe: AssetUniverse, bounds: Bounds, cfg: EvMogaConfig,
                 instance_digest: str):
        if cfg.checkpoint_every <= 0:
            step = max(1, cfg.k_max // 20)
            cfg = EvMogaConfig(**{**cfg.to_dict(), "checkpoint_every": step})
        self._universe = universe
        self._bounds = bounds
        self._cfg = cfg
        self._digest = instance_digest
        self._lock = threading.Lock()
        self._progress: list[ProgressEntry] = []
        self._subscribers: list[Callable[[FrontDocument], None]] = []
        self._finished = False
        self._error: str | None = None
        self._thread: threading.Thread | None = None
        self.result: RunResult | None = None

    def on_snapshot(self, callback: Callable[[FrontDocument], None]) -> None:
        self._subscribers.append(callback)

    def start(self) -> None:
        self._thread = threading.Thread(target=self._work, daemon=True)
        self._thread.start()

    def join(self, timeout: float | None = None) -> None:
        if self._thread is not None:
            self._thread.join(timeout)

    def progress(self) -> ProgressResponse:
        with self._lock:
            return ProgressResponse(
                running=not self._finished,
                finished=self._finished,
                checkpoints=list(self._progress),
            )

    # -- worker --------------------------------------------------------------

    def _publish(self, snapshot: RunResult) -> None:
        export = build_front_export(snapshot, self._digest, self._universe.asset_ids)
        doc = front_from_payload(export)
        for cb in self._subscribers:
            cb(doc)

    def _work(self) -> None:
        seen: list[Checkpoint] = []

        def sink(cp: Checkpoint, arch: EpsArchive) -> None:
            seen.append(cp)
            with self._lock:
                self._progress.append(ProgressEntry(
                    iteration=cp.iteration,
                    evaluations=cp.evaluations,
                    archive_size=cp.archive_size,
                    hypervolume=cp.hypervolume,
                    elapsed_s=cp.elapsed_s,
                ))
            # The engine is paused inside the sink, so exporting here takes a
            # deep snapshot of a stable archive.
            self._publish(RunResult(
                archive=arch, iterations_done=cp.iteration, evaluations=cp.evaluations,
                checkpoints=list(seen), wall_time_s=cp.elapsed_s,
                config=self._cfg, bounds=self._bounds,
            ))

        try:
            self.result = run(self._universe, self._bounds, self._cfg, progress_sink=sink)
        except Exception as exc:  # surfaced via /progress rather than killing the server
            with self._lock:
                self._error = str(exc)
                self._finished = True
            return
        with self._lock:
            self._finished = True
