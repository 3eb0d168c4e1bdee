"""Canonical JSON carrier for a computed front.

One file holds everything needed to filter and report offline: grid metadata,
the entry list (weights plus objective values, full float precision) and run
metadata. Entries are written in sorted-box order, so a fixed-seed rerun
produces a byte-identical entries section; an entry's position in that order
is its stable id for the HTTP API and the UI.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .archive import ArchiveEntry, EpsArchive, Grid, box_index, to_minimized
from .engine import RunResult
from .portfolio import Bounds, ObjectiveVector, Portfolio, is_feasible

FRONT_SCHEMA_VERSION = "1"


class FrontFormatError(ValueError):
    """Raised when a front file fails schema or invariant checks."""


def entry_payload(e: ArchiveEntry) -> dict:
    return {
        "weights": e.weights.tolist(),
        "risk": e.objectives.risk,
        "ret": e.objectives.ret,
        "carbon": e.objectives.carbon,
        "box": list(e.box),
    }


def build_front_export(result: RunResult, instance_digest: str, asset_ids: list[str]) -> dict:
    arch = result.archive
    return {
        "schema_version": FRONT_SCHEMA_VERSION,
        "instance_digest": instance_digest,
        "asset_ids": list(asset_ids),
        "bounds": {
            "lower": result.bounds.lower.tolist(),
            "upper": result.bounds.upper.tolist(),
        },
        "grid": {
            "f_min": arch.grid.f_min.tolist(),
            "f_max": arch.grid.f_max.tolist(),
            "eps": arch.grid.eps.tolist(),
            "n_box": arch.grid.n_box,
        },
        "entries": [entry_payload(e) for e in arch.entries_sorted()],
        "run": {
            "seed": result.config.seed,
            "config": result.config.to_dict(),
            "evaluations": result.evaluations,
            "iterations": result.iterations_done,
            "wall_time_s": result.wall_time_s,
            "checkpoints": [cp.summary() for cp in result.checkpoints],
        },
    }


def dumps_front(export: dict) -> str:
    return json.dumps(export, indent=1)


def save_front(export: dict, path: str | Path) -> None:
    Path(path).write_text(dumps_front(export), encoding="utf-8")


@dataclass
class FrontDocument:
    """A reloaded front: raw payload plus the rebuilt archive."""

    payload: dict
    archive: EpsArchive
    asset_ids: list[str]
    bounds: Bounds

    @property
    def entries(self) -> list[ArchiveEntry]:
        return self.archive.entries_sorted()

    def entry_id(self, entry: ArchiveEntry) -> int:
        for i, e in enumerate(self.entries):
            if e.box == entry.box:
                return i
        raise KeyError(f"entry with box {entry.box} not in front")


def _archive_from_payload(payload: dict, bounds: Bounds) -> EpsArchive:
    gridspec = payload["grid"]
    grid = Grid(np.array(gridspec["f_min"], dtype=float),
                np.array(gridspec["f_max"], dtype=float),
                int(gridspec["n_box"]))
    records = []
    seen: set[tuple[int, int, int]] = set()
    for i, raw in enumerate(payload["entries"]):
        weights = np.array(raw["weights"], dtype=float)
        try:
            Portfolio(weights)
            obj = ObjectiveVector(risk=float(raw["risk"]), ret=float(raw["ret"]),
                                  carbon=float(raw["carbon"]))
        except ValueError as exc:
            raise FrontFormatError(f"entry {i}: {exc}") from None
        if not is_feasible(weights, bounds):
            raise FrontFormatError(f"entry {i}: weights violate the stored bounds")
        g = to_minimized(obj)
        box = tuple(int(b) for b in raw["box"])
        if box != box_index(g, grid):
            raise FrontFormatError(f"entry {i}: box {box} does not match the grid")
        if box in seen:
            raise FrontFormatError(f"entry {i}: duplicate box {box}")
        seen.add(box)
        records.append((weights, (obj.risk, obj.ret, obj.carbon), g, box))
    return EpsArchive.restore(grid, records)


def front_from_payload(payload: dict) -> FrontDocument:
    try:
        version = payload["schema_version"]
        if version != FRONT_SCHEMA_VERSION:
            raise FrontFormatError(f"unsupported front schema version {version!r}")
        bounds = Bounds(np.array(payload["bounds"]["lower"], dtype=float),
                        np.array(payload["bounds"]["upper"], dtype=float))
        asset_ids = list(payload["asset_ids"])
        archive = _archive_from_payload(payload, bounds)
    except KeyError as exc:
        raise FrontFormatError(f"front file missing field {exc}") from None
    if len(asset_ids) != bounds.n_assets:
        raise FrontFormatError("asset id count does not match bounds")
    return FrontDocument(payload=payload, archive=archive,
                         asset_ids=asset_ids, bounds=bounds)


def load_front(path: str | Path) -> FrontDocument:
    path = Path(path)
    if not path.exists():
        raise FrontFormatError(f"front file not found: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FrontFormatError(f"{path}: invalid JSON ({exc})") from None
    return front_from_payload(payload)
