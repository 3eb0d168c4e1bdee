"""Box-grid archive of mutually non-dominated portfolios.

Objectives are handled in all-minimized form ``g = (risk, -ret, carbon)``.
The objective space seen so far is split into ``n_box`` boxes per axis of
width ``eps_i = (f_max_i - f_min_i) / n_box``; the archive keeps at most one
entry per box, rejects candidates whose box is Pareto-dominated by a stored
entry's box, and settles same-box contests by distance to the box center
(measured with each axis in units of its own ``eps_i``). Grid limits only
ever move outward; per-axis minimizers ("anchors") are protected from
displacement that would raise an axis minimum, so the extremes of the front
cannot be lost to box bookkeeping.

Storage is flat numpy arrays indexed by slot, plus a box -> slot dict. Box
dominance is answered in O(1) from two tables over the (b1, b2) plane:
``C[b1, b2]`` is the smallest stored b0 in that column and ``P`` its 2-D
prefix minimum. Inserts update both incrementally; evictions leave them
stale on purpose - an evicted box was always box-dominated by its evictor,
so a stale "dominated" verdict is still correct - and grid extensions force
a rebuild.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .portfolio import ObjectiveVector

EPS_FLOOR = 1e-12

# Above this many boxes per axis the dominance tables would dwarf the archive;
# fall back to direct scans.
TABLE_LIMIT = 4096

BoxKey = tuple[int, int, int]


def to_minimized(obj: ObjectiveVector) -> np.ndarray:
    """(risk, ret, carbon) -> all-minimized (risk, -ret, carbon)."""
    return np.array([obj.risk, -obj.ret, obj.carbon], dtype=float)


def from_minimized(g: np.ndarray) -> ObjectiveVector:
    return ObjectiveVector(risk=float(g[0]), ret=float(-g[1]), carbon=float(g[2]))


def minimize_rows(obj_rows: np.ndarray) -> np.ndarray:
    """Row-wise (risk, ret, carbon) -> (risk, -ret, carbon)."""
    g = np.array(obj_rows, dtype=float)
    g[:, 1] = -g[:, 1]
    return g


def dominates(a: np.ndarray, b: np.ndarray) -> bool:
    """Pareto dominance on minimized vectors: a <= b with at least one <."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch {a.shape} vs {b.shape}")
    return bool((a <= b).all() and (a < b).any())


def eps_dominates(a: np.ndarray, b: np.ndarray, eps: float) -> bool:
    """Multiplicative epsilon-dominance: (1+eps)*a_i <= b_i for every i.

    Defined only on strictly positive vectors; this is the textbook predicate,
    not the acceptance rule the archive runs on (the grid form is).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch {a.shape} vs {b.shape}")
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if (a <= 0).any() or (b <= 0).any():
        raise ValueError("epsilon-dominance requires strictly positive components")
    return bool(((1.0 + eps) * a <= b).all())


def pareto_mask(g_rows: np.ndarray, chunk: int = 256) -> np.ndarray:
    """Boolean mask of rows not Pareto-dominated by any other row."""
    g = np.asarray(g_rows, dtype=float)
    m = g.shape[0]
    keep = np.ones(m, dtype=bool)
    for start in range(0, m, chunk):
        block = g[start:start + chunk]
        le = (g[None, :, :] <= block[:, None, :]).all(axis=2)
        lt = (g[None, :, :] < block[:, None, :]).any(axis=2)
        keep[start:start + chunk] &= ~(le & lt).any(axis=1)
    return keep


@dataclass(frozen=True)
class Grid:
    """Observed objective ranges and the box widths they induce."""

    f_min: np.ndarray
    f_max: np.ndarray
    n_box: int

    def __post_init__(self) -> None:
        lo = np.asarray(self.f_min, dtype=float)
        hi = np.asarray(self.f_max, dtype=float)
        object.__setattr__(self, "f_min", lo)
        object.__setattr__(self, "f_max", hi)
        if self.n_box < 1:
            raise ValueError(f"n_box must be >= 1, got {self.n_box}")
        if lo.shape != (3,) or hi.shape != (3,):
            raise ValueError("grid bounds must be length-3 vectors")
        if not (np.isfinite(lo).all() and np.isfinite(hi).all()):
            raise ValueError("grid bounds must be finite")
        if (lo > hi).any():
            raise ValueError("f_min must not exceed f_max")

    @property
    def eps(self) -> np.ndarray:
        # Floor keeps degenerate or dust-width axes from scattering entries
        # across noise-resolution boxes; one box per axis is the intent there.
        return np.maximum((self.f_max - self.f_min) / self.n_box, EPS_FLOOR)


def box_index(g: np.ndarray, grid: Grid) -> BoxKey:
    """Box of a minimized vector: floor((g - f_min)/eps), clamped per axis."""
    g = np.asarray(g, dtype=float)
    idx = np.floor((g - grid.f_min) / grid.eps).astype(np.int64)
    idx = np.clip(idx, 0, grid.n_box - 1)
    return (int(idx[0]), int(idx[1]), int(idx[2]))


def boxes_for_rows(g_rows: np.ndarray, grid: Grid) -> np.ndarray:
    idx = np.floor((np.asarray(g_rows, dtype=float) - grid.f_min) / grid.eps)
    return np.clip(idx, 0, grid.n_box - 1).astype(np.int64)


@dataclass(frozen=True, eq=False)
class ArchiveEntry:
    """A stored portfolio with its objective image and box address."""

    weights: np.ndarray
    objectives: ObjectiveVector
    minimized: np.ndarray
    box: BoxKey


def make_entry(weights: np.ndarray, objectives: ObjectiveVector, grid: Grid) -> ArchiveEntry:
    g = to_minimized(objectives)
    return ArchiveEntry(
        weights=np.asarray(weights, dtype=float).copy(),
        objectives=objectives,
        minimized=g,
        box=box_index(g, grid),
    )


class EpsArchive:
    """Single-writer archive; readers should work on snapshots between inserts."""

    def __init__(self, grid: Grid):
        self._set_grid(grid)
        self._cap = 0
        self._g: np.ndarray | None = None        # (cap, 3) minimized
        self._obj: np.ndarray | None = None      # (cap, 3) risk, ret, carbon
        self._w: np.ndarray | None = None        # (cap, n_assets)
        self._boxes: np.ndarray | None = None    # (cap, 3) int64
        self._alive: np.ndarray | None = None    # (cap,) bool
        self._free: list[int] = []
        self._high = 0                            # slots ever allocated
        self._slot_of_box: dict[BoxKey, int] = {}
        self._anchor_slots: list[int] = [-1, -1, -1]
        self._version = 0
        self._alive_idx: np.ndarray | None = None
        self._anchors_dirty = False
        self._col_min: np.ndarray | None = None   # C[b1, b2] = min stored b0
        self._prefix_min: np.ndarray | None = None
        self._tables_fresh = False

    def _set_grid(self, grid: Grid) -> None:
        self.grid = grid
        self._eps = grid.eps
        self._grid_epoch = getattr(self, "_grid_epoch", 0) + 1
        # plain-float copies keep the per-candidate hot path off numpy scalars
        self._lo = (float(grid.f_min[0]), float(grid.f_min[1]), float(grid.f_min[2]))
        self._hi = (float(grid.f_max[0]), float(grid.f_max[1]), float(grid.f_max[2]))
        self._ep = (float(self._eps[0]), float(self._eps[1]), float(self._eps[2]))

    # -- construction --------------------------------------------------------

    @classmethod
    def with_grid(cls, f_min, f_max, n_box: int) -> "EpsArchive":
        return cls(Grid(np.asarray(f_min, dtype=float), np.asarray(f_max, dtype=float), n_box))

    @classmethod
    def from_population(cls, weights: np.ndarray, obj_rows: np.ndarray, n_box: int) -> "EpsArchive":
        """Seed from an evaluated population by offering every member in row
        order: the box rules keep exactly the epsilon-non-dominated subset,
        and the grid grows to span the non-dominated range as it goes."""
        obj_rows = np.asarray(obj_rows, dtype=float)
        if obj_rows.shape[0] == 0:
            raise ValueError("cannot seed an archive from an empty population")
        g0 = minimize_rows(obj_rows[:1])[0]
        arch = cls(Grid(g0.copy(), g0.copy(), n_box))
        for i, (risk, ret, carbon) in enumerate(obj_rows.tolist()):
            arch.offer(weights[i], risk, ret, carbon)
        return arch

    @classmethod
    def restore(cls, grid: Grid, records) -> "EpsArchive":
        """Rebuild from (weights, objectives, minimized, box) tuples without
        re-running acceptance; boxes must be unique and match the grid."""
        arch = cls(grid)
        for weights, obj, g, box in records:
            if box in arch._slot_of_box:
                raise ValueError(f"duplicate box {box}")
            arch._store(np.asarray(weights, dtype=float), obj, np.asarray(g, dtype=float), box)
        arch._recompute_anchors()
        return arch

    # -- storage plumbing ----------------------------------------------------

    def _ensure_alloc(self, n_assets: int) -> None:
        if self._cap == 0:
            self._cap = 1024
            self._g = np.empty((self._cap, 3))
            self._obj = np.empty((self._cap, 3))
            self._w = np.empty((self._cap, n_assets))
            self._boxes = np.empty((self._cap, 3), dtype=np.int64)
            self._alive = np.zeros(self._cap, dtype=bool)

    def _grow(self) -> None:
        new_cap = self._cap * 2
        for name in ("_g", "_obj", "_w", "_boxes"):
            old = getattr(self, name)
            grown = np.empty((new_cap,) + old.shape[1:], dtype=old.dtype)
            grown[:self._cap] = old
            setattr(self, name, grown)
        alive = np.zeros(new_cap, dtype=bool)
        alive[:self._cap] = self._alive
        self._alive = alive
        self._cap = new_cap

    def _alive_indices(self) -> np.ndarray:
        if self._alive_idx is None:
            if self._alive is None:
                self._alive_idx = np.empty(0, dtype=np.int64)
            else:
                self._alive_idx = np.flatnonzero(self._alive[:self._high])
        return self._alive_idx

    def _mutated(self) -> None:
        self._version += 1
        self._alive_idx = None

    # -- dominance tables ----------------------------------------------------

    def _use_tables(self) -> bool:
        return self.grid.n_box <= TABLE_LIMIT

    def _rebuild_tables(self) -> None:
        n = self.grid.n_box
        if self._col_min is None or self._col_min.shape[0] != n:
            self._col_min = np.full((n, n), np.inf)
            self._prefix_min = np.empty((n, n))
        else:
            self._col_min.fill(np.inf)
        idx = self._alive_indices()
        if len(idx):
            b = self._boxes[idx]
            flat = b[:, 1] * n + b[:, 2]
            order = np.argsort(flat, kind="stable")
            flat_sorted = flat[order]
            b0_sorted = b[order, 0].astype(float)
            starts = np.flatnonzero(np.r_[True, flat_sorted[1:] != flat_sorted[:-1]])
            mins = np.minimum.reduceat(b0_sorted, starts)
            self._col_min.ravel()[flat_sorted[starts]] = mins
        np.minimum.accumulate(self._col_min, axis=0, out=self._prefix_min)
        np.minimum.accumulate(self._prefix_min, axis=1, out=self._prefix_min)
        self._tables_fresh = True

    def _tables_insert(self, box: BoxKey) -> None:
        if not self._tables_fresh:
            return
        b0, b1, b2 = box
        if b0 < self._col_min[b1, b2]:
            self._col_min[b1, b2] = b0
            np.minimum(self._prefix_min[b1:, b2:], b0, out=self._prefix_min[b1:, b2:])

    def _dominated_by_stored_box(self, box: BoxKey) -> bool:
        """Exact: is ``box`` Pareto-dominated by any stored entry's box?

        Table form: a dominator either sits strictly inside the (b1, b2)
        prefix rectangle with b0 <= ours, or shares our (b1, b2) column with a
        strictly smaller b0. Evicted boxes may linger in the tables; their
        evictor dominates everything they dominated, so verdicts stay exact.
        """
        if not self._slot_of_box:
            return False
        b0, b1, b2 = box
        if self._use_tables():
            if not self._tables_fresh:
                self._rebuild_tables()
            left = self._prefix_min[b1 - 1, b2] if b1 > 0 else np.inf
            up = self._prefix_min[b1, b2 - 1] if b2 > 0 else np.inf
            if min(left, up) <= b0:
                return True
            return self._col_min[b1, b2] < b0
        idx = self._alive_indices()
        boxes = self._boxes[idx]
        cb = np.asarray(box, dtype=np.int64)
        return bool(((boxes <= cb).all(axis=1) & (boxes < cb).any(axis=1)).any())

    # -- read access ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self._slot_of_box)

    def __iter__(self):
        return iter(self.entries_sorted())

    @property
    def version(self) -> int:
        """Bumped on every mutation; lets callers cache derived arrays."""
        return self._version

    def _entry_at(self, slot: int) -> ArchiveEntry:
        return ArchiveEntry(
            weights=self._w[slot].copy(),
            objectives=ObjectiveVector(risk=float(self._obj[slot, 0]),
                                       ret=float(self._obj[slot, 1]),
                                       carbon=float(self._obj[slot, 2])),
            minimized=self._g[slot].copy(),
            box=(int(self._boxes[slot, 0]), int(self._boxes[slot, 1]),
                 int(self._boxes[slot, 2])),
        )

    @property
    def anchors(self) -> list[ArchiveEntry]:
        """Entries attaining the minimum of each minimized axis."""
        out, seen = [], set()
        for slot in self._anchor_slots:
            if slot >= 0 and slot not in seen:
                seen.add(slot)
                out.append(self._entry_at(slot))
        return out

    def anchor_for_axis(self, axis: int) -> ArchiveEntry | None:
        slot = self._anchor_slots[axis]
        return self._entry_at(slot) if slot >= 0 else None

    def _sorted_slots(self) -> np.ndarray:
        idx = self._alive_indices()
        if not len(idx):
            return idx
        b = self._boxes[idx]
        return idx[np.lexsort((b[:, 2], b[:, 1], b[:, 0]))]

    def entries_sorted(self) -> list[ArchiveEntry]:
        return [self._entry_at(s) for s in self._sorted_slots()]

    def minimized_rows(self) -> np.ndarray:
        """Minimized vectors in canonical (sorted-box) order."""
        return self._g[self._sorted_slots()].copy().reshape(len(self), 3)

    def objective_rows(self) -> np.ndarray:
        """(risk, ret, carbon) rows in canonical (sorted-box) order."""
        return self._obj[self._sorted_slots()].copy().reshape(len(self), 3)

    def sample_weights(self, picks: np.ndarray) -> np.ndarray:
        """Weight rows for uniform parent draws (indices into the live set)."""
        return self._w[self._alive_indices()[picks]]

    def in_grid(self, g: np.ndarray) -> bool:
        return bool((g >= self.grid.f_min).all() and (g <= self.grid.f_max).all())

    def batch_box_dominated(self, cand_boxes: np.ndarray) -> np.ndarray:
        """For each candidate box row: is it Pareto-dominated by a stored box?"""
        cb = np.asarray(cand_boxes, dtype=np.int64)
        if not self._slot_of_box:
            return np.zeros(len(cb), dtype=bool)
        boxes = self._boxes[self._alive_indices()]
        le = (boxes[None, :, :] <= cb[:, None, :]).all(axis=2)
        lt = (boxes[None, :, :] < cb[:, None, :]).any(axis=2)
        return (le & lt).any(axis=1)

    # -- anchor bookkeeping ----------------------------------------------------

    def _anchored_axes(self, slot: int) -> list[int]:
        return [i for i in range(3) if self._anchor_slots[i] == slot]

    def _blocked(self, slot: int, g0: float, g1: float, g2: float) -> bool:
        """True when displacing ``slot`` would raise an anchored axis minimum."""
        g = (g0, g1, g2)
        row = self._g[slot]
        return any(g[i] > row[i] for i in self._anchored_axes(slot))

    def _recompute_anchors(self) -> None:
        self._anchors_dirty = False
        idx = self._alive_indices()
        if not len(idx):
            self._anchor_slots = [-1, -1, -1]
            return
        g = self._g[idx]
        for axis in range(3):
            col = g[:, axis]
            tied = np.flatnonzero(col == col.min())
            if len(tied) > 1:
                sub = g[tied]
                tied = tied[np.lexsort((sub[:, 2], sub[:, 1], sub[:, 0]))[:1]]
            self._anchor_slots[axis] = int(idx[tied[0]])

    def _anchors_absorb(self, slot: int, g0: float, g1: float, g2: float) -> None:
        """Incremental anchor update after storing ``slot`` (min or lex tie)."""
        g = (g0, g1, g2)
        for axis in range(3):
            cur = self._anchor_slots[axis]
            if cur < 0:
                self._anchor_slots[axis] = slot
                continue
            row = self._g[cur]
            if g[axis] < row[axis] or (g[axis] == row[axis] and g < tuple(row)):
                self._anchor_slots[axis] = slot

    # -- writes ----------------------------------------------------------------

    def _store(self, weights: np.ndarray, obj: tuple[float, float, float],
               g: np.ndarray, box: BoxKey) -> int:
        self._ensure_alloc(len(weights))
        if self._free:
            slot = self._free.pop()
        else:
            if self._high == self._cap:
                self._grow()
            slot = self._high
            self._high += 1
        self._g[slot] = g
        self._obj[slot] = obj
        self._w[slot] = weights
        self._boxes[slot] = box
        self._alive[slot] = True
        self._slot_of_box[box] = slot
        if self._use_tables():
            self._tables_insert(box)
        self._mutated()
        return slot

    def _evict_slot(self, slot: int) -> None:
        box = (int(self._boxes[slot, 0]), int(self._boxes[slot, 1]), int(self._boxes[slot, 2]))
        del self._slot_of_box[box]
        self._alive[slot] = False
        self._free.append(slot)
        if slot in self._anchor_slots:
            self._anchors_dirty = True
        self._mutated()

    def offer(self, weights: np.ndarray, risk: float, ret: float, carbon: float) -> bool:
        """Archive-update rule for one evaluated candidate.

        Outside the grid: reject if Pareto-dominated by a stored entry (raw
        vectors), otherwise extend the grid first. Inside: apply the box
        acceptance rules of :meth:`try_insert`.
        """
        g0 = float(risk)
        g1 = -float(ret)
        g2 = float(carbon)
        lo, hi = self._lo, self._hi
        if not (lo[0] <= g0 <= hi[0] and lo[1] <= g1 <= hi[1] and lo[2] <= g2 <= hi[2]):
            idx = self._alive_indices()
            if len(idx):
                stored = self._g[idx]
                cand = np.array([g0, g1, g2])
                if bool(((stored <= cand).all(axis=1) & (stored < cand).any(axis=1)).any()):
                    return False
            self.extend_grid(np.array([g0, g1, g2]))
        return self._accept(weights, g0, g1, g2)

    def _accept(self, weights, g0: float, g1: float, g2: float) -> bool:
        lo = self._lo
        e0, e1, e2 = self._ep
        top = self.grid.n_box - 1
        # int() truncates toward zero, but together with the clamp to
        # [0, top] it agrees with floor-then-clamp on both sides
        b0 = int((g0 - lo[0]) / e0)
        b1 = int((g1 - lo[1]) / e1)
        b2 = int((g2 - lo[2]) / e2)
        box = (min(max(b0, 0), top), min(max(b1, 0), top), min(max(b2, 0), top))
        b0, b1, b2 = box

        if self._dominated_by_stored_box(box):
            return False

        incumbent = self._slot_of_box.get(box)
        if incumbent is not None:
            if self._blocked(incumbent, g0, g1, g2):
                return False
            c0 = lo[0] + (b0 + 0.5) * e0
            c1 = lo[1] + (b1 + 0.5) * e1
            c2 = lo[2] + (b2 + 0.5) * e2
            d_new = (((g0 - c0) / e0) ** 2 + ((g1 - c1) / e1) ** 2 + ((g2 - c2) / e2) ** 2)
            row = self._g[incumbent]
            d_inc = (((row[0] - c0) / e0) ** 2 + ((row[1] - c1) / e1) ** 2
                     + ((row[2] - c2) / e2) ** 2)
            if d_new >= d_inc:
                return False
            self._evict_slot(incumbent)
        # evict stored entries whose box the candidate dominates, except
        # anchors the candidate does not match on their anchored axes (the
        # incumbent's box is already vacated, so >= alone means dominated)
        idx = self._alive_indices()
        if len(idx):
            boxes = self._boxes[idx]
            cb = np.asarray(box, dtype=np.int64)
            mask = (boxes >= cb).all(axis=1)
            if mask.any():
                for slot in idx[mask]:
                    if not self._blocked(int(slot), g0, g1, g2):
                        self._evict_slot(int(slot))
        slot = self._store(np.asarray(weights, dtype=float), (g0, -g1, g2),
                           np.array([g0, g1, g2]), box)
        if self._anchors_dirty:
            self._recompute_anchors()
        else:
            self._anchors_absorb(slot, g0, g1, g2)
        return True

    def try_insert(self, entry: ArchiveEntry) -> bool:
        """Offer an entry whose minimized vector lies inside the grid.

        Returns True when the entry was stored (possibly replacing or evicting
        others). Rejection reasons: a stored box Pareto-dominates the
        candidate's box; the same-box incumbent is at least as close to the
        box center (ties keep the incumbent); or the displacement would lose a
        protected anchor.
        """
        g = entry.minimized
        return self._accept(entry.weights, float(g[0]), float(g[1]), float(g[2]))

    def consider(self, weights: np.ndarray, objectives: ObjectiveVector) -> bool:
        return self.offer(weights, objectives.risk, objectives.ret, objectives.carbon)

    def offer_batch(self, weights_rows: np.ndarray, obj_rows: np.ndarray) -> int:
        """Offer evaluated candidates in row order; returns how many were stored.

        Semantically identical to calling :meth:`offer` per row. Rows whose box
        is Pareto-dominated are skipped via one vectorized table lookup: a
        "dominated" verdict can only become more true as later rows are
        accepted (an evictor dominates everything its evictee dominated), and
        inserts update the tables immediately, so the pre-filter never skips a
        row the serial rule would have kept. Grid extensions re-key every box
        and force the remaining rows to be re-classified.
        """
        obj_rows = np.asarray(obj_rows, dtype=float)
        obj_list = obj_rows.tolist()
        g_rows = minimize_rows(obj_rows)
        k = len(obj_list)
        accepted = 0
        pos = 0
        while pos < k:
            epoch = self._grid_epoch
            skip = None
            if self._use_tables() and self._slot_of_box:
                if not self._tables_fresh:
                    self._rebuild_tables()
                tail = g_rows[pos:]
                in_grid = ((tail >= self.grid.f_min).all(axis=1)
                           & (tail <= self.grid.f_max).all(axis=1))
                b = boxes_for_rows(tail, self.grid)
                b0, b1, b2 = b[:, 0], b[:, 1], b[:, 2]
                left = np.where(b1 > 0, self._prefix_min[np.maximum(b1 - 1, 0), b2], np.inf)
                up = np.where(b2 > 0, self._prefix_min[b1, np.maximum(b2 - 1, 0)], np.inf)
                dominated = (np.minimum(left, up) <= b0) | (self._col_min[b1, b2] < b0)
                skip = in_grid & dominated
            advanced = False
            for i in range(pos, k):
                if skip is not None and skip[i - pos]:
                    continue
                risk, ret, carbon = obj_list[i]
                if self.offer(weights_rows[i], risk, ret, carbon):
                    accepted += 1
                if self._grid_epoch != epoch:
                    pos = i + 1
                    advanced = True
                    break
            if not advanced:
                break
        return accepted

    def extend_grid(self, g: np.ndarray) -> bool:
        """Grow the grid outward to cover ``g`` and re-bucket every entry.

        No-op (returns False) when ``g`` is already inside. When re-bucketing
        collides entries into one box, anchors survive first, then the entry
        closest to the new box center, then minimized-vector order.
        """
        g = np.asarray(g, dtype=float)
        if self.in_grid(g):
            return False
        self._set_grid(Grid(np.minimum(self.grid.f_min, g), np.maximum(self.grid.f_max, g),
                            self.grid.n_box))
        self._tables_fresh = False
        idx = self._alive_indices()
        if len(idx):
            new_boxes = boxes_for_rows(self._g[idx], self.grid)
            anchor_slots = set(s for s in self._anchor_slots if s >= 0)
            groups: dict[BoxKey, list[int]] = {}
            for slot, row in zip(idx, new_boxes):
                groups.setdefault((int(row[0]), int(row[1]), int(row[2])), []).append(int(slot))
            self._slot_of_box = {}
            for box, slots in groups.items():
                if len(slots) > 1:
                    winner = min(slots, key=lambda s: (s not in anchor_slots,
                                                       self._center_dist_sq(s, box),
                                                       tuple(self._g[s])))
                else:
                    winner = slots[0]
                for s in slots:
                    if s != winner:
                        self._alive[s] = False
                        self._free.append(s)
                self._boxes[winner] = box
                self._slot_of_box[box] = winner
        self._mutated()
        self._recompute_anchors()
        return True

    def _center_dist_sq(self, slot: int, box: BoxKey) -> float:
        eps = self._eps
        f_min = self.grid.f_min
        row = self._g[slot]
        total = 0.0
        for i in range(3):
            delta = (row[i] - (f_min[i] + (box[i] + 0.5) * eps[i])) / eps[i]
            total += delta * delta
        return total
