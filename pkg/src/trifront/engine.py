"""Evolutionary search loop over the bounded simplex.

One run keeps three populations: the main population explores, an auxiliary
offspring population is bred each iteration from one main-population parent
and one archive parent, and the box archive accumulates the non-dominated
front. Offspring are produced by extended linear recombination or Gaussian
mutation; note the switch semantics: a uniform draw u > p_cm selects
crossover, u <= p_cm selects mutation, so p_cm is effectively the mutation
rate despite the name.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .archive import EpsArchive, minimize_rows
from .market_data import AssetUniverse
from .metrics import hypervolume_3d
from .portfolio import Bounds, Portfolio, ObjectiveVector, evaluate_batch, random_batch, repair, repair_batch


class EngineError(RuntimeError):
    """Raised when a run cannot proceed (bad config, corrupt objectives)."""


@dataclass(frozen=True)
class EvMogaConfig:
    """Run parameters; defaults are sized for a full production run."""

    nind_p: int = 10_000
    nind_ga: int = 500
    k_max: int = 100_000
    p_cm: float = 0.2
    n_box: int = 300
    seed: int = 0
    recomb_extension: float = 0.25
    mutation_scale: float = 0.1
    checkpoint_every: int = 0

    def __post_init__(self) -> None:
        if self.nind_p < 1:
            raise EngineError(f"nind_p must be >= 1, got {self.nind_p}")
        if self.nind_ga < 2 or self.nind_ga % 2 != 0:
            raise EngineError(f"nind_ga must be a positive even number, got {self.nind_ga}")
        if self.k_max < 0:
            raise EngineError(f"k_max must be >= 0, got {self.k_max}")
        if not 0.0 <= self.p_cm <= 1.0:
            raise EngineError(f"p_cm must lie in [0, 1], got {self.p_cm}")
        if self.n_box < 1:
            raise EngineError(f"n_box must be >= 1, got {self.n_box}")
        if self.recomb_extension < 0:
            raise EngineError(f"recomb_extension must be >= 0, got {self.recomb_extension}")
        if self.mutation_scale <= 0:
            raise EngineError(f"mutation_scale must be > 0, got {self.mutation_scale}")
        if self.checkpoint_every < 0:
            raise EngineError(f"checkpoint_every must be >= 0, got {self.checkpoint_every}")

    def to_dict(self) -> dict:
        return {
            "nind_p": self.nind_p,
            "nind_ga": self.nind_ga,
            "k_max": self.k_max,
            "p_cm": self.p_cm,
            "n_box": self.n_box,
            "seed": self.seed,
            "recomb_extension": self.recomb_extension,
            "mutation_scale": self.mutation_scale,
            "checkpoint_every": self.checkpoint_every,
        }

    @classmethod
    def from_mapping(cls, mapping: dict) -> "EvMogaConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(mapping) - known
        if unknown:
            raise EngineError(f"unknown config keys: {sorted(unknown)}")
        ints = {"nind_p", "nind_ga", "k_max", "n_box", "seed", "checkpoint_every"}
        kwargs = {}
        for key, value in mapping.items():
            kwargs[key] = int(value) if key in ints else float(value)
        return cls(**kwargs)


@dataclass(frozen=True)
class Checkpoint:
    """Archive summary captured during a run."""

    iteration: int
    evaluations: int
    archive_size: int
    anchors: list[ObjectiveVector]
    f_min: np.ndarray
    f_max: np.ndarray
    eps: np.ndarray
    hypervolume: float
    minimized_rows: np.ndarray  # snapshot, canonical (sorted-box) order
    elapsed_s: float

    def summary(self) -> dict:
        return {
            "iteration": self.iteration,
            "evaluations": self.evaluations,
            "archive_size": self.archive_size,
            "anchors": [[a.risk, a.ret, a.carbon] for a in self.anchors],
            "f_min": self.f_min.tolist(),
            "f_max": self.f_max.tolist(),
            "eps": self.eps.tolist(),
            "hypervolume": self.hypervolume,
            "elapsed_s": self.elapsed_s,
        }


@dataclass
class RunResult:
    archive: EpsArchive
    iterations_done: int
    evaluations: int
    checkpoints: list[Checkpoint]
    wall_time_s: float
    config: EvMogaConfig
    bounds: Bounds


# The archive is passed for snapshot handoff; it is stable for the duration
# of the callback and must not be mutated or retained by the sink.
ProgressSink = Callable[[Checkpoint, EpsArchive], None]


def crossover(x1: Portfolio, x2: Portfolio, d: float, bounds: Bounds,
              rng: np.random.Generator) -> tuple[Portfolio, Portfolio]:
    """Extended linear recombination: each child x1 + a*(x2 - x1) with its own
    a ~ U[-d, 1+d], projected back onto the bounded simplex. Computed in the
    barycentric form (1-a)*x1 + a*x2 so the segment endpoints reproduce the
    parents exactly."""
    alphas = rng.uniform(-d, 1.0 + d, size=2)
    c1 = repair((1.0 - alphas[0]) * x1.weights + alphas[0] * x2.weights, bounds)
    c2 = repair((1.0 - alphas[1]) * x1.weights + alphas[1] * x2.weights, bounds)
    return c1, c2


def mutate(x: Portfolio, scale: float, bounds: Bounds,
           rng: np.random.Generator) -> Portfolio:
    """Gaussian mutation: per-coordinate noise with sigma = scale * box width,
    projected back onto the bounded simplex."""
    sigma = scale * (bounds.upper - bounds.lower)
    noise = rng.normal(0.0, 1.0, size=bounds.n_assets) * sigma
    return repair(x.weights + noise, bounds)


def _checkpoint(arch: EpsArchive, iteration: int, evaluations: int, t0: float) -> Checkpoint:
    rows = arch.minimized_rows()
    return Checkpoint(
        iteration=iteration,
        evaluations=evaluations,
        archive_size=len(arch),
        anchors=[a.objectives for a in arch.anchors],
        f_min=arch.grid.f_min.copy(),
        f_max=arch.grid.f_max.copy(),
        eps=arch.grid.eps.copy(),
        hypervolume=hypervolume_3d(rows, arch.grid.f_max),
        minimized_rows=rows,
        elapsed_s=time.perf_counter() - t0,
    )


def run(universe: AssetUniverse, bounds: Bounds, cfg: EvMogaConfig,
        progress_sink: ProgressSink | None = None) -> RunResult:
    """Execute the full loop and return the final archive plus run metrics.

    Deterministic for a fixed (instance, bounds, config): a single RNG stream
    drives initialization, pairing, operator choice and operator noise, and
    archive updates are applied in offspring order.
    """
    if bounds.n_assets != universe.n_assets:
        raise EngineError(
            f"bounds cover {bounds.n_assets} assets, universe has {universe.n_assets}"
        )
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    n = universe.n_assets

    try:
        pop_w = random_batch(bounds, cfg.nind_p, rng)
        pop_obj = evaluate_batch(pop_w, universe)
    except ValueError as exc:
        raise EngineError(str(exc)) from exc
    pop_g = minimize_rows(pop_obj)
    evaluations = cfg.nind_p

    arch = EpsArchive.from_population(pop_w, pop_obj, cfg.n_box)

    checkpoints: list[Checkpoint] = []

    def record(iteration: int) -> None:
        cp = _checkpoint(arch, iteration, evaluations, t0)
        checkpoints.append(cp)
        if progress_sink is not None:
            progress_sink(cp, arch)

    if cfg.checkpoint_every > 0:
        record(0)

    n_pairs = cfg.nind_ga // 2
    sigma_vec = cfg.mutation_scale * (bounds.upper - bounds.lower)

    for k in range(1, cfg.k_max + 1):
        # -- breed the auxiliary population: one parent from the main
        #    population, one from the archive (archive is never empty after
        #    seeding, but fall back to the main population if it were).
        idx_p = rng.integers(0, cfg.nind_p, size=n_pairs)
        parents_p = pop_w[idx_p]
        if len(arch):
            idx_a = rng.integers(0, len(arch), size=n_pairs)
            parents_a = arch.sample_weights(idx_a)
        else:
            idx_a = rng.integers(0, cfg.nind_p, size=n_pairs)
            parents_a = pop_w[idx_a]

        u = rng.random(n_pairs)
        cross = u > cfg.p_cm
        mut = ~cross
        raw = np.empty((n_pairs, 2, n))
        if cross.any():
            n_cross = int(cross.sum())
            alphas = rng.uniform(-cfg.recomb_extension, 1.0 + cfg.recomb_extension,
                                 size=(n_cross, 2))
            xp, xa = parents_p[cross], parents_a[cross]
            raw[cross, 0] = (1.0 - alphas[:, 0:1]) * xp + alphas[:, 0:1] * xa
            raw[cross, 1] = (1.0 - alphas[:, 1:2]) * xp + alphas[:, 1:2] * xa
        if mut.any():
            n_mut = int(mut.sum())
            noise = rng.normal(0.0, 1.0, size=(n_mut, 2, n)) * sigma_vec
            raw[mut, 0] = parents_p[mut] + noise[:, 0]
            raw[mut, 1] = parents_a[mut] + noise[:, 1]

        offspring = repair_batch(raw.reshape(cfg.nind_ga, n), bounds)
        try:
            off_obj = evaluate_batch(offspring, universe)
        except ValueError as exc:
            raise EngineError(f"iteration {k}: {exc}") from exc
        off_g = minimize_rows(off_obj)
        evaluations += cfg.nind_ga

        # -- archive update, strictly in offspring order
        arch.offer_batch(offspring, off_obj)

        # -- main population update: each offspring challenges one uniformly
        #    drawn slot and wins only by Pareto-dominating the incumbent read
        #    from the pre-update population (duplicate slots: last write wins).
        slots = rng.integers(0, cfg.nind_p, size=cfg.nind_ga)
        incumbent_g = pop_g[slots]
        wins = (off_g <= incumbent_g).all(axis=1) & (off_g < incumbent_g).any(axis=1)
        if wins.any():
            tgt = slots[wins]
            pop_w[tgt] = offspring[wins]
            pop_obj[tgt] = off_obj[wins]
            pop_g[tgt] = off_g[wins]

        if cfg.checkpoint_every > 0 and k % cfg.checkpoint_every == 0:
            record(k)

    if not checkpoints or checkpoints[-1].iteration != cfg.k_max:
        record(cfg.k_max)

    return RunResult(
        archive=arch,
        iterations_done=cfg.k_max,
        evaluations=evaluations,
        checkpoints=checkpoints,
        wall_time_s=time.perf_counter() - t0,
        config=cfg,
        bounds=bounds,
    )


def parse_flat_config(text: str) -> dict[str, str]:
    """Parse a flat ``key = value`` file; '#' starts a comment."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise EngineError(f"config line {lineno}: expected 'key = value', got {line!r}")
        key, value = stripped.split("=", 1)
        key = key.strip()
        if not key or key in out:
            raise EngineError(f"config line {lineno}: bad or duplicate key {key!r}")
        out[key] = value.strip()
    return out
