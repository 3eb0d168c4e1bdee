import numpy as np
import pytest

from trifront.archive import EpsArchive, make_entry
from trifront.market_data import AssetUniverse, ReturnsMatrix, estimate_moments
from trifront.portfolio import ObjectiveVector


def synthetic_universe(n_assets: int, seed: int, periods: int = 120,
                       factors: int = 3) -> AssetUniverse:
    """Factor-structured returns so the covariance has realistic correlation."""
    rng = np.random.default_rng(seed)
    base = rng.normal(1.0, 2.5, size=(periods, factors))
    load = rng.uniform(-1.0, 1.0, size=(factors, n_assets))
    obs = base @ load + rng.normal(1.0, 1.5, size=(periods, n_assets))
    returns = ReturnsMatrix([f"F{i + 1}" for i in range(n_assets)], obs)
    carbon = rng.uniform(0.5, 9.5, n_assets)
    return estimate_moments(returns, carbon)


@pytest.fixture
def universe3() -> AssetUniverse:
    return synthetic_universe(3, seed=7)


@pytest.fixture
def universe22() -> AssetUniverse:
    return synthetic_universe(22, seed=11)


def entry_at(arch_or_grid, risk: float, ret: float, carbon: float, weights=None):
    """Build an ArchiveEntry for a grid (weights default to a 1-asset vector)."""
    grid = getattr(arch_or_grid, "grid", arch_or_grid)
    w = np.array([1.0]) if weights is None else np.asarray(weights, dtype=float)
    return make_entry(w, ObjectiveVector(risk=risk, ret=ret, carbon=carbon), grid)


def archive_from_points(points, n_box: int = 16) -> EpsArchive:
    """Archive built by offering (risk, ret, carbon) rows in order."""
    points = np.asarray(points, dtype=float)
    arch = EpsArchive.from_population(
        np.ones((len(points), 1)), points, n_box)
    return arch


def pairwise_nondominated(g_rows: np.ndarray) -> bool:
    g = np.asarray(g_rows, dtype=float)
    if len(g) < 2:
        return True
    le = (g[None, :, :] <= g[:, None, :]).all(axis=2)
    lt = (g[None, :, :] < g[:, None, :]).any(axis=2)
    dom = le & lt
    np.fill_diagonal(dom, False)
    return not dom.any()


def check_archive_invariants(arch: EpsArchive) -> None:
    """One entry per box, pairwise non-domination, anchors = coordinate minima."""
    entries = arch.entries_sorted()
    boxes = [e.box for e in entries]
    assert len(set(boxes)) == len(boxes), "duplicate box"
    g = arch.minimized_rows()
    assert pairwise_nondominated(g), "stored entries dominate each other"
    assert len(entries) <= arch.grid.n_box ** 2, "archive exceeds box antichain bound"
    if entries:
        for axis in range(3):
            anchor = arch.anchor_for_axis(axis)
            assert anchor is not None
            assert anchor.minimized[axis] == g[:, axis].min()
            assert any(e.box == anchor.box for e in entries), "anchor not stored"
