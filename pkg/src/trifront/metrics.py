"""Front quality metrics: exact hypervolume for minimized objective rows."""

from __future__ import annotations

from bisect import bisect_left, bisect_right

import numpy as np


def hypervolume_3d(g_rows: np.ndarray, ref: np.ndarray) -> float:
    """Volume dominated by minimized 3-D points within the box below ``ref``.

    Points not strictly below the reference on every axis contribute nothing.
    Sweep along the third axis, maintaining the 2-D staircase of the first two
    coordinates and its dominated area incrementally; near O(n log n), exact.
    """
    g = np.asarray(g_rows, dtype=float).reshape(-1, 3)
    ref = np.asarray(ref, dtype=float).reshape(3)
    g = g[(g < ref).all(axis=1)]
    if len(g) == 0:
        return 0.0
    rx, ry, rz = ref
    order = np.lexsort((g[:, 0], g[:, 2]))  # z ascending, x as tiebreak
    xs: list[float] = []  # staircase x, strictly ascending
    ys: list[float] = []  # staircase y, strictly descending
    area = 0.0
    volume = 0.0
    z_prev = g[order[0], 2]
    for x, y, z in g[order]:
        if z > z_prev:
            volume += area * (z - z_prev)
            z_prev = z
        j = bisect_right(xs, x) - 1
        if j >= 0 and ys[j] <= y:
            continue  # dominated in 2-D, area unchanged
        i0 = bisect_left(xs, x)
        r = i0
        while r < len(xs) and ys[r] >= y:
            r += 1
        # area gained: the old envelope over [x, X_r) drops to y
        top = ys[i0 - 1] if i0 > 0 else ry
        right = xs[i0] if i0 < len(xs) else rx
        gain = (right - x) * (top - y)
        for k in range(i0, r):
            right = xs[k + 1] if k + 1 < len(xs) else rx
            gain += (right - xs[k]) * (ys[k] - y)
        area += gain
        del xs[i0:r]
        del ys[i0:r]
        xs.insert(i0, x)
        ys.insert(i0, y)
    volume += area * (rz - z_prev)
    return float(volume)
