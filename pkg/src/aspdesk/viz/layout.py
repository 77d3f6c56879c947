"""Deterministic force-directed placement for graph members.

Plain Fruchterman-Reingold on a unit square, seeded start, fixed iteration
budget, coordinates rounded to two decimals.  Equal inputs must give equal
output down to the byte, so no wall-clock or hash-order dependence anywhere.
"""

from __future__ import annotations

import math
import random

SEED = 20240817
ITERATIONS = 200


def spread(keys, edges, *, width: float = 420.0, height: float = 320.0,
           margin: float = 40.0) -> dict:
    """Positions for the given keys (order matters) under index edges.

    Returns {key: (x, y)} inside the margin box; a single vertex lands in
    the centre.
    """
    n = len(keys)
    if n == 0:
        return {}
    cx, cy = width / 2.0, height / 2.0
    if n == 1:
        return {keys[0]: (round(cx, 2), round(cy, 2))}

    rng = random.Random(SEED)
    xs = [rng.random() for _ in range(n)]
    ys = [rng.random() for _ in range(n)]
    k = math.sqrt(1.0 / n)
    temperature = 0.1
    cooling = temperature / (ITERATIONS + 1)

    for _ in range(ITERATIONS):
        dx = [0.0] * n
        dy = [0.0] * n
        for i in range(n):
            for j in range(i + 1, n):
                ddx = xs[i] - xs[j]
                ddy = ys[i] - ys[j]
                dist = math.hypot(ddx, ddy)
                if dist < 1e-9:
                    # overlapping points repel along a fixed direction
                    ddx, ddy, dist = 1e-6, 0.0, 1e-6
                force = k * k / dist
                dx[i] += ddx / dist * force
                dy[i] += ddy / dist * force
                dx[j] -= ddx / dist * force
                dy[j] -= ddy / dist * force
        for i, j in edges:
            ddx = xs[i] - xs[j]
            ddy = ys[i] - ys[j]
            dist = math.hypot(ddx, ddy)
            if dist < 1e-9:
                continue
            force = dist * dist / k
            dx[i] -= ddx / dist * force
            dy[i] -= ddy / dist * force
            dx[j] += ddx / dist * force
            dy[j] += ddy / dist * force
        for i in range(n):
            length = math.hypot(dx[i], dy[i])
            if length < 1e-9:
                continue
            step = min(length, temperature)
            xs[i] = min(1.0, max(0.0, xs[i] + dx[i] / length * step))
            ys[i] = min(1.0, max(0.0, ys[i] + dy[i] / length * step))
        temperature -= cooling

    # normalise the used extent into the margin box
    min_x, max_x = min(xs), max(xs)
    min_y, max_y = min(ys), max(ys)
    span_x = max_x - min_x
    span_y = max_y - min_y
    box_w = width - 2 * margin
    box_h = height - 2 * margin
    out = {}
    for index, key in enumerate(keys):
        if span_x < 1e-9:
            x = cx
        else:
            x = margin + (xs[index] - min_x) / span_x * box_w
        if span_y < 1e-9:
            y = cy
        else:
            y = margin + (ys[index] - min_y) / span_y * box_h
        out[key] = (round(x, 2), round(y, 2))
    return out
