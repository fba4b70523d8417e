"""Numpy implementation of the chain integration step.

Kept in lockstep with the compiled version in ``_native.pyx``: same update
order, same branch structure. The two are compared in tests and in
``benchmarks/bench_kernels.py``.
"""

from __future__ import annotations

import numpy as np


def step_chain(positions, velocities, acc, anchors, anchor_rest, seg_rest,
               occ, cell_area, k_p, k_a, b, m, dt, a1, a2, a3, n_exp, r_max,
               r_floor):
    """Advance the chain one semi-implicit Euler step, in place.

    Forces are evaluated on the pre-step state for every point before any
    update; endpoints stay fixed. Interior accelerations are written to
    ``acc`` (shape (n-2, 2)). Returns the largest interior acceleration
    magnitude, or -1.0 if any acceleration came out non-finite (state is
    then left unchanged).
    """
    n = positions.shape[0]
    if n < 3:
        return 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        return _step(positions, velocities, acc, anchors, anchor_rest, seg_rest,
                     occ, cell_area, k_p, k_a, b, m, dt, a1, a2, a3, n_exp,
                     r_max, r_floor)


def _step(positions, velocities, acc, anchors, anchor_rest, seg_rest, occ,
          cell_area, k_p, k_a, b, m, dt, a1, a2, a3, n_exp, r_max, r_floor):
    # overflow to inf/nan is caught by the finiteness check at the end
    interior = positions[1:-1]

    # sqrt(x*x + y*y) rather than hypot: bit-compatible with the compiled loop
    d = positions[1:] - positions[:-1]
    ln = np.sqrt(d[:, 0] * d[:, 0] + d[:, 1] * d[:, 1])
    safe = np.where(ln > 0.0, ln, 1.0)
    pull = (k_p * (ln - seg_rest) / safe)[:, None] * d
    pull[ln == 0.0] = 0.0
    f = pull[1:] - pull[:-1]

    da = anchors - interior
    la = np.sqrt(da[:, 0] * da[:, 0] + da[:, 1] * da[:, 1])
    sa = np.where(la > 0.0, la, 1.0)
    fa = (k_a * (la - anchor_rest) / sa)[:, None] * da
    fa[la == 0.0] = 0.0
    f += fa

    if occ.shape[0]:
        diff = interior[:, None, :] - occ[None, :, :]
        dist = np.sqrt(diff[..., 0] * diff[..., 0] + diff[..., 1] * diff[..., 1])
        rc = np.maximum(dist, r_floor)
        if n_exp == 2.0:
            mag = a2 / (rc * rc)
        else:
            mag = a2 * rc**-n_exp
        tail = rc > a1
        mag[tail] *= np.exp(-(rc[tail] - a1) / a3)
        mag[dist > r_max] = 0.0
        mag *= cell_area
        safe_d = np.where(dist > 0.0, dist, 1.0)
        fx = np.where(dist > 0.0, diff[..., 0] / safe_d, 1.0)
        fy = np.where(dist > 0.0, diff[..., 1] / safe_d, 0.0)
        f[:, 0] += np.sum(mag * fx, axis=1)
        f[:, 1] += np.sum(mag * fy, axis=1)

    acc[...] = (f - b * velocities[1:-1]) / m
    if not np.all(np.isfinite(acc)):
        return -1.0
    amax = float(np.max(np.sqrt(acc[:, 0] * acc[:, 0] + acc[:, 1] * acc[:, 1])))

    velocities[1:-1] += dt * acc
    positions[1:-1] += dt * velocities[1:-1]
    return amax
