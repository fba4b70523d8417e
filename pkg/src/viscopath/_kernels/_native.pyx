# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled chain integration step; mirrors ``pure.step_chain``."""

from libc.math cimport exp, isfinite, pow, sqrt


def step_chain(double[:, ::1] positions, double[:, ::1] velocities,
               double[:, ::1] acc, const double[:, ::1] anchors,
               const double[::1] anchor_rest, const double[::1] seg_rest,
               const double[:, ::1] occ, double cell_area, double k_p,
               double k_a, double b, double m, double dt, double a1,
               double a2, double a3, double n_exp, double r_max,
               double r_floor):
    """Advance the chain one semi-implicit Euler step, in place.

    Forces are evaluated on the pre-step state for every point before any
    update; endpoints stay fixed. Interior accelerations are written to
    ``acc`` (shape (n-2, 2)). Returns the largest interior acceleration
    magnitude, or -1.0 if any acceleration came out non-finite (state is
    then left unchanged).
    """
    cdef Py_ssize_t n = positions.shape[0]
    cdef Py_ssize_t k = occ.shape[0]
    cdef Py_ssize_t i, j
    cdef double fx, fy, dx, dy, d2, dist, rc, scale, mag, amax, am
    cdef double r_max2 = r_max * r_max
    cdef double inv_m = 1.0 / m

    if n < 3:
        return 0.0

    for i in range(1, n - 1):
        fx = 0.0
        fy = 0.0

        dx = positions[i - 1, 0] - positions[i, 0]
        dy = positions[i - 1, 1] - positions[i, 1]
        dist = sqrt(dx * dx + dy * dy)
        if dist > 0.0:
            scale = k_p * (dist - seg_rest[i - 1]) / dist
            fx += scale * dx
            fy += scale * dy

        dx = positions[i + 1, 0] - positions[i, 0]
        dy = positions[i + 1, 1] - positions[i, 1]
        dist = sqrt(dx * dx + dy * dy)
        if dist > 0.0:
            scale = k_p * (dist - seg_rest[i]) / dist
            fx += scale * dx
            fy += scale * dy

        dx = anchors[i - 1, 0] - positions[i, 0]
        dy = anchors[i - 1, 1] - positions[i, 1]
        dist = sqrt(dx * dx + dy * dy)
        if dist > 0.0:
            scale = k_a * (dist - anchor_rest[i - 1]) / dist
            fx += scale * dx
            fy += scale * dy

        for j in range(k):
            dx = positions[i, 0] - occ[j, 0]
            dy = positions[i, 1] - occ[j, 1]
            d2 = dx * dx + dy * dy
            if d2 > r_max2:
                continue
            dist = sqrt(d2)
            rc = dist if dist > r_floor else r_floor
            if n_exp == 2.0:
                mag = a2 / (rc * rc)
            else:
                mag = a2 * pow(rc, -n_exp)
            if rc > a1:
                mag *= exp(-(rc - a1) / a3)
            if dist > r_max:
                continue
            mag *= cell_area
            if dist > 0.0:
                scale = mag / dist
                fx += scale * dx
                fy += scale * dy
            else:
                fx += mag

        acc[i - 1, 0] = (fx - b * velocities[i, 0]) * inv_m
        acc[i - 1, 1] = (fy - b * velocities[i, 1]) * inv_m

    amax = 0.0
    for i in range(n - 2):
        if not isfinite(acc[i, 0]) or not isfinite(acc[i, 1]):
            return -1.0
        am = sqrt(acc[i, 0] * acc[i, 0] + acc[i, 1] * acc[i, 1])
        if am > amax:
            amax = am

    for i in range(1, n - 1):
        velocities[i, 0] += dt * acc[i - 1, 0]
        velocities[i, 1] += dt * acc[i - 1, 1]
        positions[i, 0] += dt * velocities[i, 0]
        positions[i, 1] += dt * velocities[i, 1]
    return amax
