# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Dormand-Prince 5(4) kernels for the competition system.

Operation-for-operation twin of ``_kernels_py.py``; keep the two in sync.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, pow, fabs, isfinite, INFINITY
from libc.stdlib cimport malloc, realloc, free

cnp.import_array()

DEF EQUILIBRIUM = 0
DEF MAX_TIME = 1
DEF LEFT_DOMAIN = 2
DEF STEP_UNDERFLOW = 3
DEF HIT_AXIS = 4
DEF P0 = 0
DEF PN = 1
DEF PI = 2
DEF MAX_STEPS = 5000000

cdef double A21 = 1.0 / 5.0
cdef double A31 = 3.0 / 40.0
cdef double A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0
cdef double A42 = -56.0 / 15.0
cdef double A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0
cdef double A52 = -25360.0 / 2187.0
cdef double A53 = 64448.0 / 6561.0
cdef double A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0
cdef double A62 = -355.0 / 33.0
cdef double A63 = 46732.0 / 5247.0
cdef double A64 = 49.0 / 176.0
cdef double A65 = -5103.0 / 18656.0
cdef double B1 = 35.0 / 384.0
cdef double B3 = 500.0 / 1113.0
cdef double B4 = 125.0 / 192.0
cdef double B5 = -2187.0 / 6784.0
cdef double B6 = 11.0 / 84.0
cdef double E1 = 71.0 / 57600.0
cdef double E3 = -71.0 / 16695.0
cdef double E4 = 71.0 / 1920.0
cdef double E5 = -17253.0 / 339200.0
cdef double E6 = 22.0 / 525.0
cdef double E7 = -1.0 / 40.0

cdef double SAFETY = 0.9
cdef double PI_ALPHA = 0.17
cdef double PI_BETA = 0.04
cdef double FAC_MIN = 0.2
cdef double FAC_MAX = 5.0


cdef inline double dmin(double a, double b) noexcept nogil:
    return a if a < b else b


cdef inline double dmax(double a, double b) noexcept nogil:
    return a if a > b else b


cdef inline int which_equilibrium(double x, double y, double radius) noexcept nogil:
    if sqrt(x * x + y * y) < radius:
        return P0
    if sqrt((x - 1.0) * (x - 1.0) + y * y) < radius:
        return PN
    if sqrt(x * x + (y - 1.0) * (y - 1.0)) < radius:
        return PI
    return -1


cdef struct Trace:
    double* data
    Py_ssize_t n
    Py_ssize_t cap
    bint failed


cdef inline void trace_push(Trace* tr, double t, double x, double y) noexcept nogil:
    cdef double* grown
    if tr == NULL or tr.failed:
        return
    if tr.n == tr.cap:
        grown = <double*> realloc(tr.data, 2 * tr.cap * 3 * sizeof(double))
        if grown == NULL:
            tr.failed = True
            return
        tr.data = grown
        tr.cap = 2 * tr.cap
    tr.data[3 * tr.n] = t
    tr.data[3 * tr.n + 1] = x
    tr.data[3 * tr.n + 2] = y
    tr.n += 1


cdef int run(double x, double y, double alpha, double beta, double delta,
             double sign, double rtol, double atol, double max_time, double min_step,
             double radius, double x_box, double y_box, double max_disp,
             bint stop_on_axis, Trace* out, int* which_out) noexcept nogil:
    cdef double h_cap, t, h, sx, sy, d0, d1, err, err_prev, fac, speed
    cdef double k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y, k5x, k5y, k6x, k6y, k7x, k7y
    cdef double xs, ys, xn, yn, ex, ey
    cdef bint last
    cdef int which
    cdef long n_steps = 0

    if delta < 1e-3 or delta > 1e3:
        h_cap = 0.1 / dmax(1.0, delta)
    else:
        h_cap = INFINITY

    t = 0.0
    trace_push(out, 0.0, x, y)
    which = which_equilibrium(x, y, radius)
    if which >= 0:
        which_out[0] = which
        return EQUILIBRIUM

    k1x = sign * x * (1.0 - x - alpha * y)
    k1y = sign * delta * y * (1.0 - y - beta * x)

    sx = atol + rtol * fabs(x)
    sy = atol + rtol * fabs(y)
    d0 = sqrt(0.5 * ((x / sx) * (x / sx) + (y / sy) * (y / sy)))
    d1 = sqrt(0.5 * ((k1x / sx) * (k1x / sx) + (k1y / sy) * (k1y / sy)))
    if d0 < 1e-5 or d1 < 1e-5:
        h = 1e-6
    else:
        h = 0.01 * d0 / d1
    h = dmin(dmin(dmin(h, 0.1), h_cap), max_time)

    err_prev = 1e-4
    which_out[0] = -1
    while True:
        if t >= max_time:
            return MAX_TIME
        if n_steps >= MAX_STEPS:
            return MAX_TIME
        speed = sqrt(k1x * k1x + k1y * k1y)
        if max_disp > 0.0 and speed > 0.0:
            h = dmin(h, max_disp * dmax(1.0, sqrt(x * x + y * y)) / speed)
        h = dmin(h, h_cap)
        last = False
        if t + h >= max_time:
            h = max_time - t
            last = True
        if h < min_step and not last:
            return STEP_UNDERFLOW

        xs = x + h * (A21 * k1x)
        ys = y + h * (A21 * k1y)
        k2x = sign * xs * (1.0 - xs - alpha * ys)
        k2y = sign * delta * ys * (1.0 - ys - beta * xs)
        xs = x + h * (A31 * k1x + A32 * k2x)
        ys = y + h * (A31 * k1y + A32 * k2y)
        k3x = sign * xs * (1.0 - xs - alpha * ys)
        k3y = sign * delta * ys * (1.0 - ys - beta * xs)
        xs = x + h * (A41 * k1x + A42 * k2x + A43 * k3x)
        ys = y + h * (A41 * k1y + A42 * k2y + A43 * k3y)
        k4x = sign * xs * (1.0 - xs - alpha * ys)
        k4y = sign * delta * ys * (1.0 - ys - beta * xs)
        xs = x + h * (A51 * k1x + A52 * k2x + A53 * k3x + A54 * k4x)
        ys = y + h * (A51 * k1y + A52 * k2y + A53 * k3y + A54 * k4y)
        k5x = sign * xs * (1.0 - xs - alpha * ys)
        k5y = sign * delta * ys * (1.0 - ys - beta * xs)
        xs = x + h * (A61 * k1x + A62 * k2x + A63 * k3x + A64 * k4x + A65 * k5x)
        ys = y + h * (A61 * k1y + A62 * k2y + A63 * k3y + A64 * k4y + A65 * k5y)
        k6x = sign * xs * (1.0 - xs - alpha * ys)
        k6y = sign * delta * ys * (1.0 - ys - beta * xs)
        xn = x + h * (B1 * k1x + B3 * k3x + B4 * k4x + B5 * k5x + B6 * k6x)
        yn = y + h * (B1 * k1y + B3 * k3y + B4 * k4y + B5 * k5y + B6 * k6y)
        k7x = sign * xn * (1.0 - xn - alpha * yn)
        k7y = sign * delta * yn * (1.0 - yn - beta * xn)

        ex = h * (E1 * k1x + E3 * k3x + E4 * k4x + E5 * k5x + E6 * k6x + E7 * k7x)
        ey = h * (E1 * k1y + E3 * k3y + E4 * k4y + E5 * k5y + E6 * k6y + E7 * k7y)
        sx = atol + rtol * dmax(fabs(x), fabs(xn))
        sy = atol + rtol * dmax(fabs(y), fabs(yn))
        err = sqrt(0.5 * ((ex / sx) * (ex / sx) + (ey / sy) * (ey / sy)))

        if not (err == err) or not isfinite(xn) or not isfinite(yn):
            h *= FAC_MIN
            continue

        if err <= 1.0:
            n_steps += 1
            t = max_time if last else t + h
            x = xn
            y = yn
            if x < atol:
                x = 0.0
            if y < atol:
                y = 0.0
            if x == xn and y == yn:
                k1x = k7x
                k1y = k7y
            else:
                k1x = sign * x * (1.0 - x - alpha * y)
                k1y = sign * delta * y * (1.0 - y - beta * x)
            trace_push(out, sign * t, x, y)
            which = which_equilibrium(x, y, radius)
            if which >= 0:
                which_out[0] = which
                return EQUILIBRIUM
            if x > x_box or y > y_box:
                return LEFT_DOMAIN
            if stop_on_axis and (x == 0.0 or y == 0.0):
                return HIT_AXIS
            if err == 0.0:
                fac = FAC_MAX
            else:
                fac = SAFETY * pow(err, -PI_ALPHA) * pow(err_prev, PI_BETA)
                fac = dmin(FAC_MAX, dmax(FAC_MIN, fac))
            err_prev = dmax(err, 1e-4)
            h = h * fac
        else:
            fac = dmax(FAC_MIN, SAFETY * pow(err, -0.2))
            h = h * fac


def integrate_path(double x0, double y0, double alpha, double beta, double delta,
                   double sign, double rtol, double atol, double max_time,
                   double min_step, double radius, double x_box=INFINITY,
                   double y_box=INFINITY, double max_disp=0.0, bint stop_on_axis=False):
    """Integrate one trajectory and return ``(samples, status, which)``."""
    cdef Trace tr
    cdef int which = -1
    cdef int status
    cdef Py_ssize_t i
    tr.cap = 1024
    tr.n = 0
    tr.failed = False
    tr.data = <double*> malloc(tr.cap * 3 * sizeof(double))
    if tr.data == NULL:
        raise MemoryError()
    try:
        with nogil:
            status = run(x0, y0, alpha, beta, delta, sign, rtol, atol, max_time,
                         min_step, radius, x_box, y_box, max_disp, stop_on_axis,
                         &tr, &which)
        if tr.failed:
            raise MemoryError()
        samples = np.empty((tr.n, 3), dtype=np.float64)
        for i in range(tr.n):
            samples[i, 0] = tr.data[3 * i]
            samples[i, 1] = tr.data[3 * i + 1]
            samples[i, 2] = tr.data[3 * i + 2]
    finally:
        free(tr.data)
    return samples, status, which


def classify_points(xs, ys, double alpha, double beta, double delta, double rtol,
                    double atol, double max_time, double min_step, double radius):
    cdef double[::1] xv = np.ascontiguousarray(xs, dtype=np.float64).ravel()
    cdef double[::1] yv = np.ascontiguousarray(ys, dtype=np.float64).ravel()
    cdef Py_ssize_t n = xv.shape[0], i
    labels = np.empty(n, dtype=np.int8)
    cdef signed char[::1] lv = labels
    cdef int which, status
    with nogil:
        for i in range(n):
            which = -1
            status = run(xv[i], yv[i], alpha, beta, delta, 1.0, rtol, atol, max_time,
                         min_step, radius, INFINITY, INFINITY, 0.0, False, NULL, &which)
            if status == EQUILIBRIUM and which == PN:
                lv[i] = 0
            elif status == EQUILIBRIUM and which == PI:
                lv[i] = 1
            else:
                lv[i] = 2
    return labels
