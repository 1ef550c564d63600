"""Pure-Python Dormand-Prince 5(4) kernels for the competition system.

Mirrors ``_kernels.pyx`` operation for operation so both backends produce the
same floating-point results. Used when the compiled extension is unavailable
or when ``LVRES_PURE_PYTHON=1`` is set.
"""
import math

import numpy as np

# status codes shared with the compiled kernel
EQUILIBRIUM = 0
MAX_TIME = 1
LEFT_DOMAIN = 2
STEP_UNDERFLOW = 3
HIT_AXIS = 4

# equilibrium indices
P0, PN, PI, PC = 0, 1, 2, 3

NATIVE, INVADER, UNDECIDED = 0, 1, 2

MAX_STEPS = 5_000_000

A21 = 1.0 / 5.0
A31, A32 = 3.0 / 40.0, 9.0 / 40.0
A41, A42, A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
A51, A52, A53, A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
A61, A62, A63, A64, A65 = (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0,
                           49.0 / 176.0, -5103.0 / 18656.0)
B1, B3, B4, B5, B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
E1, E3, E4, E5, E6, E7 = (71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0,
                          -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)

SAFETY = 0.9
PI_ALPHA = 0.17
PI_BETA = 0.04
FAC_MIN = 0.2
FAC_MAX = 5.0


def _step_cap(delta):
    if delta < 1e-3 or delta > 1e3:
        return 0.1 / max(1.0, delta)
    return math.inf


def _which_equilibrium(x, y, radius):
    # the saddle is never a stopping point: only the exact manifold converges to it
    if math.sqrt(x * x + y * y) < radius:
        return P0
    if math.sqrt((x - 1.0) * (x - 1.0) + y * y) < radius:
        return PN
    if math.sqrt(x * x + (y - 1.0) * (y - 1.0)) < radius:
        return PI
    return -1


def _run(x, y, alpha, beta, delta, sign, rtol, atol, max_time, min_step, radius,
         x_box, y_box, max_disp, stop_on_axis, out):
    """Core stepping loop. Appends accepted (t, x, y) to ``out`` when given.

    Returns (status, which, x, y, t).
    """
    h_cap = _step_cap(delta)

    t = 0.0
    if out is not None:
        out.append((0.0, x, y))
    which = _which_equilibrium(x, y, radius)
    if which >= 0:
        return EQUILIBRIUM, which, x, y, t

    k1x = sign * x * (1.0 - x - alpha * y)
    k1y = sign * delta * y * (1.0 - y - beta * x)

    # initial step from the local scale of state and velocity
    sx = atol + rtol * abs(x)
    sy = atol + rtol * abs(y)
    d0 = math.sqrt(0.5 * ((x / sx) * (x / sx) + (y / sy) * (y / sy)))
    d1 = math.sqrt(0.5 * ((k1x / sx) * (k1x / sx) + (k1y / sy) * (k1y / sy)))
    if d0 < 1e-5 or d1 < 1e-5:
        h = 1e-6
    else:
        h = 0.01 * d0 / d1
    h = min(h, 0.1, h_cap, max_time)

    err_prev = 1e-4
    n_steps = 0
    while True:
        if t >= max_time:
            return MAX_TIME, -1, x, y, t
        if n_steps >= MAX_STEPS:
            return MAX_TIME, -1, x, y, t
        speed = math.sqrt(k1x * k1x + k1y * k1y)
        if max_disp > 0.0 and speed > 0.0:
            h = min(h, max_disp * max(1.0, math.sqrt(x * x + y * y)) / speed)
        h = min(h, h_cap)
        last = False
        if t + h >= max_time:
            h = max_time - t
            last = True
        if h < min_step and not last:
            return STEP_UNDERFLOW, -1, x, y, t

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
        sx = atol + rtol * max(abs(x), abs(xn))
        sy = atol + rtol * max(abs(y), abs(yn))
        err = math.sqrt(0.5 * ((ex / sx) * (ex / sx) + (ey / sy) * (ey / sy)))

        if not (err == err) or not math.isfinite(xn) or not math.isfinite(yn):
            # non-finite trial state: shrink hard and retry
            h *= FAC_MIN
            continue

        if err <= 1.0:
            n_steps += 1
            t = max_time if last else t + h
            x, y = xn, yn
            # axes are invariant; snap round-off back onto them
            if x < atol:
                x = 0.0
            if y < atol:
                y = 0.0
            if x == xn and y == yn:
                k1x, k1y = k7x, k7y
            else:
                k1x = sign * x * (1.0 - x - alpha * y)
                k1y = sign * delta * y * (1.0 - y - beta * x)
            if out is not None:
                out.append((sign * t, x, y))
            which = _which_equilibrium(x, y, radius)
            if which >= 0:
                return EQUILIBRIUM, which, x, y, t
            if x > x_box or y > y_box:
                return LEFT_DOMAIN, -1, x, y, t
            if stop_on_axis and (x == 0.0 or y == 0.0):
                return HIT_AXIS, -1, x, y, t
            if err == 0.0:
                fac = FAC_MAX
            else:
                fac = SAFETY * err ** (-PI_ALPHA) * err_prev ** PI_BETA
                fac = min(FAC_MAX, max(FAC_MIN, fac))
            err_prev = max(err, 1e-4)
            h = h * fac
        else:
            fac = max(FAC_MIN, SAFETY * err ** (-0.2))
            h = h * fac


def integrate_path(x0, y0, alpha, beta, delta, sign, rtol, atol, max_time, min_step,
                   radius, x_box=math.inf, y_box=math.inf, max_disp=0.0,
                   stop_on_axis=False):
    """Integrate one trajectory and return ``(samples, status, which)``.

    ``samples`` is an (n, 3) array of signed time, x, y.
    """
    out = []
    status, which, _, _, _ = _run(float(x0), float(y0), float(alpha), float(beta),
                                  float(delta), float(sign), float(rtol), float(atol),
                                  float(max_time), float(min_step), float(radius),
                                  float(x_box), float(y_box), float(max_disp),
                                  bool(stop_on_axis), out)
    return np.array(out, dtype=np.float64), status, which


def classify_points(xs, ys, alpha, beta, delta, rtol, atol, max_time, min_step, radius):
    xs = np.asarray(xs, dtype=np.float64).ravel()
    ys = np.asarray(ys, dtype=np.float64).ravel()
    labels = np.empty(xs.shape[0], dtype=np.int8)
    for i in range(xs.shape[0]):
        status, which, _, _, _ = _run(float(xs[i]), float(ys[i]), float(alpha),
                                      float(beta), float(delta), 1.0, float(rtol),
                                      float(atol), float(max_time), float(min_step),
                                      float(radius), math.inf, math.inf, 0.0, False, None)
        if status == EQUILIBRIUM and which == PN:
            labels[i] = NATIVE
        elif status == EQUILIBRIUM and which == PI:
            labels[i] = INVADER
        else:
            labels[i] = UNDECIDED
    return labels
