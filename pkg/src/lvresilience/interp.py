"""Shape-preserving piecewise-cubic Hermite interpolation."""
import numpy as np


def limit_slopes(x, y, slopes):
    """Fritsch-Carlson limiter: adjust slopes so the Hermite cubic is monotone on every interval.

    Data must be nondecreasing in ``y``. Slopes that already give a monotone
    piece are returned unchanged.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    m = np.array(slopes, dtype=float)
    d = np.diff(y) / np.diff(x)
    for k in range(d.size):
        if d[k] == 0.0:
            m[k] = 0.0
            m[k + 1] = 0.0
            continue
        a = m[k] / d[k]
        b = m[k + 1] / d[k]
        if a < 0.0:
            m[k] = 0.0
            a = 0.0
        if b < 0.0:
            m[k + 1] = 0.0
            b = 0.0
        r = a * a + b * b
        if r > 9.0:
            tau = 3.0 / np.sqrt(r)
            m[k] = tau * a * d[k]
            m[k + 1] = tau * b * d[k]
    return m


class MonotoneHermite:
    """Cubic Hermite interpolant through ``(x_i, y_i)`` with limited slopes.

    ``x`` must be strictly increasing and ``y`` nondecreasing. Evaluation is
    exact at the knots.
    """

    def __init__(self, x, y, slopes):
        self.x = np.asarray(x, dtype=float)
        self.y = np.asarray(y, dtype=float)
        if self.x.ndim != 1 or self.x.size < 2 or self.x.shape != self.y.shape:
            raise ValueError("need at least two knots with matching x and y")
        if np.any(np.diff(self.x) <= 0):
            raise ValueError("knots must be strictly increasing in x")
        self.m = limit_slopes(self.x, self.y, slopes)

    def __call__(self, q):
        q = np.asarray(q, dtype=float)
        k = np.clip(np.searchsorted(self.x, q, side="right") - 1, 0, self.x.size - 2)
        x0 = self.x[k]
        h = self.x[k + 1] - x0
        t = (q - x0) / h
        t2 = t * t
        t3 = t2 * t
        h00 = 2 * t3 - 3 * t2 + 1
        h10 = t3 - 2 * t2 + t
        h01 = -2 * t3 + 3 * t2
        h11 = t3 - t2
        out = (h00 * self.y[k] + h10 * h * self.m[k]
               + h01 * self.y[k + 1] + h11 * h * self.m[k + 1])
        # knots are returned verbatim
        exact = q == self.x[k + 1]
        if np.any(exact):
            out = np.where(exact, self.y[k + 1], out)
        return out
