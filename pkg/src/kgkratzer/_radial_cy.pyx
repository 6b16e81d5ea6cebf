# cython: language_level=3, boundscheck=False, cdivision=True
"""Compiled radial integration kernel.

Semantics mirror ``_radial_py.sweep`` exactly: adaptive Cash-Karp 4(5) for
psi'' = U(r) psi with sign-preserving renormalization and node counting.
Keep the two implementations in lockstep; the test suite diffs them.
"""

from libc.math cimport fabs, pow

STATUS_OK = 0
STATUS_STEP_UNDERFLOW = 1
STATUS_STEP_BUDGET = 2

cdef double _RENORM_LIMIT = 1e140
cdef double _SAFETY = 0.9
cdef double _MIN_SHRINK = 0.2
cdef double _MAX_GROW = 5.0


cdef inline double _u(double kappa2, double q1, double q2, double q3,
                      double q4, double r) nogil:
    return kappa2 + (q1 + (q2 + (q3 + q4 / r) / r) / r) / r


def u_eval(double kappa2, double q1, double q2, double q3, double q4, double r):
    """Effective potential of the squared wave equation at radius r."""
    return _u(kappa2, q1, q2, q3, q4, r)


def sweep(double kappa2, double q1, double q2, double q3, double q4,
          double r0, double r1, double y, double dy,
          double h_max, double rtol, long max_steps):
    """March (psi, psi') from r0 to r1; r1 < r0 integrates inward.

    Returns (psi, dpsi, node_count, status, steps).
    """
    cdef double span = r1 - r0
    if span == 0.0:
        return y, dy, 0, STATUS_OK, 0

    cdef double direction = 1.0 if span > 0.0 else -1.0
    cdef double done_eps = 5e-16 * (fabs(r0) + fabs(r1))
    cdef double r = r0
    cdef double h = direction * min(h_max, max(fabs(r0) * 1e-2, fabs(span) * 1e-8))
    cdef long nodes = 0
    cdef double last_sign = 1.0 if y > 0.0 else (-1.0 if y < 0.0 else 0.0)
    cdef long steps = 0

    cdef double remaining, u1, u2, u3, u4, u5, u6
    cdef double k1y, k1v, k2y, k2v, k3y, k3v, k4y, k4v, k5y, k5v, k6y, k6v
    cdef double y2, v2, y3, v3, y4, v4, y5, v5, y6, v6
    cdef double y_new, v_new, y_low, v_low
    cdef double err_y, err_v, ay, av, scale_y, scale_v, err, err_2
    cdef double new_sign, big, factor

    while (r1 - r) * direction > done_eps:
        if steps >= max_steps:
            return y, dy, nodes, STATUS_STEP_BUDGET, steps
        remaining = r1 - r
        if fabs(h) > fabs(remaining):
            h = remaining
        if r + h == r:
            return y, dy, nodes, STATUS_STEP_UNDERFLOW, steps

        u1 = _u(kappa2, q1, q2, q3, q4, r)
        k1y = dy
        k1v = u1 * y

        y2 = y + h * 0.2 * k1y
        v2 = dy + h * 0.2 * k1v
        u2 = _u(kappa2, q1, q2, q3, q4, r + 0.2 * h)
        k2y = v2
        k2v = u2 * y2

        y3 = y + h * (0.075 * k1y + 0.225 * k2y)
        v3 = dy + h * (0.075 * k1v + 0.225 * k2v)
        u3 = _u(kappa2, q1, q2, q3, q4, r + 0.3 * h)
        k3y = v3
        k3v = u3 * y3

        y4 = y + h * (0.3 * k1y - 0.9 * k2y + 1.2 * k3y)
        v4 = dy + h * (0.3 * k1v - 0.9 * k2v + 1.2 * k3v)
        u4 = _u(kappa2, q1, q2, q3, q4, r + 0.6 * h)
        k4y = v4
        k4v = u4 * y4

        y5 = y + h * (-0.2037037037037037 * k1y + 2.5 * k2y
                      - 2.5925925925925926 * k3y + 1.2962962962962963 * k4y)
        v5 = dy + h * (-0.2037037037037037 * k1v + 2.5 * k2v
                       - 2.5925925925925926 * k3v + 1.2962962962962963 * k4v)
        u5 = _u(kappa2, q1, q2, q3, q4, r + h)
        k5y = v5
        k5v = u5 * y5

        y6 = y + h * (0.029495804398148147 * k1y + 0.341796875 * k2y
                      + 0.041594328703703706 * k3y + 0.40034541377314814 * k4y
                      + 0.061767578125 * k5y)
        v6 = dy + h * (0.029495804398148147 * k1v + 0.341796875 * k2v
                       + 0.041594328703703706 * k3v + 0.40034541377314814 * k4v
                       + 0.061767578125 * k5v)
        u6 = _u(kappa2, q1, q2, q3, q4, r + 0.875 * h)
        k6y = v6
        k6v = u6 * y6

        y_new = y + h * (0.0978835978835979 * k1y + 0.4025764895330113 * k3y
                         + 0.21043771043771045 * k4y + 0.2891022021456804 * k6y)
        v_new = dy + h * (0.0978835978835979 * k1v + 0.4025764895330113 * k3v
                          + 0.21043771043771045 * k4v + 0.2891022021456804 * k6v)
        y_low = y + h * (0.10217737268518519 * k1y + 0.38390790343915343 * k3y
                         + 0.24459273726851852 * k4y + 0.019321986607142856 * k5y
                         + 0.25 * k6y)
        v_low = dy + h * (0.10217737268518519 * k1v + 0.38390790343915343 * k3v
                          + 0.24459273726851852 * k4v + 0.019321986607142856 * k5v
                          + 0.25 * k6v)

        err_y = y_new - y_low
        err_v = v_new - v_low
        ay = fabs(y) if fabs(y) > fabs(y_new) else fabs(y_new)
        av = fabs(dy) if fabs(dy) > fabs(v_new) else fabs(v_new)
        scale_y = rtol * (ay + fabs(h) * av) + 1e-300
        scale_v = rtol * (av + fabs(h * k1v)) + 1e-300
        err = fabs(err_y) / scale_y
        err_2 = fabs(err_v) / scale_v
        if err_2 > err:
            err = err_2

        if err <= 1.0:
            r += h
            steps += 1
            new_sign = 1.0 if y_new > 0.0 else (-1.0 if y_new < 0.0 else 0.0)
            if new_sign != 0.0:
                if last_sign != 0.0 and new_sign != last_sign:
                    nodes += 1
                last_sign = new_sign
            y = y_new
            dy = v_new
            big = fabs(y) if fabs(y) > fabs(dy) else fabs(dy)
            if big > _RENORM_LIMIT:
                y /= big
                dy /= big
            factor = _MAX_GROW if err == 0.0 else _SAFETY * pow(err, -0.2)
            if factor > _MAX_GROW:
                factor = _MAX_GROW
            h *= factor
            if fabs(h) > h_max:
                h = direction * h_max
        else:
            factor = _SAFETY * pow(err, -0.2)
            if factor < _MIN_SHRINK:
                factor = _MIN_SHRINK
            h *= factor
            if fabs(h) < 1e-15 * max(fabs(r), 1e-30):
                return y, dy, nodes, STATUS_STEP_UNDERFLOW, steps

    return y, dy, nodes, STATUS_OK, steps
