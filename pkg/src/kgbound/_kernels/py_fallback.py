"""NumPy implementation of the residual kernels.

The compiled extension (_residual.pyx) mirrors this file operation for
operation.  Keep the two in lockstep: both must perform the same IEEE-754
double operations in the same order so their outputs agree bit for bit.

Status codes:
    0  valid evaluation
    1  E outside the open window (-m0c2, m0c2)
    2  energy factor 1 + delta*E not positive
    3  discriminant 1/4 + K(E) negative (eta complex)
    4  quantization denominator within pole_eps of zero
"""

from __future__ import annotations

import math

import numpy as np

STATUS_OK = 0
STATUS_WINDOW = 1
STATUS_ENERGY_FACTOR = 2
STATUS_COMPLEX_ETA = 3
STATUS_POLE = 4


def residual_point(E, m0c2, delta, alpha, c0, c1, k2, ll1, branch_sign,
                   n_plus_half, pole_eps):
    """Evaluate the quantization residual at one energy.

    Returns (res, rhs, den, status); res/rhs/den are NaN where the status
    marks the evaluation invalid (den is still reported at a pole).
    """
    nan = math.nan
    if not (-m0c2 < E < m0c2):
        return nan, nan, nan, STATUS_WINDOW
    g = 1.0 + delta * E
    if not (g > 0.0):
        return nan, nan, nan, STATUS_ENERGY_FACTOR
    gg = g * g
    quarter = 0.25 + (k2 * gg + ll1)
    if quarter < 0.0:
        return nan, nan, nan, STATUS_COMPLEX_ETA
    root = math.sqrt(quarter)
    den = n_plus_half + branch_sign * root
    if abs(den) <= pole_eps:
        return nan, nan, den, STATUS_POLE
    rhs = alpha * (c0 + c1 * E) / den
    lhs = math.sqrt((m0c2 - E) * (m0c2 + E)) / g
    res = lhs - rhs
    return res, rhs, den, STATUS_OK


def residual_grid(E, m0c2, delta, alpha, c0, c1, k2, ll1, branch_sign,
                  n_plus_half, pole_eps):
    """Vectorized residual_point over a 1-D energy array.

    Returns (res, rhs, den, status) float64/int32 arrays of E's shape.
    """
    E = np.ascontiguousarray(E, dtype=np.float64)
    g = 1.0 + delta * E
    gg = g * g
    quarter = 0.25 + (k2 * gg + ll1)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        root = np.sqrt(quarter)
        den = n_plus_half + branch_sign * root
        rhs = alpha * (c0 + c1 * E) / den
        lhs = np.sqrt((m0c2 - E) * (m0c2 + E)) / g
        res = lhs - rhs

    status = np.zeros(E.shape, dtype=np.int32)
    # Later assignments win, so order from lowest to highest precedence.
    status[np.abs(den) <= pole_eps] = STATUS_POLE
    status[quarter < 0.0] = STATUS_COMPLEX_ETA
    status[~(g > 0.0)] = STATUS_ENERGY_FACTOR
    status[~((E > -m0c2) & (E < m0c2))] = STATUS_WINDOW

    bad = status != STATUS_OK
    res[bad] = np.nan
    rhs[bad] = np.nan
    den[(status >= STATUS_WINDOW) & (status <= STATUS_COMPLEX_ETA)] = np.nan
    return res, rhs, den, status
