# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled residual kernels.

Mirror of py_fallback.py: the same IEEE-754 double operations in the same
order, so compiled and fallback outputs agree bit for bit.  Status codes
are documented in py_fallback.py.
"""

from libc.math cimport NAN, fabs, sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()

STATUS_OK = 0
STATUS_WINDOW = 1
STATUS_ENERGY_FACTOR = 2
STATUS_COMPLEX_ETA = 3
STATUS_POLE = 4


cdef inline int _point(double E, double m0c2, double delta, double alpha,
                       double c0, double c1, double k2, double ll1,
                       double branch_sign, double n_plus_half, double pole_eps,
                       double* out_res, double* out_rhs, double* out_den) noexcept nogil:
    cdef double g, gg, quarter, root, den, rhs, lhs
    out_res[0] = NAN
    out_rhs[0] = NAN
    out_den[0] = NAN
    if not (-m0c2 < E < m0c2):
        return 1
    g = 1.0 + delta * E
    if not (g > 0.0):
        return 2
    gg = g * g
    quarter = 0.25 + (k2 * gg + ll1)
    if quarter < 0.0:
        return 3
    root = sqrt(quarter)
    den = n_plus_half + branch_sign * root
    if fabs(den) <= pole_eps:
        out_den[0] = den
        return 4
    rhs = alpha * (c0 + c1 * E) / den
    lhs = sqrt((m0c2 - E) * (m0c2 + E)) / g
    out_res[0] = lhs - rhs
    out_rhs[0] = rhs
    out_den[0] = den
    return 0


def residual_point(double E, double m0c2, double delta, double alpha,
                   double c0, double c1, double k2, double ll1,
                   double branch_sign, double n_plus_half, double pole_eps):
    """Scalar residual evaluation; see py_fallback.residual_point."""
    cdef double res, rhs, den
    cdef int status = _point(E, m0c2, delta, alpha, c0, c1, k2, ll1,
                             branch_sign, n_plus_half, pole_eps,
                             &res, &rhs, &den)
    return res, rhs, den, status


def residual_grid(E, double m0c2, double delta, double alpha,
                  double c0, double c1, double k2, double ll1,
                  double branch_sign, double n_plus_half, double pole_eps):
    """Vectorized residual evaluation; see py_fallback.residual_grid."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] E_arr = \
        np.ascontiguousarray(E, dtype=np.float64)
    cdef Py_ssize_t m = E_arr.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] res = np.empty(m, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rhs = np.empty(m, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] den = np.empty(m, dtype=np.float64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] status = np.empty(m, dtype=np.int32)
    cdef Py_ssize_t i
    with nogil:
        for i in range(m):
            status[i] = _point(E_arr[i], m0c2, delta, alpha, c0, c1, k2, ll1,
                               branch_sign, n_plus_half, pole_eps,
                               &res[i], &rhs[i], &den[i])
    return res, rhs, den, status
