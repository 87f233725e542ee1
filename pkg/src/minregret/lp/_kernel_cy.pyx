# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled simplex pivot kernel.

Mirrors ``_kernel_py.run_simplex`` exactly: same Bland entering/leaving rules,
same tie-breaking, same floating-point operations, so both backends walk the
same pivot sequence.
"""

BACKEND = "compiled"

STATUS_OPTIMAL = 0
STATUS_UNBOUNDED = 1
STATUS_PIVOT_LIMIT = 2

DEF INF = 1e308


cdef inline void _pivot(double[:, ::1] T, Py_ssize_t[::1] basis,
                        Py_ssize_t row, Py_ssize_t col) noexcept:
    cdef Py_ssize_t nrows = T.shape[0]
    cdef Py_ssize_t width = T.shape[1]
    cdef double piv = T[row, col]
    cdef Py_ssize_t i, j
    cdef double factor
    for j in range(width):
        T[row, j] /= piv
    for i in range(nrows):
        if i == row:
            continue
        factor = T[i, col]
        if factor == 0.0:
            continue
        for j in range(width):
            T[i, j] -= factor * T[row, j]
    # Stamp the exact unit column to stop round-off drift.
    for i in range(nrows):
        T[i, col] = 0.0
    T[row, col] = 1.0
    basis[row] = col


def pivot_inplace(double[:, ::1] tableau, Py_ssize_t[::1] basis, row, col):
    """One pivot: scale the pivot row, eliminate the column elsewhere."""
    _pivot(tableau, basis, row, col)


def run_simplex(double[:, ::1] tableau, Py_ssize_t[::1] basis,
                const unsigned char[::1] locked, max_pivots, tol):
    """Pivot ``tableau`` in place until the reduced-cost row is nonnegative.

    See ``_kernel_py.run_simplex`` for the layout contract.
    Returns ``(status, pivots_used)``.
    """
    cdef Py_ssize_t m = tableau.shape[0] - 1
    cdef Py_ssize_t width = tableau.shape[1]
    cdef Py_ssize_t budget = <Py_ssize_t> max_pivots
    cdef double eps = <double> tol
    cdef Py_ssize_t pivots = 0
    cdef Py_ssize_t enter, leave, i, j
    cdef double a, ratio, best_ratio

    while True:
        enter = -1
        for j in range(width - 1):
            if locked[j] == 0 and tableau[m, j] < -eps:
                enter = j
                break
        if enter < 0:
            return STATUS_OPTIMAL, pivots
        if pivots >= budget:
            return STATUS_PIVOT_LIMIT, pivots

        leave = -1
        best_ratio = INF
        for i in range(m):
            a = tableau[i, enter]
            if a > eps:
                ratio = tableau[i, width - 1] / a
                if ratio < best_ratio or (
                    ratio == best_ratio and leave >= 0 and basis[i] < basis[leave]
                ):
                    best_ratio = ratio
                    leave = i
        if leave < 0:
            return STATUS_UNBOUNDED, pivots

        _pivot(tableau, basis, leave, enter)
        pivots += 1
