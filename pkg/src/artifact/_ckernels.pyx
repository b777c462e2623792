# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels (same signatures as _kernels_py)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, sin, cos, exp

cnp.import_array()

cdef extern from "math.h" nogil:
    void sincos(double x, double *s, double *c)

def expsum(points, weights, Z):
    """``out[p] = sum_j weights[j] * exp(Z[p] . points[j])``."""
    cdef double[:, ::1] P = np.ascontiguousarray(points, dtype=np.float64)
    w_arr = np.ascontiguousarray(weights, dtype=np.complex128)
    z_arr = np.ascontiguousarray(Z, dtype=np.complex128)
    cdef double[::1] wr = np.ascontiguousarray(w_arr.real)
    cdef double[::1] wi = np.ascontiguousarray(w_arr.imag)
    cdef double[:, ::1] zr = np.ascontiguousarray(z_arr.real)
    cdef double[:, ::1] zi = np.ascontiguousarray(z_arr.imag)
    cdef Py_ssize_t n = zr.shape[0], m = P.shape[0], d = P.shape[1]
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t p, j, k
    cdef double sr, si, a, b, mag, c, s
    # real arithmetic throughout: complex products would go through __muldc3
    with nogil:
        for p in range(n):
            sr = 0.0
            si = 0.0
            for j in range(m):
                a = 0.0
                b = 0.0
                for k in range(d):
                    a = a + zr[p, k] * P[j, k]
                    b = b + zi[p, k] * P[j, k]
                mag = exp(a)
                sincos(b, &s, &c)
                c = mag * c
                s = mag * s
                sr = sr + wr[j] * c - wi[j] * s
                si = si + wr[j] * s + wi[j] * c
            o[p].real = sr
            o[p].imag = si
    return out


def su2_mckean(inc):
    """Endpoints of McKean products on SU(2) as unit quaternions."""
    cdef double[:, :, ::1] v = np.ascontiguousarray(inc, dtype=np.float64)
    cdef Py_ssize_t P = v.shape[0], S = v.shape[1]
    out = np.empty((P, 4))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t p, j
    cdef double aw, ax, ay, az, bw, bx, by, bz, ux, uy, uz, th, sc, nw, nx, ny, nz
    cdef double r2 = 1.0 / sqrt(2.0)
    with nogil:
        for p in range(P):
            aw = 1.0
            ax = 0.0
            ay = 0.0
            az = 0.0
            for j in range(S):
                ux = v[p, j, 0] * r2
                uy = v[p, j, 1] * r2
                uz = v[p, j, 2] * r2
                th = sqrt(ux * ux + uy * uy + uz * uz)
                if th > 1e-12:
                    sc = sin(th) / th
                else:
                    sc = 1.0 - th * th / 6.0
                bw = cos(th)
                bx = ux * sc
                by = uy * sc
                bz = uz * sc
                nw = aw * bw - ax * bx - ay * by - az * bz
                nx = aw * bx + ax * bw - (ay * bz - az * by)
                ny = aw * by + ay * bw - (az * bx - ax * bz)
                nz = aw * bz + az * bw - (ax * by - ay * bx)
                aw = nw
                ax = nx
                ay = ny
                az = nz
            o[p, 0] = aw
            o[p, 1] = ax
            o[p, 2] = ay
            o[p, 3] = az
    return out
