# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the functions in ``_pykernels`` (same signatures)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, sin, cos, asin, pow, fabs, M_PI

cnp.import_array()

cdef double PARALLEL_TOL = 1e-9


cdef inline double relu_pow(double t, int k) nogil:
    if k == 0:
        return 1.0 if t >= 0.0 else 0.0
    if t <= 0.0:
        return 0.0
    cdef double r = t
    cdef int i
    for i in range(1, k):
        r *= t
    return r


cdef inline double wpow(double base, double p) nogil:
    if base <= 0.0:
        return 0.0 if p > 0.0 else 1.0
    if p == 0.0:
        return 1.0
    if p == 1.0:
        return base
    if p == 2.0:
        return base * base
    return pow(base, p)


cdef inline double clip1(double t) nogil:
    if t < -1.0:
        return -1.0
    if t > 1.0:
        return 1.0
    return t


cdef inline void outer_node(double ta, double tb, double x, double w, bint sine,
                            double* y, double* wy) nogil:
    # rule in theta = asin(y) on [ta, tb], optionally sine-mapped
    cdef double m = 0.5 * (ta + tb), h = 0.5 * (tb - ta)
    cdef double phi, th
    if sine:
        phi = 0.5 * M_PI * x
        th = m + h * sin(phi)
        wy[0] = 0.5 * M_PI * w * h * cos(phi) * cos(th)
    else:
        th = m + h * x
        wy[0] = w * h * cos(th)
    y[0] = sin(th)


cdef inline void inner_node(double R, double va, double vb, double x, double w, bint trig,
                            double* v, double* wv) nogil:
    cdef double m, h, ph
    if not trig:
        m = 0.5 * (va + vb)
        h = 0.5 * (vb - va)
        v[0] = m + h * x
        wv[0] = h * w
        return
    if R <= 0.0:
        v[0] = 0.0
        wv[0] = 0.0
        return
    m = asin(clip1(va / R))
    h = asin(clip1(vb / R))
    ph = 0.5 * (m + h) + 0.5 * (h - m) * x
    v[0] = R * sin(ph)
    wv[0] = 0.5 * (h - m) * w * R * cos(ph)


cdef inline double piece_eval(const double[:, ::1] cf, Py_ssize_t i, double u) nogil:
    cdef double acc = cf[i, 0]
    cdef Py_ssize_t d
    for d in range(1, cf.shape[1]):
        acc = acc * u + cf[i, d]
    return acc


cdef inline double ipow(double base, int n) nogil:
    cdef double r = 1.0
    cdef int i
    for i in range(n):
        r *= base
    return r


cdef inline double pp_eval(const double[::1] br, const double[:, ::1] cf, double t) nogil:
    cdef Py_ssize_t n = br.shape[0]
    if t < br[0] or t > br[n - 1]:
        return 0.0
    cdef Py_ssize_t lo = 0, hi = n - 1, mid
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if br[mid] <= t:
            lo = mid
        else:
            hi = mid
    cdef double u = t - br[lo]
    cdef double acc = cf[lo, 0]
    cdef Py_ssize_t d
    for d in range(1, cf.shape[1]):
        acc = acc * u + cf[lo, d]
    return acc


def jacobi_eigenvalues(A, double tol=1e-12, int max_sweeps=100):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] arr = np.array(A, dtype=np.float64, order="C", copy=True)
    cdef double[:, ::1] a = arr
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j, p, q
    cdef double scale = 0.0, off, target, apq, theta, t, c, s, x, y
    cdef int sweeps = 0
    if n == 1:
        return np.array([a[0, 0]]), 0
    for i in range(n):
        for j in range(n):
            scale += a[i, j] * a[i, j]
    scale = sqrt(scale)
    if scale == 0.0:
        return np.zeros(n), 0
    target = tol * scale
    with nogil:
        while sweeps < max_sweeps:
            off = 0.0
            for i in range(n):
                for j in range(n):
                    if i != j:
                        off += a[i, j] * a[i, j]
            if sqrt(off) <= target:
                break
            sweeps += 1
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if apq == 0.0:
                        continue
                    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                    if fabs(theta) > 1e150:
                        t = 0.5 / theta
                    elif theta != 0.0:
                        t = (1.0 if theta > 0 else -1.0) / (fabs(theta) + sqrt(theta * theta + 1.0))
                    else:
                        t = 1.0
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    for i in range(n):
                        x = a[i, p]
                        y = a[i, q]
                        a[i, p] = c * x - s * y
                        a[i, q] = s * x + c * y
                    for j in range(n):
                        x = a[p, j]
                        y = a[q, j]
                        a[p, j] = c * x - s * y
                        a[q, j] = s * x + c * y
                    a[p, q] = 0.0
                    a[q, p] = 0.0
    w = np.array([a[i, i] for i in range(n)])
    w.sort()
    return w, sweeps


cdef double atom_pair(const double[::1] w1, double b1, const double[::1] w2, double b2, int k,
                      double C, double p, double par_const,
                      const double[::1] ox, const double[::1] ow, const double[::1] ix, const double[::1] iw,
                      bint inner_sine) nogil:
    cdef Py_ssize_t dim = w1.shape[0], i, a, b, e
    cdef double c = 0.0, s = 0.0, tmp, lower, beta, root, sg
    cdef double pts[4]
    cdef double y, wy, R, v0, v, wv, m, h, phi, inner, arg, total = 0.0, base, m2, h2
    cdef int npts
    for i in range(dim):
        c += w1[i] * w2[i]
    for i in range(dim):
        tmp = w2[i] - c * w1[i]
        s += tmp * tmp
    s = sqrt(s)
    lower = -b1 if -b1 > -1.0 else -1.0
    if lower >= 1.0:
        return 0.0
    if s < PARALLEL_TOL:
        sg = 1.0 if c > 0 else -1.0
        pts[0] = lower
        pts[1] = -b2 * sg
        if pts[1] < lower:
            pts[1] = lower
        if pts[1] > 1.0:
            pts[1] = 1.0
        pts[2] = 1.0
        for a in range(2):
            if pts[a + 1] <= pts[a]:
                continue
            m = asin(clip1(pts[a]))
            h = asin(clip1(pts[a + 1]))
            for e in range(ox.shape[0]):
                outer_node(m, h, ox[e], ow[e], inner_sine, &y, &wy)
                base = 1.0 - y * y
                total += wy * relu_pow(y + b1, k) * relu_pow(sg * y + b2, k) * par_const * wpow(base, p + 0.5)
        return total
    beta = -b2
    pts[0] = lower
    pts[3] = 1.0
    if fabs(beta) < 1.0:
        root = sqrt(1.0 - beta * beta)
        pts[1] = beta * c - s * root
        pts[2] = beta * c + s * root
    else:
        pts[1] = lower
        pts[2] = lower
    for a in range(1, 3):
        if pts[a] < lower:
            pts[a] = lower
        if pts[a] > 1.0:
            pts[a] = 1.0
    if pts[1] > pts[2]:
        tmp = pts[1]
        pts[1] = pts[2]
        pts[2] = tmp
    for a in range(3):
        if pts[a + 1] <= pts[a]:
            continue
        m = asin(clip1(pts[a]))
        h = asin(clip1(pts[a + 1]))
        for e in range(ox.shape[0]):
            outer_node(m, h, ox[e], ow[e], inner_sine, &y, &wy)
            base = 1.0 - y * y
            R = sqrt(base) if base > 0.0 else 0.0
            v0 = (beta - c * y) / s
            if v0 < -R:
                v0 = -R
            if v0 > R:
                v0 = R
            inner = 0.0
            if R > v0:
                for b in range(ix.shape[0]):
                    inner_node(R, v0, R, ix[b], iw[b], inner_sine, &v, &wv)
                    arg = c * y + s * v + b2
                    inner += wv * relu_pow(arg, k) * C * wpow(R * R - v * v, p)
            total += wy * relu_pow(y + b1, k) * inner
    return total


def ridge_atom_gram(dirs1, b1, dirs2, b2, int k, double C, double p, double par_const,
                    outer_x, outer_w, inner_x, inner_w, bint inner_sine, bint symmetric):
    cdef const double[:, ::1] W1 = np.ascontiguousarray(dirs1, dtype=np.float64)
    cdef const double[:, ::1] W2 = np.ascontiguousarray(dirs2, dtype=np.float64)
    cdef const double[::1] B1 = np.ascontiguousarray(b1, dtype=np.float64)
    cdef const double[::1] B2 = np.ascontiguousarray(b2, dtype=np.float64)
    cdef const double[::1] ox = np.ascontiguousarray(outer_x, dtype=np.float64)
    cdef const double[::1] ow = np.ascontiguousarray(outer_w, dtype=np.float64)
    cdef const double[::1] ix = np.ascontiguousarray(inner_x, dtype=np.float64)
    cdef const double[::1] iw = np.ascontiguousarray(inner_w, dtype=np.float64)
    cdef Py_ssize_t n1 = W1.shape[0], n2 = W2.shape[0], i, j, j0
    out = np.zeros((n1, n2))
    cdef double[:, ::1] G = out
    with nogil:
        for i in range(n1):
            j0 = i if symmetric else 0
            for j in range(j0, n2):
                G[i, j] = atom_pair(W1[i], B1[i], W2[j], B2[j], k, C, p, par_const,
                                    ox, ow, ix, iw, inner_sine)
                if symmetric:
                    G[j, i] = G[i, j]
    return out


def pair_integral(fb_, fc_, gb_, gc_, double c, double s, double C, double p, double par_const,
                  outer_x, outer_w, inner_x, inner_w, bint inner_sine, bint moment_skip=False):
    cdef const double[::1] fb = np.ascontiguousarray(fb_, dtype=np.float64)
    cdef const double[:, ::1] fc = np.ascontiguousarray(fc_, dtype=np.float64)
    cdef const double[::1] gb = np.ascontiguousarray(gb_, dtype=np.float64)
    cdef const double[:, ::1] gc = np.ascontiguousarray(gc_, dtype=np.float64)
    cdef const double[::1] ox = np.ascontiguousarray(outer_x, dtype=np.float64)
    cdef const double[::1] ow = np.ascontiguousarray(outer_w, dtype=np.float64)
    cdef const double[::1] ix = np.ascontiguousarray(inner_x, dtype=np.float64)
    cdef const double[::1] iw = np.ascontiguousarray(inner_w, dtype=np.float64)
    cdef double lo = fb[0] if fb[0] > -1.0 else -1.0
    cdef double hi = fb[fb.shape[0] - 1] if fb[fb.shape[0] - 1] < 1.0 else 1.0
    if hi <= lo:
        return 0.0
    cdef Py_ssize_t ngb = gb.shape[0], a, e, b, q, nv
    cdef double sg, y, wy, m, h, phi, fy, R, inner, v, wv, total = 0.0, beta, root
    pts = [lo, hi]
    for a in range(fb.shape[0]):
        if lo < fb[a] < hi:
            pts.append(fb[a])
    if s < PARALLEL_TOL:
        sg = 1.0 if c > 0 else -1.0
        for a in range(ngb):
            if lo < sg * gb[a] < hi:
                pts.append(sg * gb[a])
    else:
        for a in range(ngb):
            beta = gb[a]
            if fabs(beta) < 1.0:
                root = sqrt(1.0 - beta * beta)
                for y in (beta * c - s * root, beta * c + s * root):
                    if lo < y < hi:
                        pts.append(y)
    cdef double[::1] P = np.unique(np.asarray(pts, dtype=np.float64))
    cdef double[::1] vb = np.empty(ngb + 2)
    cdef double m2, h2, tmp, ym, va, vc
    cdef int ip = <int>p
    if moment_skip and p != ip:
        raise ValueError("moment_skip needs an integer weight power")
    with nogil:
        for a in range(P.shape[0] - 1):
            if moment_skip and s >= PARALLEL_TOL:
                # g's support segment strictly inside (or outside) the chord on
                # the whole panel: the inner integral vanishes
                ym = 0.5 * (P[a] + P[a + 1])
                R = 1.0 - ym * ym
                R = sqrt(R) if R > 0.0 else 0.0
                m2 = (gb[0] - c * ym) / s
                h2 = (gb[ngb - 1] - c * ym) / s
                if (m2 > -R and h2 < R) or h2 <= -R or m2 >= R:
                    continue
            m = asin(clip1(P[a]))
            h = asin(clip1(P[a + 1]))
            for e in range(ox.shape[0]):
                outer_node(m, h, ox[e], ow[e], inner_sine, &y, &wy)
                fy = pp_eval(fb, fc, y)
                if fy == 0.0:
                    continue
                if s < PARALLEL_TOL:
                    total += wy * fy * pp_eval(gb, gc, sg * y) * par_const * wpow(1.0 - y * y, p + 0.5)
                    continue
                R = 1.0 - y * y
                R = sqrt(R) if R > 0.0 else 0.0
                if moment_skip:
                    # integral over the chord = minus the integral of the
                    # polynomial continuation over the part of g's support
                    # outside the chord
                    inner = 0.0
                    for b in range(ngb - 1):
                        m2 = (gb[b] - c * y) / s
                        h2 = (gb[b + 1] - c * y) / s
                        for sg in (-1.0, 1.0):
                            if sg < 0:
                                va = m2 if m2 < -R else -R
                                vc = h2 if h2 < -R else -R
                            else:
                                va = m2 if m2 > R else R
                                vc = h2 if h2 > R else R
                            if vc <= va:
                                continue
                            for q in range(ix.shape[0]):
                                v = 0.5 * (va + vc) + 0.5 * (vc - va) * ix[q]
                                wv = 0.5 * (vc - va) * iw[q]
                                inner -= wv * piece_eval(gc, b, c * y + s * v - gb[b]) * C * ipow(R * R - v * v, ip)
                    total += wy * fy * inner
                    continue
                # inner breakpoints: g's breaks mapped to v, clipped to [-R, R], sorted
                nv = 0
                vb[nv] = -R
                nv += 1
                for b in range(ngb):
                    tmp = (gb[b] - c * y) / s
                    if -R < tmp < R:
                        q = nv
                        while q > 1 and vb[q - 1] > tmp:
                            vb[q] = vb[q - 1]
                            q -= 1
                        vb[q] = tmp
                        nv += 1
                vb[nv] = R
                nv += 1
                inner = 0.0
                for b in range(nv - 1):
                    if vb[b + 1] <= vb[b]:
                        continue
                    for q in range(ix.shape[0]):
                        inner_node(R, vb[b], vb[b + 1], ix[q], iw[q], inner_sine, &v, &wv)
                        inner += wv * pp_eval(gb, gc, c * y + s * v) * C * wpow(R * R - v * v, p)
                total += wy * fy * inner
    return total
