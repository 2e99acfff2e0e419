"""Pure numpy implementations of the hot kernels.

The compiled module ``_ckernels`` implements the same functions with the same
signatures; ``kernels`` picks one at import time.
"""
from __future__ import annotations

import numpy as np

PARALLEL_TOL = 1e-9
_HALF_PI = 0.5 * np.pi


def _sine_map(a, b, x, w):
    """Nodes/weights of the rule (x, w) pulled through t = m + h sin(pi u / 2).

    The map flattens algebraic endpoint behaviour such as (t - a)^{3/2}, which
    appears where a breakline leaves the disc.
    """
    a = np.asarray(a, dtype=float)[..., None]
    b = np.asarray(b, dtype=float)[..., None]
    m = 0.5 * (a + b)
    h = 0.5 * (b - a)
    phi = _HALF_PI * x
    return m + h * np.sin(phi), (_HALF_PI * w) * h * np.cos(phi)


def _outer_map(a, b, x, w, sine):
    """Rule on [a, b] in y, applied in theta = arcsin(y).

    In theta the disc boundary factor sqrt(1-y^2) becomes cos(theta), so panels
    ending close to (but not at) y = -1 or 1 converge as fast as the others.
    The sine map is added for half-integer weight powers.
    """
    ta = np.arcsin(np.clip(a, -1.0, 1.0))
    tb = np.arcsin(np.clip(b, -1.0, 1.0))
    th, wt = (_sine_map if sine else _linear_map)(ta, tb, x, w)
    return np.sin(th), wt * np.cos(th)


def _inner_map(R, v0, v1, x, w, trig):
    """Rule on [v0, v1] within [-R, R]; with ``trig`` use v = R sin(phi)."""
    if not trig:
        return _linear_map(v0, v1, x, w)
    R = np.asarray(R, dtype=float)
    safe = np.where(R > 0.0, R, 1.0)
    pa = np.arcsin(np.clip(v0 / safe, -1.0, 1.0))
    pb = np.arcsin(np.clip(v1 / safe, -1.0, 1.0))
    ph, wp = _linear_map(pa, pb, x, w)
    return R[..., None] * np.sin(ph), wp * R[..., None] * np.cos(ph)


def _linear_map(a, b, x, w):
    a = np.asarray(a, dtype=float)[..., None]
    b = np.asarray(b, dtype=float)[..., None]
    h = 0.5 * (b - a)
    return 0.5 * (a + b) + h * x, h * w


def _relu_pow(t, k):
    if k == 0:
        return np.where(t >= 0.0, 1.0, 0.0)
    return np.where(t > 0.0, t, 0.0) ** k


def jacobi_eigenvalues(A, tol=1e-12, max_sweeps=100):
    """Cyclic Jacobi; returns (ascending eigenvalues, sweeps used)."""
    a = np.array(A, dtype=float, copy=True)
    n = a.shape[0]
    if n == 1:
        return a.diagonal().copy(), 0
    scale = np.sqrt(np.sum(a * a))
    if scale == 0.0:
        return np.zeros(n), 0
    target = tol * scale
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        off = np.sqrt(np.sum(np.triu(a, 1) ** 2) * 2.0)
        if off <= target:
            sweeps -= 1
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                elif theta != 0.0:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                else:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q]
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :]
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
    return np.sort(np.diag(a)), sweeps


def ridge_atom_gram(dirs1, b1, dirs2, b2, k, C, p, par_const,
                    outer_x, outer_w, inner_x, inner_w, inner_sine, symmetric):
    """Weighted L2 inner products of ReLU^k ridge atoms over the unit ball.

    Entry (i, j) is int f_i(y) int g_j(c y + s v) C (1-y^2-v^2)^p dv dy with
    f_i(y) = sigma_k(y + b1_i), g_j(z) = sigma_k(z + b2_j); parallel pairs use
    the one dimensional slice weight par_const (1-y^2)^{p+1/2}.
    """
    dirs1 = np.asarray(dirs1, dtype=float)
    dirs2 = np.asarray(dirs2, dtype=float)
    n1, n2 = len(dirs1), len(dirs2)
    out = np.zeros((n1, n2))
    if symmetric:
        ii, jj = np.triu_indices(n1)
    else:
        ii, jj = np.indices((n1, n2)).reshape(2, -1)
    chunk = 4096
    for start in range(0, len(ii), chunk):
        i = ii[start:start + chunk]
        j = jj[start:start + chunk]
        out[i, j] = _atom_pairs(dirs1[i], np.asarray(b1)[i], dirs2[j], np.asarray(b2)[j],
                                k, C, p, par_const, outer_x, outer_w, inner_x, inner_w, inner_sine)
    if symmetric:
        out = np.triu(out) + np.triu(out, 1).T
    return out


def _atom_pairs(w1, b1, w2, b2, k, C, p, par_const, ox, ow, ix, iw, inner_sine):
    c = np.sum(w1 * w2, axis=1)
    perp = w2 - c[:, None] * w1
    s = np.linalg.norm(perp, axis=1)
    res = np.zeros(len(c))
    par = s < PARALLEL_TOL
    if np.any(par):
        res[par] = _atom_parallel(b1[par], b2[par], np.sign(c[par]), k, p, par_const, ox, ow, inner_sine)
    gen = ~par
    if np.any(gen):
        res[gen] = _atom_general(b1[gen], b2[gen], c[gen], s[gen], k, C, p, ox, ow, ix, iw, inner_sine)
    return res


def _atom_parallel(b1, b2, sg, k, p, par_const, ox, ow, sine):
    lower = np.maximum(-1.0, -b1)
    other = -b2 * sg
    pts = np.stack([lower, np.clip(other, lower, 1.0), np.ones_like(lower)], axis=1)
    pts = np.sort(pts, axis=1)
    y, wy = _outer_map(pts[:, :-1], pts[:, 1:], ox, ow, sine)
    base = np.clip(1.0 - y * y, 0.0, None)
    vals = _relu_pow(y + b1[:, None, None], k) * _relu_pow(sg[:, None, None] * y + b2[:, None, None], k)
    vals *= par_const * base ** (p + 0.5)
    return np.sum(vals * wy, axis=(1, 2))


def _atom_general(b1, b2, c, s, k, C, p, ox, ow, ix, iw, inner_sine):
    sine = inner_sine
    lower = np.maximum(-1.0, -b1)
    beta = -b2
    root = np.sqrt(np.clip(1.0 - beta * beta, 0.0, None))
    inside = np.abs(beta) < 1.0
    yc1 = np.where(inside, beta * c - s * root, lower)
    yc2 = np.where(inside, beta * c + s * root, lower)
    one = np.ones_like(lower)
    pts = np.stack([lower, np.clip(yc1, lower, 1.0), np.clip(yc2, lower, 1.0), np.maximum(one, lower)], axis=1)
    pts = np.sort(pts, axis=1)
    y, wy = _outer_map(pts[:, :-1], pts[:, 1:], ox, ow, sine)          # (P, 3, no)
    R = np.sqrt(np.clip(1.0 - y * y, 0.0, None))
    cc = c[:, None, None]
    ss = s[:, None, None]
    v0 = np.clip((beta[:, None, None] - cc * y) / ss, -R, R)
    v, wv = _inner_map(R, v0, R, ix, iw, inner_sine)              # (P, 3, no, ni)
    arg = cc[..., None] * y[..., None] + ss[..., None] * v + b2[:, None, None, None]
    wt = np.clip(R[..., None] ** 2 - v * v, 0.0, None)
    wt = C * (wt ** p if p != 0 else np.ones_like(wt))
    inner = np.sum(_relu_pow(arg, k) * wt * wv, axis=-1)
    outer = _relu_pow(y + b1[:, None, None], k) * inner
    return np.sum(outer * wy, axis=(1, 2))


def _pp_eval(breaks, coefs, t):
    """Evaluate a piecewise polynomial (coefs shaped (pieces, deg+1), descending);
    zero outside its breakpoints."""
    t = np.asarray(t, dtype=float)
    i = np.clip(np.searchsorted(breaks, t, side="right") - 1, 0, len(breaks) - 2)
    u = t - breaks[i]
    cf = coefs[i]
    acc = cf[..., 0].copy()
    for d in range(1, coefs.shape[1]):
        acc = acc * u + cf[..., d]
    return np.where((t >= breaks[0]) & (t <= breaks[-1]), acc, 0.0)


def pair_integral(fb, fc, gb, gc, c, s, C, p, par_const,
                  outer_x, outer_w, inner_x, inner_w, inner_sine, moment_skip=False):
    """Reduced ball integral of f(omega1.x) g(omega2.x) for piecewise polynomial
    profiles f, g given by (breaks, coefs); c = omega1.omega2, s = sqrt(1-c^2).

    With ``moment_skip`` the caller asserts that g is orthogonal to polynomials
    of the weight's degree, so outer panels on which g's support segment lies
    strictly inside the chord contribute nothing and are skipped.
    """
    fb = np.asarray(fb, dtype=float)
    gb = np.asarray(gb, dtype=float)
    lo = max(-1.0, fb[0])
    hi = min(1.0, fb[-1])
    if hi <= lo:
        return 0.0
    fin = fb[(fb > lo) & (fb < hi)]
    if s < PARALLEL_TOL:
        sg = 1.0 if c > 0 else -1.0
        gin = sg * gb
        pts = np.unique(np.concatenate([[lo, hi], fin, gin[(gin > lo) & (gin < hi)]]))
        y, wy = _outer_map(pts[:-1], pts[1:], outer_x, outer_w, inner_sine)
        vals = _pp_eval(fb, fc, y) * _pp_eval(gb, gc, sg * y)
        vals *= par_const * np.clip(1.0 - y * y, 0.0, None) ** (p + 0.5)
        return float(np.sum(vals * wy))
    beta = gb[np.abs(gb) < 1.0]
    root = np.sqrt(1.0 - beta * beta)
    cross = np.concatenate([beta * c - s * root, beta * c + s * root])
    pts = np.unique(np.concatenate([[lo, hi], fin, cross[(cross > lo) & (cross < hi)]]))
    a, b = pts[:-1], pts[1:]
    if moment_skip:
        ym = 0.5 * (a + b)
        Rm = np.sqrt(np.clip(1.0 - ym * ym, 0.0, None))
        va = (gb[0] - c * ym) / s
        vb = (gb[-1] - c * ym) / s
        live = ~(((va > -Rm) & (vb < Rm)) | (vb <= -Rm) | (va >= Rm))
        a, b = a[live], b[live]
        if len(a) == 0:
            return 0.0
    y, wy = _outer_map(a, b, outer_x, outer_w, inner_sine)
    y = y.ravel()
    wy = wy.ravel()
    fy = _pp_eval(fb, fc, y)
    keep = fy != 0.0
    if not np.any(keep):
        return 0.0
    y, wy, fy = y[keep], wy[keep], fy[keep]
    R = np.sqrt(np.clip(1.0 - y * y, 0.0, None))
    if moment_skip:
        if not float(p).is_integer():
            raise ValueError("moment_skip needs an integer weight power")
        # chord integral = minus the polynomial continuation's integral over
        # the part of g's support outside the chord
        vall = (gb[None, :] - c * y[:, None]) / s
        inner = np.zeros(len(y))
        for lo_v, hi_v in ((np.minimum(vall, -R[:, None]),) * 2, (np.maximum(vall, R[:, None]),) * 2):
            v, wv = _linear_map(lo_v[:, :-1], hi_v[:, 1:], inner_x, inner_w)
            piece = np.arange(len(gb) - 1)[None, :, None]
            z = c * y[:, None, None] + s * v
            u = z - gb[piece]
            cf = gc[piece]
            acc = cf[..., 0] + 0.0 * u
            for dd in range(1, gc.shape[1]):
                acc = acc * u + cf[..., dd]
            wt = C * (R[:, None, None] ** 2 - v * v) ** int(p)
            inner -= np.sum(acc * wt * wv, axis=(1, 2))
        return float(np.sum(fy * inner * wy))
    vb = (gb[None, :] - c * y[:, None]) / s
    vb = np.clip(vb, -R[:, None], R[:, None])
    vb = np.sort(np.concatenate([-R[:, None], vb, R[:, None]], axis=1), axis=1)
    v, wv = _inner_map(R[:, None], vb[:, :-1], vb[:, 1:], inner_x, inner_w, inner_sine)
    z = c * y[:, None, None] + s * v
    wt = np.clip(R[:, None, None] ** 2 - v * v, 0.0, None)
    wt = C * (wt ** p if p != 0 else np.ones_like(wt))
    inner = np.sum(_pp_eval(gb, gc, z) * wt * wv, axis=(1, 2))
    return float(np.sum(fy * inner * wy))
