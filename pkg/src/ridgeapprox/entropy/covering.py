"""Brute-force covering nets of Sigma_{n,M}: dictionary net x coefficient lattice."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import sqrt

import numpy as np

from ..errors import InvalidArgument, TooLarge
from ..inner import atom_gram, dictionary_bound
from ..maurey import substream
from ..numerics.weights import LEBESGUE
from ..stratified import ChartSpec

MAX_TERMS = 3
MAX_NET = 2_000_000
MAX_LEVEL = 14


@dataclass(frozen=True)
class CoveringNet:
    size: int
    radius: float
    dict_size: int
    lattice_size: int
    dict_radius: float
    lattice_spacing: float
    radius_bound: float
    level: int


def _grid(chart: ChartSpec, level: int):
    """Vertex grid with 2^level cells per axis; grids of successive levels are nested."""
    m = 2 ** level
    c = np.linspace(-1.0, 1.0, m + 1)
    u = np.array(list(itertools.product(c, repeat=chart.manifold_dim)), dtype=float)
    return u, m


def _atom_params(chart: ChartSpec, u, charts):
    dirs = np.zeros((len(u), chart.d))
    offs = np.zeros(len(u))
    for ch in np.unique(charts):
        sel = charts == ch
        dirs[sel], offs[sel] = chart.params(u[sel], int(ch))
    return dirs, offs


def _cell_radius(chart: ChartSpec, level: int, weight, probes: int = 5) -> float:
    """max over grid nodes of the distance from the node's atom to atoms at
    probe points of the half-spacing box around it (every parameter lies in
    such a box of its nearest node)."""
    u, m = _grid(chart, level)
    h = 1.0 / m
    offsets = np.array(list(itertools.product(np.linspace(-h, h, probes), repeat=chart.manifold_dim)))
    worst = 0.0
    for ch in range(chart.n_charts):
        cd, cb = _atom_params(chart, u, np.full(len(u), ch))
        for off in offsets:
            if not np.any(off):
                continue
            pu = np.clip(u + off, -1.0, 1.0)
            pd, pb = _atom_params(chart, pu, np.full(len(u), ch))
            for i in range(len(u)):
                G = atom_gram(np.stack([cd[i], pd[i]]), np.array([cb[i], pb[i]]), chart.power, weight)
                worst = max(worst, sqrt(max(G[0, 0] + G[1, 1] - 2 * G[0, 1], 0.0)))
    return worst


def dictionary_net(chart: ChartSpec, epsilon: float, weight=LEBESGUE):
    """Coarsest power-of-two grid whose node atoms form an epsilon-net."""
    for level in range(MAX_LEVEL + 1):
        r = _cell_radius(chart, level, weight)
        if r <= epsilon:
            u, _ = _grid(chart, level)
            uu = np.tile(u, (chart.n_charts, 1))
            ch = np.repeat(np.arange(chart.n_charts), len(u))
            return uu, ch, level, r
    raise TooLarge(f"dictionary net for epsilon={epsilon} exceeds {2 ** MAX_LEVEL} cells per axis")


def lattice_points(n: int, M: float, h: float) -> np.ndarray:
    """h Z^n intersected with the l1 ball of radius M + n h / 2 (so that
    rounding any point of the radius-M ball stays in the set)."""
    R = M + 0.5 * n * h
    r = int(np.floor(R / h + 1e-12))
    axis = np.arange(-r, r + 1)
    pts = np.array(list(itertools.product(axis, repeat=n)), dtype=float) * h
    return pts[np.sum(np.abs(pts), axis=1) <= R + 1e-12]


def build_covering_net(chart: ChartSpec, n: int, M: float, epsilon_dict: float, seed: int = 0,
                       weight=LEBESGUE, lattice_spacing: float | None = None,
                       samples: int = 200) -> CoveringNet:
    """Cover Sigma_{n,M} by S = {sum_j c_j h_j : h_j in D_eps, c in L}.

    Returns the net size |D|^n |L| and the largest distance, over ``samples``
    random elements of Sigma_{n,M}, to the nearest point of S.
    """
    if int(n) != n or n < 1 or n > MAX_TERMS:
        raise TooLarge(f"covering nets are enumerated for 1 <= n <= {MAX_TERMS}, got {n!r}")
    if M <= 0 or epsilon_dict <= 0:
        raise InvalidArgument("M and epsilon_dict must be positive")
    if samples < 200:
        raise InvalidArgument("at least 200 random elements are needed")
    n = int(n)
    h = float(epsilon_dict if lattice_spacing is None else lattice_spacing)
    u, ch, level, r_dict = dictionary_net(chart, epsilon_dict, weight)
    L = lattice_points(n, M, h)
    size = len(u) ** n * len(L)
    if size > MAX_NET:
        raise TooLarge(f"net size {size} exceeds {MAX_NET}")

    rng = substream(seed, n, 0xC0FE)
    su = rng.uniform(-1.0, 1.0, size=(samples * n, chart.manifold_dim))
    sch = rng.integers(0, chart.n_charts, size=samples * n)
    # uniform on the l1 ball: Dirichlet magnitudes, random signs, radius M U^{1/n}
    mag = rng.dirichlet(np.ones(n), size=samples) * (M * rng.uniform(size=(samples, 1)) ** (1.0 / n))
    coef = mag * rng.choice([-1.0, 1.0], size=(samples, n))

    nd, nb = _atom_params(chart, u, ch)
    sd, sb = _atom_params(chart, su, sch)
    G = atom_gram(np.concatenate([nd, sd]), np.concatenate([nb, sb]), chart.power, weight)
    nD = len(u)
    Gnn = G[:nD, :nD]
    Gns = G[:nD, nD:]
    Gss = G[nD:, nD:]

    tuples = np.array(list(itertools.product(range(nD), repeat=n)), dtype=int).reshape(-1, n)
    # Gram blocks of every net atom tuple: (T, n, n)
    Gt = Gnn[tuples[:, :, None], tuples[:, None, :]]
    worst = 0.0
    for s in range(samples):
        idx = np.arange(s * n, (s + 1) * n)
        a = coef[s]
        ff = a @ Gss[np.ix_(idx, idx)] @ a
        # cross terms <net atom j, f> for each tuple slot
        cross = Gns[:, idx] @ a                   # (nD,)
        ct = cross[tuples]                         # (T, n)
        lin = ct @ L.T                             # (T, |L|)
        quad = np.einsum("li,tij,lj->tl", L, Gt, L)
        d2 = ff - 2.0 * lin + quad
        worst = max(worst, sqrt(max(float(d2.min()), 0.0)))
    KD = dictionary_bound(chart.d, chart.power, weight)
    bound = M * r_dict + KD * 0.5 * n * h
    return CoveringNet(size=int(size), radius=worst, dict_size=nD, lattice_size=len(L),
                       dict_radius=r_dict, lattice_spacing=h, radius_bound=bound, level=level)
