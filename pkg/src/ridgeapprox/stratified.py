"""Stratified compression: cube subdivision of the parameter chart, local
tensor Chebyshev interpolation of the atom map, and Maurey sampling of the
interpolation residuals."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .dictionary import RidgeAtom, SparseCombo, ridge_combo
from .errors import InvalidArgument, UnsupportedDimension
from .inner import combo_distance
from .maurey import sample_counts, substream
from .numerics.weights import LEBESGUE

RELU_D1 = "relu_d1"
RELU_D2 = "relu_d2"


@dataclass(frozen=True)
class ChartSpec:
    """Parameter charts u in [-1, 1]^manifold_dim -> (omega, b).

    ``map(u, chart)`` takes an (n, manifold_dim) array and a chart index and
    returns (directions (n, d), offsets (n,)).
    """

    manifold_dim: int
    map: Callable
    kind: str
    d: int
    power: int
    n_charts: int = 1

    def params(self, u, chart: int = 0):
        u = np.atleast_2d(np.asarray(u, dtype=float))
        if u.shape[1] != self.manifold_dim:
            raise InvalidArgument(f"chart coordinates must have {self.manifold_dim} columns")
        if np.any(np.abs(u) > 1.0 + 1e-12):
            raise InvalidArgument("chart coordinates must lie in [-1, 1]")
        if not 0 <= chart < self.n_charts:
            raise InvalidArgument(f"chart index {chart} out of range")
        return self.map(np.clip(u, -1.0, 1.0), chart)

    def atom(self, u, chart: int = 0) -> RidgeAtom:
        w, b = self.params(u, chart)
        return RidgeAtom(tuple(w[0]), float(b[0]), self.power)

    def combo(self, u, coeffs, charts=None, l1_budget=None) -> SparseCombo:
        """Ridge combo of the atoms at chart coordinates u (coordinates kept)."""
        u = np.atleast_2d(np.asarray(u, dtype=float))
        charts = np.zeros(len(u), dtype=int) if charts is None else np.asarray(charts, dtype=int)
        dirs = np.zeros((len(u), self.d))
        offs = np.zeros(len(u))
        for ch in np.unique(charts):
            sel = charts == ch
            dirs[sel], offs[sel] = self.params(u[sel], int(ch))
        return ridge_combo(dirs, offs, coeffs, self.power, l1_budget, coords=u, charts=charts)


def _map_d1(u, chart):
    sign = 1.0 if chart == 0 else -1.0
    return np.full((len(u), 1), sign), 2.0 * u[:, 0]


def _map_d2(u, chart):
    th = np.pi * u[:, 0]
    return np.stack([np.cos(th), np.sin(th)], axis=1), 2.0 * u[:, 1]


def default_chart(d: int, k: int) -> ChartSpec:
    """d=1: charts omega = +1 and omega = -1 with b = 2u.
    d=2: omega = (cos pi u1, sin pi u1), b = 2 u2 (overlapping at u1 = +-1)."""
    if int(k) != k or k < 0:
        raise InvalidArgument(f"power must be a nonnegative integer, got {k!r}")
    if d == 1:
        return ChartSpec(1, _map_d1, RELU_D1, 1, int(k), n_charts=2)
    if d == 2:
        return ChartSpec(2, _map_d2, RELU_D2, 2, int(k), n_charts=1)
    raise UnsupportedDimension(f"built-in charts exist for d in {{1, 2}}, got {d}")


# interpolation -----------------------------------------------------------------

def chebyshev_roots(k: int) -> np.ndarray:
    """Roots of T_{k+1}, ascending."""
    j = np.arange(k + 1)
    return np.sort(np.cos((2 * j + 1) * np.pi / (2 * (k + 1))))


def lagrange_1d(z: np.ndarray, x) -> np.ndarray:
    """Cardinal basis values l_j(x) for nodes z; shape (len(x), len(z))."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.ones((len(x), len(z)))
    for j in range(len(z)):
        for i in range(len(z)):
            if i != j:
                out[:, j] *= (x - z[i]) / (z[j] - z[i])
    return out


@dataclass(frozen=True)
class TensorInterpolant:
    """Tensor Lagrange interpolation at Chebyshev roots on [-1, 1]^dim.

    ``sum_bound`` is sup |sum_m p_m| over a dense sample (1 up to roundoff,
    the basis being a partition of unity) and ``lebesgue_constant`` is
    sup sum_m |p_m|, the quantity that controls coefficient growth.
    """

    degree: int
    dim: int
    nodes_1d: np.ndarray
    nodes: np.ndarray
    sum_bound: float
    lebesgue_constant: float

    @property
    def size(self) -> int:
        return len(self.nodes)

    def basis(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[1] != self.dim:
            raise InvalidArgument(f"points must have {self.dim} coordinates")
        per_axis = [lagrange_1d(self.nodes_1d, x[:, a]) for a in range(self.dim)]
        out = np.ones((len(x), self.size))
        for m, idx in enumerate(itertools.product(range(self.degree + 1), repeat=self.dim)):
            for a, j in enumerate(idx):
                out[:, m] *= per_axis[a][:, j]
        return out

    def interpolate(self, node_values, x) -> np.ndarray:
        return self.basis(x) @ np.asarray(node_values)


def tensor_chebyshev_interpolant(k: int, dim: int, sample: int = 4001) -> TensorInterpolant:
    if int(k) != k or k < 0:
        raise InvalidArgument(f"degree must be a nonnegative integer, got {k!r}")
    if int(dim) != dim or dim < 1:
        raise InvalidArgument(f"dim must be a positive integer, got {dim!r}")
    z = chebyshev_roots(int(k))
    nodes = np.array(list(itertools.product(z, repeat=int(dim))), dtype=float).reshape(-1, int(dim))
    # both suprema factor over axes, so a dense 1-D sample suffices
    L = lagrange_1d(z, np.linspace(-1.0, 1.0, sample))
    lam = float(np.max(np.sum(np.abs(L), axis=1)))
    msum = float(np.max(np.abs(np.sum(L, axis=1))))
    return TensorInterpolant(int(k), int(dim), z, nodes, msum ** dim, lam ** dim)


# compression -------------------------------------------------------------------

def _perfect_root(n: int, dim: int) -> int:
    m = int(round(n ** (1.0 / dim)))
    for cand in (m - 1, m, m + 1):
        if cand >= 1 and cand ** dim == n:
            return cand
    raise InvalidArgument(f"n_cubes={n} is not a perfect {dim}-th power")


@dataclass(frozen=True)
class CubePlan:
    """Assignment of atoms to subcubes and their local interpolation weights.

    Node atoms are indexed flat as (chart, cube, node) in C order.
    """

    chart: ChartSpec
    m: int
    interp: TensorInterpolant
    cube_of: np.ndarray        # flat cube index per input atom
    chart_of: np.ndarray
    basis: np.ndarray          # (n_atoms, n_nodes) local Lagrange weights
    node_coords: np.ndarray    # (n_charts * n_cubes * n_nodes, manifold_dim)
    node_charts: np.ndarray

    @property
    def n_cubes(self) -> int:
        return self.m ** self.chart.manifold_dim

    @property
    def n_node_atoms(self) -> int:
        return len(self.node_coords)

    def node_index(self) -> np.ndarray:
        """(n_atoms, n_nodes) flat node-atom index used by each input atom."""
        base = (self.chart_of * self.n_cubes + self.cube_of) * self.interp.size
        return base[:, None] + np.arange(self.interp.size)[None, :]

    def node_combo_params(self):
        dirs = np.zeros((self.n_node_atoms, self.chart.d))
        offs = np.zeros(self.n_node_atoms)
        for ch in range(self.chart.n_charts):
            sel = self.node_charts == ch
            dirs[sel], offs[sel] = self.chart.params(self.node_coords[sel], ch)
        return dirs, offs


def cube_plan(coords, charts, chart: ChartSpec, m: int, k_interp: int) -> CubePlan:
    u = np.atleast_2d(np.asarray(coords, dtype=float))
    dim = chart.manifold_dim
    if u.shape[1] != dim:
        raise InvalidArgument(f"chart coordinates must have {dim} columns")
    ch = np.zeros(len(u), dtype=int) if charts is None else np.asarray(charts, dtype=int)
    interp = tensor_chebyshev_interpolant(k_interp, dim)
    pos = (np.clip(u, -1.0, 1.0) + 1.0) * 0.5 * m
    cell = np.clip(np.floor(pos).astype(int), 0, m - 1)
    local = 2.0 * (pos - cell) - 1.0
    cube_of = np.ravel_multi_index(tuple(cell.T), (m,) * dim) if len(u) else np.zeros(0, dtype=int)
    basis = interp.basis(local) if len(u) else np.zeros((0, interp.size))
    cells = np.array(list(itertools.product(range(m), repeat=dim)), dtype=float)
    # u-space node positions: cube corner + (z + 1) / 2 * side
    per_chart = (-1.0 + (cells[:, None, :] + 0.5 * (interp.nodes[None, :, :] + 1.0)) * (2.0 / m)).reshape(-1, dim)
    node_coords = np.tile(per_chart, (chart.n_charts, 1))
    node_charts = np.repeat(np.arange(chart.n_charts), len(per_chart))
    return CubePlan(chart, m, interp, cube_of, ch, basis, node_coords, node_charts)


def stratified_coefficients(plan: CubePlan, coeffs, rng: np.random.Generator):
    """One draw of the compressor as coefficient vectors.

    Returns (node coefficients on the plan's node atoms, coefficients on the
    input atoms, polynomial-part node coefficients alone).
    """
    a = np.asarray(coeffs, dtype=float)
    idx = plan.node_index()
    poly = np.zeros(plan.n_node_atoms)
    # np.add.at accumulates sequentially in input order, so sums are reproducible
    np.add.at(poly, idx.ravel(), (a[:, None] * plan.basis).ravel())
    n_draws = plan.n_cubes * plan.chart.n_charts
    S = float(np.sum(np.abs(a)))
    atom_part = np.zeros(len(a))
    node = poly.copy()
    if S > 0:
        counts = sample_counts(a, n_draws, rng)
        w = np.sign(a) * counts * (S / n_draws)
        atom_part = w
        np.add.at(node, idx.ravel(), (-w[:, None] * plan.basis).ravel())
    return node, atom_part, poly


@dataclass(frozen=True)
class CompressionReport:
    output: SparseCombo
    n_cubes: int
    atoms_polynomial_part: int
    atoms_residual_part: int
    l1_out: float
    l1_in: float
    l1_bound: float
    lebesgue_constant: float
    sum_bound: float
    error: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def n_atoms(self) -> int:
        return len(self.output)

    def to_dict(self) -> dict:
        doc = {
            "n_cubes": self.n_cubes,
            "n_atoms": self.n_atoms,
            "atoms_polynomial_part": self.atoms_polynomial_part,
            "atoms_residual_part": self.atoms_residual_part,
            "l1_in": self.l1_in,
            "l1_out": self.l1_out,
            "l1_bound": self.l1_bound,
            "lebesgue_constant": self.lebesgue_constant,
            "sum_bound": self.sum_bound,
            "error": self.error,
            "output": self.output.to_dict(),
        }
        doc.update(self.extra)
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def stratified_compress(f: SparseCombo, chart: ChartSpec, n_cubes: int, k_interp: int | None = None,
                        seed: int = 0, weight=LEBESGUE, reference: bool = False) -> CompressionReport:
    """Compress f = sum a_i P(u_i) to at most ((k+1)^dim + 1) n_cubes atoms per chart.

    g1 puts sum_i a_i p_m(u_i) on each local node atom P(z_m); g2 draws
    n_cubes * n_charts residuals P(u_i) - sum_m p_m(u_i) P(z_m) with
    probabilities |a_i| / sum |a|.
    """
    if f.coords is None:
        raise InvalidArgument("stratified compression needs chart coordinates for every atom")
    if len(f) == 0:
        raise InvalidArgument("cannot compress an empty combo")
    if int(n_cubes) != n_cubes or n_cubes < 1:
        raise InvalidArgument(f"n_cubes must be a positive integer, got {n_cubes!r}")
    if f.kind != "ridge" or {a.power for a in f.atoms} != {chart.power} or f.d != chart.d:
        raise InvalidArgument("combo atoms do not match the chart's dictionary")
    m = _perfect_root(int(n_cubes), chart.manifold_dim)
    k_interp = chart.power if k_interp is None else int(k_interp)
    plan = cube_plan(f.coords, f.charts, chart, m, k_interp)
    a = np.asarray(f.coeffs, dtype=float)
    node, atom_part, poly = stratified_coefficients(plan, a, substream(seed, int(n_cubes)))

    ndirs, noffs = plan.node_combo_params()
    dirs = np.concatenate([ndirs, f.directions()])
    offs = np.concatenate([noffs, f.offsets()])
    coeffs = np.concatenate([node, atom_part])
    coords = np.concatenate([plan.node_coords, f.coords])
    charts = np.concatenate([plan.node_charts, f.charts])
    keep = coeffs != 0
    l1_in = float(np.sum(np.abs(a)))
    lam = plan.interp.lebesgue_constant
    bound = (2.0 * lam + 1.0) * l1_in
    raw = ridge_combo(dirs[keep], offs[keep], coeffs[keep], chart.power, l1_budget=bound + 1e-12 * max(l1_in, 1.0),
                      coords=coords[keep], charts=charts[keep])
    out = raw.merged()
    nz = np.asarray(out.coeffs) != 0
    out = SparseCombo(tuple(t for t, k in zip(out.atoms, nz) if k), np.asarray(out.coeffs)[nz],
                      out.l1_budget, _kind="ridge")
    residual_atoms = int(np.count_nonzero(atom_part)) + int(np.count_nonzero(node - poly))
    report = CompressionReport(
        output=out,
        n_cubes=int(n_cubes),
        atoms_polynomial_part=int(np.count_nonzero(poly)),
        atoms_residual_part=residual_atoms,
        l1_out=out.l1_norm,
        l1_in=l1_in,
        l1_bound=bound,
        lebesgue_constant=lam,
        sum_bound=plan.interp.sum_bound,
    )
    if reference:
        err = combo_distance(f, out, weight)
        report = CompressionReport(**{**report.__dict__, "error": err})
    return report


def random_chart_combo(chart: ChartSpec, n_atoms: int, seed: int = 0, l1: float = 1.0) -> SparseCombo:
    """Random element of B_1 with atoms at uniform chart coordinates and
    signed coefficients of total l1 mass ``l1``."""
    rng = substream(seed, 0xC0DE)
    u = rng.uniform(-1.0, 1.0, size=(n_atoms, chart.manifold_dim))
    charts = rng.integers(0, chart.n_charts, size=n_atoms)
    mag = rng.exponential(size=n_atoms)
    coeffs = rng.choice([-1.0, 1.0], size=n_atoms) * mag / mag.sum() * l1
    return chart.combo(u, coeffs, charts, l1_budget=l1)
