"""Rate sweeps: error (or certified bound) against n, with log-log fits."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .dictionary import SparseCombo
from .entropy.certificate import certify_lower_bound, find_admissible_a
from .entropy.packing import build_ridge_packing
from .entropy.profile import build_vanishing_moment_profile
from .errors import InvalidArgument
from .inner import atom_gram, quadratic_distance, weight_tag
from .maurey import maurey_error_curve, substream
from .numerics.weights import LEBESGUE
from .stratified import cube_plan, default_chart, random_chart_combo, stratified_coefficients

MAUREY = "maurey"
STRATIFIED = "stratified"
ENTROPY_LB = "entropy_lb"
MODES = (MAUREY, STRATIFIED, ENTROPY_LB)
ZERO_ERROR = 1e-10


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    r_squared: float
    points: tuple

    def to_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "r_squared": self.r_squared,
                "points": [list(p) for p in self.points]}


def fit_slope(points) -> RateFit:
    """Ordinary least squares of ln(error) on ln(n)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
        raise InvalidArgument("need at least two (n, error) points")
    if np.any(~np.isfinite(pts)) or np.any(pts <= 0):
        raise InvalidArgument("n and error values must be positive")
    x, y = np.log(pts[:, 0]), np.log(pts[:, 1])
    if np.ptp(x) == 0:
        raise InvalidArgument("n values must not all coincide")
    A = np.stack([x, np.ones_like(x)], axis=1)
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else float(np.clip(1.0 - np.sum(resid ** 2) / ss_tot, 0.0, 1.0))
    return RateFit(float(slope), float(intercept), r2, tuple(zip(x.tolist(), y.tolist())))


def theoretical_exponent(mode: str, d: int, k: int) -> float:
    if mode == MAUREY:
        return -0.5
    if mode in (STRATIFIED, ENTROPY_LB):
        return -0.5 - (2 * k + 1) / (2.0 * d)
    raise InvalidArgument(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    d: int = 2
    k: int = 0
    seed: int = 0
    n_grid: tuple = (16, 32, 64, 128, 256)
    trials: int = 20
    weight: str = LEBESGUE
    output: str | None = None
    n_atoms: int = 200
    N_grid: tuple = (8, 16, 32, 64)
    a: float | None = None

    def __post_init__(self):
        grid = tuple(int(n) for n in self.n_grid)
        if len(grid) < 4 or any(b <= a for a, b in zip(grid, grid[1:])) or grid[0] < 1:
            raise InvalidArgument("n grid must be strictly increasing with at least 4 positive points")
        object.__setattr__(self, "n_grid", grid)
        object.__setattr__(self, "N_grid", tuple(int(n) for n in self.N_grid))
        if int(self.trials) != self.trials or self.trials < 1:
            raise InvalidArgument("trials must be a positive integer")
        if self.n_atoms < 1:
            raise InvalidArgument("n_atoms must be positive")
        weight_tag(self.weight)

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(doc) - known
        if extra:
            raise InvalidArgument(f"unknown config keys: {sorted(extra)}")
        return cls(**doc)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ExperimentResult:
    mode: str
    config: ExperimentConfig
    columns: list
    rows: list
    fit: RateFit | None
    theory: float
    fit_points: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def fit_skipped(self) -> bool:
        return self.fit is None

    def summary(self) -> dict:
        doc = {
            "mode": self.mode,
            "d": self.config.d,
            "k": self.config.k,
            "theoretical_exponent": self.theory,
            "fitted_slope": None if self.fit is None else self.fit.slope,
            "abs_difference": None if self.fit is None else abs(self.fit.slope - self.theory),
            "r_squared": None if self.fit is None else self.fit.r_squared,
            "fit_skipped": self.fit_skipped,
            "columns": self.columns,
            "rows": self.rows,
        }
        doc.update(self.extra)
        return doc

    def to_csv(self, error: str | None = None) -> str:
        return rows_to_csv(self.columns, self.rows, error)


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return ""
    return str(v)


def rows_to_csv(columns, rows, error: str | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    if error is not None:
        w.writerow(["# error", error])
    return buf.getvalue()


def _maurey(cfg: ExperimentConfig, f: SparseCombo | None, rows: list):
    chart = default_chart(cfg.d, cfg.k)
    f = f or random_chart_combo(chart, cfg.n_atoms, cfg.seed)
    curve = maurey_error_curve(f, cfg.n_grid, cfg.trials, cfg.seed, cfg.weight)
    for n, m, s, t in curve.rows():
        rows.append({"n": n, "mean_error": m, "std_error": s, "trials": t})
    return ["n", "mean_error", "std_error", "trials"], [(r["n"], r["mean_error"]) for r in rows], {}


def stratified_sizes(cfg: ExperimentConfig, chart):
    """Cube counts m^dim per chart whose output budgets best match the n grid."""
    per = ((cfg.k + 1) ** chart.manifold_dim + 1) * chart.n_charts
    ms = []
    for n in cfg.n_grid:
        m = max(1, int(round((n / per) ** (1.0 / chart.manifold_dim))))
        if not ms or m > ms[-1]:
            ms.append(m)
    return [(m, per * m ** chart.manifold_dim) for m in ms]


def _stratified(cfg: ExperimentConfig, f: SparseCombo | None, rows: list):
    chart = default_chart(cfg.d, cfg.k)
    f = f or random_chart_combo(chart, cfg.n_atoms, cfg.seed)
    if f.coords is None:
        raise InvalidArgument("stratified experiments need chart coordinates on the input")
    sizes = stratified_sizes(cfg, chart)
    plans = [cube_plan(f.coords, f.charts, chart, m, cfg.k) for m, _ in sizes]
    dirs, offs = [f.directions()], [f.offsets()]
    for p in plans:
        nd, nb = p.node_combo_params()
        dirs.append(nd)
        offs.append(nb)
    # one Gram over the input atoms and every node atom of every cube grid
    G = atom_gram(np.concatenate(dirs), np.concatenate(offs), cfg.k, cfg.weight)
    a = np.asarray(f.coeffs, dtype=float)
    n_in = len(a)
    full_a = np.zeros(len(G))
    full_a[:n_in] = a
    maurey = maurey_error_curve(f, [n for _, n in sizes], cfg.trials, cfg.seed, cfg.weight,
                                gram=G[:n_in, :n_in])
    start = n_in
    for (m, n), plan, me, ms in zip(sizes, plans, maurey.mean_error, maurey.std_error):
        errs, counts = [], []
        for t in range(cfg.trials):
            node, atom_part, _ = stratified_coefficients(plan, a, substream(cfg.seed, m, t))
            g = np.zeros(len(G))
            g[:n_in] = atom_part
            g[start:start + plan.n_node_atoms] = node
            errs.append(quadratic_distance(G, full_a, g))
            counts.append(int(np.count_nonzero(g)))
        start += plan.n_node_atoms
        errs = np.array(errs)
        rows.append({"n": n, "n_cubes": plan.n_cubes, "mean_error": float(errs.mean()),
                     "std_error": float(errs.std(ddof=1)) if cfg.trials > 1 else 0.0,
                     "mean_atoms": float(np.mean(counts)), "trials": cfg.trials,
                     "maurey_mean_error": float(me), "maurey_std_error": float(ms)})
    cols = ["n", "n_cubes", "mean_error", "std_error", "mean_atoms", "trials",
            "maurey_mean_error", "maurey_std_error"]
    return cols, [(r["n"], r["mean_error"]) for r in rows], {}


def _entropy(cfg: ExperimentConfig, rows: list):
    prof = build_vanishing_moment_profile(cfg.d, cfg.k)
    if cfg.a is None:
        a, certs = find_admissible_a(cfg.d, cfg.k, cfg.N_grid, profile=prof)
    else:
        a = float(cfg.a)
        # lazily, so rows finished before a failure are kept
        certs = (certify_lower_bound(build_ridge_packing(cfg.d, cfg.k, N, a, prof)) for N in cfg.N_grid)
    for N, c in zip(cfg.N_grid, certs):
        rows.append({"N": N, "n_count": c.n_count, "a": a, "delta": c.delta,
                     "min_norm_sq": c.min_norm_sq, "lambda_min": c.lambda_min,
                     "max_offdiag_ratio": c.max_offdiag_ratio, "diag_dominant": c.diag_dominant,
                     "bound_corollary": c.bound_corollary, "bound_lemma": c.bound_lemma,
                     "bound": c.bound, "mode": c.mode})
    cols = ["N", "n_count", "a", "delta", "min_norm_sq", "lambda_min", "max_offdiag_ratio",
            "diag_dominant", "bound_corollary", "bound_lemma", "bound", "mode"]
    return cols, [(r["n_count"], r["bound"]) for r in rows], {"a": a}


def run_rate_experiment(cfg: ExperimentConfig, mode: str, f: SparseCombo | None = None,
                        echo=None) -> ExperimentResult:
    """Run one sweep, write its CSV to cfg.output (if set) and fit the slope.

    On failure the rows finished so far are written, followed by an error row.
    """
    if mode not in MODES:
        raise InvalidArgument(f"mode must be one of {MODES}, got {mode!r}")
    theory = theoretical_exponent(mode, cfg.d, cfg.k)
    rows: list = []
    try:
        if mode == MAUREY:
            cols, pts, extra = _maurey(cfg, f, rows)
        elif mode == STRATIFIED:
            cols, pts, extra = _stratified(cfg, f, rows)
        else:
            cols, pts, extra = _entropy(cfg, rows)
    except Exception as exc:
        if cfg.output:
            cols = list(rows[0]) if rows else ["status"]
            Path(cfg.output).write_text(rows_to_csv(cols, rows, f"{type(exc).__name__}: {exc}"))
        raise
    if all(e > ZERO_ERROR for _, e in pts):
        fit = fit_slope(pts)
    else:
        fit = None
    res = ExperimentResult(mode, cfg, cols, rows, fit, theory, pts, extra)
    if cfg.output:
        Path(cfg.output).write_text(res.to_csv())
    if echo is not None:
        slope = "skipped" if fit is None else f"{fit.slope:.4f}"
        echo(f"{mode}: theoretical exponent {theory:.4f}, fitted slope {slope}")
    return res


def write_svg(result: ExperimentResult, path, width: int = 480, height: int = 360) -> str:
    """Log-log scatter of the sweep with a line of the theoretical slope
    through the points' centroid."""
    pts = np.asarray(result.fit_points, dtype=float)
    pts = pts[np.all(pts > 0, axis=1)]
    pad = 50
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
           f'<rect width="{width}" height="{height}" fill="white"/>']
    if len(pts):
        lx, ly = np.log10(pts[:, 0]), np.log10(pts[:, 1])
        x0, x1 = lx.min() - 0.1, lx.max() + 0.1
        cy = ly.mean() + result.theory * (np.array([x0, x1]) - lx.mean())
        y0, y1 = min(ly.min(), cy.min()) - 0.1, max(ly.max(), cy.max()) + 0.1
        X = lambda v: pad + (v - x0) / (x1 - x0) * (width - 2 * pad)
        Y = lambda v: height - pad - (v - y0) / (y1 - y0) * (height - 2 * pad)
        out.append(f'<line x1="{X(x0):.1f}" y1="{Y(cy[0]):.1f}" x2="{X(x1):.1f}" y2="{Y(cy[1]):.1f}" '
                   f'stroke="gray" stroke-dasharray="4 3"/>')
        for a, b in zip(lx, ly):
            out.append(f'<circle cx="{X(a):.1f}" cy="{Y(b):.1f}" r="3" fill="black"/>')
        out.append(f'<text x="{pad}" y="{pad - 20}" font-size="12">{result.mode}: slope '
                   f'{"n/a" if result.fit is None else f"{result.fit.slope:.3f}"}, theory {result.theory:.3f}</text>')
        out.append(f'<text x="{width / 2:.0f}" y="{height - 15}" font-size="12">log10 n</text>')
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    Path(path).write_text(text)
    return text


def summary_json(result: ExperimentResult) -> str:
    return json.dumps(result.summary(), indent=2)
