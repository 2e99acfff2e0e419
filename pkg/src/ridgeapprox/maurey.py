"""Maurey sampling: iid subsampling of a signed convex representation."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .dictionary import SparseCombo
from .errors import InvalidArgument
from .inner import combo_atom_gram, quadratic_distance, spectral_gram, weight_tag
from .numerics.weights import LEBESGUE


def substream(seed: int, *keys: int) -> np.random.Generator:
    """Counter-based generator keyed by (seed, *keys)."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, *[int(k) for k in keys]])
    return np.random.Generator(np.random.Philox(key=ss.generate_state(2, dtype=np.uint64)))


def _nonzero(f: SparseCombo):
    a = np.asarray(f.coeffs)
    keep = np.flatnonzero(a != 0)
    return keep, a[keep]


def sample_counts(weights: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """Multiplicities of n iid draws with probabilities |w| / sum |w|."""
    p = np.abs(weights)
    p = p / p.sum()
    idx = rng.choice(len(p), size=n, p=p)
    return np.bincount(idx, minlength=len(p))


def maurey_indices(f: SparseCombo, n: int, seed: int, *keys: int) -> np.ndarray:
    """Atom indices (into f.atoms) of n iid draws; zero-coefficient atoms never drawn."""
    if len(f) == 0:
        raise InvalidArgument("cannot sample from an empty combo")
    if int(n) != n or n < 1:
        raise InvalidArgument(f"n must be a positive integer, got {n!r}")
    keep, a = _nonzero(f)
    if len(keep) == 0:
        raise InvalidArgument("combo has zero l1 norm")
    p = np.abs(a) / np.sum(np.abs(a))
    rng = substream(seed, *keys)
    return keep[rng.choice(len(keep), size=int(n), p=p)]


def maurey_compress(f: SparseCombo, n: int, seed: int = 0) -> SparseCombo:
    """n-term unbiased estimator of f with coefficients sign(a_i) S / n, S = sum |a|."""
    idx = maurey_indices(f, n, seed)
    a = np.asarray(f.coeffs)
    S = float(np.sum(np.abs(a)))
    if np.iscomplexobj(a):
        phase = a[idx] / np.abs(a[idx])
    else:
        phase = np.sign(a[idx])
    coeffs = phase * (S / n)
    coords = None if f.coords is None else f.coords[idx]
    charts = None if f.charts is None else f.charts[idx]
    return SparseCombo(tuple(f.atoms[i] for i in idx), coeffs, S, coords, charts, _kind=f.kind)


def maurey_coefficients(f_coeffs: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """Coefficient vector (on f's own atom list) of one Maurey draw."""
    a = np.asarray(f_coeffs)
    S = np.sum(np.abs(a))
    counts = sample_counts(a, n, rng)
    unit = np.divide(a, np.abs(a), out=np.zeros_like(a), where=a != 0)
    return unit * counts * (S / n)


@dataclass(frozen=True)
class ErrorCurve:
    ns: np.ndarray
    mean_error: np.ndarray
    std_error: np.ndarray
    trials: int

    def rows(self):
        return [(int(n), float(m), float(s), self.trials)
                for n, m, s in zip(self.ns, self.mean_error, self.std_error)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "mean_error", "std_error", "trials"])
        for n, m, s, t in self.rows():
            w.writerow([n, repr(m), repr(s), t])
        return buf.getvalue()


def combo_gram(f: SparseCombo, weight=LEBESGUE) -> np.ndarray:
    if f.kind == "spectral":
        freqs = np.array([a.frequency for a in f.atoms])
        amps = np.array([a.amplitude for a in f.atoms])
        return np.outer(amps, amps) * spectral_gram(freqs, freqs, f.d, weight)
    return combo_atom_gram(f, weight)


def maurey_error_curve(f: SparseCombo, ns, trials: int = 20, seed: int = 0, weight=LEBESGUE,
                       gram: np.ndarray | None = None) -> ErrorCurve:
    """Mean and standard deviation over trials of ||f - maurey(f, n)|| for each n.

    All outputs are combinations of f's own atoms, so every error is the
    quadratic form of f's Gram matrix at a coefficient difference.
    """
    ns = np.asarray(ns, dtype=int)
    if ns.ndim != 1 or len(ns) < 1 or np.any(np.diff(ns) <= 0) or ns[0] < 1:
        raise InvalidArgument("ns must be a strictly increasing list of positive integers")
    if int(trials) != trials or trials < 1:
        raise InvalidArgument("trials must be a positive integer")
    if len(f) == 0:
        raise InvalidArgument("cannot sample from an empty combo")
    weight_tag(weight)
    G = combo_gram(f, weight) if gram is None else gram
    a = np.asarray(f.coeffs)
    if np.iscomplexobj(a):
        raise InvalidArgument("error curves are computed for real coefficients")
    means, stds = [], []
    for n in ns:
        errs = np.array([quadratic_distance(G, a, maurey_coefficients(a, int(n), substream(seed, n, t)))
                         for t in range(trials)])
        means.append(errs.mean())
        stds.append(errs.std(ddof=1) if trials > 1 else 0.0)
    return ErrorCurve(ns, np.array(means), np.array(stds), int(trials))
