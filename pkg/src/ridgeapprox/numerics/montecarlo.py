"""Seeded Monte Carlo integration over the unit ball."""
from __future__ import annotations

import numpy as np

from ..errors import InvalidArgument
from .weights import BOCHNER_RIESZ, ball_volume, check_weight

BLOCK = 1 << 16


def _block_points(d: int, n: int, seed: int, block: int) -> np.ndarray:
    """``n`` uniform points in the unit ball from substream ``block`` of ``seed``.

    Each block owns an independent Philox stream, so blocks can be evaluated
    in any order (or in parallel) with identical results.
    """
    rng = np.random.Generator(np.random.Philox(key=seed).jumped(block))
    out = np.empty((0, d))
    while out.shape[0] < n:
        need = n - out.shape[0]
        cand = rng.uniform(-1.0, 1.0, size=(int(need * 2.2) + 16, d))
        cand = cand[np.sum(cand * cand, axis=1) <= 1.0]
        out = np.vstack([out, cand[:need]])
    return out


def ball_points(d: int, samples: int, seed: int):
    """Yield the sample points block by block."""
    done = 0
    block = 0
    while done < samples:
        n = min(BLOCK, samples - done)
        yield _block_points(d, n, seed, block)
        done += n
        block += 1


def ball_monte_carlo(d: int, integrand, weight=BOCHNER_RIESZ, samples: int = 100_000,
                     seed: int = 0):
    """Estimate the weighted integral of ``integrand`` over the unit ball.

    ``integrand`` maps an (n, d) array of points to n values.  Returns
    (estimate, standard error).
    """
    tag = check_weight(weight)
    if samples < 100:
        raise InvalidArgument("ball_monte_carlo needs at least 100 samples")
    if d < 1:
        raise InvalidArgument("dimension must be positive")
    total = 0.0
    total_sq = 0.0
    for x in ball_points(d, samples, seed):
        vals = np.asarray(integrand(x), dtype=float)
        if tag == BOCHNER_RIESZ:
            vals = vals * np.clip(1.0 - np.sum(x * x, axis=1), 0.0, None) ** (d / 2)
        total += float(np.sum(vals))
        total_sq += float(np.sum(vals * vals))
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0) * samples / (samples - 1)
    vol = ball_volume(d)
    return vol * mean, vol * np.sqrt(var / samples)
