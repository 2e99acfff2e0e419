"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json out.json]

Each case is run on both backends; the table reports best-of-repeat wall
time, the speedup and the largest absolute difference between the outputs.
"""
from __future__ import annotations

import argparse
import json
import time

import numpy as np

from ridgeapprox import kernels
from ridgeapprox.entropy import build_ridge_packing, interacting_pairs
from ridgeapprox.inner import _inner_rule, weight_params
from ridgeapprox.numerics.quadrature import gauss_legendre_rule


def _atom_gram_case(n, k, tag):
    rng = np.random.default_rng(0)
    th = rng.uniform(-np.pi, np.pi, n)
    D = np.stack([np.cos(th), np.sin(th)], axis=1)
    b = rng.uniform(-2, 2, n)
    C, p, pc = weight_params(2, tag)
    outer = gauss_legendre_rule(24)
    inner, sine = _inner_rule(k, p, outer)

    def run(mod):
        return mod.ridge_atom_gram(D, b, D, b, k, C, p, pc, outer.nodes, outer.weights,
                                   inner.nodes, inner.weights, sine, True)
    return f"ridge_atom_gram n={n} k={k} {tag}", run


def _packing_case(N, a=0.25):
    pk = build_ridge_packing(2, 0, N, a)
    C, p, pc = weight_params(2, "bochner_riesz")
    inner = gauss_legendre_rule((pk.profile.pieces.degree + 2 * int(p)) // 2 + 1)
    outer = gauss_legendre_rule(16)
    dirs = pk.directions.dirs
    c = float(dirs[0] @ dirs[1])
    s = float(np.linalg.norm(dirs[1] - c * dirs[0]))
    sh = [int(l) for l in pk.shifts]
    pairs = [(pk._profiles[sh[i]], pk._profiles[sh[j]]) for i, j in interacting_pairs(pk, c, s)]

    def run(mod):
        return np.array([mod.pair_integral(fb, fc, gb, gc, c, s, C, p, pc, outer.nodes, outer.weights,
                                           inner.nodes, inner.weights, False, True)
                         for (fb, fc), (gb, gc) in pairs])
    return f"packing pair_integral N={N} ({len(pairs)} pairs)", run


def _jacobi_case(n):
    rng = np.random.default_rng(1)
    A = rng.standard_normal((n, n))
    A = A + A.T

    def run(mod):
        return mod.jacobi_eigenvalues(A, 1e-12, 100)[0]
    return f"jacobi_eigenvalues n={n}", run


def _time(fn, repeat):
    best, out = np.inf, None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", help="write results to this path")
    args = ap.parse_args(argv)
    backends = kernels.backends()
    if "compiled" not in backends:
        print("compiled extension not built; only the fallback is available")
    cases = [_atom_gram_case(100, 0, "lebesgue"), _atom_gram_case(100, 1, "bochner_riesz"),
             _packing_case(16), _jacobi_case(60)]
    results = []
    print(f"{'case':48s} {'python [s]':>11s} {'compiled [s]':>13s} {'speedup':>8s} {'max diff':>10s}")
    for name, run in cases:
        tp, outp = _time(lambda: run(backends["python"]), args.repeat)
        row = {"case": name, "python_s": tp}
        if "compiled" in backends:
            tc, outc = _time(lambda: run(backends["compiled"]), args.repeat)
            diff = float(np.max(np.abs(np.asarray(outp) - np.asarray(outc))))
            row.update(compiled_s=tc, speedup=tp / tc, max_abs_diff=diff)
            print(f"{name:48s} {tp:11.4f} {tc:13.4f} {tp / tc:8.1f} {diff:10.2e}")
        else:
            print(f"{name:48s} {tp:11.4f}")
        results.append(row)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(results, fh, indent=2)
    return results


if __name__ == "__main__":
    main()
