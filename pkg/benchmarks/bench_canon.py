"""Compare the compiled and pure-Python canonical-form kernels.

    python3 benchmarks/bench_canon.py [--diagrams 300] [--repeat 3]

Both kernels run on the same seeded corpus; their codes must agree.
"""
import argparse
import random
import time

from knotmove import canon
from knotmove import _canon_py
from knotmove.catalog import builtin
from knotmove.randomgen import random_diagram, scramble


def corpus(n, seed):
    rng = random.Random(seed)
    out = [builtin(k) for k in ("square_knot_K", "L_fig11", "L0_fig7", "fig8")]
    while len(out) < n:
        d = random_diagram(rng, rng.randint(3, 5), rng.randint(4, 12))
        out.append(scramble(d, rng, rng.randint(0, 4)))
    return out


def run(kernel, diagrams, repeat):
    canon._canon_piece = kernel
    best = float("inf")
    codes = None
    for _ in range(repeat):
        t = time.perf_counter()
        codes = [canon.canonicalize(d) for d in diagrams]
        best = min(best, time.perf_counter() - t)
    return best, codes


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--diagrams", type=int, default=300)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    diagrams = corpus(args.diagrams, args.seed)
    crossings = sum(d.n_crossings for d in diagrams)
    print(f"{len(diagrams)} diagrams, {crossings} crossings in total")
    original = canon._canon_piece
    try:
        from knotmove import _canon
    except ImportError:
        _canon = None
        print("compiled kernel not built; run: python3 setup.py build_ext --inplace")
    rows = [("python", _canon_py.canon_piece)]
    if _canon is not None:
        rows.insert(0, ("cython", _canon.canon_piece))
    results = {}
    try:
        for name, kernel in rows:
            results[name] = run(kernel, diagrams, args.repeat)
    finally:
        canon._canon_piece = original
    for name, (secs, _) in results.items():
        print(f"{name:>7}: {secs * 1000:8.1f} ms  ({secs / len(diagrams) * 1e6:7.1f} us per diagram)")
    if len(results) == 2:
        (s1, c1), (s2, c2) = results["cython"], results["python"]
        print(f"speedup: {s2 / s1:.1f}x, codes identical: {c1 == c2}")


if __name__ == "__main__":
    main()
