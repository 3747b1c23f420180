"""Compare the compiled and pure-Python column reduction kernels.

Inputs are boundary matrices of random clique complexes (vertices, edges
and triangles of an Erdos-Renyi graph) in filtration order.

    python3 benchmarks/bench_reduce.py --vertices 60 --density 0.3 --repeat 3
"""
import argparse
import itertools
import random
import timeit

from hookprod import _reduce_py

try:
    from hookprod import _reduce_ext
except ImportError:
    _reduce_ext = None


def clique_boundary(n, density, p, seed):
    rng = random.Random(seed)
    edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < density]
    eset = set(edges)
    tris = [t for t in itertools.combinations(range(n), 3)
            if (t[0], t[1]) in eset and (t[1], t[2]) in eset and (t[0], t[2]) in eset]
    simplices = [(v,) for v in range(n)] + edges + tris
    rng.shuffle(simplices)
    simplices.sort(key=len)
    pos = {s: i for i, s in enumerate(simplices)}
    columns = []
    for s in simplices:
        col = []
        if len(s) > 1:
            for k in range(len(s)):
                col.append((pos[s[:k] + s[k + 1:]], (-1) ** k % p))
        columns.append(sorted(col))
    return columns, len(simplices)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--vertices", type=int, default=60)
    ap.add_argument("--density", type=float, default=0.3)
    ap.add_argument("--prime", type=int, default=2)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    columns, n = clique_boundary(args.vertices, args.density, args.prime, args.seed)
    print(f"matrix: {n} x {n}, {sum(map(len, columns))} nonzeros, p={args.prime}")
    kernels = [("python", _reduce_py.reduce_columns)]
    if _reduce_ext is not None:
        kernels.append(("compiled", _reduce_ext.reduce_columns))
    else:
        print("compiled kernel not built; timing the fallback only")
    results, times = {}, {}
    for name, fn in kernels:
        results[name] = fn(columns, n, args.prime)
        times[name] = min(timeit.repeat(lambda: fn(columns, n, args.prime), number=1, repeat=args.repeat))
        print(f"{name:>9}: {times[name] * 1000:9.2f} ms")
    if len(results) == 2:
        assert results["python"] == results["compiled"], "kernels disagree"
        print(f"  speedup: {times['python'] / times['compiled']:.1f}x (outputs identical)")


if __name__ == "__main__":
    main()
