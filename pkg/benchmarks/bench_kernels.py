"""Compare the compiled and pure-Python search kernels on the same instances.

    python3 benchmarks/bench_kernels.py [--n 5] [--count 20] [--seed 0]

Both backends must return identical results; timings are printed per kind.
"""
from __future__ import annotations

import argparse
import random
import time

from plslab import kernels
from plslab.corpus import corrupted_corpus
from plslab.languages import Language
from plslab.oracles import kernel_arrays

KINDS = {0: Language.ACYCLIC, 1: Language.ST_L, 2: Language.ST_P}


def run(n: int, count: int, seed: int) -> list[dict]:
    impls = kernels.backends()
    rows = []
    for kind, lang in KINDS.items():
        corpus = corrupted_corpus(lang, count, seed, min_n=n, max_n=n)
        arrays = [kernel_arrays(inst) for inst in corpus]
        results = {}
        for name, mod in impls.items():
            t = time.perf_counter()
            results[name] = [mod.min_rejections(kind, *a, n + 1, 10**9) for a in arrays]
            rows.append({"kind": lang.value, "backend": name, "n": n, "instances": len(corpus),
                         "seconds": time.perf_counter() - t})
        first = next(iter(results.values()))
        for name, res in results.items():
            if [r[0] for r in res] != [r[0] for r in first]:
                raise SystemExit(f"backend {name} disagrees on {lang.value}")
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    random.seed(args.seed)
    rows = run(args.n, args.count, args.seed)
    base = {r["kind"]: r["seconds"] for r in rows if r["backend"] == "python"}
    print(f"{'language':<10}{'backend':<10}{'instances':>10}{'seconds':>10}{'speedup':>9}")
    for r in rows:
        speed = base[r["kind"]] / r["seconds"] if r["seconds"] else float("inf")
        print(f"{r['kind']:<10}{r['backend']:<10}{r['instances']:>10}{r['seconds']:>10.3f}{speed:>8.1f}x")


if __name__ == "__main__":
    main()
