#!/usr/bin/env python3
"""Benchmark the MinHash signature kernel: compiled extension vs the
pure-Python fallback.

The two backends are bit-identical; this measures only throughput on
synthetic documents. Run after an editable install:

    python benchmarks/bench_minhash.py --docs 200 --words 400
"""

import argparse
import random
import time

from corpusforge.dedup import DEFAULT_SEEDS, shingles
from corpusforge.kernels import pyfallback

try:
    from corpusforge.kernels import _native
except ImportError:
    _native = None


def make_documents(n_docs, n_words, seed=13):
    rng = random.Random(seed)
    return [
        " ".join(f"w{rng.randrange(20000)}" for _ in range(n_words))
        for _ in range(n_docs)
    ]


def signature_pass(backend, shingle_hashes, seeds):
    for hashes in shingle_hashes:
        backend.minhash_minima(hashes, seeds)


def run(backend, name, shingle_hashes, seeds, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        signature_pass(backend, shingle_hashes, seeds)
        best = min(best, time.perf_counter() - start)
    n_values = sum(len(h) for h in shingle_hashes) * len(seeds)
    print(
        f"{name:>8}: {best:8.3f} s best of {repeats}  "
        f"({n_values / best / 1e6:7.1f} M hash-mixes/s)"
    )
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--docs", type=int, default=200)
    parser.add_argument("--words", type=int, default=400)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    documents = make_documents(args.docs, args.words)
    seeds = list(DEFAULT_SEEDS)
    shingle_hashes = [
        [pyfallback.hash64(s.encode("utf-8")) for s in shingles(text)]
        for text in documents
    ]
    total_shingles = sum(len(h) for h in shingle_hashes)
    print(
        f"{args.docs} documents, {total_shingles} shingles, "
        f"k={len(seeds)} permutations"
    )

    py_time = run(pyfallback, "python", shingle_hashes, seeds, args.repeats)
    if _native is None:
        print("  native: extension not built (pip install -e . with Cython)")
        return
    native_time = run(_native, "native", shingle_hashes, seeds, args.repeats)

    sample = shingle_hashes[0]
    assert _native.minhash_minima(sample, seeds) == pyfallback.minhash_minima(
        sample, seeds
    ), "backends diverged"
    print(f"speedup: {py_time / native_time:.1f}x (outputs bit-identical)")


if __name__ == "__main__":
    main()
