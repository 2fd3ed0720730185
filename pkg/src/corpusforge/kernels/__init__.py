"""Hash kernels used for fingerprinting and MinHash signatures.

Two interchangeable backends exist: a compiled extension (``_native``,
built from Cython) and a pure-Python fallback (``pyfallback``). They are
bit-identical by contract; ``BACKEND`` records which one is active.
Setting the ``CORPUSFORGE_PURE_PYTHON`` environment variable forces the
fallback, which is mainly useful for benchmarking the two side by side.
"""

import os

BACKEND = "python"
if not os.environ.get("CORPUSFORGE_PURE_PYTHON"):
    try:
        from corpusforge.kernels._native import hash64, minhash_minima, mix64

        BACKEND = "native"
    except ImportError:
        pass

if BACKEND == "python":
    from corpusforge.kernels.pyfallback import hash64, minhash_minima, mix64

__all__ = ["BACKEND", "hash64", "minhash_minima", "mix64"]
