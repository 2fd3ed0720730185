"""Pure-Python hash kernels, the reference implementation.

The compiled extension in ``_native.pyx`` must produce bit-identical
results; keep the two in sync.
"""

from typing import List, Sequence

_MASK64 = (1 << 64) - 1
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def hash64(data: bytes) -> int:
    """64-bit FNV-1a over raw bytes."""
    h = _FNV_OFFSET
    for b in data:
        h = ((h ^ b) * _FNV_PRIME) & _MASK64
    return h


def mix64(x: int) -> int:
    """SplitMix64 finalizer; a bijective scramble of a 64-bit value."""
    x &= _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def minhash_minima(shingle_hashes: Sequence[int], seeds: Sequence[int]) -> List[int]:
    """Per-seed minimum of mix64(h ^ seed) over the shingle hashes.

    This is the hot loop of signature computation: len(seeds) passes over
    len(shingle_hashes) values.
    """
    minima = []
    for seed in seeds:
        best = _MASK64
        for h in shingle_hashes:
            v = mix64(h ^ seed)
            if v < best:
                best = v
        minima.append(best)
    return minima
