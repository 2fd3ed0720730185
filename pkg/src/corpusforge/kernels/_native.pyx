# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hash kernels. Bit-identical to ``pyfallback`` by contract."""

from libc.stdint cimport uint64_t
from libc.stdlib cimport free, malloc

cdef uint64_t FNV_OFFSET = 0xCBF29CE484222325ULL
cdef uint64_t FNV_PRIME = 0x100000001B3ULL
cdef uint64_t MASK64 = 0xFFFFFFFFFFFFFFFFULL


cdef inline uint64_t _mix64(uint64_t x) nogil:
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL
    return x ^ (x >> 31)


def hash64(bytes data):
    """64-bit FNV-1a over raw bytes."""
    cdef const unsigned char* buf = data
    cdef Py_ssize_t n = len(data)
    cdef uint64_t h = FNV_OFFSET
    cdef Py_ssize_t i
    for i in range(n):
        h = (h ^ buf[i]) * FNV_PRIME
    return h


def mix64(x):
    """SplitMix64 finalizer; a bijective scramble of a 64-bit value."""
    return _mix64(<uint64_t> (x & 0xFFFFFFFFFFFFFFFF))


def minhash_minima(shingle_hashes, seeds):
    """Per-seed minimum of mix64(h ^ seed) over the shingle hashes."""
    cdef Py_ssize_t n = len(shingle_hashes)
    cdef Py_ssize_t k = len(seeds)
    cdef uint64_t* hs = <uint64_t*> malloc(n * sizeof(uint64_t))
    cdef uint64_t* out = <uint64_t*> malloc(k * sizeof(uint64_t))
    if hs == NULL or out == NULL:
        free(hs)
        free(out)
        raise MemoryError()
    cdef Py_ssize_t i, j
    cdef uint64_t seed, best, v
    try:
        for i in range(n):
            hs[i] = <uint64_t> shingle_hashes[i]
        for j in range(k):
            seed = <uint64_t> seeds[j]
            best = MASK64
            with nogil:
                for i in range(n):
                    v = _mix64(hs[i] ^ seed)
                    if v < best:
                        best = v
            out[j] = best
        return [out[j] for j in range(k)]
    finally:
        free(hs)
        free(out)
