"""Duplicate removal and MinHash near-duplicate detection.

Three layers, run in stream order:

  1. exact duplicates: first occurrence of a full-text hash wins;
  2. paragraph-level near-duplicates: paragraphs are masked (case folded,
     digit runs and URLs collapsed, punctuation dropped) before
     fingerprinting, so texts that differ only in numbers or links
     collide; a document that is mostly already-seen paragraphs is
     dropped outright;
  3. document-level near-duplicates: MinHash signatures over word 4-gram
     shingles, with banded LSH candidate generation and estimate
     verification at a similarity threshold (default 0.7).

Signatures are deterministic for a given seed list; the seeds are stored
in the signature sidecar so estimates stay comparable across runs and
machines.
"""

from __future__ import annotations

import re
import struct
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from corpusforge.kernels import hash64, minhash_minima, mix64
from corpusforge.model import Document
from corpusforge.textutil import is_punct

SIGNATURE_SIZE = 128
SHINGLE_WIDTH = 4
LSH_BANDS = 16
LSH_ROWS = 8
NEAR_DUPLICATE_THRESHOLD = 0.7

#: Default master seed for deriving the permutation seed list. Stable and
#: documented so independently produced sidecars are comparable.
DEFAULT_MASTER_SEED = 0x6A09E667F3BCC908

#: Fraction of a document's retained paragraphs that must be fresh for the
#: document to survive paragraph-level deduplication.
DOCUMENT_DROP_FRACTION = 0.5

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_DIGITS_RE = re.compile(r"\d+")


def derive_seeds(k: int = SIGNATURE_SIZE, master: int = DEFAULT_MASTER_SEED) -> Tuple[int, ...]:
    """k permutation seeds from a SplitMix64 stream over the master seed."""
    state = master & _MASK64
    seeds = []
    for _ in range(k):
        state = (state + _GOLDEN) & _MASK64
        seeds.append(mix64(state))
    return tuple(seeds)


DEFAULT_SEEDS = derive_seeds()


def mask_paragraph(text: str) -> str:
    """Canonical form for paragraph fingerprints.

    Case folded; URL-shaped tokens become "URL"; every maximal digit run
    becomes "0"; punctuation characters are removed; whitespace collapses
    to single spaces.
    """
    out: List[str] = []
    for token in text.casefold().split():
        if "://" in token or token.startswith("www."):
            out.append("URL")
            continue
        token = _DIGITS_RE.sub("0", token)
        token = "".join(ch for ch in token if not is_punct(ch))
        if token:
            out.append(token)
    return " ".join(out)


def masked_fingerprint(text: str) -> int:
    return hash64(mask_paragraph(text).encode("utf-8"))


def exact_fingerprint(doc: Document) -> int:
    """Hash of the document's retained text, the unit of exact dedup."""
    return hash64(doc.retained_text().encode("utf-8"))


def dedup_exact(documents: Iterable[Document]) -> Iterator[Document]:
    """Keep the first occurrence (stream order) of each full-text hash."""
    seen = set()
    for doc in documents:
        fp = exact_fingerprint(doc)
        if fp in seen:
            continue
        seen.add(fp)
        yield doc


def dedup_paragraphs(documents: Iterable[Document]) -> Iterator[Document]:
    """Mask-aware paragraph deduplication over the whole stream.

    A retained paragraph whose masked fingerprint was already seen is
    unretained; documents losing at least half of their retained
    paragraphs are dropped. Fingerprints of dropped documents stay in the
    seen set (their content did occur earlier in the stream).
    """
    seen = set()
    for doc in documents:
        duplicated = 0
        total_retained = 0
        new_paragraphs = []
        for paragraph in doc.paragraphs:
            if not paragraph.retained:
                new_paragraphs.append(paragraph)
                continue
            total_retained += 1
            fp = masked_fingerprint(paragraph.text)
            if fp in seen:
                duplicated += 1
                new_paragraphs.append(replace(paragraph, retained=False))
            else:
                seen.add(fp)
                new_paragraphs.append(paragraph)
        if total_retained and duplicated / total_retained >= DOCUMENT_DROP_FRACTION:
            continue
        yield doc.with_paragraphs(new_paragraphs)


@dataclass(frozen=True)
class MinHashSignature:
    """Per-permutation minima over hashed word 4-gram shingles."""

    minima: Tuple[int, ...]
    seeds: Tuple[int, ...]
    shingle_width: int = SHINGLE_WIDTH

    @property
    def k(self) -> int:
        return len(self.minima)


def shingles(text: str, width: int = SHINGLE_WIDTH) -> List[str]:
    """Distinct consecutive lowercase word n-grams of the text."""
    tokens = text.casefold().split()
    if len(tokens) < width:
        raise ValueError(
            f"need at least {width} word tokens to shingle, got {len(tokens)}"
        )
    return sorted({" ".join(tokens[i : i + width]) for i in range(len(tokens) - width + 1)})


def minhash_signature(
    text: str, seeds: Sequence[int] = DEFAULT_SEEDS, shingle_width: int = SHINGLE_WIDTH
) -> MinHashSignature:
    grams = shingles(text, shingle_width)
    hashes = [hash64(g.encode("utf-8")) for g in grams]
    minima = minhash_minima(hashes, list(seeds))
    return MinHashSignature(
        minima=tuple(minima), seeds=tuple(seeds), shingle_width=shingle_width
    )


def signature_for_document(
    doc: Document, seeds: Sequence[int] = DEFAULT_SEEDS
) -> MinHashSignature:
    return minhash_signature(doc.retained_text(), seeds)


def estimate_jaccard(a: MinHashSignature, b: MinHashSignature) -> float:
    """Fraction of agreeing signature positions, an unbiased Jaccard
    estimate when both signatures share seeds."""
    if a.k != b.k:
        raise ValueError(f"signature sizes differ: {a.k} vs {b.k}")
    if a.seeds != b.seeds:
        raise ValueError("signatures were computed with different seeds")
    agreeing = sum(1 for x, y in zip(a.minima, b.minima) if x == y)
    return agreeing / a.k


class LshIndex:
    """Banded bucket index over signatures for candidate generation.

    Signatures are split into ``bands`` groups of ``rows`` values; two
    documents are candidates when any band hashes identically. With the
    16x8 default the S-curve midpoint sits near 0.7.
    """

    def __init__(self, bands: int = LSH_BANDS, rows: int = LSH_ROWS):
        self.bands = bands
        self.rows = rows
        self._buckets: Dict[Tuple[int, int], List[str]] = {}

    def _band_keys(self, sig: MinHashSignature) -> List[Tuple[int, int]]:
        if self.bands * self.rows != sig.k:
            raise ValueError(
                f"bands*rows = {self.bands * self.rows} does not match k = {sig.k}"
            )
        keys = []
        for band in range(self.bands):
            chunk = sig.minima[band * self.rows : (band + 1) * self.rows]
            keys.append((band, hash64(struct.pack(f"<{self.rows}Q", *chunk))))
        return keys

    def insert(self, doc_id: str, sig: MinHashSignature) -> None:
        for key in self._band_keys(sig):
            self._buckets.setdefault(key, []).append(doc_id)

    def candidates(self, sig: MinHashSignature) -> List[str]:
        found = set()
        for key in self._band_keys(sig):
            found.update(self._buckets.get(key, ()))
        return sorted(found)


def find_near_duplicates(
    signatures_a: Mapping[str, MinHashSignature],
    signatures_b: Mapping[str, MinHashSignature],
    threshold: float = NEAR_DUPLICATE_THRESHOLD,
) -> List[Tuple[str, str, float]]:
    """Best near-duplicate in B for each document of A.

    Candidates come from LSH band collisions and are verified with the
    signature estimate; only pairs at or above the threshold are
    returned, at most one (the best) per A document. Output is sorted by
    A id for reproducibility.
    """
    index = LshIndex()
    for doc_id in sorted(signatures_b):
        index.insert(doc_id, signatures_b[doc_id])
    pairs: List[Tuple[str, str, float]] = []
    for id_a in sorted(signatures_a):
        sig_a = signatures_a[id_a]
        best: Optional[Tuple[float, str]] = None
        for id_b in index.candidates(sig_a):
            est = estimate_jaccard(sig_a, signatures_b[id_b])
            if est < threshold:
                continue
            if best is None or est > best[0] or (est == best[0] and id_b < best[1]):
                best = (est, id_b)
        if best is not None:
            pairs.append((id_a, best[1], best[0]))
    return pairs


_SIDE_CAR_MAGIC = b"CFSG"
_SIDE_CAR_VERSION = 1


def write_signatures(path, signatures: Mapping[str, MinHashSignature]) -> None:
    """Binary sidecar: header with k, shingle width and the seed list,
    then one record (id, minima) per document."""
    items = sorted(signatures.items())
    if not items:
        raise ValueError("refusing to write an empty signature sidecar")
    first = items[0][1]
    k = first.k
    for doc_id, sig in items:
        if sig.k != k or sig.seeds != first.seeds:
            raise ValueError(f"signature for {doc_id!r} has mismatched parameters")
    with open(path, "wb") as handle:
        handle.write(_SIDE_CAR_MAGIC)
        handle.write(struct.pack("<III", _SIDE_CAR_VERSION, k, first.shingle_width))
        handle.write(struct.pack(f"<{k}Q", *first.seeds))
        handle.write(struct.pack("<Q", len(items)))
        for doc_id, sig in items:
            encoded = doc_id.encode("utf-8")
            handle.write(struct.pack("<I", len(encoded)))
            handle.write(encoded)
            handle.write(struct.pack(f"<{k}Q", *sig.minima))


def read_signatures(path) -> Dict[str, MinHashSignature]:
    data = Path(path).read_bytes()
    if data[:4] != _SIDE_CAR_MAGIC:
        raise ValueError(f"{path}: not a signature sidecar")
    version, k, width = struct.unpack_from("<III", data, 4)
    if version != _SIDE_CAR_VERSION:
        raise ValueError(f"{path}: unsupported sidecar version {version}")
    offset = 16
    seeds = struct.unpack_from(f"<{k}Q", data, offset)
    offset += 8 * k
    (n_docs,) = struct.unpack_from("<Q", data, offset)
    offset += 8
    out: Dict[str, MinHashSignature] = {}
    for _ in range(n_docs):
        (id_len,) = struct.unpack_from("<I", data, offset)
        offset += 4
        doc_id = data[offset : offset + id_len].decode("utf-8")
        offset += id_len
        minima = struct.unpack_from(f"<{k}Q", data, offset)
        offset += 8 * k
        out[doc_id] = MinHashSignature(minima=minima, seeds=seeds, shingle_width=width)
    return out
