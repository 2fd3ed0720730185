"""Core corpus data types and manifest aggregation.

A corpus is a stream of Documents; each Document carries the cleaned
paragraphs of one web page together with its provenance (URL, domain,
TLD, crawl time), a language decision, and optional genre/topic label
assignments. Types are immutable after construction so they can be
shared freely across pipeline stages.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Dict, Iterable, Mapping, Optional, Tuple

LANGUAGE_CODES = ("bs", "bg", "hr", "mk", "cnr", "sr", "sl", "other")

PARAGRAPH_QUALITIES = ("good", "near_good", "bad", "short")

#: Qualities a paragraph may have while being part of the exported text.
RETAINABLE_QUALITIES = ("good", "near_good")


def count_words(text: str) -> int:
    """Whitespace-delimited token count, the unit of document length filters."""
    return len(text.split())


@dataclass(frozen=True)
class Paragraph:
    """One cleaned text block of a page with its boilerplate attributes."""

    text: str
    quality: str
    retained: bool
    link_density: float = 0.0
    stopword_density: float = 0.0

    def __post_init__(self):
        if self.quality not in PARAGRAPH_QUALITIES:
            raise ValueError(f"unknown paragraph quality: {self.quality!r}")
        if self.retained and self.quality not in RETAINABLE_QUALITIES:
            raise ValueError(
                f"retained paragraph must be good or near_good, got {self.quality!r}"
            )
        for name in ("link_density", "stopword_density"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} out of [0,1]: {value}")

    @property
    def char_count(self) -> int:
        return len(self.text)

    @property
    def word_count(self) -> int:
        return count_words(self.text)


@dataclass(frozen=True)
class LabelAssignment:
    """A single classifier decision after the confidence policy was applied."""

    label: str
    probability: float
    schema: str

    def __post_init__(self):
        if self.schema not in ("genre", "topic"):
            raise ValueError(f"unknown label schema: {self.schema!r}")
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError(f"probability out of [0,1]: {self.probability}")


@dataclass(frozen=True)
class Document:
    """One web text with provenance, paragraphs and annotations.

    ``word_count`` is derived from the retained paragraphs, which keeps the
    count consistent with the paragraph flags by construction. ``extras``
    holds unknown fields found when reading JSONL; they are kept in memory
    but never written back.
    """

    id: str
    url: str
    domain: str
    tld: str
    crawl_time: datetime
    paragraphs: Tuple[Paragraph, ...]
    language: str = "other"
    genre: Optional[LabelAssignment] = None
    topic: Optional[LabelAssignment] = None
    extras: Mapping[str, object] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.id:
            raise ValueError("document id must be non-empty")
        if self.language not in LANGUAGE_CODES:
            raise ValueError(f"unknown language code: {self.language!r}")
        if self.tld != self.domain.rsplit(".", 1)[-1]:
            raise ValueError(
                f"tld {self.tld!r} is not the final label of domain {self.domain!r}"
            )
        object.__setattr__(self, "paragraphs", tuple(self.paragraphs))

    @property
    def retained_paragraphs(self) -> Tuple[Paragraph, ...]:
        return tuple(p for p in self.paragraphs if p.retained)

    @property
    def word_count(self) -> int:
        return sum(p.word_count for p in self.retained_paragraphs)

    def retained_text(self) -> str:
        """The document's text content: retained paragraphs joined by newlines."""
        return "\n".join(p.text for p in self.retained_paragraphs)

    def with_paragraphs(self, paragraphs: Iterable[Paragraph]) -> "Document":
        return replace(self, paragraphs=tuple(paragraphs))


@dataclass(frozen=True)
class CorpusManifest:
    """Aggregate size counters of a corpus, overall and per domain."""

    corpus_id: str
    language: str
    n_texts: int
    n_words: int
    n_domains: int
    domain_counts: Mapping[str, Tuple[int, int]]

    def merge(self, other: "CorpusManifest") -> "CorpusManifest":
        """Associative merge of two shards (id/language taken from self)."""
        merged: Dict[str, Tuple[int, int]] = dict(self.domain_counts)
        for domain, (texts, words) in other.domain_counts.items():
            t, w = merged.get(domain, (0, 0))
            merged[domain] = (t + texts, w + words)
        return CorpusManifest(
            corpus_id=self.corpus_id,
            language=self.language,
            n_texts=self.n_texts + other.n_texts,
            n_words=self.n_words + other.n_words,
            n_domains=len(merged),
            domain_counts=merged,
        )


def build_manifest(
    documents: Iterable[Document], corpus_id: str = "", language: str = ""
) -> CorpusManifest:
    """Aggregate text/word counts over a document stream.

    Raises ValueError on a duplicate document id, naming the offender.
    """
    seen_ids = set()
    domain_counts: Dict[str, Tuple[int, int]] = {}
    n_texts = 0
    n_words = 0
    for doc in documents:
        if doc.id in seen_ids:
            raise ValueError(f"duplicate document id: {doc.id!r}")
        seen_ids.add(doc.id)
        n_texts += 1
        words = doc.word_count
        n_words += words
        t, w = domain_counts.get(doc.domain, (0, 0))
        domain_counts[doc.domain] = (t + 1, w + words)
    return CorpusManifest(
        corpus_id=corpus_id,
        language=language,
        n_texts=n_texts,
        n_words=n_words,
        n_domains=len(domain_counts),
        domain_counts=domain_counts,
    )


def utc_now() -> datetime:
    return datetime.now(timezone.utc).replace(microsecond=0)
