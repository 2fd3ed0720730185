"""Final corpus filtering and annotation policies.

Length filtering drops documents that are too short to be useful
(fewer than 75 words, or nothing but sub-70-character paragraphs).
Label policies convert raw classifier probability maps into assignments,
falling back to the "Mix" label when confidence is insufficient: genre
keeps the argmax only when its probability exceeds 0.8, topic when it
reaches 0.6. The removal list applies curator verdicts over domains.

The genre/topic classifiers themselves are external; this module defines
the request/response contract, a subprocess adapter, and a deterministic
stub used for self-contained runs and tests.
"""

from __future__ import annotations

import json
import logging
import subprocess
from dataclasses import dataclass, replace
from datetime import datetime
from importlib import resources
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Protocol, Sequence, Tuple

from corpusforge.corpus_io import format_rfc3339, parse_rfc3339
from corpusforge.kernels import hash64, mix64
from corpusforge.model import Document, LabelAssignment

logger = logging.getLogger(__name__)

MIN_DOCUMENT_WORDS = 75
MIN_PARAGRAPH_CHARS = 70

MIX_LABEL = "Mix"
GENRE_CONFIDENCE = 0.8  # keep argmax only when strictly above
TOPIC_CONFIDENCE = 0.6  # keep argmax when at or above

VERDICTS = ("good", "machine_translated", "generated", "encoding_broken")

REMOVAL_LIST_HEADER = ("domain", "verdict", "reason", "reviewer", "time")


def filter_short(
    doc: Document,
    min_words: int = MIN_DOCUMENT_WORDS,
    min_par_chars: int = MIN_PARAGRAPH_CHARS,
) -> Optional[str]:
    """Drop reason for an overly short document, or None to keep.

    "Less than" is strict on both bounds: a 75-word document stays, a
    74-word one goes; a document whose every retained paragraph is under
    70 characters goes even when its total length is fine.
    """
    if doc.word_count < min_words:
        return "too_few_words"
    if all(p.char_count < min_par_chars for p in doc.retained_paragraphs):
        return "short_paragraphs"
    return None


@dataclass(frozen=True)
class LabelSchema:
    name: str
    labels: Tuple[str, ...]

    def __post_init__(self):
        if self.name not in ("genre", "topic"):
            raise ValueError(f"unknown schema name: {self.name!r}")


def load_genre_schema() -> LabelSchema:
    return _load_schema("genre_schema.json")


def load_topic_schema(path=None) -> LabelSchema:
    """The topic schema is configurable; the bundled file carries the 17
    top-level news topic codes."""
    if path is None:
        return _load_schema("topic_schema.json")
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    return LabelSchema(name=obj["schema"], labels=tuple(obj["labels"]))


def _load_schema(filename: str) -> LabelSchema:
    obj = json.loads(
        resources.files("corpusforge.data").joinpath(filename).read_text(encoding="utf-8")
    )
    return LabelSchema(name=obj["schema"], labels=tuple(obj["labels"]))


def apply_label_policy(probs: Mapping[str, float], schema: LabelSchema) -> LabelAssignment:
    """Confidence-gated assignment: the argmax label, or Mix below the
    schema's threshold. The probability field always carries the max."""
    if not probs:
        raise ValueError("empty probability map")
    for label, p in probs.items():
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability for {label!r} out of [0,1]: {p}")
    best_label = min(sorted(probs), key=lambda l: -probs[l])
    best_p = probs[best_label]
    if best_label not in schema.labels:
        raise ValueError(f"label {best_label!r} not in {schema.name} schema")
    if schema.name == "genre":
        confident = best_p > GENRE_CONFIDENCE
    else:
        confident = best_p >= TOPIC_CONFIDENCE
    label = best_label if confident else MIX_LABEL
    return LabelAssignment(label=label, probability=best_p, schema=schema.name)


@dataclass(frozen=True)
class RemovalEntry:
    domain: str
    verdict: str
    reason: str
    reviewer: str
    time: datetime

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(
                f"verdict {self.verdict!r} not in allowed set {VERDICTS}"
            )


@dataclass
class RemovalList:
    """Curator verdicts over domains; a later verdict supersedes."""

    entries: List[RemovalEntry]

    def active(self) -> Dict[str, RemovalEntry]:
        latest: Dict[str, RemovalEntry] = {}
        for entry in self.entries:
            latest[entry.domain] = entry
        return latest

    def bad_domains(self) -> Dict[str, RemovalEntry]:
        return {d: e for d, e in self.active().items() if e.verdict != "good"}


def read_removal_list(path) -> RemovalList:
    """TSV rows of domain, verdict, reason, reviewer, RFC 3339 time."""
    entries = []
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if line_no == 1 and fields[0] == REMOVAL_LIST_HEADER[0]:
            continue
        if len(fields) != 5:
            raise ValueError(f"removal list line {line_no}: expected 5 TSV fields")
        domain, verdict, reason, reviewer, time_text = fields
        entries.append(
            RemovalEntry(domain, verdict, reason, reviewer, parse_rfc3339(time_text))
        )
    return RemovalList(entries)


def write_removal_list(path, entries: Iterable[RemovalEntry]) -> None:
    lines = ["\t".join(REMOVAL_LIST_HEADER)]
    for entry in entries:
        lines.append(
            "\t".join(
                (
                    entry.domain,
                    entry.verdict,
                    entry.reason,
                    entry.reviewer,
                    format_rfc3339(entry.time),
                )
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def apply_removal_list(
    documents: Iterable[Document], removal: RemovalList
) -> Tuple[List[Document], Dict[str, int]]:
    """Drop documents from domains with a non-good verdict.

    Returns the surviving documents and per-domain drop counts; listed
    domains absent from the corpus report zero.
    """
    bad = removal.bad_domains()
    dropped = {domain: 0 for domain in sorted(bad)}
    kept = []
    for doc in documents:
        if doc.domain in bad:
            dropped[doc.domain] += 1
        else:
            kept.append(doc)
    return kept, dropped


class Classifier(Protocol):
    """External classifier contract: a batch of (id, text) goes in, a
    full probability map per id comes out."""

    def probabilities(
        self, schema: LabelSchema, items: Sequence[Tuple[str, str]]
    ) -> Dict[str, Dict[str, float]]: ...


class StubClassifier:
    """Deterministic hash-driven classifier for self-contained runs.

    The winning label and its confidence derive from the text content
    alone, so repeated runs give byte-identical corpora. Confidence spans
    [0.35, 0.99), exercising both the Mix fallback and confident labels.
    """

    def probabilities(self, schema, items):
        out = {}
        for doc_id, text in items:
            base = hash64(text.encode("utf-8")) ^ hash64(schema.name.encode("utf-8"))
            labels = schema.labels
            winner = labels[mix64(base) % len(labels)]
            unit = (mix64(base ^ 0xA5A5A5A5) >> 11) / float(1 << 53)
            confidence = 0.35 + 0.64 * unit
            rest = (1.0 - confidence) / (len(labels) - 1) if len(labels) > 1 else 0.0
            out[doc_id] = {
                label: confidence if label == winner else rest for label in labels
            }
        return out


class SubprocessClassifier:
    """Adapter launching an external command per batch.

    Requests are JSON lines {"id", "schema", "text"} on stdin; responses
    are JSON lines {"id", "probs"} on stdout.
    """

    def __init__(self, command: Sequence[str], timeout: float = 120.0):
        self.command = list(command)
        self.timeout = timeout

    def probabilities(self, schema, items):
        request = "".join(
            json.dumps(
                {"id": doc_id, "schema": schema.name, "text": text},
                ensure_ascii=False,
            )
            + "\n"
            for doc_id, text in items
        )
        proc = subprocess.run(
            self.command,
            input=request.encode("utf-8"),
            stdout=subprocess.PIPE,
            timeout=self.timeout,
            check=True,
        )
        out: Dict[str, Dict[str, float]] = {}
        for line in proc.stdout.decode("utf-8").splitlines():
            if not line.strip():
                continue
            obj = json.loads(line)
            out[obj["id"]] = obj["probs"]
        return out


@dataclass
class AnnotationStats:
    annotated: int = 0
    failed: int = 0


def annotate_corpus(
    documents: Iterable[Document],
    classifier: Classifier,
    genre_schema: Optional[LabelSchema] = None,
    topic_schema: Optional[LabelSchema] = None,
    batch_size: int = 32,
) -> Tuple[List[Document], AnnotationStats]:
    """Attach genre and topic assignments via the label policy.

    Classifier calls are batched; a failing batch leaves its documents
    unlabelled (counted in the stats) and the pipeline continues.
    """
    genre_schema = genre_schema or load_genre_schema()
    topic_schema = topic_schema or load_topic_schema()
    docs = list(documents)
    stats = AnnotationStats()
    out: List[Document] = []
    for start in range(0, len(docs), batch_size):
        batch = docs[start : start + batch_size]
        items = [(doc.id, doc.retained_text()) for doc in batch]
        try:
            genre_probs = classifier.probabilities(genre_schema, items)
            topic_probs = classifier.probabilities(topic_schema, items)
        except Exception as exc:
            logger.warning(
                "classifier failed on batch of %d documents: %s", len(batch), exc
            )
            stats.failed += len(batch)
            out.extend(batch)
            continue
        for doc in batch:
            annotated = doc
            if doc.id in genre_probs:
                annotated = _with_label(
                    annotated, apply_label_policy(genre_probs[doc.id], genre_schema)
                )
            if doc.id in topic_probs:
                annotated = _with_label(
                    annotated, apply_label_policy(topic_probs[doc.id], topic_schema)
                )
            stats.annotated += 1
            out.append(annotated)
    return out, stats


def _with_label(doc: Document, assignment: LabelAssignment) -> Document:
    if assignment.schema == "genre":
        return replace(doc, genre=assignment)
    return replace(doc, topic=assignment)
