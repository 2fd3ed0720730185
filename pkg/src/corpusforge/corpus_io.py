"""Streaming JSONL corpus I/O.

One document per line, UTF-8. The wire schema is fixed:

    id, url, domain, tld, crawl_time (RFC 3339), language,
    genre, genre_p, topic, topic_p,
    paragraphs (array of {text, quality, retained}), word_count

Unknown keys are tolerated on read (kept on the Document's ``extras``)
and never written, so newer producers stay readable. Link and stopword
densities are measurement-time attributes of extraction and are not part
of the exchange format; they load as 0.0.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Iterable, Iterator, Union

from corpusforge.model import Document, LabelAssignment, Paragraph

_DOCUMENT_KEYS = frozenset(
    {
        "id",
        "url",
        "domain",
        "tld",
        "crawl_time",
        "language",
        "genre",
        "genre_p",
        "topic",
        "topic_p",
        "paragraphs",
        "word_count",
    }
)


def format_rfc3339(dt: datetime) -> str:
    """UTC timestamp with a trailing Z, e.g. 2024-05-01T12:00:00Z."""
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    dt = dt.astimezone(timezone.utc)
    return dt.isoformat().replace("+00:00", "Z")


def parse_rfc3339(value: str) -> datetime:
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def document_to_obj(doc: Document) -> dict:
    return {
        "id": doc.id,
        "url": doc.url,
        "domain": doc.domain,
        "tld": doc.tld,
        "crawl_time": format_rfc3339(doc.crawl_time),
        "language": doc.language,
        "genre": doc.genre.label if doc.genre else None,
        "genre_p": doc.genre.probability if doc.genre else None,
        "topic": doc.topic.label if doc.topic else None,
        "topic_p": doc.topic.probability if doc.topic else None,
        "paragraphs": [
            {"text": p.text, "quality": p.quality, "retained": p.retained}
            for p in doc.paragraphs
        ],
        "word_count": doc.word_count,
    }


def obj_to_document(obj: dict) -> Document:
    paragraphs = tuple(
        Paragraph(text=p["text"], quality=p["quality"], retained=p["retained"])
        for p in obj["paragraphs"]
    )
    genre = None
    if obj.get("genre") is not None:
        genre = LabelAssignment(obj["genre"], obj["genre_p"], "genre")
    topic = None
    if obj.get("topic") is not None:
        topic = LabelAssignment(obj["topic"], obj["topic_p"], "topic")
    extras = {k: v for k, v in obj.items() if k not in _DOCUMENT_KEYS}
    doc = Document(
        id=obj["id"],
        url=obj["url"],
        domain=obj["domain"],
        tld=obj["tld"],
        crawl_time=parse_rfc3339(obj["crawl_time"]),
        paragraphs=paragraphs,
        language=obj.get("language", "other"),
        genre=genre,
        topic=topic,
        extras=extras,
    )
    stored = obj.get("word_count")
    if stored is not None and stored != doc.word_count:
        raise ValueError(
            f"document {doc.id!r}: stored word_count {stored} does not match "
            f"retained paragraphs ({doc.word_count})"
        )
    return doc


def dumps_document(doc: Document) -> str:
    return json.dumps(document_to_obj(doc), ensure_ascii=False, separators=(",", ":"))


def write_documents(target: Union[str, Path, IO[str]], documents: Iterable[Document]) -> int:
    """Write documents as JSONL; returns the number written."""
    if hasattr(target, "write"):
        return _write_to_handle(target, documents)
    with open(target, "w", encoding="utf-8", newline="\n") as handle:
        return _write_to_handle(handle, documents)


def _write_to_handle(handle: IO[str], documents: Iterable[Document]) -> int:
    n = 0
    for doc in documents:
        handle.write(dumps_document(doc))
        handle.write("\n")
        n += 1
    return n


def read_documents(source: Union[str, Path, IO[str]]) -> Iterator[Document]:
    """Stream documents from a JSONL file or open handle."""
    if hasattr(source, "read"):
        yield from _read_from_handle(source)
        return
    with open(source, "r", encoding="utf-8") as handle:
        yield from _read_from_handle(handle)


def _read_from_handle(handle: IO[str]) -> Iterator[Document]:
    for line_no, line in enumerate(handle, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"line {line_no}: invalid JSON ({exc})") from exc
        yield obj_to_document(obj)
