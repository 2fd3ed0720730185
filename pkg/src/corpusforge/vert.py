"""VERT export: token-per-line corpus text with doc/p/s structural tags.

The format targets concordancer loaders:

    <doc id="..." url="..." domain="..." genre="..." topic="...">
    <p>
    <s>
    form<TAB>lemma<TAB>msd
    </s>
    </p>
    </doc>

Lemma and morphosyntactic columns are placeholders ("_") unless an
external annotator supplies aligned rows. Tokenization is deliberately
simple and documented: whitespace split with terminal punctuation peeled
off into separate tokens. Sentences split after [.!?] followed by
whitespace and an uppercase letter or digit.
"""

from __future__ import annotations

import re
import unicodedata
from typing import List, Optional, Sequence, Tuple

from corpusforge.model import Document

_SENTENCE_END = re.compile(r"[.!?]+")


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str) -> List[str]:
    """Whitespace tokens with trailing punctuation split off, in order."""
    tokens: List[str] = []
    for chunk in text.split():
        tail: List[str] = []
        while chunk and _is_punct(chunk[-1]):
            tail.append(chunk[-1])
            chunk = chunk[:-1]
        if chunk:
            tokens.append(chunk)
        tokens.extend(reversed(tail))
    return tokens


def split_sentences(text: str) -> List[str]:
    """Split on sentence-final punctuation followed by whitespace and an
    uppercase letter or digit. Returns non-empty sentence strings."""
    sentences: List[str] = []
    start = 0
    for match in _SENTENCE_END.finditer(text):
        end = match.end()
        rest = text[end:]
        stripped = rest.lstrip()
        if not stripped or len(stripped) == len(rest):
            continue
        nxt = stripped[0]
        if nxt.isupper() or nxt.isdigit():
            sentence = text[start:end].strip()
            if sentence:
                sentences.append(sentence)
            start = end
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def escape_attr(value: str) -> str:
    return (
        value.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def export_vert(
    document: Document,
    annotations: Optional[Sequence[Tuple[str, str]]] = None,
) -> str:
    """Render one document as VERT text.

    ``annotations`` is an optional sequence of (lemma, msd) pairs aligned
    with the token stream over retained paragraphs; when absent both
    columns render as "_".
    """
    retained = document.retained_paragraphs
    if not retained:
        raise ValueError(f"document {document.id!r} has no retained paragraphs")

    attrs = [("id", document.id), ("url", document.url), ("domain", document.domain)]
    if document.genre is not None:
        attrs.append(("genre", document.genre.label))
    if document.topic is not None:
        attrs.append(("topic", document.topic.label))
    attr_text = " ".join(f'{name}="{escape_attr(value)}"' for name, value in attrs)

    lines = [f"<doc {attr_text}>"]
    cursor = 0
    for paragraph in retained:
        lines.append("<p>")
        for sentence in split_sentences(paragraph.text):
            tokens = tokenize(sentence)
            if not tokens:
                continue
            lines.append("<s>")
            for token in tokens:
                if annotations is not None:
                    if cursor >= len(annotations):
                        raise ValueError("annotation rows shorter than token stream")
                    lemma, msd = annotations[cursor]
                else:
                    lemma, msd = "_", "_"
                cursor += 1
                lines.append(f"{token}\t{lemma}\t{msd}")
            lines.append("</s>")
        lines.append("</p>")
    lines.append("</doc>")
    if annotations is not None and cursor != len(annotations):
        raise ValueError("annotation rows longer than token stream")
    return "\n".join(lines) + "\n"
