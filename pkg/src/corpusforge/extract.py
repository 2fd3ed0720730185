"""HTML to cleaned paragraphs, with boilerplate classification.

Pages are segmented at block-level elements, each segment is scored by
length, link density and stopword density, and a context-smoothing pass
settles the borderline classes. The scheme and its default thresholds
(70/200 chars, 0.30/0.32 stopword density, 0.20 link density) follow the
established paragraph-classification approach for web corpus cleaning;
all values are configurable.

Classification ladder per paragraph:

    bad        link_density > max_link_density
    short      char_count < length_low
    good       stopword_density >= stopwords_high and char_count >= length_high
    near_good  everything else

Smoothing then turns short/near_good into good when a neighbouring
decided block is good, else bad, so retained output only ever contains
good paragraphs. A paragraph's stored quality is the smoothed class.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from datetime import datetime
from html.parser import HTMLParser
from importlib import resources
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from corpusforge import urls
from corpusforge.kernels import hash64
from corpusforge.model import Document, Paragraph
from corpusforge.textutil import word_tokens

_BLOCK_TAGS = frozenset(
    {"p", "div", "li", "h1", "h2", "h3", "h4", "h5", "h6", "td", "blockquote"}
)
_DROP_TAGS = frozenset(
    {"script", "style", "nav", "header", "footer", "form", "title", "noscript"}
)

_TAG_RE = re.compile(r"<[^>]*>")
_WS_RE = re.compile(r"\s+")

SEED_LANGUAGES = ("bs", "bg", "hr", "mk", "cnr", "sr", "sl")

STOPWORD_LIST_SIZE = 500


@dataclass(frozen=True)
class ExtractionParams:
    """Boilerplate thresholds plus the stopword list for the run.

    ``stopwords_low`` is kept for configuration compatibility with the
    full classification scheme; the simplified ladder above only uses the
    high bound.
    """

    length_low: int = 70
    length_high: int = 200
    stopwords_low: float = 0.30
    stopwords_high: float = 0.32
    max_link_density: float = 0.20
    stopwords: FrozenSet[str] = frozenset()

    def __post_init__(self):
        if not 0.0 <= self.stopwords_low <= self.stopwords_high <= 1.0:
            raise ValueError("need 0 <= stopwords_low <= stopwords_high <= 1")
        if self.length_low > self.length_high:
            raise ValueError("need length_low <= length_high")
        if not 0.0 <= self.max_link_density <= 1.0:
            raise ValueError("max_link_density out of [0,1]")


def _collapse_ws(text: str) -> str:
    return _WS_RE.sub(" ", text).strip()


class _ParagraphParser(HTMLParser):
    """Collects block-delimited text spans, tracking anchor membership."""

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.paragraphs: List[Tuple[str, float]] = []
        self._spans: List[Tuple[str, bool]] = []
        self._drop_depth = 0
        self._anchor_depth = 0

    def handle_starttag(self, tag, attrs):
        if tag in _DROP_TAGS:
            self._drop_depth += 1
            return
        if self._drop_depth:
            return
        if tag == "a":
            self._anchor_depth += 1
        if tag in _BLOCK_TAGS:
            self._flush()

    def handle_endtag(self, tag):
        if tag in _DROP_TAGS:
            if self._drop_depth:
                self._drop_depth -= 1
            return
        if self._drop_depth:
            return
        if tag == "a":
            self._anchor_depth = max(0, self._anchor_depth - 1)
        if tag in _BLOCK_TAGS:
            self._flush()

    def handle_data(self, data):
        if not self._drop_depth and data:
            self._spans.append((data, self._anchor_depth > 0))

    def _flush(self):
        if not self._spans:
            return
        text = _collapse_ws("".join(chunk for chunk, _ in self._spans))
        anchor_text = _collapse_ws("".join(chunk for chunk, inside in self._spans if inside))
        self._spans = []
        if not text:
            return
        self.paragraphs.append((text, len(anchor_text) / len(text)))

    def finish(self) -> List[Tuple[str, float]]:
        self._flush()
        return self.paragraphs


def segment_paragraphs(html: bytes) -> List[Tuple[str, float]]:
    """Split a page into (text, link_density) blocks.

    Block-level elements delimit paragraphs, script/style/nav/header/
    footer/form subtrees are dropped, entities are decoded and whitespace
    collapsed. Malformed markup yields a best-effort list; empty input an
    empty list.
    """
    text = html.decode("utf-8", errors="replace")
    parser = _ParagraphParser()
    try:
        parser.feed(text)
        parser.close()
    except Exception:
        pass  # best effort on broken markup; keep whatever was collected
    return parser.finish()


def stopword_density(text: str, stopwords: FrozenSet[str]) -> float:
    """Fraction of tokens found in the stopword set (edge punctuation ignored)."""
    tokens = word_tokens(text)
    if not tokens:
        return 0.0
    hits = sum(1 for t in tokens if t in stopwords)
    return hits / len(tokens)


def classify_paragraph(text: str, link_density: float, params: ExtractionParams) -> str:
    """Pure classification of one paragraph; returns a quality class."""
    if link_density > params.max_link_density:
        return "bad"
    if len(text) < params.length_low:
        return "short"
    if (
        stopword_density(text, params.stopwords) >= params.stopwords_high
        and len(text) >= params.length_high
    ):
        return "good"
    return "near_good"


def smooth_classes(classes: Sequence[str]) -> List[str]:
    """Settle short/near_good by context: good iff a neighbouring decided
    block on either side is good, else bad. Decided classes pass through."""
    result = list(classes)
    n = len(result)
    i = 0
    while i < n:
        if result[i] in ("good", "bad"):
            i += 1
            continue
        j = i
        while j < n and result[j] in ("short", "near_good"):
            j += 1
        left_good = i > 0 and result[i - 1] == "good"
        right_good = j < n and result[j] == "good"
        verdict = "good" if (left_good or right_good) else "bad"
        for t in range(i, j):
            result[t] = verdict
        i = j
    return result


_CONTROL_KEEP = {"\n", "\t"}


def clean_text(text: str) -> str:
    """Normalization form C, control characters stripped, residual tags
    removed, whitespace runs collapsed to single spaces."""
    text = unicodedata.normalize("NFC", text)
    text = "".join(
        ch for ch in text if ch in _CONTROL_KEEP or unicodedata.category(ch) != "Cc"
    )
    text = _TAG_RE.sub(" ", text)
    return _collapse_ws(text)


def load_stopwords(language: str = "all") -> FrozenSet[str]:
    """Stopword list derived from the bundled seed corpus of a language.

    The list is the top-500 most frequent tokens of the seed text; "all"
    unions the lists of every bundled language, which suits multilingual
    input ahead of language routing.
    """
    if language == "all":
        merged: set = set()
        for lang in SEED_LANGUAGES:
            merged.update(load_stopwords(lang))
        return frozenset(merged)
    if language not in SEED_LANGUAGES:
        raise ValueError(f"no bundled seed corpus for language {language!r}")
    seed = resources.files("corpusforge.data").joinpath(f"seed_{language}.txt")
    counts: Dict[str, int] = {}
    for token in word_tokens(seed.read_text(encoding="utf-8")):
        counts[token] = counts.get(token, 0) + 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return frozenset(token for token, _ in ranked[:STOPWORD_LIST_SIZE])


def extract_document(
    url: str,
    crawl_time: datetime,
    html: bytes,
    params: ExtractionParams,
) -> Optional[Document]:
    """Full page treatment: segment, clean, classify, smooth.

    Returns None when no paragraph survives (nothing worth keeping).
    Document ids are the 64-bit content hash of the URL, stable across
    runs.
    """
    host = urls.host_of(url)
    raw_paragraphs = segment_paragraphs(html)
    cleaned = [(clean_text(text), density) for text, density in raw_paragraphs]
    cleaned = [(text, density) for text, density in cleaned if text]
    if not cleaned:
        return None
    classes = [classify_paragraph(text, density, params) for text, density in cleaned]
    smoothed = smooth_classes(classes)
    paragraphs = tuple(
        Paragraph(
            text=text,
            quality=verdict,
            retained=verdict == "good",
            link_density=min(1.0, density),
            stopword_density=stopword_density(text, params.stopwords),
        )
        for (text, density), verdict in zip(cleaned, smoothed)
    )
    if not any(p.retained for p in paragraphs):
        return None
    return Document(
        id=f"{hash64(url.encode('utf-8')):016x}",
        url=url,
        domain=urls.registrable_domain(host),
        tld=urls.tld_of_host(host),
        crawl_time=crawl_time,
        paragraphs=paragraphs,
    )
