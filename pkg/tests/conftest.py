import random
from datetime import datetime, timezone

import pytest

from corpusforge.model import Document, Paragraph

FIXED_TIME = datetime(2024, 5, 1, 12, 0, 0, tzinfo=timezone.utc)


def make_paragraph(text, quality="good", retained=True, **kwargs):
    return Paragraph(text=text, quality=quality, retained=retained, **kwargs)


def make_doc(doc_id, texts, domain="example.si", url=None, language="other", **kwargs):
    """Document with one retained good paragraph per text."""
    host_path = doc_id.replace(" ", "-")
    return Document(
        id=doc_id,
        url=url or f"https://{domain}/{host_path}",
        domain=domain,
        tld=domain.rsplit(".", 1)[-1],
        crawl_time=FIXED_TIME,
        paragraphs=tuple(make_paragraph(t) for t in texts),
        language=language,
        **kwargs,
    )


def random_words(rng, n, vocab_size=5000, prefix="w"):
    return [f"{prefix}{rng.randrange(vocab_size)}" for _ in range(n)]


@pytest.fixture
def rng():
    return random.Random(20240501)
