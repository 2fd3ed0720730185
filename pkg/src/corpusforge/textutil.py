"""Tiny Unicode text helpers shared by the tokenizing stages."""

from __future__ import annotations

import unicodedata


def is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def strip_edge_punct(token: str) -> str:
    """Remove punctuation characters from both ends of a token."""
    start, end = 0, len(token)
    while start < end and is_punct(token[start]):
        start += 1
    while end > start and is_punct(token[end - 1]):
        end -= 1
    return token[start:end]


def word_tokens(text: str) -> list:
    """Case-folded whitespace tokens with edge punctuation removed."""
    tokens = []
    for raw in text.casefold().split():
        token = strip_edge_punct(raw)
        if token:
            tokens.append(token)
    return tokens
