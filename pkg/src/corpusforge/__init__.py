"""corpusforge: build annotated web corpora from TLD-scoped crawls and
compare corpus versions."""

__version__ = "0.1.0"
