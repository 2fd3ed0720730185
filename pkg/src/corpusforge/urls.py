"""Small URL/host helpers shared by the crawl and extract stages."""

from __future__ import annotations

from urllib.parse import urlsplit


def host_of(url: str) -> str:
    parts = urlsplit(url)
    if not parts.scheme or not parts.hostname:
        raise ValueError(f"not an absolute URL: {url!r}")
    return parts.hostname.lower()


def tld_of_host(host: str) -> str:
    """Final dot-separated label of a hostname."""
    return host.rsplit(".", 1)[-1].lower()


def registrable_domain(host: str) -> str:
    """Last two labels of the host (example.si for www.example.si).

    Multi-label public suffixes (co.uk style) are not modelled; national
    TLD scoping here only needs the final label.
    """
    labels = host.lower().split(".")
    if len(labels) <= 2:
        return host.lower()
    return ".".join(labels[-2:])
