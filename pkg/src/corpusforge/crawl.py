"""TLD-scoped polite crawling and archive ingestion.

The crawl frontier is breadth-first and scoped to one national TLD plus
connected generic domains: a generic-TLD domain is admitted once enough
distinct in-scope pages link to it. Fetching is polite (per-host delay,
robots.txt honored, failing hosts retired after three errors).

Live crawling is optional; the rest of the pipeline works from archived
page records, either produced by ``crawl`` or ingested from the simple
record format below:

    #URL <url>
    #TIME <rfc3339>
    #STATUS <int>
    #LEN <body byte count>
    <body bytes>
    <newline>
"""

from __future__ import annotations

import logging
import time
import urllib.error
import urllib.request
import urllib.robotparser
from collections import deque
from dataclasses import dataclass, field
from datetime import datetime
from html.parser import HTMLParser
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Set, Tuple
from urllib.parse import urldefrag, urljoin

from corpusforge import urls
from corpusforge.corpus_io import format_rfc3339, parse_rfc3339
from corpusforge.model import utc_now

logger = logging.getLogger(__name__)

USER_AGENT = "corpusforge-crawler/0.1"

#: Generic TLDs eligible for link-count admission next to the national TLD.
GENERIC_TLDS = frozenset({"com", "net", "org", "info", "eu"})

MAX_HOST_FAILURES = 3


@dataclass(frozen=True)
class ScopeRule:
    """What belongs to a national crawl."""

    national_tld: str
    allowed_generic_domains: frozenset = frozenset()
    link_threshold: int = 3

    def __post_init__(self):
        tld = self.national_tld
        if not tld or tld != tld.lower() or tld.startswith("."):
            raise ValueError(f"national_tld must be lowercase without a dot: {tld!r}")
        if self.link_threshold < 1:
            raise ValueError("link_threshold must be >= 1")


@dataclass(frozen=True)
class PageRecord:
    url: str
    fetch_time: datetime
    http_status: int
    content_type: str
    raw_body: bytes

    def __post_init__(self):
        if self.http_status == 200 and not self.raw_body:
            raise ValueError(f"status 200 with empty body: {self.url}")


@dataclass
class HostState:
    host: str
    next_allowed_fetch_time: float = 0.0
    robots: Optional[urllib.robotparser.RobotFileParser] = None
    failure_count: int = 0


@dataclass(frozen=True)
class Politeness:
    delay_seconds: float = 5.0
    max_pages: int = 100
    max_depth: int = 3

    def __post_init__(self):
        if self.delay_seconds < 1:
            raise ValueError("delay_seconds must be >= 1")


def _netloc(url: str) -> str:
    from urllib.parse import urlsplit

    netloc = urlsplit(url).netloc
    if not netloc:
        raise ValueError(f"not an absolute URL: {url!r}")
    return netloc.lower()


def in_scope(url: str, rule: ScopeRule, inlink_count: int = 0) -> bool:
    """Whether a URL belongs to the scoped crawl.

    True for the national TLD, for explicitly allowed generic domains,
    and for {com,net,org,info,eu} domains with enough in-scope in-links.
    """
    host = urls.host_of(url)  # raises on relative/unparseable input
    tld = urls.tld_of_host(host)
    if tld == rule.national_tld:
        return True
    if urls.registrable_domain(host) in rule.allowed_generic_domains:
        return True
    if tld in GENERIC_TLDS and inlink_count >= rule.link_threshold:
        return True
    return False


class _AnchorParser(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.hrefs: List[str] = []

    def handle_starttag(self, tag, attrs):
        if tag != "a":
            return
        for name, value in attrs:
            if name == "href" and value:
                self.hrefs.append(value)


def extract_links(html: bytes, base_url: str) -> List[str]:
    """Absolute link targets of a page, fragment-stripped, first-seen order.

    Non-HTTP(S) schemes (mailto, javascript) are ignored; malformed
    markup yields a best-effort list.
    """
    parser = _AnchorParser()
    try:
        parser.feed(html.decode("utf-8", errors="replace"))
        parser.close()
    except Exception:
        pass
    seen: Set[str] = set()
    out: List[str] = []
    for href in parser.hrefs:
        absolute, _ = urldefrag(urljoin(base_url, href.strip()))
        if not absolute.startswith(("http://", "https://")):
            continue
        if absolute not in seen:
            seen.add(absolute)
            out.append(absolute)
    return out


def _fetch(url: str, timeout: float = 30.0) -> Tuple[int, str, bytes]:
    request = urllib.request.Request(url, headers={"User-Agent": USER_AGENT})
    try:
        with urllib.request.urlopen(request, timeout=timeout) as response:
            return (
                response.status,
                response.headers.get("Content-Type", ""),
                response.read(),
            )
    except urllib.error.HTTPError as exc:
        return exc.code, exc.headers.get("Content-Type", "") if exc.headers else "", b""


def _load_robots(host_state: HostState, scheme: str) -> None:
    parser = urllib.robotparser.RobotFileParser()
    robots_url = f"{scheme}://{host_state.host}/robots.txt"
    try:
        request = urllib.request.Request(robots_url, headers={"User-Agent": USER_AGENT})
        with urllib.request.urlopen(request, timeout=10.0) as response:
            parser.parse(response.read().decode("utf-8", errors="replace").splitlines())
    except Exception:
        parser.allow_all = True
    host_state.robots = parser


def crawl(
    seeds: Iterable[str],
    rule: ScopeRule,
    politeness: Politeness,
) -> Iterator[PageRecord]:
    """Breadth-first polite crawl of the scoped frontier.

    Emits one record per fetched HTML response; stops at max_pages.
    Network failures retire a host after three errors. Generic-domain
    in-link counting admits connected generic domains as the crawl
    discovers them.
    """
    frontier = deque()
    visited: Set[str] = set()
    hosts: Dict[str, HostState] = {}
    generic_inlinks: Dict[str, Set[str]] = {}

    for seed in seeds:
        clean, _ = urldefrag(seed)
        if not in_scope(clean, rule):
            raise ValueError(f"seed out of scope: {seed}")
        if clean not in visited:
            visited.add(clean)
            frontier.append((clean, 0))

    emitted = 0
    while frontier and emitted < politeness.max_pages:
        url, depth = frontier.popleft()
        host = _netloc(url)
        state = hosts.setdefault(host, HostState(host=host))
        if state.failure_count >= MAX_HOST_FAILURES:
            continue
        if state.robots is None:
            _load_robots(state, url.split(":", 1)[0])
        if not state.robots.can_fetch(USER_AGENT, url):
            logger.info("robots.txt disallows %s", url)
            continue

        wait = state.next_allowed_fetch_time - time.monotonic()
        if wait > 0:
            time.sleep(wait)
        state.next_allowed_fetch_time = time.monotonic() + politeness.delay_seconds

        try:
            status, content_type, body = _fetch(url)
        except Exception as exc:
            state.failure_count += 1
            logger.warning("fetch failed (%d) for %s: %s", state.failure_count, url, exc)
            continue

        if "html" not in content_type.lower():
            continue
        if status == 200 and not body:
            continue
        record = PageRecord(
            url=url,
            fetch_time=utc_now(),
            http_status=status,
            content_type=content_type,
            raw_body=body,
        )
        emitted += 1
        yield record

        if status != 200 or depth >= politeness.max_depth:
            continue
        for link in extract_links(body, url):
            if link in visited:
                continue
            link_host = urls.host_of(link)
            link_domain = urls.registrable_domain(link_host)
            if urls.tld_of_host(link_host) in GENERIC_TLDS:
                generic_inlinks.setdefault(link_domain, set()).add(url)
            inlinks = len(generic_inlinks.get(link_domain, ()))
            if in_scope(link, rule, inlink_count=inlinks):
                visited.add(link)
                frontier.append((link, depth + 1))


def write_records(path, records: Iterable[PageRecord]) -> int:
    """Serialize page records into the archive format; returns the count."""
    n = 0
    with open(path, "wb") as handle:
        for record in records:
            header = (
                f"#URL {record.url}\n"
                f"#TIME {format_rfc3339(record.fetch_time)}\n"
                f"#STATUS {record.http_status}\n"
                f"#LEN {len(record.raw_body)}\n"
            )
            handle.write(header.encode("utf-8"))
            handle.write(record.raw_body)
            handle.write(b"\n")
            n += 1
    return n


def _expect_header(data: bytes, offset: int, prefix: bytes) -> Tuple[bytes, int]:
    end = data.find(b"\n", offset)
    if end < 0 or not data[offset:end].startswith(prefix):
        raise ValueError(f"truncated or malformed record at byte offset {offset}")
    return data[offset + len(prefix) : end], end + 1


def ingest_warc(path) -> Iterator[PageRecord]:
    """Stream page records from an archive file, order preserved.

    The format carries no content type; records are assumed HTML, which
    matches what the crawler stores. Truncated records raise with the
    byte offset of the failure.
    """
    data = Path(path).read_bytes()
    offset = 0
    while offset < len(data):
        url_raw, offset = _expect_header(data, offset, b"#URL ")
        time_raw, offset = _expect_header(data, offset, b"#TIME ")
        status_raw, offset = _expect_header(data, offset, b"#STATUS ")
        len_raw, offset = _expect_header(data, offset, b"#LEN ")
        try:
            body_len = int(len_raw)
            status = int(status_raw)
        except ValueError:
            raise ValueError(f"malformed record header before byte offset {offset}")
        if offset + body_len + 1 > len(data):
            raise ValueError(f"truncated record body at byte offset {offset}")
        body = data[offset : offset + body_len]
        offset += body_len
        if data[offset : offset + 1] != b"\n":
            raise ValueError(f"missing record separator at byte offset {offset}")
        offset += 1
        yield PageRecord(
            url=url_raw.decode("utf-8"),
            fetch_time=parse_rfc3339(time_raw.decode("utf-8")),
            http_status=status,
            content_type="text/html",
            raw_body=body,
        )
