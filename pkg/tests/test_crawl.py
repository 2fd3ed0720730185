import threading
import time
from datetime import datetime, timezone
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from conftest import FIXED_TIME
from corpusforge.crawl import (
    GENERIC_TLDS,
    PageRecord,
    Politeness,
    ScopeRule,
    crawl,
    extract_links,
    in_scope,
    ingest_warc,
    write_records,
)

RULE_SI = ScopeRule(national_tld="si")


class TestScope:
    def test_national_tld(self):
        assert in_scope("https://example.si/a", RULE_SI, 0)

    def test_foreign_tld_excluded_regardless_of_links(self):
        assert not in_scope("https://example.de/a", RULE_SI, 99)

    def test_generic_tld_link_threshold(self):
        rule = ScopeRule(national_tld="si", link_threshold=3)
        assert in_scope("https://blog.com/x", rule, inlink_count=3)
        assert not in_scope("https://blog.com/x", rule, inlink_count=2)

    def test_allowed_generic_domain(self):
        rule = ScopeRule(
            national_tld="si", allowed_generic_domains=frozenset({"znanec.com"})
        )
        assert in_scope("https://www.znanec.com/a", rule, 0)

    def test_relative_url_errors(self):
        with pytest.raises(ValueError):
            in_scope("/relative", RULE_SI, 0)

    def test_rule_validation(self):
        with pytest.raises(ValueError):
            ScopeRule(national_tld=".si")
        with pytest.raises(ValueError):
            ScopeRule(national_tld="si", link_threshold=0)


class TestExtractLinks:
    def test_relative_resolution(self):
        assert extract_links(b'<a href="/b">b</a>', "https://x.si/a") == [
            "https://x.si/b"
        ]

    def test_no_anchors(self):
        assert extract_links(b"<p>nothing here</p>", "https://x.si/") == []

    def test_fixture_with_mixed_anchors_hand_enumerated(self):
        html = """
        <a href="/abs">1</a>
        <a href="rel/page">2</a>
        <a href="https://other.si/x">3</a>
        <a href="../up">4</a>
        <a href="#frag">5</a>
        <a href="/abs">6 (dup)</a>
        <a href="mailto:a@b.si">7</a>
        <a href="javascript:void(0)">8</a>
        <a href="?q=1">9</a>
        <a href="//proto.si/rel">10</a>
        <a href="/abs#frag2">11 (dup after defrag)</a>
        <a href="https://x.si/dir/a/">12</a>
        """.encode()
        got = extract_links(html, "https://x.si/dir/page")
        assert got == [
            "https://x.si/abs",
            "https://x.si/dir/rel/page",
            "https://other.si/x",
            "https://x.si/up",
            "https://x.si/dir/page",
            "https://x.si/dir/page?q=1",
            "https://proto.si/rel",
            "https://x.si/dir/a/",
        ]

    def test_malformed_markup_best_effort(self):
        html = b'<a href="/ok">x</a><a href="/broken'
        assert "https://x.si/ok" in extract_links(html, "https://x.si/")


def record(url="https://x.si/a", status=200, body=b"<html>telo strani</html>"):
    return PageRecord(
        url=url,
        fetch_time=FIXED_TIME,
        http_status=status,
        content_type="text/html",
        raw_body=body,
    )


class TestArchiveFormat:
    def test_empty_file(self, tmp_path):
        path = tmp_path / "pages.rec"
        path.write_bytes(b"")
        assert list(ingest_warc(path)) == []

    def test_round_trip_order_preserved(self, tmp_path):
        records = [record(url=f"https://x.si/{i}", body=f"telo {i}".encode()) for i in range(50)]
        path = tmp_path / "pages.rec"
        write_records(path, records)
        loaded = list(ingest_warc(path))
        assert loaded == records

    def test_non_200_passes_through(self, tmp_path):
        path = tmp_path / "pages.rec"
        write_records(path, [PageRecord("https://x.si/gone", FIXED_TIME, 404, "text/html", b"")])
        (loaded,) = list(ingest_warc(path))
        assert loaded.http_status == 404

    def test_truncated_record_reports_offset(self, tmp_path):
        path = tmp_path / "pages.rec"
        write_records(path, [record()])
        data = path.read_bytes()
        path.write_bytes(data[:-5])
        with pytest.raises(ValueError, match="offset"):
            list(ingest_warc(path))

    def test_binary_body_round_trip(self, tmp_path):
        body = bytes(range(256)) + b"\n#URL fake\n"
        path = tmp_path / "pages.rec"
        write_records(path, [record(body=body)])
        (loaded,) = list(ingest_warc(path))
        assert loaded.raw_body == body


PAGES = {
    "/": '<html><body><a href="/a">a</a> <a href="/b">b</a></body></html>',
    "/a": '<html><body><a href="/c">c</a></body></html>',
    "/b": '<html><body><a href="/d">d</a> <a href="/missing">x</a></body></html>',
    "/c": "<html><body>konec</body></html>",
    "/d": "<html><body>tudi konec</body></html>",
}


class _Handler(BaseHTTPRequestHandler):
    robots = ""

    def do_GET(self):
        if self.path == "/robots.txt":
            payload = self.robots.encode()
            self.send_response(200)
            self.send_header("Content-Type", "text/plain")
        elif self.path in PAGES:
            payload = PAGES[self.path].encode()
            self.send_response(200)
            self.send_header("Content-Type", "text/html; charset=utf-8")
        else:
            payload = b"<html>not found</html>"
            self.send_response(404)
            self.send_header("Content-Type", "text/html")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)
        self.server.fetch_log.append((self.path, time.monotonic()))

    def log_message(self, *args):
        pass


@pytest.fixture
def local_server():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    server.fetch_log = []
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address
    yield server, f"http://{host}:{port}"
    server.shutdown()


def loopback_rule():
    # the loopback host has no dots; "127.0.0.1" ends in a numeric label,
    # so scope it via the numeric pseudo-TLD
    return ScopeRule(national_tld="1")


class TestCrawl:
    def test_five_pages_with_polite_spacing(self, local_server):
        server, base = local_server
        _Handler.robots = ""
        records = list(
            crawl(
                [f"{base}/"],
                loopback_rule(),
                Politeness(delay_seconds=1.0, max_pages=5, max_depth=3),
            )
        )
        assert len(records) == 5
        assert {r.url.rsplit("/", 1)[-1] for r in records} == {"", "a", "b", "c", "d"}
        page_times = [t for path, t in server.fetch_log if path != "/robots.txt"]
        gaps = [b - a for a, b in zip(page_times, page_times[1:])]
        assert all(gap >= 0.95 for gap in gaps)

    def test_robots_disallow_blocks_seed(self, local_server):
        server, base = local_server
        _Handler.robots = "User-agent: *\nDisallow: /\n"
        records = list(
            crawl(
                [f"{base}/"],
                loopback_rule(),
                Politeness(delay_seconds=1.0, max_pages=5, max_depth=2),
            )
        )
        assert records == []

    def test_max_depth_zero_fetches_only_seeds(self, local_server):
        server, base = local_server
        _Handler.robots = ""
        records = list(
            crawl(
                [f"{base}/"],
                loopback_rule(),
                Politeness(delay_seconds=1.0, max_pages=10, max_depth=0),
            )
        )
        assert [r.url for r in records] == [f"{base}/"]

    def test_max_pages_cap(self, local_server):
        server, base = local_server
        _Handler.robots = ""
        records = list(
            crawl(
                [f"{base}/"],
                loopback_rule(),
                Politeness(delay_seconds=1.0, max_pages=2, max_depth=3),
            )
        )
        assert len(records) == 2

    def test_out_of_scope_seed_rejected(self):
        with pytest.raises(ValueError):
            list(
                crawl(
                    ["https://example.de/"],
                    RULE_SI,
                    Politeness(delay_seconds=1.0, max_pages=1, max_depth=0),
                )
            )

    def test_politeness_validation(self):
        with pytest.raises(ValueError):
            Politeness(delay_seconds=0.5)

    def test_crawl_cli_writes_ingestable_archive(self, local_server, tmp_path):
        from corpusforge.cli import main

        server, base = local_server
        _Handler.robots = ""
        seeds = tmp_path / "seeds.txt"
        seeds.write_text(f"{base}/\n", encoding="utf-8")
        out = tmp_path / "pages.rec"
        assert main([
            "crawl", "--seeds", str(seeds), "--tld", "1", "--delay", "1",
            "--max-pages", "2", "--max-depth", "1", "--out", str(out),
        ]) == 0
        records = list(ingest_warc(out))
        assert len(records) == 2
        assert all(r.http_status == 200 for r in records)
