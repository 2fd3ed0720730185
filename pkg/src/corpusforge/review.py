"""HTTP service for the human domain-triage workflow.

Curators page through the domains contributing the most texts, read
samples, and record verdicts (good, machine_translated, generated,
encoding_broken). Verdicts land in an append-only JSONL log; replaying
the log reconstructs the active state, the latest verdict per domain
winning. The service exports the removal list consumed by the refine
stage and computes degradation summaries (share of corpus content on
bad domains within the top ranks).

Single-curator desk tool: no authentication, one writer, concurrent
reads.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse
from fastapi.staticfiles import StaticFiles

from corpusforge import diff
from corpusforge.corpus_io import format_rfc3339, parse_rfc3339, read_documents
from corpusforge.model import CorpusManifest, Document, build_manifest, utc_now
from corpusforge.refine import REMOVAL_LIST_HEADER, VERDICTS

SAMPLE_TRUNCATION_CHARS = 1500
DEFAULT_TOP_N = 250


@dataclass
class Verdict:
    domain: str
    verdict: str
    reason: str
    reviewer: str
    time: datetime

    def to_obj(self) -> dict:
        return {
            "domain": self.domain,
            "verdict": self.verdict,
            "reason": self.reason,
            "reviewer": self.reviewer,
            "time": format_rfc3339(self.time),
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "Verdict":
        return cls(
            domain=obj["domain"],
            verdict=obj["verdict"],
            reason=obj.get("reason", ""),
            reviewer=obj.get("reviewer", ""),
            time=parse_rfc3339(obj["time"]),
        )


class VerdictLog:
    """Append-only verdict store; the file is the source of truth."""

    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._active: Dict[str, Verdict] = {}
        if self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    verdict = Verdict.from_obj(json.loads(line))
                    self._active[verdict.domain] = verdict

    def record(self, verdict: Verdict) -> int:
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as handle:
                handle.write(json.dumps(verdict.to_obj(), ensure_ascii=False) + "\n")
            self._active[verdict.domain] = verdict
            return len(self._active)

    def active(self) -> Dict[str, Verdict]:
        with self._lock:
            return dict(self._active)


class ReviewCorpus:
    """Read-only corpus snapshot the service reviews."""

    def __init__(self, corpus_id: str, documents: List[Document]):
        self.corpus_id = corpus_id
        self.documents = documents
        self.manifest: CorpusManifest = build_manifest(
            documents, corpus_id=corpus_id
        )
        self.rows = diff.domain_report(documents, top_n=len(self.manifest.domain_counts))
        self._by_id = {doc.id: doc for doc in documents}
        self._by_domain: Dict[str, List[Document]] = {}
        for doc in documents:
            self._by_domain.setdefault(doc.domain, []).append(doc)

    def domain_docs(self, domain: str) -> Optional[List[Document]]:
        return self._by_domain.get(domain)


def load_review_corpus(corpus_path, corpus_id: Optional[str] = None) -> ReviewCorpus:
    path = Path(corpus_path)
    documents = list(read_documents(path))
    return ReviewCorpus(corpus_id or path.stem, documents)


def truncate_sample(text: str, limit: int = SAMPLE_TRUNCATION_CHARS) -> str:
    """Cut at the last whitespace within the limit; short text untouched."""
    if len(text) <= limit:
        return text
    cut = text.rfind(" ", 0, limit + 1)
    if cut <= 0:
        cut = limit
    return text[:cut]


def degradation_summary(
    corpus: ReviewCorpus, active: Dict[str, Verdict], top_n: int = DEFAULT_TOP_N
) -> dict:
    """Share of whole-corpus texts/words sitting on bad domains within the
    top_n ranked domains."""
    bad_texts = 0
    bad_words = 0
    n_bad = 0
    for row in corpus.rows[:top_n]:
        verdict = active.get(row.domain)
        if verdict is not None and verdict.verdict != "good":
            n_bad += 1
            bad_texts += row.texts
            bad_words += row.words
    manifest = corpus.manifest
    return {
        "corpus_id": corpus.corpus_id,
        "top_n": top_n,
        "n_bad_domains": n_bad,
        "bad_texts_pct": 100.0 * bad_texts / manifest.n_texts if manifest.n_texts else 0.0,
        "bad_words_pct": 100.0 * bad_words / manifest.n_words if manifest.n_words else 0.0,
    }


def create_app(
    corpora: Dict[str, ReviewCorpus],
    log: VerdictLog,
    ui_dir: Optional[str] = None,
) -> FastAPI:
    app = FastAPI(title="corpusforge review")

    def get_corpus(corpus_id: str) -> ReviewCorpus:
        corpus = corpora.get(corpus_id)
        if corpus is None:
            raise HTTPException(status_code=404, detail=f"unknown corpus {corpus_id!r}")
        return corpus

    @app.get("/api/corpora")
    def list_corpora():
        return [
            {
                "corpus_id": corpus.corpus_id,
                "n_texts": corpus.manifest.n_texts,
                "n_words": corpus.manifest.n_words,
                "n_domains": corpus.manifest.n_domains,
            }
            for corpus in corpora.values()
        ]

    @app.get("/api/corpora/{corpus_id}/domains")
    def list_domains(corpus_id: str, top: int = DEFAULT_TOP_N):
        corpus = get_corpus(corpus_id)
        active = log.active()
        rows = []
        for row in corpus.rows[:top]:
            verdict = active.get(row.domain)
            rows.append(
                {
                    "rank": row.rank,
                    "domain": row.domain,
                    "texts": row.texts,
                    "words": row.words,
                    "share_pct": row.share_pct,
                    "status": verdict.verdict if verdict else "unreviewed",
                }
            )
        rows.sort(key=lambda r: (0 if r["status"] == "unreviewed" else 1, r["rank"]))
        reviewed = sum(1 for r in rows if r["status"] != "unreviewed")
        return {"rows": rows, "reviewed": reviewed, "total": len(rows)}

    @app.get("/api/corpora/{corpus_id}/domains/{domain}/samples")
    def get_samples(corpus_id: str, domain: str, n: int = 5):
        corpus = get_corpus(corpus_id)
        docs = corpus.domain_docs(domain)
        if docs is None:
            raise HTTPException(status_code=404, detail=f"unknown domain {domain!r}")
        chosen = sorted(docs, key=lambda d: d.id)[:n]
        return [
            {
                "id": doc.id,
                "url": doc.url,
                "text": truncate_sample(doc.retained_text()),
            }
            for doc in chosen
        ]

    @app.post("/api/corpora/{corpus_id}/verdicts")
    def record_verdict(corpus_id: str, payload: dict):
        get_corpus(corpus_id)
        domain = payload.get("domain")
        verdict_value = payload.get("verdict")
        if not domain:
            raise HTTPException(status_code=422, detail="missing domain")
        if verdict_value not in VERDICTS:
            raise HTTPException(
                status_code=422,
                detail={
                    "error": f"invalid verdict {verdict_value!r}",
                    "allowed": list(VERDICTS),
                },
            )
        verdict = Verdict(
            domain=domain,
            verdict=verdict_value,
            reason=payload.get("reason", ""),
            reviewer=payload.get("reviewer", ""),
            time=utc_now(),
        )
        count = log.record(verdict)
        return {"recorded": verdict.to_obj(), "active_verdicts": count}

    @app.get("/api/corpora/{corpus_id}/removal-list")
    def removal_list(corpus_id: str):
        get_corpus(corpus_id)
        active = log.active()
        lines = ["\t".join(REMOVAL_LIST_HEADER)]
        for domain in sorted(active):
            verdict = active[domain]
            if verdict.verdict == "good":
                continue
            lines.append(
                "\t".join(
                    (
                        verdict.domain,
                        verdict.verdict,
                        verdict.reason,
                        verdict.reviewer,
                        format_rfc3339(verdict.time),
                    )
                )
            )
        return PlainTextResponse(
            "\n".join(lines) + "\n", media_type="text/tab-separated-values"
        )

    @app.get("/api/corpora/{corpus_id}/degradation")
    def degradation(corpus_id: str, top: int = DEFAULT_TOP_N):
        corpus = get_corpus(corpus_id)
        return degradation_summary(corpus, log.active(), top_n=top)

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def serve(corpus_path, log_path, port: int = 8080, host: str = "127.0.0.1", ui_dir=None):
    import uvicorn

    corpus = load_review_corpus(corpus_path)
    app = create_app({corpus.corpus_id: corpus}, VerdictLog(log_path), ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port)
