"""forge: the command-line pipeline.

Stages are file-to-file and composable:

    forge crawl    seeds -> pages.rec         (live, optional)
    forge ingest   pages.rec -> raw.jsonl
    forge extract  raw.jsonl -> docs.jsonl
    forge langid   docs.jsonl -> routed.jsonl
    forge dedup    routed.jsonl -> deduped.jsonl (+ sigs.bin)
    forge refine   deduped.jsonl -> final.jsonl
    forge vert     final.jsonl -> corpus.vert
    forge stats    final.jsonl -> label distribution TSV
    forge diff     two corpora -> overlap/size report
    forge review   serve the domain triage API and UI

All stages are deterministic for fixed inputs, so repeated runs produce
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import logging
import shlex
import sys
from pathlib import Path
from typing import Dict, List, Optional

from corpusforge import corpus_io, crawl, dedup, diff, extract, langid, refine, vert
from corpusforge.model import Document, build_manifest

logger = logging.getLogger("corpusforge")


def _read_raw_pages(path):
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                yield json.loads(line)


def cmd_crawl(args) -> int:
    seeds = [
        line.strip()
        for line in Path(args.seeds).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    rule = crawl.ScopeRule(
        national_tld=args.tld,
        allowed_generic_domains=frozenset(args.allow_domain or ()),
        link_threshold=args.link_threshold,
    )
    politeness = crawl.Politeness(
        delay_seconds=args.delay, max_pages=args.max_pages, max_depth=args.max_depth
    )
    records = crawl.crawl(seeds, rule, politeness)
    n = crawl.write_records(args.out, records)
    logger.info("crawled %d pages into %s", n, args.out)
    return 0


def cmd_ingest(args) -> int:
    n = 0
    with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
        for record in crawl.ingest_warc(args.infile):
            obj = {
                "url": record.url,
                "time": corpus_io.format_rfc3339(record.fetch_time),
                "status": record.http_status,
                "html": record.raw_body.decode("utf-8", errors="replace"),
            }
            handle.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")))
            handle.write("\n")
            n += 1
    logger.info("ingested %d page records into %s", n, args.out)
    return 0


def _load_params(args) -> extract.ExtractionParams:
    stopwords = args.stopwords
    if stopwords in extract.SEED_LANGUAGES or stopwords == "all":
        stopword_set = extract.load_stopwords(stopwords)
    else:
        tokens = Path(stopwords).read_text(encoding="utf-8").split()
        stopword_set = frozenset(t.casefold() for t in tokens)
    overrides = {}
    if args.params:
        overrides = json.loads(Path(args.params).read_text(encoding="utf-8"))
    return extract.ExtractionParams(stopwords=stopword_set, **overrides)


def cmd_extract(args) -> int:
    params = _load_params(args)
    written = 0
    skipped = 0
    with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
        for obj in _read_raw_pages(args.infile):
            if obj.get("status") != 200:
                skipped += 1
                continue
            doc = extract.extract_document(
                url=obj["url"],
                crawl_time=corpus_io.parse_rfc3339(obj["time"]),
                html=obj["html"].encode("utf-8"),
                params=params,
            )
            if doc is None:
                skipped += 1
                continue
            handle.write(corpus_io.dumps_document(doc))
            handle.write("\n")
            written += 1
    logger.info("extracted %d documents (%d pages skipped)", written, skipped)
    return 0


def cmd_langid(args) -> int:
    if args.models:
        models = langid.load_models(args.models)
    else:
        models = langid.train_default_models()
    kept = 0
    rejected = 0
    with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
        for doc in corpus_io.read_documents(args.infile):
            routed = langid.process_document(doc, models, args.target)
            if routed is None:
                rejected += 1
                continue
            handle.write(corpus_io.dumps_document(routed))
            handle.write("\n")
            kept += 1
    logger.info("routed %d documents to %s (%d rejected)", kept, args.target, rejected)
    return 0


def cmd_dedup(args) -> int:
    documents = corpus_io.read_documents(args.infile)
    deduped = dedup.dedup_paragraphs(dedup.dedup_exact(documents))
    signatures: Dict[str, dedup.MinHashSignature] = {}
    kept = 0
    unsigned = 0
    with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
        for doc in deduped:
            handle.write(corpus_io.dumps_document(doc))
            handle.write("\n")
            kept += 1
            try:
                signatures[doc.id] = dedup.signature_for_document(doc)
            except ValueError:
                unsigned += 1  # too short to shingle; counts as unique downstream
    if args.sigs and signatures:
        dedup.write_signatures(args.sigs, signatures)
    logger.info("deduplicated to %d documents (%d unsigned)", kept, unsigned)
    return 0


def cmd_refine(args) -> int:
    documents = list(corpus_io.read_documents(args.infile))
    dropped_short = 0
    survivors: List[Document] = []
    for doc in documents:
        if refine.filter_short(doc) is None:
            survivors.append(doc)
        else:
            dropped_short += 1
    if args.removal:
        removal = refine.read_removal_list(args.removal)
        survivors, removed = refine.apply_removal_list(survivors, removal)
        for domain, count in removed.items():
            logger.info("removal list dropped %d documents from %s", count, domain)
    if args.classifier_cmd:
        classifier = refine.SubprocessClassifier(shlex.split(args.classifier_cmd))
    else:
        classifier = refine.StubClassifier()
    topic_schema = refine.load_topic_schema(args.topic_schema)
    annotated, stats = refine.annotate_corpus(
        survivors, classifier, topic_schema=topic_schema
    )
    corpus_io.write_documents(args.out, annotated)
    logger.info(
        "refined corpus: %d documents (%d dropped short, %d annotation failures)",
        len(annotated),
        dropped_short,
        stats.failed,
    )
    return 0


def cmd_vert(args) -> int:
    n = 0
    with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
        for doc in corpus_io.read_documents(args.infile):
            handle.write(vert.export_vert(doc))
            n += 1
    logger.info("exported %d documents to VERT", n)
    return 0


def cmd_stats(args) -> int:
    documents = list(corpus_io.read_documents(args.infile))
    schema = (
        refine.load_genre_schema() if args.schema == "genre" else refine.load_topic_schema()
    )
    report = diff.distribution_report(
        [(Path(args.infile).stem, documents)],
        schema,
        restrict_to_genre=args.restrict_to_genre,
        frequency_floor=args.frequency_floor,
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
            diff.write_distribution_tsv(report, handle)
    else:
        diff.write_distribution_tsv(report, sys.stdout)
    return 0


def _corpus_paths(path_text: str):
    path = Path(path_text)
    if path.is_dir():
        candidates = sorted(path.glob("*.jsonl"))
        if len(candidates) != 1:
            raise SystemExit(
                f"{path}: expected exactly one .jsonl corpus file, found {len(candidates)}"
            )
        jsonl = candidates[0]
    else:
        jsonl = path
    sidecar = jsonl.with_name("sigs.bin")
    return jsonl, sidecar if sidecar.exists() else None


def _signatures_for(documents, sidecar) -> Dict[str, dedup.MinHashSignature]:
    if sidecar is not None:
        return dedup.read_signatures(sidecar)
    signatures = {}
    for doc in documents:
        try:
            signatures[doc.id] = dedup.signature_for_document(doc)
        except ValueError:
            continue
    return signatures


def cmd_diff(args) -> int:
    jsonl_a, sigs_a_path = _corpus_paths(args.a)
    jsonl_b, sigs_b_path = _corpus_paths(args.b)
    docs_a = list(corpus_io.read_documents(jsonl_a))
    docs_b = list(corpus_io.read_documents(jsonl_b))
    manifest_a = build_manifest(docs_a, corpus_id=jsonl_a.stem)
    manifest_b = build_manifest(docs_b, corpus_id=jsonl_b.stem)

    urls_a = {diff.normalize_url(doc.url) for doc in docs_a}
    urls_b = {diff.normalize_url(doc.url) for doc in docs_b}
    url_a_in_b, url_b_in_a = diff.url_overlap(urls_a, urls_b)

    sigs_a = _signatures_for(docs_a, sigs_a_path)
    sigs_b = _signatures_for(docs_b, sigs_b_path)
    report = diff.text_overlap(
        [d.id for d in docs_a],
        [d.id for d in docs_b],
        sigs_a,
        sigs_b,
        threshold=args.threshold,
    )
    predicted = diff.predict_overlap(url_b_in_a)
    measured_shared_b = 100.0 - report.unique_in_b_pct

    output = {
        "overlap": {
            "n_a": report.n_a,
            "n_b": report.n_b,
            "shared_pairs": report.shared_pairs,
            "unique_in_a_pct": report.unique_in_a_pct,
            "unique_in_b_pct": report.unique_in_b_pct,
            "merged_total": report.merged_total,
            "url_overlap_a_pct": url_a_in_b,
            "url_overlap_b_pct": url_b_in_a,
            "predicted_shared_b_pct": predicted.value,
            "measured_shared_b_pct": measured_shared_b,
        },
        "sizes": {
            "texts": {
                "a": manifest_a.n_texts,
                "b": manifest_b.n_texts,
                "percent_change": diff.percent_change(
                    manifest_a.n_texts, manifest_b.n_texts
                ),
            },
            "words": {
                "a": manifest_a.n_words,
                "b": manifest_b.n_words,
                "percent_change": diff.percent_change(
                    manifest_a.n_words, manifest_b.n_words
                ),
            },
        },
        "threshold": args.threshold,
    }
    diff.write_diff_report(args.out, output)
    logger.info("diff report written to %s", args.out)
    return 0


def cmd_review_serve(args) -> int:
    from corpusforge import review

    review.serve(
        corpus_path=args.corpus,
        log_path=args.log,
        port=args.port,
        host=args.host,
        ui_dir=args.ui,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forge", description="web corpus construction and comparison"
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("crawl", help="polite scoped crawl to a page archive")
    p.add_argument("--seeds", required=True)
    p.add_argument("--tld", required=True)
    p.add_argument("--delay", type=float, default=5.0)
    p.add_argument("--max-pages", type=int, default=100)
    p.add_argument("--max-depth", type=int, default=3)
    p.add_argument("--link-threshold", type=int, default=3)
    p.add_argument("--allow-domain", action="append")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_crawl)

    p = sub.add_parser("ingest", help="page archive to raw page JSONL")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("extract", help="raw pages to cleaned documents")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--params", help="JSON file overriding extraction thresholds")
    p.add_argument(
        "--stopwords",
        default="all",
        help="language code, 'all', or a stopword file path",
    )
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("langid", help="route documents to a target corpus")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--models", help="model directory (default: train from bundled seeds)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_langid)

    p = sub.add_parser("dedup", help="exact and near-duplicate removal")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--sigs", help="signature sidecar output path")
    p.set_defaults(func=cmd_dedup)

    p = sub.add_parser("refine", help="length filter, removal list, annotation")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--removal", help="removal list TSV")
    p.add_argument("--classifier-cmd", help="external classifier command")
    p.add_argument("--topic-schema", help="alternative topic schema JSON")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("vert", help="export documents as VERT")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_vert)

    p = sub.add_parser("stats", help="label distribution report")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--schema", choices=("genre", "topic"), default="genre")
    p.add_argument("--restrict-to-genre")
    p.add_argument("--frequency-floor", type=float, default=10.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("diff", help="compare two corpus versions")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--threshold", type=float, default=dedup.NEAR_DUPLICATE_THRESHOLD)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("review", help="domain triage service")
    review_sub = p.add_subparsers(dest="review_command", required=True)
    ps = review_sub.add_parser("serve")
    ps.add_argument("--corpus", required=True)
    ps.add_argument("--log", required=True)
    ps.add_argument("--port", type=int, default=8080)
    ps.add_argument("--host", default="127.0.0.1")
    ps.add_argument("--ui", help="static UI bundle directory")
    ps.set_defaults(func=cmd_review_serve)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
