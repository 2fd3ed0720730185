"""Corpus-pair comparison: URL overlap, near-duplicate text overlap, the
weighted regression estimator relating the two, correlation with
significance, and distribution/domain reports.

Near-duplicate matching is expensive on large corpora; the regression
model offers a quick estimate of text overlap from URL overlap alone.
The published coefficients (intercept 1.3476, slope 1.2161, fitted over
seven national corpus pairs) ship as the default model; fitting fresh
coefficients from local measurements uses closed-form weighted least
squares.

Everything here is pure computation over in-memory inputs; report
writers emit deterministic TSV and JSON.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from math import fsum
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from corpusforge.dedup import (
    NEAR_DUPLICATE_THRESHOLD,
    MinHashSignature,
    find_near_duplicates,
)
from corpusforge.model import Document
from corpusforge.refine import MIX_LABEL, LabelSchema


def normalize_url(url: str) -> str:
    """Canonical URL form for overlap counting.

    Lowercase scheme and host, "www." stripped, default ports removed,
    a bare trailing slash dropped, fragment removed, query preserved.
    """
    from urllib.parse import urlsplit

    parts = urlsplit(url)
    if not parts.scheme or not parts.netloc:
        raise ValueError(f"not an absolute URL: {url!r}")
    scheme = parts.scheme.lower()
    host = (parts.hostname or "").lower()
    if host.startswith("www."):
        host = host[4:]
    port = parts.port
    if port is not None and not (
        (scheme == "http" and port == 80) or (scheme == "https" and port == 443)
    ):
        host = f"{host}:{port}"
    path = parts.path
    if path == "/":
        path = ""
    out = f"{scheme}://{host}{path}"
    if parts.query:
        out += f"?{parts.query}"
    return out


def url_overlap(urls_a: Iterable[str], urls_b: Iterable[str]) -> Tuple[float, float]:
    """Set-based shared-URL percentages in both directions."""
    set_a: Set[str] = set(urls_a)
    set_b: Set[str] = set(urls_b)
    if not set_a:
        raise ValueError("side A has no URLs; its overlap share is undefined")
    if not set_b:
        raise ValueError("side B has no URLs; its overlap share is undefined")
    shared = len(set_a & set_b)
    return 100.0 * shared / len(set_a), 100.0 * shared / len(set_b)


@dataclass(frozen=True)
class OverlapReport:
    """Shared/unique statistics for a corpus pair."""

    n_a: int
    n_b: int
    shared_pairs: int
    unique_in_a_pct: float
    unique_in_b_pct: float
    merged_total: int
    url_overlap_a_pct: Optional[float] = None
    url_overlap_b_pct: Optional[float] = None


def text_overlap(
    ids_a: Sequence[str],
    ids_b: Sequence[str],
    signatures_a: Mapping[str, MinHashSignature],
    signatures_b: Mapping[str, MinHashSignature],
    threshold: float = NEAR_DUPLICATE_THRESHOLD,
) -> OverlapReport:
    """Near-duplicate content overlap between two corpus versions.

    Matching runs in both directions so each side's unique share counts
    documents without any near-duplicate on the other side. Documents too
    short to carry a signature never match and count as unique. The
    merged total is corpus B plus the documents unique to A.
    """
    if not ids_a:
        raise ValueError("corpus A is empty")
    if not ids_b:
        raise ValueError("corpus B is empty")
    pairs_ab = find_near_duplicates(signatures_a, signatures_b, threshold)
    pairs_ba = find_near_duplicates(signatures_b, signatures_a, threshold)
    matched_a = len(pairs_ab)
    matched_b = len(pairs_ba)
    n_a, n_b = len(ids_a), len(ids_b)
    return OverlapReport(
        n_a=n_a,
        n_b=n_b,
        shared_pairs=matched_a,
        unique_in_a_pct=100.0 * (n_a - matched_a) / n_a,
        unique_in_b_pct=100.0 * (n_b - matched_b) / n_b,
        merged_total=n_b + (n_a - matched_a),
    )


@dataclass(frozen=True)
class RegressionModel:
    """Weighted least-squares line mapping URL overlap to text overlap."""

    intercept: float
    slope: float
    weights: Tuple[float, ...] = ()

    def predict(self, x: float) -> float:
        return self.intercept + self.slope * x


#: Coefficients fitted over the seven national corpus version pairs.
PUBLISHED_OVERLAP_MODEL = RegressionModel(intercept=1.3476, slope=1.2161)


def fit_weighted_line(
    points: Sequence[Tuple[float, float]], weights: Sequence[float]
) -> RegressionModel:
    """Closed-form weighted least squares through the given points.

    Uses centered, compensated sums; exact-on-line inputs recover their
    coefficients to full float precision regardless of the weights.
    """
    if len(points) != len(weights):
        raise ValueError("points and weights differ in length")
    if len(points) < 2:
        raise ValueError("need at least two points")
    if any(w <= 0 for w in weights):
        raise ValueError("weights must be positive")
    if len({x for x, _ in points}) < 2:
        raise ValueError("all x values equal; the fit is singular")
    w_total = fsum(weights)
    x_bar = fsum(w * x for (x, _), w in zip(points, weights)) / w_total
    y_bar = fsum(w * y for (_, y), w in zip(points, weights)) / w_total
    sxx = fsum(w * (x - x_bar) ** 2 for (x, _), w in zip(points, weights))
    sxy = fsum(w * (x - x_bar) * (y - y_bar) for (x, y), w in zip(points, weights))
    slope = sxy / sxx
    intercept = y_bar - slope * x_bar
    return RegressionModel(intercept=intercept, slope=slope, weights=tuple(weights))


@dataclass(frozen=True)
class OverlapPrediction:
    value: float
    clamped: bool


def predict_overlap(
    url_overlap_pct: float, model: RegressionModel = PUBLISHED_OVERLAP_MODEL
) -> OverlapPrediction:
    """Estimated text overlap percentage for a URL overlap percentage,
    clamped into [0, 100] with the clamp recorded."""
    if not 0.0 <= url_overlap_pct <= 100.0:
        raise ValueError(f"URL overlap percentage out of [0,100]: {url_overlap_pct}")
    raw = model.predict(url_overlap_pct)
    clamped = min(100.0, max(0.0, raw))
    return OverlapPrediction(value=clamped, clamped=clamped != raw)


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    n: int
    p: float


def pearson_with_p(points: Sequence[Tuple[float, float]]) -> CorrelationResult:
    """Pearson correlation with a two-sided t-test p-value.

    The p-value comes from the exact t distribution with n-2 degrees of
    freedom, evaluated through the regularized incomplete beta function.
    """
    n = len(points)
    if n < 3:
        raise ValueError("need at least three points")
    xs = [x for x, _ in points]
    ys = [y for _, y in points]
    x_bar = fsum(xs) / n
    y_bar = fsum(ys) / n
    sxx = fsum((x - x_bar) ** 2 for x in xs)
    syy = fsum((y - y_bar) ** 2 for y in ys)
    if sxx == 0.0 or syy == 0.0:
        raise ValueError("zero variance in x or y")
    sxy = fsum((x - x_bar) * (y - y_bar) for x, y in zip(xs, ys))
    r = sxy / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    return CorrelationResult(r=r, n=n, p=p_from_r(r, n))


def p_from_r(r: float, n: int) -> float:
    """Two-sided p-value of a Pearson coefficient under the null."""
    if n < 3:
        raise ValueError("need n >= 3")
    if abs(r) >= 1.0:
        return 0.0
    df = n - 2
    t = abs(r) * math.sqrt(df / (1.0 - r * r))
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) via the standard continued fraction, accurate well below
    1e-6 over the arguments used here."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def _beta_cf(a: float, b: float, x: float, max_iter: int = 300, eps: float = 1e-14) -> float:
    # Lentz's algorithm for the incomplete beta continued fraction.
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def percent_change(old_count: float, new_count: float) -> float:
    """Relative size change in percent; undefined for an empty baseline."""
    if old_count <= 0:
        raise ValueError("old count must be positive")
    return 100.0 * (new_count - old_count) / old_count


@dataclass(frozen=True)
class DistributionReport:
    schema: str
    per_corpus: Mapping[str, Mapping[str, float]]
    frequent: Tuple[str, ...]
    frequency_floor: float


def distribution_report(
    corpora: Sequence[Tuple[str, Sequence[Document]]],
    schema: LabelSchema,
    restrict_to_genre: Optional[str] = None,
    frequency_floor: float = 10.0,
) -> DistributionReport:
    """Per-corpus label percentages plus the frequent-label selection.

    A label is "frequent" when it reaches the floor percentage in at
    least one corpus. With ``restrict_to_genre`` set, only documents of
    that genre label enter the distribution (topic-within-news style).
    """
    all_labels = tuple(schema.labels) + (MIX_LABEL,)
    per_corpus: Dict[str, Dict[str, float]] = {}
    for name, documents in corpora:
        counts = {label: 0 for label in all_labels}
        total = 0
        for doc in documents:
            if restrict_to_genre is not None:
                if doc.genre is None or doc.genre.label != restrict_to_genre:
                    continue
            assignment = doc.genre if schema.name == "genre" else doc.topic
            if assignment is None:
                continue
            counts[assignment.label] += 1
            total += 1
        if total == 0:
            raise ValueError(f"corpus {name!r} has no labelled documents")
        per_corpus[name] = {label: 100.0 * c / total for label, c in counts.items()}
    frequent = tuple(
        label
        for label in all_labels
        if any(per_corpus[name][label] >= frequency_floor for name in per_corpus)
    )
    return DistributionReport(
        schema=schema.name,
        per_corpus=per_corpus,
        frequent=frequent,
        frequency_floor=frequency_floor,
    )


@dataclass(frozen=True)
class DomainRow:
    rank: int
    domain: str
    texts: int
    words: int
    share_pct: float
    sample_doc_ids: Tuple[str, ...]


def domain_report(documents: Sequence[Document], top_n: int = 250) -> List[DomainRow]:
    """Domains ranked by text count (ties by name), with corpus share and
    a deterministic sample of document ids (the lowest five)."""
    texts: Dict[str, int] = {}
    words: Dict[str, int] = {}
    ids: Dict[str, List[str]] = {}
    total_texts = 0
    for doc in documents:
        total_texts += 1
        texts[doc.domain] = texts.get(doc.domain, 0) + 1
        words[doc.domain] = words.get(doc.domain, 0) + doc.word_count
        bucket = ids.setdefault(doc.domain, [])
        bucket.append(doc.id)
    ranked = sorted(texts.items(), key=lambda kv: (-kv[1], kv[0]))[:top_n]
    rows = []
    for rank, (domain, n_texts) in enumerate(ranked, start=1):
        rows.append(
            DomainRow(
                rank=rank,
                domain=domain,
                texts=n_texts,
                words=words[domain],
                share_pct=100.0 * n_texts / total_texts if total_texts else 0.0,
                sample_doc_ids=tuple(sorted(ids[domain])[:5]),
            )
        )
    return rows


def write_distribution_tsv(report: DistributionReport, handle) -> None:
    corpora = list(report.per_corpus)
    handle.write("label\t" + "\t".join(corpora) + "\n")
    labels = list(next(iter(report.per_corpus.values())))
    for label in labels:
        row = [label] + [f"{report.per_corpus[name][label]:.4f}" for name in corpora]
        handle.write("\t".join(row) + "\n")
    handle.write("# frequent (floor {:g}%): {}\n".format(
        report.frequency_floor, ", ".join(report.frequent)
    ))


def write_diff_report(out_dir, report: dict) -> None:
    """One JSON document plus flat TSV views of the key tables."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(
        json.dumps(report, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    overlap = report["overlap"]
    with open(out / "overlap.tsv", "w", encoding="utf-8") as handle:
        handle.write("metric\tvalue\n")
        for key in sorted(overlap):
            value = overlap[key]
            formatted = f"{value:.4f}" if isinstance(value, float) else str(value)
            handle.write(f"{key}\t{formatted}\n")
    sizes = report["sizes"]
    with open(out / "sizes.tsv", "w", encoding="utf-8") as handle:
        handle.write("metric\ta\tb\tpercent_change\n")
        for key in sorted(sizes):
            row = sizes[key]
            handle.write(
                f"{key}\t{row['a']}\t{row['b']}\t{row['percent_change']:.4f}\n"
            )
