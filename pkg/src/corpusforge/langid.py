"""Language identification and corpus routing.

Two independent character-level voters decide the macro language of a
text: a trigram model with add-one smoothing and a rank-order n-gram
profile classifier (out-of-place distance). Their agreement gates the
decision; disagreement means "not reliably identified" and the text is
rejected for generic-TLD routing.

Bosnian, Croatian, Montenegrin and Serbian are mutually intelligible and
indistinguishable at the character level, so they are modelled as one
macro class ("hbs") by the voters and separated afterwards by a Naive
Bayes discriminator over language-specific frequency wordlists.

Routing is TLD-first: texts from national TLDs go to the corresponding
corpus unconditionally; generic-TLD texts are routed by the voters (and
the discriminator within hbs) or rejected.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple

from corpusforge.model import Document
from corpusforge.textutil import word_tokens

HBS_LANGUAGES = ("bs", "cnr", "hr", "sr")  # fixed tie-break order

MACRO_LANGUAGES = ("hbs", "bg", "mk", "sl")

NATIONAL_TLD_TO_CORPUS = {
    "ba": "bs",
    "bg": "bg",
    "hr": "hr",
    "mk": "mk",
    "me": "cnr",
    "rs": "sr",
    "si": "sl",
}

GENERIC_ROUTABLE = ("bg", "mk", "sl")

MIN_IDENTIFIABLE_CHARS = 10
MIN_TRAINING_CHARS = 1000


def macro_language(corpus_code: str) -> str:
    """The voter-level class of a target corpus code."""
    return "hbs" if corpus_code in HBS_LANGUAGES else corpus_code


def _clean(text: str) -> str:
    return " ".join(text.casefold().split())


@dataclass(frozen=True)
class CharNgramModel:
    """Per-language log-probabilities over character trigrams.

    Add-one smoothing over the shared vocabulary plus one out-of-vocabulary
    bucket, so every language's distribution sums to one exactly.
    """

    languages: Tuple[str, ...]
    log_probs: Mapping[str, Mapping[str, float]]
    oov_log_prob: Mapping[str, float]
    vocab_size: int
    n: int = 3

    def score(self, text: str) -> Dict[str, float]:
        text = _clean(text)
        grams = [text[i : i + self.n] for i in range(len(text) - self.n + 1)]
        scores = {}
        for lang in self.languages:
            table = self.log_probs[lang]
            oov = self.oov_log_prob[lang]
            scores[lang] = sum(table.get(g, oov) for g in grams)
        return scores

    def identify(self, text: str) -> str:
        scores = self.score(text)
        return max(sorted(scores), key=lambda lang: scores[lang])

    def to_obj(self) -> dict:
        return {
            "kind": "char_ngram",
            "version": 1,
            "n": self.n,
            "languages": list(self.languages),
            "vocab_size": self.vocab_size,
            "log_probs": {lang: dict(t) for lang, t in self.log_probs.items()},
            "oov_log_prob": dict(self.oov_log_prob),
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "CharNgramModel":
        return cls(
            languages=tuple(obj["languages"]),
            log_probs=obj["log_probs"],
            oov_log_prob=obj["oov_log_prob"],
            vocab_size=obj["vocab_size"],
            n=obj["n"],
        )


def train_char_ngram(samples: Mapping[str, str], n: int = 3) -> CharNgramModel:
    """Train the trigram voter from one text sample per language.

    Each sample must have at least 1000 characters; shorter samples raise
    a ValueError naming the language.
    """
    counts: Dict[str, Dict[str, int]] = {}
    vocab = set()
    for lang in sorted(samples):
        text = _clean(samples[lang])
        if len(text) < MIN_TRAINING_CHARS:
            raise ValueError(
                f"training sample for {lang!r} has {len(text)} characters, "
                f"need at least {MIN_TRAINING_CHARS}"
            )
        table: Dict[str, int] = {}
        for i in range(len(text) - n + 1):
            gram = text[i : i + n]
            table[gram] = table.get(gram, 0) + 1
        counts[lang] = table
        vocab.update(table)
    vocab_size = len(vocab)
    log_probs: Dict[str, Dict[str, float]] = {}
    oov: Dict[str, float] = {}
    for lang, table in counts.items():
        total = sum(table.values())
        denom = total + vocab_size + 1  # +1: shared out-of-vocabulary bucket
        log_probs[lang] = {g: math.log((table.get(g, 0) + 1) / denom) for g in vocab}
        oov[lang] = math.log(1.0 / denom)
    return CharNgramModel(
        languages=tuple(sorted(samples)),
        log_probs=log_probs,
        oov_log_prob=oov,
        vocab_size=vocab_size,
        n=n,
    )


@dataclass(frozen=True)
class RankProfileModel:
    """Rank-ordered n-gram profiles (n in 1..4), compared by the
    out-of-place distance. The second, independent voter."""

    languages: Tuple[str, ...]
    profiles: Mapping[str, Tuple[str, ...]]
    profile_len: int = 300
    max_n: int = 4

    def _text_profile(self, text: str) -> List[str]:
        return _ranked_ngrams(_clean(text), self.max_n, self.profile_len)

    def distance(self, text: str) -> Dict[str, float]:
        text_profile = self._text_profile(text)
        distances = {}
        for lang in self.languages:
            ranks = {g: i for i, g in enumerate(self.profiles[lang])}
            d = 0
            for i, gram in enumerate(text_profile):
                j = ranks.get(gram)
                d += abs(i - j) if j is not None else self.profile_len
            distances[lang] = float(d)
        return distances

    def identify(self, text: str) -> str:
        distances = self.distance(text)
        return min(sorted(distances), key=lambda lang: distances[lang])

    def to_obj(self) -> dict:
        return {
            "kind": "rank_profile",
            "version": 1,
            "max_n": self.max_n,
            "profile_len": self.profile_len,
            "languages": list(self.languages),
            "profiles": {lang: list(p) for lang, p in self.profiles.items()},
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "RankProfileModel":
        return cls(
            languages=tuple(obj["languages"]),
            profiles={lang: tuple(p) for lang, p in obj["profiles"].items()},
            profile_len=obj["profile_len"],
            max_n=obj["max_n"],
        )


def _ranked_ngrams(text: str, max_n: int, limit: int) -> List[str]:
    counts: Dict[str, int] = {}
    for n in range(1, max_n + 1):
        for i in range(len(text) - n + 1):
            gram = text[i : i + n]
            counts[gram] = counts.get(gram, 0) + 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [gram for gram, _ in ranked[:limit]]


def train_rank_profile(
    samples: Mapping[str, str], max_n: int = 4, profile_len: int = 300
) -> RankProfileModel:
    profiles = {
        lang: tuple(_ranked_ngrams(_clean(text), max_n, profile_len))
        for lang, text in samples.items()
    }
    return RankProfileModel(
        languages=tuple(sorted(samples)),
        profiles=profiles,
        profile_len=profile_len,
        max_n=max_n,
    )


@dataclass(frozen=True)
class IdentificationResult:
    language: str
    agreed: bool


def identify_language(
    text: str, char_model: CharNgramModel, rank_model: RankProfileModel
) -> IdentificationResult:
    """Vote with both models; ``agreed`` is their consensus flag.

    Callers treat agreed=False as "not reliably the stated language".
    Texts under 10 characters after cleaning are undecidable and raise.
    """
    cleaned = _clean(text)
    if len(cleaned) < MIN_IDENTIFIABLE_CHARS:
        raise ValueError(
            f"text too short to identify ({len(cleaned)} chars, "
            f"need {MIN_IDENTIFIABLE_CHARS})"
        )
    primary = char_model.identify(cleaned)
    secondary = rank_model.identify(cleaned)
    return IdentificationResult(language=primary, agreed=primary == secondary)


@dataclass(frozen=True)
class WordlistNB:
    """Naive Bayes over language-specific frequency wordlists, specialized
    for separating the four hbs languages. Uniform priors, add-one
    smoothing over the union vocabulary plus one OOV bucket."""

    languages: Tuple[str, ...]
    log_probs: Mapping[str, Mapping[str, float]]
    oov_log_prob: Mapping[str, float]
    vocab_size: int

    def to_obj(self) -> dict:
        return {
            "kind": "wordlist_nb",
            "version": 1,
            "languages": list(self.languages),
            "vocab_size": self.vocab_size,
            "log_probs": {lang: dict(t) for lang, t in self.log_probs.items()},
            "oov_log_prob": dict(self.oov_log_prob),
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "WordlistNB":
        return cls(
            languages=tuple(obj["languages"]),
            log_probs=obj["log_probs"],
            oov_log_prob=obj["oov_log_prob"],
            vocab_size=obj["vocab_size"],
        )


def train_wordlist_nb(wordlists: Mapping[str, Mapping[str, int]]) -> WordlistNB:
    languages = tuple(sorted(wordlists, key=HBS_LANGUAGES.index))
    if set(languages) != set(HBS_LANGUAGES):
        raise ValueError(f"discriminator needs wordlists for {HBS_LANGUAGES}")
    vocab = set()
    for counts in wordlists.values():
        vocab.update(counts)
    vocab_size = len(vocab)
    log_probs: Dict[str, Dict[str, float]] = {}
    oov: Dict[str, float] = {}
    for lang in languages:
        counts = wordlists[lang]
        total = sum(counts.values())
        denom = total + vocab_size + 1
        log_probs[lang] = {w: math.log((counts.get(w, 0) + 1) / denom) for w in vocab}
        oov[lang] = math.log(1.0 / denom)
    return WordlistNB(
        languages=languages,
        log_probs=log_probs,
        oov_log_prob=oov,
        vocab_size=vocab_size,
    )


@dataclass(frozen=True)
class HbsDecision:
    """Discriminator verdict with the exact per-language log scores kept
    for audit. ``tied`` marks an argmax shared by several languages and
    broken by the fixed bs < cnr < hr < sr order."""

    language: str
    log_scores: Mapping[str, float]
    tied: bool


def discriminate_hbs(text: str, model: WordlistNB) -> HbsDecision:
    tokens = word_tokens(text)
    if not tokens:
        raise ValueError("no word tokens to discriminate")
    prior = math.log(1.0 / len(model.languages))
    scores: Dict[str, float] = {}
    for lang in model.languages:
        table = model.log_probs[lang]
        oov = model.oov_log_prob[lang]
        scores[lang] = prior + sum(table.get(t, oov) for t in tokens)
    best = max(scores.values())
    winners = [lang for lang in HBS_LANGUAGES if scores[lang] == best]
    return HbsDecision(language=winners[0], log_scores=scores, tied=len(winners) > 1)


def route_document(
    doc: Document,
    ids: Optional[IdentificationResult],
    hbs: Optional[HbsDecision],
) -> Optional[str]:
    """Target corpus code for a document, or None for reject.

    National TLDs route unconditionally. Generic TLDs require voter
    agreement; an agreed hbs macro decision defers to the discriminator.
    """
    national = NATIONAL_TLD_TO_CORPUS.get(doc.tld)
    if national is not None:
        return national
    if ids is None or not ids.agreed:
        return None
    if ids.language == "hbs":
        return hbs.language if hbs is not None else None
    if ids.language in GENERIC_ROUTABLE:
        return ids.language
    return None


@dataclass(frozen=True)
class LangidModels:
    char_model: CharNgramModel
    rank_model: RankProfileModel
    hbs_model: WordlistNB


_MODEL_FILES = {
    "char_model": ("char_ngram.json", CharNgramModel),
    "rank_model": ("rank_profile.json", RankProfileModel),
    "hbs_model": ("wordlist_nb.json", WordlistNB),
}


def save_models(models: LangidModels, directory) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for attr, (filename, _) in _MODEL_FILES.items():
        obj = getattr(models, attr).to_obj()
        (directory / filename).write_text(
            json.dumps(obj, ensure_ascii=False, sort_keys=True), encoding="utf-8"
        )


def load_models(directory) -> LangidModels:
    directory = Path(directory)
    loaded = {}
    for attr, (filename, cls) in _MODEL_FILES.items():
        obj = json.loads((directory / filename).read_text(encoding="utf-8"))
        loaded[attr] = cls.from_obj(obj)
    return LangidModels(**loaded)


def load_wordlist(path) -> Dict[str, int]:
    """Frequency wordlist file: UTF-8 lines of word<TAB>count."""
    counts: Dict[str, int] = {}
    text = Path(path).read_text(encoding="utf-8") if not hasattr(path, "read") else path.read()
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            word, count = line.split("\t")
            counts[word] = counts.get(word, 0) + int(count)
        except ValueError as exc:
            raise ValueError(f"wordlist line {line_no}: expected word<TAB>count") from exc
    return counts


def _read_seed(lang: str) -> str:
    return (
        resources.files("corpusforge.data")
        .joinpath(f"seed_{lang}.txt")
        .read_text(encoding="utf-8")
    )


def train_default_models() -> LangidModels:
    """Train every model from the bundled seed corpora and wordlists."""
    samples = {
        "hbs": " ".join(_read_seed(lang) for lang in ("bs", "hr", "cnr", "sr")),
        "bg": _read_seed("bg"),
        "mk": _read_seed("mk"),
        "sl": _read_seed("sl"),
    }
    wordlists = {}
    for lang in HBS_LANGUAGES:
        with resources.files("corpusforge.data").joinpath(f"wordlist_{lang}.tsv").open(
            "r", encoding="utf-8"
        ) as handle:
            wordlists[lang] = load_wordlist(handle)
    return LangidModels(
        char_model=train_char_ngram(samples),
        rank_model=train_rank_profile(samples),
        hbs_model=train_wordlist_nb(wordlists),
    )


def process_document(
    doc: Document, models: LangidModels, target: str
) -> Optional[Document]:
    """Route a document and apply the paragraph-level language check.

    Returns the document stamped with the target language, with
    paragraphs failing the check unretained; None when the document is
    rejected or routed elsewhere, or when nothing retained survives.
    """
    text = doc.retained_text()
    ids: Optional[IdentificationResult] = None
    hbs: Optional[HbsDecision] = None
    try:
        ids = identify_language(text, models.char_model, models.rank_model)
    except ValueError:
        ids = None
    if ids is not None and ids.language == "hbs":
        try:
            hbs = discriminate_hbs(text, models.hbs_model)
        except ValueError:
            hbs = None
    routed = route_document(doc, ids, hbs)
    if routed != target:
        return None

    target_macro = macro_language(target)
    new_paragraphs = []
    for paragraph in doc.paragraphs:
        keep = paragraph.retained
        if keep and len(_clean(paragraph.text)) >= MIN_IDENTIFIABLE_CHARS:
            verdict = identify_language(
                paragraph.text, models.char_model, models.rank_model
            )
            if not (verdict.agreed and verdict.language == target_macro):
                keep = False
        new_paragraphs.append(replace(paragraph, retained=keep))
    if not any(p.retained for p in new_paragraphs):
        return None
    return replace(doc, language=target, paragraphs=tuple(new_paragraphs))
