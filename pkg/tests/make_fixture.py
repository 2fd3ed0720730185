"""Deterministic builder of the bundled 50-page crawl fixture.

The fixture exercises every pipeline stage: Slovenian pages across several
.si domains, link-heavy boilerplate blocks, per-domain footers differing
only in phone numbers (masked paragraph dedup), exact duplicate pages on a
mirror domain, a page differing from another only in digits, a page with a
Croatian paragraph inside Slovenian text (paragraph-level language check),
generic-TLD pages that route or get rejected, an overly short page, and a
404 record.

Run directly to regenerate tests/fixtures/pages.rec; the output is
byte-stable for a fixed seed.
"""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

from corpusforge.crawl import PageRecord, write_records

FIXTURE_DIR = Path(__file__).parent / "fixtures"
FIXTURE_PATH = FIXTURE_DIR / "pages.rec"

BASE_TIME = datetime(2024, 5, 1, 6, 0, 0, tzinfo=timezone.utc)

_DATA_DIR = Path(__file__).parent.parent / "src" / "corpusforge" / "data"

# Frozen word salads over the Macedonian and Slovenian seed vocabularies.
# The two voters disagree on both, so pages built from them are rejected at
# the routing stage while still clearing the stopword-density bar.
MIXED_TEXT_1 = (
    "истражувањето na од župan направени zakon текот objavili ја vozijo "
    "планинарите študentom јадат in обнова več во izpite играат soboto на do "
    "првиот jedo направени novem денес podjetje за težko недела župan тркачи "
    "več следната z за igrajo децата se јадат opozarjajo е trgu прочистување "
    "zajele повеќе so дождот igrajo морето tekačev направени zahtevne ја suša "
    "цените razvili цените padavine"
)
MIXED_TEXT_2 = (
    "плоштадот vabi нов veljati кој čiščenje на v зафати napovedal училиште "
    "na скопје močno на kot на parku предупредуваат bodo македонските za "
    "пешки okolja градот narejeni плоштадот impresionistov метод da условите "
    "razstavo година z паркот domačega играат vode го študente прочистување "
    "so производи je кон je билети gostilo на so си gostilo места soboto "
    "истражувањето impresionistov подготовката čiščenje за poslabšalo"
)


def _seed_sentences(lang):
    text = (_DATA_DIR / f"seed_{lang}.txt").read_text(encoding="utf-8").strip()
    return [s.strip() + "." for s in text.rstrip(".").split(". ") if s.strip()]


def _paragraph(rng, sentences, n_sentences, with_number=False):
    chosen = [rng.choice(sentences) for _ in range(n_sentences)]
    if with_number:
        chosen.insert(
            rng.randrange(len(chosen)),
            f"Cena znaša {rng.randrange(5, 500)} evrov, popust velja do "
            f"{rng.randrange(1, 28)}. dne v mesecu.",
        )
    return " ".join(chosen)


def _linkbar():
    return (
        '<div><a href="/">Domov</a> | <a href="/novice">Novice</a> | '
        '<a href="/arhiv">Arhiv</a> | <a href="/kontakt">Kontakt</a></div>'
    )


def _footer(phone):
    return (
        f"<p>Pišite nam na telefon {phone} ali nam pošljite sporočilo po "
        f"elektronski pošti, z veseljem vam bomo odgovorili na vsa vprašanja.</p>"
    )


def _page(title, paragraphs, footer=None):
    body = [f"<html><head><title>{title}</title></head><body>", _linkbar()]
    body.extend(f"<p>{p}</p>" for p in paragraphs)
    if footer:
        body.append(footer)
    body.append("</body></html>")
    return "\n".join(body).encode("utf-8")


def build_records():
    rng = random.Random(20240501)
    sl = _seed_sentences("sl")
    hr = _seed_sentences("hr")
    records = []
    tick = [0]

    def add(url, body, status=200):
        records.append(
            PageRecord(
                url=url,
                fetch_time=BASE_TIME + timedelta(minutes=5 * tick[0]),
                http_status=status,
                content_type="text/html",
                raw_body=body,
            )
        )
        tick[0] += 1

    def standard_pages(domain, n, phone_base, numbered=False):
        for i in range(n):
            paragraphs = [
                _paragraph(rng, sl, rng.randint(3, 5), with_number=numbered and j == 0)
                for j in range(rng.randint(3, 5))
            ]
            add(
                f"https://www.{domain}/stran/{i + 1}",
                _page(f"{domain} {i + 1}", paragraphs, _footer(f"{phone_base} {100 + i}")),
            )

    standard_pages("novice.si", 12, "01 234")
    standard_pages("kultura.si", 8, "01 555")

    # Croatian paragraph inside Slovenian text; dropped by the paragraph check
    mesana = [
        _paragraph(rng, sl, 4),
        " ".join(rng.choice(hr) for _ in range(4)),
        _paragraph(rng, sl, 4),
    ]
    add("https://www.kultura.si/mesana", _page("kultura mesana", mesana, _footer("01 555 999")))

    standard_pages("sport-portal.si", 8, "02 777")
    standard_pages("forum.si", 6, "03 888")
    standard_pages("obcina.si", 4, "04 111")

    # short page: one good paragraph well under 75 words
    short_paragraph = " ".join(rng.choice(sl) for _ in range(3))
    assert len(short_paragraph.split()) < 75
    add("https://www.obcina.si/kratka", _page("kratka", [short_paragraph]))

    standard_pages("trgovina.si", 3, "05 222", numbered=True)

    # digits-only variant of the first trgovina page
    original = records[-3]
    variant = original.raw_body.decode("utf-8")
    digit_map = str.maketrans("0123456789", "9876543210")
    variant_body = variant.translate(digit_map).encode("utf-8")
    add("https://www.trgovina.si/kopija-cen", variant_body)

    # generic-TLD page in Slovenian: the voters agree, routed to sl
    add(
        "https://www.primer.com/spletna-stran",
        _page("primer", [_paragraph(rng, sl, 4) for _ in range(3)], _footer("06 333 444")),
    )
    # generic-TLD page mixing languages: the voters disagree, rejected
    add("https://www.primer.com/mesanica", _page("mesanica", [MIXED_TEXT_1]))
    # foreign TLD, same kind of content, rejected as well
    add("https://www.seite.de/index", _page("seite", [MIXED_TEXT_2]))

    # exact duplicates of two novice pages on a mirror domain
    add("https://www.zrcalo.si/kopija-1", records[0].raw_body)
    add("https://www.zrcalo.si/kopija-2", records[1].raw_body)

    # a deleted page
    add("https://www.novice.si/izbrisano", b"", status=404)

    assert len(records) == 50, len(records)
    return records


def main():
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    n = write_records(FIXTURE_PATH, build_records())
    print(f"wrote {n} records to {FIXTURE_PATH}")


if __name__ == "__main__":
    main()
