"""Generated corpora with planted signal, for demos and desk-scale experiments.

Every generator is a pure function of its seed. Pages come back as
``SyntheticPage`` records (URL, HTML, Likert rating); ``build_store`` writes
them into a snapshot cache so the normal pipeline can run over them.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

import numpy as np

from .ingest import RawDocument, SnapshotStore, store_snapshot

FIXED_TIME = datetime(2020, 1, 1, tzinfo=timezone.utc)

_NEUTRAL = """
river morning table window garden street evening market corner bridge yellow
green quiet small large early late walk open close round square paper stone
wooden glass light heavy north south east west little older newer simple
""".split()

_CREDIBLE = [
    "The committee reviewed the evidence and published its findings in the annual report.",
    "Researchers measured the results carefully and shared the data with other scientists.",
    "Our editorial team checks every source and corrects errors as soon as they are found.",
    "The university library keeps records of all public documents for later review.",
    "The study was approved by an independent board and followed the published protocol.",
    "Officials explained the decision at a public meeting and answered questions from residents.",
    "The article cites the original survey and describes its sample and its limits.",
    "Staff members are listed on this page together with their roles and contact details.",
]

_SPAM = [
    "Click here now to win a free prize and claim your cash reward today!",
    "Buy cheap pills online with no prescription and get the best price guaranteed!",
    "Earn money fast from home, act now, this limited offer ends tonight!",
    "You are the lucky winner, send your bank details to claim the lottery cash!",
    "Lose weight fast with this miracle pill, doctors hate this one secret!",
    "Exclusive casino bonus with free spins, deposit now and win big money!",
    "Share this with friends, like and follow us, tweet it for a free gift!",
    "Amazing discount offer, order now, free shipping on every cheap watch!",
]

_TAGS_HIGH = ("header", "nav", "section", "article", "h2", "figure")
_TAGS_LOW = ("center", "font", "marquee", "table", "iframe", "blink")
_PREAMBLE = 6
_TAGS_NOISE = ("div", "span", "p", "ul", "li", "em", "strong", "small", "b", "i")


@dataclass(frozen=True)
class SyntheticPage:
    url: str
    html: str
    rating: int
    group: str = ""


def _filler(rng: np.random.Generator, n_sentences: int) -> str:
    out = []
    for _ in range(n_sentences):
        k = int(rng.integers(7, 14))
        ws = list(rng.choice(_NEUTRAL, size=k))
        out.append(" ".join(ws).capitalize() + ".")
    return " ".join(out)


def _rating(rng: np.random.Generator, high: bool) -> int:
    return int(rng.choice([4, 5])) if high else int(rng.choice([1, 2]))


def _lexical_block(rng: np.random.Generator, high: bool, domain: str) -> tuple[str, str]:
    """(header-ish markup, footer markup) carrying the lexical signal."""
    if high:
        pool = _CREDIBLE
        body = " ".join(rng.choice(pool, size=int(rng.integers(3, 6)), replace=False))
        top = (f'<p><a href="/about">About us</a> <a href="/contact">Contact</a></p><p>{body}</p>')
        foot = (f'<p>Copyright 2019 {domain}. 12 Main Street.</p>'
                f'<p><a href="mailto:editor@{domain}">Write to the editor</a></p>')
    else:
        pool = _SPAM
        body = " ".join(rng.choice(pool, size=int(rng.integers(3, 6)), replace=False))
        top = f"<p>{body}</p>"
        links = "".join(f'<a href="http://ads{j}.example-ads.net/x">offer</a> ' for j in range(int(rng.integers(3, 8))))
        foot = f"<p>{links}</p>"
    return top, foot


def _tag_markup(tags: Sequence[str]) -> str:
    return "".join(f"<{t}></{t}>" for t in tags)


def _head_pairs(signal_len: int) -> int:
    # html, head, title, /title, /head, body come first; each element is an open/close pair
    return max(1, (signal_len - _PREAMBLE) // 2)


def _page(url, title, head_tags, top, filler, foot, tail_tags=()) -> str:
    return (f"<html><head><title>{title}</title></head><body>{_tag_markup(head_tags)}"
            f"{top}<p>{filler}</p>{foot}{_tag_markup(tail_tags)}</body></html>")


def planted_lexical_corpus(n: int = 200, seed: int = 0) -> list[SyntheticPage]:
    """Label is decided by planted lexical content; markup is label-independent.

    High pages carry formal sentences, about/contact links, a copyright line,
    a street address and a mailto link. Low pages carry spam sentences and ad
    links. Both get the same neutral filler distribution.
    """
    rng = np.random.default_rng(seed)
    pages = []
    for i in range(n):
        high = i % 2 == 0
        domain = f"site{i:04d}.org" if high else f"site{i:04d}.com"
        top, foot = _lexical_block(rng, high, domain)
        noise = list(rng.choice(_TAGS_NOISE, size=int(rng.integers(10, 40))))
        html = _page(f"https://{domain}/", f"Page {i}", noise, top, _filler(rng, int(rng.integers(3, 8))), foot)
        pages.append(SyntheticPage(f"https://{domain}/", html, _rating(rng, high)))
    return pages


def planted_tag_corpus(n: int = 200, seed: int = 0, signal_len: int = 25,
                       tail: tuple[int, int] = (200, 2000)) -> list[SyntheticPage]:
    """Label is decided only by the first ``signal_len`` tags.

    The head is drawn from a label-specific tag set; everything after it is
    drawn from one shared distribution over both sets plus common tags, so
    longer windows add only noise.
    """
    rng = np.random.default_rng(seed)
    shared = _TAGS_HIGH + _TAGS_LOW + _TAGS_NOISE
    pages = []
    for i in range(n):
        high = i % 2 == 0
        head = list(rng.choice(_TAGS_HIGH if high else _TAGS_LOW, size=_head_pairs(signal_len)))
        rest = list(rng.choice(shared, size=int(rng.integers(*tail)) // 2))
        url = f"https://tags{i:04d}.net/"
        html = (f"<html><head><title>t</title></head><body>{_tag_markup(head)}"
                f"<p>{_filler(rng, 2)}</p>{_tag_markup(rest)}</body></html>")
        pages.append(SyntheticPage(url, html, _rating(rng, high)))
    return pages


def complementary_corpus(n: int = 200, seed: int = 0, signal_len: int = 25) -> list[SyntheticPage]:
    """Half the pages carry their label in lexical content, half in the leading tags.

    In the ``lexical`` group the tag head is label-independent noise; in the
    ``tags`` group the text is neutral filler with no credibility markers.
    Lexical features alone can only resolve the first group.
    """
    rng = np.random.default_rng(seed)
    pages = []
    for i in range(n):
        high = (i // 2) % 2 == 0
        group = "lexical" if i % 2 == 0 else "tags"
        domain = f"mix{i:04d}.info"
        if group == "lexical":
            head = list(rng.choice(_TAGS_NOISE, size=_head_pairs(signal_len)))
            top, foot = _lexical_block(rng, high, domain)
        else:
            head = list(rng.choice(_TAGS_HIGH if high else _TAGS_LOW, size=_head_pairs(signal_len)))
            top, foot = "", ""
        html = _page(f"https://{domain}/", f"Page {i}", head, top, _filler(rng, int(rng.integers(3, 8))), foot)
        pages.append(SyntheticPage(f"https://{domain}/", html, _rating(rng, high), group))
    return pages


def build_store(root: str | Path, pages: Sequence[SyntheticPage]) -> SnapshotStore:
    store = SnapshotStore(root)
    for p in pages:
        store_snapshot(store, RawDocument(p.url, p.html.encode("utf-8"), 200, FIXED_TIME,
                                          "text/html; charset=utf-8"))
    return store


def write_ratings(path: str | Path, pages: Sequence[SyntheticPage]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("url,rating\n")
        for p in pages:
            fh.write(f"{p.url},{p.rating}\n")
