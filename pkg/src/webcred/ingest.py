"""Fetching, snapshot caching and HTML parsing.

A page goes through three stages::

    fetch_page(url) -> RawDocument -> store_snapshot / load_snapshot
                                   -> parse_html -> ParsedPage

Parsing is pure: the same bytes always give the same ``ParsedPage``.
"""

from __future__ import annotations

import codecs
import hashlib
import re
import threading
import time
import warnings
from dataclasses import dataclass, field
from datetime import datetime, timezone
from html.parser import HTMLParser
from pathlib import Path
from typing import Iterable, Sequence
from urllib.parse import urljoin, urlsplit

import requests

from .domains import registrable_domain

CACHED = "cached"


class IngestError(Exception):
    pass


class Unreachable(IngestError):
    """Network failure, timeout or an unusable redirect chain."""


class TooManyRedirects(Unreachable):
    pass


class HttpError(IngestError):
    def __init__(self, status: int, url: str = ""):
        super().__init__(f"HTTP {status} for {url}")
        self.status = status
        self.url = url


class TruncatedWarning(UserWarning):
    pass


class StoreError(IngestError):
    pass


class NotCached(IngestError, KeyError):
    pass


class IntegrityError(IngestError):
    pass


class ParseError(IngestError):
    pass


@dataclass(frozen=True)
class RawDocument:
    url: str
    bytes: bytes
    status: int | str = 200
    fetched_at: datetime | None = None
    content_type: str = ""
    truncated: bool = False

    def __post_init__(self):
        parts = urlsplit(self.url)
        if not parts.scheme or not parts.netloc:
            raise ValueError(f"not an absolute URL: {self.url!r}")


@dataclass(frozen=True)
class ParsedPage:
    url: str
    domain: str
    title: str
    body_text: str
    sentences: tuple[str, ...]
    tag_stream: tuple[str, ...]
    links: tuple[tuple[str, str], ...]
    html: str
    # (resolved href, anchor text) for every <a href>
    anchors: tuple[tuple[str, str], ...] = ()

    @classmethod
    def empty(cls, url: str = "") -> "ParsedPage":
        return cls(url, registrable_domain(url) if url else "", "", "", (), (), (), "")


# --------------------------------------------------------------------------
# fetching

@dataclass
class FetchPolicy:
    timeout_secs: float = 20.0
    max_bytes: int = 5_000_000
    max_redirects: int = 5
    user_agent: str = "webcred/0.1 (+credibility research crawler)"
    per_host_rps: float = 1.0
    max_in_flight: int = 4


class HostRateLimiter:
    """Spaces requests to the same host at least ``1 / rps`` seconds apart."""

    def __init__(self, rps: float, clock=time.monotonic, sleep=time.sleep):
        self.interval = 1.0 / rps if rps > 0 else 0.0
        self._next: dict[str, float] = {}
        self._lock = threading.Lock()
        self._clock = clock
        self._sleep = sleep

    def wait(self, host: str) -> None:
        if not self.interval:
            return
        with self._lock:
            now = self._clock()
            slot = max(now, self._next.get(host, now))
            self._next[host] = slot + self.interval
        if slot > now:
            self._sleep(slot - now)


def fetch_page(
    url: str,
    policy: FetchPolicy | None = None,
    session: requests.Session | None = None,
    limiter: HostRateLimiter | None = None,
) -> RawDocument:
    """Fetch ``url`` following at most ``policy.max_redirects`` redirects.

    Bodies longer than ``policy.max_bytes`` are cut and flagged with
    ``truncated=True`` plus a ``TruncatedWarning``.
    """
    policy = policy or FetchPolicy()
    session = session or requests.Session()
    headers = {"User-Agent": policy.user_agent}
    current = url
    for hop in range(policy.max_redirects + 1):
        if limiter is not None:
            limiter.wait(urlsplit(current).hostname or "")
        try:
            resp = session.get(current, headers=headers, timeout=policy.timeout_secs,
                               allow_redirects=False, stream=True)
        except requests.RequestException as exc:
            raise Unreachable(f"{current}: {exc}") from exc
        with resp:
            if resp.is_redirect:
                location = resp.headers.get("Location", "")
                if not location:
                    raise HttpError(resp.status_code, current)
                current = urljoin(current, location)
                continue
            if not 200 <= resp.status_code < 300:
                raise HttpError(resp.status_code, current)
            body, truncated = _read_limited(resp, policy.max_bytes)
            if truncated:
                warnings.warn(f"{current}: body truncated at {policy.max_bytes} bytes",
                              TruncatedWarning, stacklevel=2)
            return RawDocument(
                url=url,
                bytes=body,
                status=resp.status_code,
                fetched_at=datetime.now(timezone.utc),
                content_type=resp.headers.get("Content-Type", ""),
                truncated=truncated,
            )
    raise TooManyRedirects(f"{url}: more than {policy.max_redirects} redirects")


def _read_limited(resp: requests.Response, max_bytes: int) -> tuple[bytes, bool]:
    chunks, size = [], 0
    try:
        for chunk in resp.iter_content(chunk_size=65536):
            chunks.append(chunk)
            size += len(chunk)
            if size > max_bytes:
                break
    except requests.RequestException as exc:
        raise Unreachable(str(exc)) from exc
    body = b"".join(chunks)
    if len(body) > max_bytes:
        return body[:max_bytes], True
    return body, False


# --------------------------------------------------------------------------
# snapshot store

@dataclass(frozen=True)
class SnapshotRecord:
    url: str
    digest: str
    fetched_at: datetime
    path: str


class SnapshotStore:
    """Content-addressed page cache.

    Layout is ``<root>/manifest.txt`` plus ``<root>/objects/<hash[:2]>/<hash>``.
    Each manifest line is ``url TAB sha256 TAB fetched_at TAB relative-path``;
    a later line for the same URL supersedes earlier ones.
    """

    MANIFEST = "manifest.txt"

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.index: dict[str, SnapshotRecord] = {}
        self._lock = threading.Lock()
        manifest = self.root / self.MANIFEST
        if manifest.is_file():
            self.index = read_manifest(manifest)

    def __contains__(self, url: str) -> bool:
        return url in self.index

    def __len__(self) -> int:
        return len(self.index)

    def urls(self) -> list[str]:
        return sorted(self.index)


def read_manifest(path: Path) -> dict[str, SnapshotRecord]:
    index = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise StoreError(f"{path}:{lineno}: expected 4 fields, got {len(parts)}")
        url, digest, stamp, rel = parts
        index[url] = SnapshotRecord(url, digest, datetime.fromisoformat(stamp), rel)
    return index


def store_snapshot(store: SnapshotStore, doc: RawDocument) -> str:
    """Persist ``doc`` and return its snapshot id (the sha256 of its bytes)."""
    digest = hashlib.sha256(doc.bytes).hexdigest()
    rel = f"objects/{digest[:2]}/{digest}"
    stamp = doc.fetched_at or datetime.now(timezone.utc)
    with store._lock:
        known = store.index.get(doc.url)
        if known is not None and known.digest == digest:
            return digest
        try:
            obj = store.root / rel
            obj.parent.mkdir(parents=True, exist_ok=True)
            if not obj.exists():
                tmp = obj.with_suffix(".tmp")
                tmp.write_bytes(doc.bytes)
                tmp.replace(obj)
            with open(store.root / store.MANIFEST, "a", encoding="utf-8") as fh:
                fh.write(f"{doc.url}\t{digest}\t{stamp.isoformat()}\t{rel}\n")
        except OSError as exc:
            raise StoreError(f"cannot write snapshot for {doc.url}: {exc}") from exc
        store.index[doc.url] = SnapshotRecord(doc.url, digest, stamp, rel)
    return digest


def load_snapshot(store: SnapshotStore, url: str) -> RawDocument:
    try:
        rec = store.index[url]
    except KeyError:
        raise NotCached(url) from None
    try:
        body = (store.root / rec.path).read_bytes()
    except OSError as exc:
        raise IntegrityError(f"{url}: snapshot object unreadable: {exc}") from exc
    if hashlib.sha256(body).hexdigest() != rec.digest:
        raise IntegrityError(f"{url}: stored bytes do not match {rec.digest}")
    return RawDocument(url=url, bytes=body, status=CACHED, fetched_at=rec.fetched_at)


# --------------------------------------------------------------------------
# parsing

_SKIP_TEXT = {"script", "style", "noscript", "template", "title"}
_BLOCK = {
    "address", "article", "aside", "blockquote", "br", "dd", "div", "dl", "dt",
    "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4",
    "h5", "h6", "header", "hr", "li", "main", "nav", "ol", "p", "pre", "section",
    "table", "td", "th", "tr", "ul", "body", "html", "head", "option", "select",
}
_BINARY_TYPES = ("application/pdf", "image/", "audio/", "video/", "application/zip",
                 "application/octet-stream", "application/msword")
_META_CHARSET = re.compile(rb"""<meta[^>]+charset\s*=\s*["']?\s*([A-Za-z0-9_.:-]+)""", re.I)
_WS = re.compile(r"\s+")


class _PageParser(HTMLParser):
    def __init__(self, base_url: str):
        super().__init__(convert_charrefs=True)
        self.base = base_url
        self.tags: list[str] = []
        self.text: list[str] = []
        self.links: list[tuple[str, str]] = []
        self.anchors: list[tuple[str, str]] = []
        self.title: list[str] | None = None
        self._title_done = False
        self._skip = 0
        self._anchor: tuple[str, list[str]] | None = None

    def _link(self, value: str | None) -> str | None:
        if value is None or not value.strip():
            return None
        target = value.strip()
        try:
            if self.base:
                target = urljoin(self.base, target)
            scheme = urlsplit(target).scheme.lower()
        except ValueError:
            return None
        self.links.append((scheme, target))
        return target

    def _open(self, tag, attrs):
        self.tags.append(tag)
        if tag in _SKIP_TEXT:
            self._skip += 1
        if tag == "title" and not self._title_done and self.title is None:
            self.title = []
        if tag in _BLOCK:
            self.text.append(" ")
        target = None
        for name, value in attrs:
            if name in ("href", "src"):
                t = self._link(value)
                if name == "href":
                    target = t
        if tag == "a" and target is not None:
            self._close_anchor()
            self._anchor = (target, [])

    def _close_anchor(self):
        if self._anchor is not None:
            href, parts = self._anchor
            self.anchors.append((href, _WS.sub(" ", "".join(parts)).strip()))
            self._anchor = None

    def handle_starttag(self, tag, attrs):
        self._open(tag, attrs)

    def handle_startendtag(self, tag, attrs):
        self._open(tag, attrs)
        if tag in _SKIP_TEXT:
            self._skip -= 1
        if tag == "a":
            self._close_anchor()

    def handle_endtag(self, tag):
        self.tags.append("/" + tag)
        if tag in _SKIP_TEXT and self._skip > 0:
            self._skip -= 1
        if tag == "title" and self.title is not None:
            self._title_done = True
        if tag == "a":
            self._close_anchor()
        if tag in _BLOCK:
            self.text.append(" ")

    def handle_data(self, data):
        if self.title is not None and not self._title_done and self.tags and self.tags[-1] == "title":
            self.title.append(data)
        if self._skip:
            return
        self.text.append(data)
        if self._anchor is not None:
            self._anchor[1].append(data)

    def finish(self):
        try:
            self.close()
        except Exception:  # html.parser can still choke on truncated markup
            pass
        self._close_anchor()


def _sniff_charset(doc: RawDocument) -> str:
    candidates = []
    m = re.search(r"charset\s*=\s*[\"']?([\w.:-]+)", doc.content_type or "", re.I)
    if m:
        candidates.append(m.group(1))
    if doc.bytes.startswith(codecs.BOM_UTF8):
        candidates.append("utf-8-sig")
    m = _META_CHARSET.search(doc.bytes[:4096])
    if m:
        candidates.append(m.group(1).decode("ascii", "ignore"))
    for name in candidates:
        try:
            return codecs.lookup(name).name
        except LookupError:
            continue
    return "utf-8"


def decode_document(doc: RawDocument) -> str:
    ctype = (doc.content_type or "").split(";")[0].strip().lower()
    if ctype.startswith(_BINARY_TYPES) or doc.bytes[:5] == b"%PDF-" or b"\x00" in doc.bytes[:1024]:
        raise ParseError(f"{doc.url}: not a text document ({ctype or 'binary content'})")
    return doc.bytes.decode(_sniff_charset(doc), errors="replace")


def tokenize_markup(html: str, base_url: str = "") -> _PageParser:
    parser = _PageParser(base_url)
    try:
        parser.feed(html)
    except Exception:  # keep whatever was tokenized before the failure
        pass
    parser.finish()
    return parser


def parse_html(doc: RawDocument) -> ParsedPage:
    html = decode_document(doc)
    p = tokenize_markup(html, doc.url)
    body = _WS.sub(" ", "".join(p.text)).strip()
    title = _WS.sub(" ", "".join(p.title or [])).strip()
    return ParsedPage(
        url=doc.url,
        domain=registrable_domain(doc.url),
        title=title,
        body_text=body,
        sentences=tuple(split_sentences(body)),
        tag_stream=tuple(p.tags),
        links=tuple(p.links),
        html=html,
        anchors=tuple(p.anchors),
    )


# --------------------------------------------------------------------------
# sentence splitting

ENGLISH_ABBREVIATIONS = frozenset("""
mr. mrs. ms. dr. prof. sr. jr. st. mt. ft. vs. etc. e.g. i.e. cf. al. inc. ltd.
co. corp. dept. univ. gov. gen. col. lt. sgt. capt. rep. sen. rev. hon. no. nos.
vol. pp. p. fig. figs. approx. est. jan. feb. mar. apr. jun. jul. aug. sep. sept.
oct. nov. dec. mon. tue. wed. thu. fri. sat. sun. u.s. u.k. a.m. p.m.
""".split())

_TERMINAL = re.compile(r"""[.!?]+["'”’)\]]*$""")


@dataclass(frozen=True)
class SentenceSplitter:
    """Whitespace-token sentence splitter.

    A token ends a sentence when it ends in ``.``, ``!`` or ``?`` (optionally
    followed by closing quotes or brackets) and is not a known abbreviation.
    """

    abbreviations: frozenset[str] = field(default=ENGLISH_ABBREVIATIONS)

    def __call__(self, text: str) -> list[str]:
        sentences, current = [], []
        for token in text.split():
            current.append(token)
            if _TERMINAL.search(token) and not self._is_abbreviation(token):
                sentences.append(" ".join(current))
                current = []
        if current:
            sentences.append(" ".join(current))
        return sentences

    def _is_abbreviation(self, token: str) -> bool:
        core = token.lower().rstrip("\"'”’)]").lstrip("\"'(“‘[")
        return core.endswith(".") and core in self.abbreviations


split_sentences = SentenceSplitter()


def iter_pages(store: SnapshotStore, urls: Iterable[str] | None = None):
    """Yield ``(url, ParsedPage | Exception)`` for cached URLs, sorted by URL."""
    for url in sorted(urls) if urls is not None else store.urls():
        try:
            yield url, parse_html(load_snapshot(store, url))
        except IngestError as exc:
            yield url, exc


def fetch_many(urls: Sequence[str], policy: FetchPolicy, fetch=fetch_page):
    """Fetch ``urls`` with bounded parallelism; returns ``{url: RawDocument | Exception}``."""
    from concurrent.futures import ThreadPoolExecutor

    limiter = HostRateLimiter(policy.per_host_rps)
    session = requests.Session()

    def one(url):
        try:
            return fetch(url, policy, session=session, limiter=limiter)
        except IngestError as exc:
            return exc

    with ThreadPoolExecutor(max_workers=max(1, policy.max_in_flight)) as pool:
        results = list(pool.map(one, urls))
    return dict(zip(urls, results))
