"""Web-archive capture timelines and the archive freshness score."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import requests

from .domains import registrable_domain

EXACT_URL = "exact-URL"
DOMAIN_FALLBACK = "domain-fallback"
DOMAIN_PENALTY = 0.5
CDX_ENDPOINT = "https://web.archive.org/cdx/search/cdx"
_DAY = 86400.0


class ArchiveUnavailable(RuntimeError):
    pass


def parse_timestamp(text: str) -> datetime:
    """CDX ``YYYYMMDDhhmmss`` (any prefix of it) or an ISO-8601 date/time, as UTC."""
    text = text.strip()
    if text.isdigit():
        digits = (text + "00000101000000"[len(text):])[:14]
        return datetime.strptime(digits, "%Y%m%d%H%M%S").replace(tzinfo=timezone.utc)
    dt = datetime.fromisoformat(text.replace("Z", "+00:00"))
    return dt if dt.tzinfo else dt.replace(tzinfo=timezone.utc)


@dataclass(frozen=True)
class ArchiveTimeline:
    snapshots: tuple[datetime, ...]
    source_level: str
    queried_at: datetime

    def __post_init__(self):
        object.__setattr__(self, "snapshots", tuple(sorted(self.snapshots)))

    @classmethod
    def empty(cls, queried_at: datetime) -> "ArchiveTimeline":
        return cls((), EXACT_URL, queried_at)


class FixtureCdxClient:
    """Capture lookup backed by a ``url TAB timestamp`` file."""

    def __init__(self, path: str | Path):
        self.captures: dict[str, list[datetime]] = defaultdict(list)
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line.strip() or line.startswith("#"):
                continue
            url, stamp = line.split("\t")[:2]
            self.captures[url.strip()].append(parse_timestamp(stamp))

    def captures_for(self, key: str) -> list[datetime]:
        return list(self.captures.get(key, ()))


class LiveCdxClient:
    """Wayback CDX server client returning capture timestamps."""

    def __init__(self, endpoint: str = CDX_ENDPOINT, timeout: float = 30.0,
                 session: requests.Session | None = None):
        self.endpoint = endpoint
        self.timeout = timeout
        self.session = session or requests.Session()

    def captures_for(self, key: str) -> list[datetime]:
        params = {"url": key, "fl": "timestamp", "output": "txt", "filter": "statuscode:200"}
        try:
            resp = self.session.get(self.endpoint, params=params, timeout=self.timeout)
            resp.raise_for_status()
        except requests.RequestException as exc:
            raise ArchiveUnavailable(f"CDX query for {key} failed: {exc}") from exc
        out = []
        for line in resp.text.splitlines():
            line = line.strip()
            if line.isdigit():
                out.append(parse_timestamp(line))
        return out


def query_archive(url: str, client, queried_at: datetime) -> ArchiveTimeline:
    """Captures for ``url``; falls back to its registrable domain when there are none."""
    snaps = client.captures_for(url)
    if snaps:
        return ArchiveTimeline(tuple(snaps), EXACT_URL, queried_at)
    domain = registrable_domain(url)
    snaps = client.captures_for(domain) if domain else []
    if snaps:
        return ArchiveTimeline(tuple(snaps), DOMAIN_FALLBACK, queried_at)
    return ArchiveTimeline((), EXACT_URL, queried_at)


def archive_score_from_deltas(first_gap: float | None, last_gap: float | None, age: float,
                              since_update: float, gamma: float = 1.0) -> float:
    """``(1/ln(first_gap * last_gap) + ln(age) + 1/since_update) * gamma``.

    Arguments are in days. Every gap is clamped below at one day and the
    product of the first and last gap below at ``e``, so the first term
    never exceeds 1. Missing gaps (fewer than two captures) drop the first
    term.
    """
    first = 0.0
    if first_gap is not None and last_gap is not None:
        product = max(max(first_gap, 1.0) * max(last_gap, 1.0), math.e)
        first = 1.0 / math.log(product)
    return (first + math.log(max(age, 1.0)) + 1.0 / max(since_update, 1.0)) * gamma


def score_archive(t: ArchiveTimeline, domain_penalty: float = DOMAIN_PENALTY) -> float:
    snaps = t.snapshots
    if not snaps:
        return 0.0

    def days(a, b):
        return (b - a).total_seconds() / _DAY

    gamma = domain_penalty if t.source_level == DOMAIN_FALLBACK else 1.0
    first_gap = days(snaps[0], snaps[1]) if len(snaps) > 1 else None
    last_gap = days(snaps[-2], snaps[-1]) if len(snaps) > 1 else None
    return archive_score_from_deltas(first_gap, last_gap, days(snaps[0], t.queried_at),
                                     days(snaps[-1], t.queried_at), gamma)
