"""Host, public-suffix and registrable-domain helpers.

Suffix data comes from the public-suffix snapshot bundled with
``tldextract``; no network access is ever attempted.
"""

from __future__ import annotations

from functools import lru_cache
from urllib.parse import urlsplit

import tldextract

_extract = tldextract.TLDExtract(suffix_list_urls=(), cache_dir=None)


def host_of(url: str) -> str:
    """Lowercased host of ``url`` without port or credentials ('' if none)."""
    try:
        return (urlsplit(url).hostname or "").lower().rstrip(".")
    except ValueError:
        return ""


@lru_cache(maxsize=65536)
def _split_host(host: str) -> tuple[str, str]:
    parts = _extract(host)
    return parts.domain, parts.suffix


def public_suffix(host_or_url: str) -> str:
    host = host_of(host_or_url) if "/" in host_or_url or ":" in host_or_url else host_or_url.lower()
    if not host:
        return ""
    return _split_host(host)[1]


def registrable_domain(host_or_url: str) -> str:
    """Registrable domain ("eTLD+1") of a host or URL.

    Hosts without a known suffix (``localhost``, IP literals) are returned
    unchanged so that they still compare equal to themselves.
    """
    host = host_of(host_or_url) if "/" in host_or_url or ":" in host_or_url else host_or_url.lower()
    if not host:
        return ""
    domain, suffix = _split_host(host)
    if not suffix:
        return host
    if not domain:
        return suffix
    return f"{domain}.{suffix}"
