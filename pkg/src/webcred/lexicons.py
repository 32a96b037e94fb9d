"""Loaders for the lexicon, rank and domain-list tables used by the features."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .domains import registrable_domain


class TableFormatError(ValueError):
    pass


@dataclass(frozen=True)
class LexiconTable:
    """Token lookup table, case-folded.

    ``entries`` maps a token either to a tuple of category names
    (membership lexicons) or to a float (valence lexicons).
    """

    name: str
    entries: dict
    category_order: tuple[str, ...] = ()

    def get(self, token: str, default=None):
        return self.entries.get(token.lower(), default)

    def __contains__(self, token: str) -> bool:
        return token.lower() in self.entries

    def __len__(self):
        return len(self.entries)


_SENSE = re.compile(r"#\d+$")


def load_category_lexicon(path: str | Path, name: str = "gi") -> LexiconTable:
    """Read ``token TAB cat[,cat...]`` lines.

    An optional first line ``#categories TAB c1,c2,...`` fixes the category
    order (and admits categories that have no tokens); otherwise categories
    are ordered by first appearance. Sense suffixes such as ``ABOUT#1`` are
    merged into one token.
    """
    entries: dict[str, tuple[str, ...]] = {}
    order: list[str] = []
    declared = False
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        if line.startswith("#"):
            head, _, rest = line.partition("\t")
            if head.strip().lower() == "#categories" and not declared:
                order = [c.strip() for c in rest.split(",") if c.strip()]
                declared = True
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise TableFormatError(f"{path}:{lineno}: expected 'token<TAB>categories'")
        token = _SENSE.sub("", parts[0].strip()).lower()
        cats = [c.strip() for c in parts[1].split(",") if c.strip()]
        for c in cats:
            if c not in order:
                if declared:
                    raise TableFormatError(f"{path}:{lineno}: undeclared category {c!r}")
                order.append(c)
        merged = entries.get(token, ())
        entries[token] = merged + tuple(c for c in cats if c not in merged)
    return LexiconTable(name, entries, tuple(order))


def load_valence_lexicon(path: str | Path, name: str = "valence") -> LexiconTable:
    """Read ``token TAB valence`` lines; extra columns (as in VADER's file) are ignored."""
    entries: dict[str, float] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        try:
            entries[parts[0].strip().lower()] = float(parts[1])
        except (IndexError, ValueError):
            raise TableFormatError(f"{path}:{lineno}: expected 'token<TAB>valence'") from None
    return LexiconTable(name, entries)


def load_domain_list(path: str | Path) -> frozenset[str]:
    """One domain per line, ``#`` comments allowed; entries reduced to registrable domains."""
    out = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.add(registrable_domain(line))
    return frozenset(out)


@dataclass(frozen=True)
class RankTable:
    ranks: dict[str, float] = field(default_factory=dict)

    def lookup(self, host: str) -> tuple[float, int]:
        """``(value, 1)`` for the exact host, then its registrable domain; else ``(0.0, 0)``."""
        host = host.lower().rstrip(".")
        for key in (host, registrable_domain(host)):
            if key and key in self.ranks:
                return self.ranks[key], 1
        return 0.0, 0


def _unreverse(host: str) -> str:
    return ".".join(reversed(host.split(".")))


def load_rank_table(path: str | Path) -> RankTable:
    """Read ``host TAB value`` lines.

    A leading ``#`` header names the columns. If one of them is ``host_rev``
    hosts are in reversed-domain order (``com.example.www``); a column named
    ``value`` or ``pr_val`` holds the rank. Without a header the first column
    is the host and the second the value.
    """
    host_col, value_col, reverse = 0, 1, False
    ranks: dict[str, float] = {}
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        if lineno == 1 and line.startswith("#"):
            cols = [c.strip().lstrip("#") for c in line.split("\t")]
            if "host_rev" in cols:
                host_col, reverse = cols.index("host_rev"), True
            elif "host" in cols:
                host_col = cols.index("host")
            for name in ("value", "pr_val"):
                if name in cols:
                    value_col = cols.index(name)
                    break
            continue
        parts = line.split("\t")
        try:
            host = parts[host_col].strip().lower()
            value = float(parts[value_col])
        except (IndexError, ValueError):
            raise TableFormatError(f"{path}:{lineno}: malformed rank row {line!r}") from None
        if not host:
            raise TableFormatError(f"{path}:{lineno}: empty host")
        ranks[_unreverse(host) if reverse else host] = value
    return RankTable(ranks)
