"""Bag-of-tags encoding: HTML tag streams as fixed-length id windows.

Ids 0 and 1 are reserved for padding and unknown tags. Opening and closing
forms of a tag (``a`` and ``/a``) are separate vocabulary entries.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .ingest import tokenize_markup

PAD_ID = 0
UNK_ID = 1
UNK_TAG = "<unk>"
PAD_GRID = (25, 50, 100, 175, 250, 500, 1000, 2500, 5000, 10000)


class EmptyCorpus(ValueError):
    pass


def tokenize_tags(html: str) -> list[str]:
    """Lowercase tag names in document order, closing tags prefixed with '/'."""
    return tokenize_markup(html).tags


@dataclass(frozen=True)
class TagVocab:
    ids: dict[str, int]

    def __len__(self):
        """Size of the id space, reserved ids included."""
        return len(self.ids) + 2

    def id_of(self, tag: str) -> int:
        return self.ids.get(tag, UNK_ID)

    def tag_of(self, i: int) -> str:
        if not hasattr(self, "_inverse"):
            object.__setattr__(self, "_inverse", {v: k for k, v in self.ids.items()})
        return self._inverse.get(i, UNK_TAG)

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for tag, i in sorted(self.ids.items(), key=lambda kv: kv[1]):
                fh.write(f"{tag}\t{i}\n")

    @classmethod
    def load(cls, path: str | Path) -> "TagVocab":
        ids = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if line.strip():
                tag, i = line.split("\t")
                ids[tag] = int(i)
        return cls(ids)


def build_vocab(corpus: Iterable[Sequence[str]]) -> TagVocab:
    """Ids from 2 upward by descending corpus frequency, ties lexicographic."""
    counts: Counter[str] = Counter()
    n_docs = 0
    for tags in corpus:
        counts.update(tags)
        n_docs += 1
    if n_docs == 0:
        raise EmptyCorpus("cannot build a tag vocabulary from no documents")
    ranked = sorted(counts, key=lambda t: (-counts[t], t))
    return TagVocab({t: i for i, t in enumerate(ranked, start=2)})


@dataclass(frozen=True)
class TagSequence:
    ids: tuple[int, ...]
    pad: int
    source_len: int

    def __post_init__(self):
        if len(self.ids) != self.pad:
            raise ValueError("window length must equal pad")


def encode_window(tags: Sequence[str], vocab: TagVocab, pad: int) -> TagSequence:
    """The first ``pad`` tags as ids, zero-padded on the right."""
    if pad < 1:
        raise ValueError("pad must be >= 1")
    head = [vocab.id_of(t) for t in tags[:pad]]
    return TagSequence(tuple(head + [PAD_ID] * (pad - len(head))), pad, len(tags))


def decode_window(seq: TagSequence, vocab: TagVocab) -> list[str]:
    return [vocab.tag_of(i) for i in seq.ids if i != PAD_ID]


def window_to_counts(seq: TagSequence, vocab: TagVocab) -> np.ndarray:
    """Occurrences of every id within the window; the pad slot stays 0."""
    counts = np.bincount(np.asarray(seq.ids, dtype=np.int64), minlength=len(vocab)).astype(float)
    counts[PAD_ID] = 0.0
    return counts


def count_matrix(streams: Sequence[Sequence[str]], vocab: TagVocab, pad: int) -> np.ndarray:
    return np.stack([window_to_counts(encode_window(t, vocab, pad), vocab) for t in streams]) \
        if streams else np.zeros((0, len(vocab)))


def count_schema(vocab: TagVocab) -> tuple[str, ...]:
    return tuple(f"tag_{vocab.tag_of(i)}" if i > UNK_ID else ("tag_<pad>" if i == PAD_ID else "tag_<unk>")
                 for i in range(len(vocab)))


def write_windows(path: str | Path, rows: Iterable[tuple[str, TagSequence]]) -> None:
    """Dump windows as ``url TAB pad TAB comma-joined ids`` lines."""
    with open(path, "w", encoding="utf-8") as fh:
        for url, seq in rows:
            fh.write(f"{url}\t{seq.pad}\t{','.join(map(str, seq.ids))}\n")


def read_windows(path: str | Path) -> list[tuple[str, TagSequence]]:
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        url, pad, ids = line.split("\t")
        id_list = tuple(int(x) for x in ids.split(",")) if ids else ()
        source = sum(1 for i in id_list if i != PAD_ID)
        out.append((url, TagSequence(id_list, int(pad), source)))
    return out
