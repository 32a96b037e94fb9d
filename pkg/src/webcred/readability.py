"""Classic readability formulas over plain text."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from .ingest import split_sentences

METRICS = (
    "flesch_reading_ease",
    "flesch_kincaid_grade",
    "smog",
    "coleman_liau",
    "ari",
    "gunning_fog",
    "lix",
    "dale_chall",
)

_WORD = re.compile(r"[A-Za-z0-9]+(?:'[A-Za-z]+)?")
_VOWEL_GROUP = re.compile(r"[aeiouy]+")


@lru_cache(maxsize=1)
def dale_chall_easy_words() -> frozenset[str]:
    text = resources.files("webcred.data").joinpath("dale_chall_easy.txt").read_text(encoding="utf-8")
    return frozenset(w.strip().lower() for w in text.split())


def count_syllables(word: str) -> int:
    """Vowel-group syllable estimate; a silent final 'e' is dropped."""
    w = re.sub(r"[^a-z]", "", word.lower())
    if not w:
        return 1 if any(c.isdigit() for c in word) else 0
    n = len(_VOWEL_GROUP.findall(w))
    if n > 1 and w.endswith("e") and not w.endswith(("le", "ee", "ye")):
        n -= 1
    return max(n, 1)


@dataclass(frozen=True)
class TextStats:
    sentences: int
    words: int
    syllables: int
    letters: int
    characters: int
    polysyllables: int
    long_words: int
    difficult_words: int

    @classmethod
    def of(cls, text: str) -> "TextStats":
        tokens = _WORD.findall(text)
        syl = [count_syllables(t) for t in tokens]
        easy = dale_chall_easy_words()
        return cls(
            sentences=max(len(split_sentences(text)), 1) if tokens else 0,
            words=len(tokens),
            syllables=sum(syl),
            letters=sum(c.isalpha() for t in tokens for c in t),
            characters=sum(c.isalnum() for t in tokens for c in t),
            polysyllables=sum(s >= 3 for s in syl),
            long_words=sum(sum(c.isalpha() for c in t) > 6 for t in tokens),
            difficult_words=sum(t.lower() not in easy and not t.isdigit() for t in tokens),
        )


def flesch_reading_ease(s: TextStats) -> float:
    return 206.835 - 1.015 * s.words / s.sentences - 84.6 * s.syllables / s.words


def flesch_kincaid_grade(s: TextStats) -> float:
    return 0.39 * s.words / s.sentences + 11.8 * s.syllables / s.words - 15.59


def smog(s: TextStats) -> float:
    return 1.0430 * math.sqrt(s.polysyllables * 30.0 / s.sentences) + 3.1291


def coleman_liau(s: TextStats) -> float:
    letters_per_100 = 100.0 * s.letters / s.words
    sentences_per_100 = 100.0 * s.sentences / s.words
    return 0.0588 * letters_per_100 - 0.296 * sentences_per_100 - 15.8


def ari(s: TextStats) -> float:
    return 4.71 * s.characters / s.words + 0.5 * s.words / s.sentences - 21.43


def gunning_fog(s: TextStats) -> float:
    return 0.4 * (s.words / s.sentences + 100.0 * s.polysyllables / s.words)


def lix(s: TextStats) -> float:
    return s.words / s.sentences + 100.0 * s.long_words / s.words


def dale_chall(s: TextStats) -> float:
    pct = 100.0 * s.difficult_words / s.words
    score = 0.1579 * pct + 0.0496 * s.words / s.sentences
    return score + 3.6365 if pct > 5.0 else score


_FORMULAS = (flesch_reading_ease, flesch_kincaid_grade, smog, coleman_liau, ari,
             gunning_fog, lix, dale_chall)


def readability_vector(text: str) -> np.ndarray:
    """The eight metrics in ``METRICS`` order; text without words gives zeros."""
    stats = TextStats.of(text)
    if stats.words == 0:
        return np.zeros(len(METRICS))
    return np.array([f(stats) for f in _FORMULAS])
