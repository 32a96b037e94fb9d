"""Content features of a parsed page and their assembly into a FeatureVector.

Schema order (``feature_schema``)::

    f_arc, domain_id, authority[5], outbound[5], category[12],
    category_lexrank[12], category_lsa[12], readability[8], spam[2],
    social[K], opensources, pagerank_cc[2], gi[182], sentiment[4]

Every extractor is total: empty pages and missing tables produce defined
fallback values, and the fallback is recorded in ``FeatureVector.notes``.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources as _res
from typing import Callable, Iterable, Sequence
from urllib.parse import urlsplit

import numpy as np

from .archive import DOMAIN_PENALTY, ArchiveTimeline, score_archive
from .domains import host_of, public_suffix, registrable_domain
from .ingest import ParsedPage
from .learn.naive_bayes import BinaryTextNB, TextVocabulary
from .lexicons import LexiconTable, RankTable, load_category_lexicon, load_valence_lexicon
from .readability import METRICS, readability_vector
from .text import lexrank_top, lsa_top, words
from .vector import FeatureVector

CATEGORIES = ("business", "entertainment", "politics", "religion", "sports", "tech")
AUTHORITY = ("mailto", "contact", "address", "copyright", "about")
PROTOCOLS = ("http", "https", "ftp", "mailto", "other")
SOCIAL_MARKERS = ("facebook", "twitter", "share", "like", "follow", "tweet", "instagram", "whatsapp")
SENTIMENT = ("pos", "neg", "neu", "mean")
GI_DIM = 182
SUMMARY_N = 5
UNINFORMATIVE = 0.5


def _data_path(name: str):
    return _res.files("webcred.data").joinpath(name)


def _read_labeled(name: str) -> list[tuple[str, str]]:
    rows = []
    for line in _data_path(name).read_text(encoding="utf-8").splitlines():
        if line.strip() and not line.startswith("#"):
            label, text = line.split("\t", 1)
            rows.append((label.strip(), text.strip()))
    return rows


# --------------------------------------------------------------------------
# text models

class CategoryModelSet:
    """Six one-vs-rest multinomial NB topic models over a shared vocabulary."""

    def __init__(self, labeled: Sequence[tuple[str, str]], alpha: float = 1.0,
                 categories: Sequence[str] = CATEGORIES):
        texts = [t for _, t in labeled]
        labels = [c for c, _ in labeled]
        self.categories = tuple(categories)
        self.vocab = TextVocabulary.from_texts(texts)
        self.models = [BinaryTextNB(self.vocab, texts, [l == c for l in labels], alpha)
                       for c in self.categories]

    @classmethod
    @lru_cache(maxsize=1)
    def bundled(cls) -> "CategoryModelSet":
        return cls(_read_labeled("topics.tsv"))

    def probs(self, text: str) -> np.ndarray:
        x = self.vocab.counts(text)
        return np.array([float(m.model.predict_proba(x)[0, 1]) for m in self.models])


class SpamModel:
    def __init__(self, labeled: Sequence[tuple[str, str]], alpha: float = 1.0):
        texts = [t for _, t in labeled]
        self.nb = BinaryTextNB(TextVocabulary.from_texts(texts), texts,
                               [l == "spam" for l, _ in labeled], alpha)

    @classmethod
    @lru_cache(maxsize=1)
    def bundled(cls) -> "SpamModel":
        return cls(_read_labeled("spam.tsv"))

    def prob(self, text: str) -> float:
        return self.nb.prob(text)


# --------------------------------------------------------------------------
# individual extractors

def build_domain_vocab(urls: Iterable[str]) -> dict[str, int]:
    """Public suffixes by descending frequency (ties lexicographic), ids from 1."""
    counts = Counter(s for s in (public_suffix(u) for u in urls) if s)
    ranked = sorted(counts, key=lambda s: (-counts[s], s))
    return {s: i for i, s in enumerate(ranked, start=1)}


def encode_domain(url: str, vocab: dict[str, int]) -> int:
    """Vocabulary id of the URL's public suffix; 0 if unknown or unparsable."""
    return vocab.get(public_suffix(url), 0)


_CONTACT = re.compile(r"\bcontact\b", re.I)
_ABOUT_TEXT = re.compile(r"\babout\b", re.I)
_ADDRESS = re.compile(
    r"\b\d{1,5}\s+(?:[A-Z][A-Za-z]*\.?\s+){1,3}"
    r"(?:Street|St|Avenue|Ave|Road|Rd|Boulevard|Blvd|Lane|Ln|Drive|Dr|Way|Court|Ct|Place|Pl|Square|Sq)\b"
    r"|\bP\.?\s?O\.?\s+Box\s+\d+"
    r"|\b[A-Z]{2}\s+\d{5}(?:-\d{4})?\b"
)
_COPYRIGHT = re.compile(r"©|&copy;|\bcopyright\b", re.I)


def authority_signals(page: ParsedPage) -> np.ndarray:
    """[mailto links, contact-like anchors, postal-address hits, copyright notice, about link]."""
    mailto = sum(1 for proto, _ in page.links if proto == "mailto")
    contact = sum(1 for _, text in page.anchors if _CONTACT.search(text))
    address = len(_ADDRESS.findall(page.body_text))
    copyright_ = int(bool(_COPYRIGHT.search(page.body_text) or _COPYRIGHT.search(page.html)))
    about = int(any("about" in urlsplit(href).path.lower() or _ABOUT_TEXT.search(text)
                    for href, text in page.anchors))
    return np.array([mailto, contact, address, copyright_, about], dtype=float)


def _link_domain(proto: str, target: str) -> str:
    if proto == "mailto":
        addr = target.split(":", 1)[-1].split("?")[0]
        return registrable_domain(addr.rpartition("@")[2]) if "@" in addr else ""
    return registrable_domain(host_of(target)) if host_of(target) else ""


def outbound_link_counts(page: ParsedPage) -> np.ndarray:
    """Distinct outbound targets per protocol in ``PROTOCOLS`` order.

    A link is outbound when it has a host whose registrable domain differs
    from the page's; links without a host are internal.
    """
    seen: dict[str, set[str]] = {p: set() for p in PROTOCOLS}
    for proto, target in page.links:
        dom = _link_domain(proto, target)
        if not dom or dom == page.domain:
            continue
        seen[proto if proto in seen else "other"].add(target)
    return np.array([len(seen[p]) for p in PROTOCOLS], dtype=float)


def _mean_probs(texts: Sequence[str], models) -> np.ndarray:
    if not texts:
        return np.full(len(models.categories), UNINFORMATIVE)
    return np.mean([models.probs(t) for t in texts], axis=0)


def category_vector(page: ParsedPage, models: CategoryModelSet) -> np.ndarray:
    """Mean per-category probability over sentences, followed by the title's."""
    title = models.probs(page.title) if page.title.strip() else np.full(len(models.categories), UNINFORMATIVE)
    return np.concatenate([_mean_probs(page.sentences, models), title])


def category_vector_summarized(page: ParsedPage, models: CategoryModelSet,
                               summarizer: Callable[[Sequence[str], int], list[int]] = lexrank_top,
                               n_top: int = SUMMARY_N) -> np.ndarray:
    """``category_vector`` restricted to the summarizer's top sentences."""
    chosen = [page.sentences[i] for i in sorted(summarizer(page.sentences, n_top))] if page.sentences else []
    title = models.probs(page.title) if page.title.strip() else np.full(len(models.categories), UNINFORMATIVE)
    return np.concatenate([_mean_probs(chosen, models), title])


def spam_flags(page: ParsedPage, spam_model: SpamModel) -> np.ndarray:
    """[P(spam | body), P(spam | title)], 0.5 for empty text."""
    return np.array([spam_model.prob(t) if t.strip() else UNINFORMATIVE
                     for t in (page.body_text, page.title)])


def social_tag_counts(body_text: str, markers: Sequence[str] = SOCIAL_MARKERS) -> np.ndarray:
    counts = Counter(words(body_text))
    return np.array([counts[m.lower()] for m in markers], dtype=float)


def opensources_flag(domain: str, listed: frozenset[str]) -> int:
    return int(registrable_domain(domain) in listed)


def pagerank_cc(host: str, table: RankTable) -> tuple[float, int]:
    return table.lookup(host)


def gi_vector(body_text: str, gi_table: LexiconTable, dim: int = GI_DIM) -> np.ndarray:
    """Share of tokens belonging to each category, in the table's category order."""
    if len(gi_table.category_order) != dim:
        raise ValueError(f"lexicon has {len(gi_table.category_order)} categories, expected {dim}")
    tokens = words(body_text)
    out = np.zeros(dim)
    if not tokens:
        return out
    col = {c: i for i, c in enumerate(gi_table.category_order)}
    for t, n in Counter(tokens).items():
        for c in gi_table.get(t, ()):
            out[col[c]] += n
    return out / len(tokens)


def sentiment_vector(body_text: str, valence_table: LexiconTable) -> np.ndarray:
    """[positive share, negative share, neutral share, mean valence] of lexicon hits."""
    scores = [valence_table.get(t) for t in words(body_text)]
    scores = [s for s in scores if s is not None]
    if not scores:
        return np.array([0.0, 0.0, 1.0, 0.0])
    s = np.array(scores, dtype=float)
    return np.array([(s > 0).mean(), (s < 0).mean(), (s == 0).mean(), s.mean()])


# --------------------------------------------------------------------------
# assembly

@dataclass(frozen=True)
class FeatureConfig:
    social_markers: tuple[str, ...] = SOCIAL_MARKERS
    summary_n: int = SUMMARY_N
    domain_penalty: float = DOMAIN_PENALTY
    gi_dim: int = GI_DIM


@dataclass
class FeatureResources:
    """Loaded models and tables; ``None`` tables fall back to defaults."""

    categories: CategoryModelSet
    spam: SpamModel
    gi: LexiconTable
    valence: LexiconTable
    domain_vocab: dict[str, int] = field(default_factory=dict)
    opensources: frozenset[str] | None = None
    ranks: RankTable | None = None

    @classmethod
    def bundled(cls, **overrides) -> "FeatureResources":
        base = dict(
            categories=CategoryModelSet.bundled(),
            spam=SpamModel.bundled(),
            gi=bundled_gi(),
            valence=bundled_valence(),
        )
        base.update(overrides)
        return cls(**base)


@lru_cache(maxsize=1)
def bundled_gi() -> LexiconTable:
    with _res.as_file(_data_path("gi_sample.tsv")) as p:
        return load_category_lexicon(p)


@lru_cache(maxsize=1)
def bundled_valence() -> LexiconTable:
    with _res.as_file(_data_path("valence_sample.tsv")) as p:
        return load_valence_lexicon(p)


def feature_schema(config: FeatureConfig = FeatureConfig(), gi_categories: Sequence[str] | None = None) -> tuple[str, ...]:
    gi_names = gi_categories or [f"{i:03d}" for i in range(config.gi_dim)]
    names = ["f_arc", "domain_id"]
    names += [f"authority_{a}" for a in AUTHORITY]
    names += [f"outbound_{p}" for p in PROTOCOLS]
    for prefix in ("category", "category_lexrank", "category_lsa"):
        names += [f"{prefix}_{c}_sentences" for c in CATEGORIES]
        names += [f"{prefix}_{c}_title" for c in CATEGORIES]
    names += [f"readability_{m}" for m in METRICS]
    names += ["spam_body", "spam_title"]
    names += [f"social_{m}" for m in config.social_markers]
    names += ["opensources", "pagerank_cc", "pagerank_cc_present"]
    names += [f"gi_{c}" for c in gi_names]
    names += [f"sentiment_{s}" for s in SENTIMENT]
    return tuple(names)


def assemble_features(page: ParsedPage, timeline: ArchiveTimeline | None,
                      resources: FeatureResources, config: FeatureConfig = FeatureConfig()) -> FeatureVector:
    notes = []
    if timeline is None:
        notes.append("archive: no timeline, f_arc=0")
        f_arc = 0.0
    else:
        f_arc = score_archive(timeline, config.domain_penalty)
        if not timeline.snapshots:
            notes.append("archive: no captures, f_arc=0")
        elif timeline.source_level != "exact-URL":
            notes.append(f"archive: {timeline.source_level}")
    if resources.opensources is None:
        notes.append("opensources: list disabled, flag=0")
        listed = 0
    else:
        listed = opensources_flag(page.domain, resources.opensources)
    if resources.ranks is None:
        notes.append("pagerank_cc: table disabled")
        rank = (0.0, 0)
    else:
        rank = pagerank_cc(host_of(page.url) or page.domain, resources.ranks)
    if not page.sentences:
        notes.append("category: no sentences, 0.5 prior")

    cats = resources.categories
    values = np.concatenate([
        [f_arc, encode_domain(page.url, resources.domain_vocab)],
        authority_signals(page),
        outbound_link_counts(page),
        category_vector(page, cats),
        category_vector_summarized(page, cats, lexrank_top, config.summary_n),
        category_vector_summarized(page, cats, lsa_top, config.summary_n),
        readability_vector(page.body_text),
        spam_flags(page, resources.spam),
        social_tag_counts(page.body_text, config.social_markers),
        [listed, rank[0], rank[1]],
        gi_vector(page.body_text, resources.gi, config.gi_dim),
        sentiment_vector(page.body_text, resources.valence),
    ])
    schema = feature_schema(config, resources.gi.category_order)
    return FeatureVector(values, schema, tuple(notes))
