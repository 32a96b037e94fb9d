"""Credibility scoring for web pages.

Pipeline: ``ingest`` caches and parses pages, ``features`` turns a parsed
page into a FeatureVector, ``html2seq`` encodes tag windows, ``learn`` holds
the learners and stacking, ``evaluate`` the metrics and cross-validation, and
``corpus`` the rated datasets and the fact-checking report.
"""

from .archive import ArchiveTimeline, query_archive, score_archive
from .corpus import (ClaimEvidence, RatedUrl, aggregate_ratings, factcheck_report, load_claim_evidence,
                     load_rated_corpus)
from .evaluate import (Dataset, MetricsReport, classification_report, cross_validate,
                       cross_validate_stacked, map_likert, padding_sweep, regression_report)
from .features import FeatureConfig, FeatureResources, assemble_features, feature_schema
from .html2seq import TagSequence, TagVocab, build_vocab, encode_window, tokenize_tags, window_to_counts
from .ingest import (FetchPolicy, ParsedPage, RawDocument, SnapshotStore, fetch_page, load_snapshot,
                     parse_html, split_sentences, store_snapshot)
from .vector import FeatureVector, SchemaError

__version__ = "0.1.0"
