"""Cache-to-matrix glue shared by the CLI, the demos and the experiments."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime

import numpy as np

from .archive import ArchiveUnavailable, query_archive
from .features import FeatureConfig, FeatureResources, assemble_features, feature_schema
from .ingest import IngestError, ParsedPage, SnapshotStore, load_snapshot, parse_html
from .vector import FeatureVector


def page_features(page: ParsedPage, resources: FeatureResources, client=None,
                  today: datetime | None = None,
                  config: FeatureConfig = FeatureConfig()) -> tuple[FeatureVector, list[str]]:
    """Feature vector of one page plus provenance notes.

    ``client`` is a CDX client or ``None`` to run without the archive; an
    unreachable archive degrades to the no-timeline fallback.
    """
    timeline, extra = None, []
    if client is None:
        extra.append("archive: disabled")
    else:
        try:
            timeline = query_archive(page.url, client, today)
        except ArchiveUnavailable as exc:
            extra.append(f"archive: unavailable ({exc})")
    fv = assemble_features(page, timeline, resources, config)
    return fv, list(fv.notes) + extra


@dataclass
class Extracted:
    urls: list[str]
    X: np.ndarray
    schema: tuple[str, ...]
    notes: list[list[str]] = field(default_factory=list)
    failures: list[tuple[str, str]] = field(default_factory=list)
    tag_streams: list[tuple[str, ...]] = field(default_factory=list)


def extract_store(store: SnapshotStore, resources: FeatureResources, client=None,
                  today: datetime | None = None, urls=None,
                  config: FeatureConfig = FeatureConfig()) -> Extracted:
    """Features for cached pages in URL order; unparsable snapshots go to ``failures``."""
    schema = feature_schema(config, resources.gi.category_order)
    out = Extracted([], np.zeros((0, len(schema))), schema)
    rows = []
    for url in sorted(urls) if urls is not None else store.urls():
        try:
            page = parse_html(load_snapshot(store, url))
        except IngestError as exc:
            out.failures.append((url, f"{type(exc).__name__}: {exc}"))
            continue
        fv, notes = page_features(page, resources, client, today, config)
        out.urls.append(url)
        rows.append(fv.values)
        out.notes.append(notes)
        out.tag_streams.append(page.tag_stream)
    if rows:
        out.X = np.vstack(rows)
    return out
