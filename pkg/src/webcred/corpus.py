"""Gold-standard credibility corpora and the fact-checking impact report."""

from __future__ import annotations

import csv
import logging
import math
import statistics
from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence
from urllib.parse import urlsplit, urlunsplit

log = logging.getLogger(__name__)

CREDIBLE = "credible"
NON_CREDIBLE = "non-credible"
FORMATS = {"microsoft": ("url", "rating"), "c3": ("url", "rating", "rater_id")}


class RowError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class EmptyRatings(ValueError):
    pass


class IncompleteReport(ValueError):
    def __init__(self, urls: Sequence[str]):
        super().__init__(f"{len(urls)} annotated URLs have no model prediction: " + ", ".join(urls))
        self.urls = list(urls)


def normalize_url(url: str) -> str:
    """Lowercase scheme and host, drop the fragment, keep the query."""
    parts = urlsplit(url.strip())
    return urlunsplit((parts.scheme.lower(), parts.netloc.lower(), parts.path, parts.query, ""))


def _round_half_up(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


@dataclass
class RatedUrl:
    url: str
    ratings: list[int]
    aggregated: int | None = None

    def __post_init__(self):
        if self.aggregated is None and self.ratings:
            self.aggregated = aggregate_ratings(self)


def aggregate_ratings(r: RatedUrl, method: str = "mean") -> int:
    """Mean (or median) rating rounded half-up to a Likert point."""
    if not r.ratings:
        raise EmptyRatings(r.url)
    if method == "mean":
        value = Fraction(sum(r.ratings), len(r.ratings))
    elif method == "median":
        value = Fraction(statistics.median(r.ratings)).limit_denominator(2)
    else:
        raise ValueError(f"unknown aggregation {method!r}")
    return min(5, max(1, _round_half_up(value)))


def _open_rows(path: Path):
    text = path.read_text(encoding="utf-8-sig")
    first = text.splitlines()[0] if text else ""
    delimiter = "\t" if "\t" in first else ","
    return csv.reader(text.splitlines(), delimiter=delimiter)


def load_rated_corpus(path: str | Path, fmt: str = "microsoft", *, skip_invalid: bool = False,
                      aggregation: str = "mean") -> list[RatedUrl]:
    """Read a rated-URL file; ``c3`` files may hold many rows per URL.

    Invalid rows raise ``RowError`` unless ``skip_invalid`` is set, in which
    case they are logged and dropped.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown corpus format {fmt!r}")
    rows = _open_rows(Path(path))
    header = [h.strip().lower() for h in next(rows, [])]
    expected = FORMATS[fmt]
    if tuple(header[:len(expected)]) != expected:
        raise RowError(1, f"expected header {','.join(expected)}, got {','.join(header)}")
    grouped: "OrderedDict[str, list[int]]" = OrderedDict()
    for lineno, row in enumerate(rows, start=2):
        if not row or not "".join(row).strip():
            continue
        try:
            if len(row) < len(expected):
                raise RowError(lineno, f"expected {len(expected)} fields, got {len(row)}")
            url = normalize_url(row[0])
            if not urlsplit(url).netloc:
                raise RowError(lineno, f"not an absolute URL: {row[0]!r}")
            try:
                rating = int(row[1].strip())
            except ValueError:
                raise RowError(lineno, f"rating is not an integer: {row[1]!r}") from None
            if not 1 <= rating <= 5:
                raise RowError(lineno, f"rating {rating} outside 1..5")
        except RowError as exc:
            if not skip_invalid:
                raise
            log.warning("skipping %s: %s", path, exc)
            continue
        grouped.setdefault(url, []).append(rating)
    out = []
    for url, ratings in grouped.items():
        r = RatedUrl(url, ratings)
        r.aggregated = aggregate_ratings(r, aggregation)
        out.append(r)
    return out


def detect_format(path: str | Path) -> str:
    header = [h.strip().lower() for h in next(_open_rows(Path(path)), [])]
    return "c3" if "rater_id" in header else "microsoft"


@dataclass(frozen=True)
class Exclusion:
    url: str
    reason: str


def validation_pass(records: Iterable[RatedUrl], store) -> tuple[list[RatedUrl], list[Exclusion]]:
    """Split records into usable ones and an exclusion list.

    Reasons mirror the known defects of cached credibility corpora: page not
    cached, cached bytes unusable, or a non-HTML payload.
    """
    from .ingest import IngestError, ParseError, load_snapshot, parse_html

    keep, excluded = [], []
    for r in records:
        if r.url not in store:
            excluded.append(Exclusion(r.url, "not cached"))
            continue
        try:
            parse_html(load_snapshot(store, r.url))
        except ParseError as exc:
            excluded.append(Exclusion(r.url, f"invalid file format: {exc}"))
            continue
        except IngestError as exc:
            excluded.append(Exclusion(r.url, f"unreadable snapshot: {exc}"))
            continue
        keep.append(r)
    return keep, excluded


# --------------------------------------------------------------------------
# fact-checking evidence

@dataclass
class ClaimEvidence:
    claim_id: str
    truth: bool
    urls: list[str] = field(default_factory=list)
    annotations: dict[str, str] = field(default_factory=dict)


_ANNOTATIONS = {"credible": CREDIBLE, "cred": CREDIBLE, "non-credible": NON_CREDIBLE,
                "non_credible": NON_CREDIBLE, "noncredible": NON_CREDIBLE, "non-cred": NON_CREDIBLE}


def load_claim_evidence(path: str | Path) -> list[ClaimEvidence]:
    """Read ``claim_id,truth,url[,annotation]`` rows grouped by claim, in file order."""
    rows = _open_rows(Path(path))
    header = [h.strip().lower() for h in next(rows, [])]
    if not header:
        return []
    if header[:3] != ["claim_id", "truth", "url"]:
        raise RowError(1, "expected header claim_id,truth,url[,annotation]")
    claims: "OrderedDict[str, ClaimEvidence]" = OrderedDict()
    for lineno, row in enumerate(rows, start=2):
        if not row or not "".join(row).strip():
            continue
        if len(row) < 3:
            raise RowError(lineno, "expected at least claim_id,truth,url")
        claim_id, truth_text, url = row[0].strip(), row[1].strip().lower(), normalize_url(row[2])
        if truth_text not in ("true", "false"):
            raise RowError(lineno, f"unknown truth label {row[1]!r}")
        truth = truth_text == "true"
        ev = claims.setdefault(claim_id, ClaimEvidence(claim_id, truth))
        if ev.truth != truth:
            raise RowError(lineno, f"claim {claim_id} has conflicting truth labels")
        ev.urls.append(url)
        note = row[3].strip().lower() if len(row) > 3 else ""
        if note:
            if note not in _ANNOTATIONS:
                raise RowError(lineno, f"unknown annotation {row[3]!r}")
            ev.annotations[url] = _ANNOTATIONS[note]
    return list(claims.values())


def credibility_of(label) -> str:
    """Map a model output to credible / non-credible through the two-class scheme.

    Accepts the label itself, a two-class label (low, high) or a Likert value,
    which is rounded half-up and mapped with ``two_class``.
    """
    from .evaluate import map_likert

    if label in (CREDIBLE, NON_CREDIBLE):
        return label
    if label == "medium":
        return NON_CREDIBLE
    if label not in ("low", "high"):
        value = min(5, max(1, _round_half_up(Fraction(str(float(label))))))
        label = map_likert(value, "two_class")
    return NON_CREDIBLE if label == "low" else CREDIBLE


def truncate2(x: float) -> float:
    """Two-decimal truncation used for the impact-table fractions."""
    return math.floor(x * 100 + 1e-9) / 100


@dataclass(frozen=True)
class ImpactRow:
    truth: str
    claims: int
    sites: int
    non_credible: int
    credible: int
    model_non_credible: int
    model_credible: int

    @property
    def non_credible_fraction(self) -> float:
        return self.model_non_credible / self.non_credible if self.non_credible else 0.0

    @property
    def credible_fraction(self) -> float:
        return self.model_credible / self.credible if self.credible else 0.0


@dataclass
class ImpactReport:
    rows: list[ImpactRow]
    notes: list[str] = field(default_factory=list)

    def row(self, truth: str) -> ImpactRow:
        return next(r for r in self.rows if r.truth == truth)

    def to_table(self) -> str:
        lines = ["label\tclaims\tsites\tnon-cred\tcred"]
        for r in self.rows:
            lines.append(f"{r.truth}\t{r.claims}\t{r.sites}\t{r.non_credible}\t{r.credible}")
        if self.rows:
            lines.append("-\t" + "\t".join(str(sum(getattr(r, k) for r in self.rows))
                                           for k in ("claims", "sites", "non_credible", "credible")))
        lines.append("")
        lines.append("label\tnon-cred\t%\tcred\t%")
        for r in self.rows:
            lines.append(f"{r.truth}\t{r.model_non_credible}\t{truncate2(r.non_credible_fraction):.2f}\t"
                         f"{r.model_credible}\t{truncate2(r.credible_fraction):.2f}")
        lines += [f"# {n}" for n in self.notes]
        return "\n".join(lines) + "\n"


def factcheck_report(evidence: Sequence[ClaimEvidence], predictions: Mapping[str, str]) -> ImpactReport:
    """How often the model agrees with human credibility annotations, per claim truth label.

    ``predictions`` maps URL to credible / non-credible (or a value that
    ``credibility_of`` understands). Every annotated URL needs a prediction.
    """
    missing = sorted({u for ev in evidence for u in ev.annotations if u not in predictions})
    if missing:
        raise IncompleteReport(missing)
    rows = []
    for truth in (True, False):
        claims = [ev for ev in evidence if ev.truth == truth]
        if not claims:
            continue
        counts = dict(non=0, cred=0, model_non=0, model_cred=0)
        for ev in claims:
            for url, human in ev.annotations.items():
                model = credibility_of(predictions[url])
                if human == NON_CREDIBLE:
                    counts["non"] += 1
                    counts["model_non"] += model == NON_CREDIBLE
                else:
                    counts["cred"] += 1
                    counts["model_cred"] += model == CREDIBLE
        rows.append(ImpactRow("true" if truth else "false", len(claims),
                              sum(len(ev.urls) for ev in claims), counts["non"], counts["cred"],
                              counts["model_non"], counts["model_cred"]))
    report = ImpactReport(rows)
    if not any(ev.annotations for ev in evidence):
        report.notes.append("no annotated URLs: nothing to compare")
    return report
