"""Command-line entry point: ``webcred <command> ...``.

Exit codes: 0 success, 1 data failure (nothing usable, missing predictions,
unfetchable pages), 2 usage or configuration error. Settings come from an
INI config file (``--config``); command-line flags override it.
"""

from __future__ import annotations

import argparse
import configparser
import json
import logging
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import corpus as corpus_mod
from .archive import FixtureCdxClient, LiveCdxClient, parse_timestamp
from .evaluate import (SCHEMES, Dataset, cross_validate, cross_validate_stacked, get_scheme, map_likert,
                       padding_sweep, plot_data, run_record, sweep_table)
from .features import (GI_DIM, FeatureConfig, FeatureResources, build_domain_vocab,
                       bundled_gi, bundled_valence, feature_schema)
from .html2seq import PAD_GRID, build_vocab, count_matrix
from .ingest import (FetchPolicy, IngestError, NotCached, ParsedPage, RawDocument, SnapshotStore,
                     fetch_many, fetch_page, load_snapshot, parse_html, store_snapshot)
from .learn.artifact import LEARNERS, LearnerSpec, ModelArtifact, predict, train
from .learn.selection import PERCENTILES
from .pipeline import extract_store, page_features
from .lexicons import (LexiconTable, TableFormatError, load_category_lexicon, load_domain_list,
                       load_rank_table, load_valence_lexicon)
from .vector import SchemaError, schema_fingerprint

log = logging.getLogger("webcred")

TABLE_FILES = {
    "gi": "gi.tsv",
    "valence": "valence.tsv",
    "opensources": "opensources.txt",
    "ranks": "ranks.tsv",
    "archive": "cdx.tsv",
}
FEATURES_FORMAT = "webcred-features"


class CliError(Exception):
    def __init__(self, message: str, code: int = 2):
        super().__init__(message)
        self.code = code


# --------------------------------------------------------------------------
# settings

class Settings:
    """Flag value, else config value, else default."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.cfg = configparser.ConfigParser()
        if args.config:
            path = Path(args.config)
            if not path.is_file():
                raise CliError(f"config file not found: {path}")
            try:
                self.cfg.read(path, encoding="utf-8")
            except configparser.Error as exc:
                raise CliError(f"bad config file {path}: {exc}") from None

    def get(self, section: str, key: str, flag: str | None = None, default=None, cast=str):
        value = getattr(self.args, flag or key, None)
        if value is not None:
            return value
        if self.cfg.has_option(section, key):
            raw = self.cfg.get(section, key)
            try:
                if cast is bool:
                    return self.cfg.getboolean(section, key)
                return cast(raw)
            except ValueError:
                raise CliError(f"config [{section}] {key}: cannot parse {raw!r}") from None
        return default

    @property
    def seed(self) -> int:
        return self.get("run", "seed", default=0, cast=int)

    def cache_dir(self, required: bool = True) -> Path | None:
        value = self.get("paths", "cache_dir")
        if value is None and required:
            raise CliError("no cache directory: pass --cache-dir or set [paths] cache_dir")
        return None if value is None else Path(value)

    def fetch_policy(self) -> FetchPolicy:
        d = FetchPolicy()
        return FetchPolicy(
            timeout_secs=self.get("fetch", "timeout_secs", default=d.timeout_secs, cast=float),
            max_bytes=self.get("fetch", "max_bytes", default=d.max_bytes, cast=int),
            max_redirects=self.get("fetch", "max_redirects", default=d.max_redirects, cast=int),
            user_agent=self.get("fetch", "user_agent", default=d.user_agent),
            per_host_rps=self.get("fetch", "per_host_rps", default=d.per_host_rps, cast=float),
            max_in_flight=self.get("fetch", "max_in_flight", default=d.max_in_flight, cast=int),
        )


def _csv(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _grid(text) -> list[int]:
    if isinstance(text, list):
        return text
    try:
        return [int(t) for t in _csv(text)]
    except ValueError:
        raise CliError(f"padding grid must be comma-separated integers, got {text!r}") from None


def _param_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _learner(settings: Settings, regression: bool, flag: str = "learner", key: str = "learner",
             default: str | None = None, with_params: bool = True) -> LearnerSpec:
    kind = settings.get("learn", key, flag, default=default or ("ridge" if regression else "gradient_boosting"))
    if kind not in LEARNERS:
        raise CliError(f"unknown learner {kind!r}; choose from {', '.join(sorted(LEARNERS))}")
    params = {}
    for item in (getattr(settings.args, "param", None) or []) if with_params else []:
        name, sep, value = item.partition("=")
        if not sep:
            raise CliError(f"--param expects name=value, got {item!r}")
        params[name.strip()] = _param_value(value.strip())
    if kind == "svr":
        params.setdefault("seed", settings.seed)
    spec = LearnerSpec(kind, params)
    try:
        spec.build(regression)
    except (TypeError, ValueError) as exc:
        raise CliError(f"learner {spec.describe()}: {exc}") from None
    return spec


def _scheme(settings: Settings):
    name = settings.get("learn", "scheme", default="two_class")
    if name not in SCHEMES:
        raise CliError(f"unknown scheme {name!r}; choose from {', '.join(sorted(SCHEMES))}")
    return get_scheme(name)


def _selection(settings: Settings) -> tuple[float, str]:
    mode = settings.get("learn", "selection_mode", default="percentile")
    if mode not in ("percentile", "k"):
        raise CliError("selection mode must be 'percentile' or 'k'")
    amount = settings.get("learn", "percentile", default=100.0, cast=float)
    if mode == "percentile" and not 0 < amount <= 100:
        raise CliError(f"percentile must be in (0, 100], got {amount}")
    if mode == "k" and (amount < 1 or amount != int(amount)):
        raise CliError(f"k must be a positive integer, got {amount}")
    return amount, mode


# --------------------------------------------------------------------------
# feature resources

@dataclass(frozen=True)
class Extraction:
    tables: str | None
    disabled: tuple[str, ...]
    bundled_lexicons: bool
    live_archive: bool
    today: str

    def as_dict(self) -> dict:
        return {"tables": self.tables, "disabled": list(self.disabled),
                "bundled_lexicons": self.bundled_lexicons, "live_archive": self.live_archive,
                "today": self.today}


def _extraction(settings: Settings, store: SnapshotStore | None, stored: dict | None = None) -> Extraction:
    stored = stored or {}
    tables = settings.get("paths", "tables", default=stored.get("tables"))
    disabled = settings.args.disable
    if disabled is None:
        raw = settings.get("features", "disable", default=None)
        disabled = _csv(raw) if raw is not None else stored.get("disabled", [])
    unknown = set(disabled) - set(TABLE_FILES)
    if unknown:
        raise CliError(f"cannot disable {sorted(unknown)}; tables are {', '.join(TABLE_FILES)}")
    bundled = settings.get("features", "bundled_lexicons", default=stored.get("bundled_lexicons", False),
                           cast=bool)
    live = settings.get("features", "live_archive", default=stored.get("live_archive", False), cast=bool)
    today = settings.get("features", "today", default=stored.get("today"))
    if today is None:
        stamps = [r.fetched_at for r in store.index.values()] if store is not None else []
        today = max(stamps).isoformat() if stamps else datetime.now(timezone.utc).isoformat()
    try:
        today = parse_timestamp(today).isoformat()
    except ValueError:
        raise CliError(f"cannot parse date {today!r}") from None
    return Extraction(None if tables is None else str(tables), tuple(sorted(set(disabled))),
                      bool(bundled), bool(live), today)


def _table_path(ex: Extraction, name: str) -> Path | None:
    """Path of an enabled table; ``None`` if disabled or served from elsewhere."""
    if name in ex.disabled:
        return None
    if name in ("gi", "valence") and ex.bundled_lexicons:
        return None
    if name == "archive" and ex.live_archive:
        return None
    if ex.tables is None:
        raise CliError(f"table '{name}' needed: pass --tables DIR, --disable {name}"
                       + (" or --bundled-lexicons" if name in ("gi", "valence") else ""))
    path = Path(ex.tables) / TABLE_FILES[name]
    if not path.is_file():
        raise CliError(f"missing table {path}; provide it or pass --disable {name}")
    return path


def _resources(ex: Extraction, domain_vocab: dict) -> tuple[FeatureResources, object]:
    try:
        gi_path = _table_path(ex, "gi")
        if "gi" in ex.disabled:
            gi = LexiconTable("gi", {}, bundled_gi().category_order)
        else:
            gi = load_category_lexicon(gi_path) if gi_path else bundled_gi()
        if len(gi.category_order) != GI_DIM:
            raise CliError(f"GI table has {len(gi.category_order)} categories, expected {GI_DIM}")
        val_path = _table_path(ex, "valence")
        if "valence" in ex.disabled:
            valence = LexiconTable("valence", {})
        else:
            valence = load_valence_lexicon(val_path) if val_path else bundled_valence()
        os_path = _table_path(ex, "opensources")
        rank_path = _table_path(ex, "ranks")
        arc_path = _table_path(ex, "archive")
        resources = FeatureResources.bundled(
            gi=gi, valence=valence, domain_vocab=dict(domain_vocab),
            opensources=load_domain_list(os_path) if os_path else None,
            ranks=load_rank_table(rank_path) if rank_path else None,
        )
    except (TableFormatError, OSError) as exc:
        raise CliError(f"bad table: {exc}") from None
    if "archive" in ex.disabled:
        client = None
    elif ex.live_archive:
        client = LiveCdxClient()
    else:
        client = FixtureCdxClient(arc_path)
    return resources, client


# --------------------------------------------------------------------------
# feature files

def read_features(path: Path) -> tuple[dict, list[str], np.ndarray]:
    """Header, URLs and matrix of a features file written by ``extract``."""
    try:
        lines = [l for l in Path(path).read_text(encoding="utf-8").splitlines() if l.strip()]
    except OSError as exc:
        raise CliError(f"cannot read features file: {exc}") from None
    if not lines:
        raise CliError(f"{path}: empty features file")
    try:
        header = json.loads(lines[0])
        records = [json.loads(l) for l in lines[1:]]
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: not a features file ({exc})") from None
    if header.get("format") != FEATURES_FORMAT:
        raise CliError(f"{path}: not a features file")
    fp = header["fingerprint"]
    if schema_fingerprint(header["schema"]) != fp:
        raise CliError(f"{path}: header schema does not match its fingerprint")
    for r in records:
        if r["schema_version"] != fp or len(r["values"]) != len(header["schema"]):
            raise CliError(f"{path}: record {r['url']} has schema {r['schema_version']}, expected {fp}")
    X = np.array([r["values"] for r in records], dtype=float).reshape(len(records), len(header["schema"]))
    return header, [r["url"] for r in records], X


def _load_labels(path: Path, settings: Settings) -> dict[str, int]:
    try:
        fmt = corpus_mod.detect_format(path)
        agg = settings.get("learn", "aggregation", default="mean")
        rated = corpus_mod.load_rated_corpus(path, fmt, skip_invalid=True, aggregation=agg)
    except OSError as exc:
        raise CliError(f"cannot read labels: {exc}") from None
    except corpus_mod.RowError as exc:
        raise CliError(f"{path}: {exc}") from None
    return {r.url: r.aggregated for r in rated}


def _join(urls: list[str], labels: dict[str, int]) -> list[int]:
    rows = [i for i, u in enumerate(urls) if u in labels]
    dropped = len(urls) - len(rows)
    if dropped:
        log.info("%d feature rows have no rating and were dropped", dropped)
    if not rows:
        raise CliError("no feature rows have ratings", 1)
    return rows


def _dataset(settings: Settings):
    header, urls, X = read_features(Path(settings.args.features))
    labels = _load_labels(Path(settings.args.labels), settings)
    rows = _join(urls, labels)
    ds = Dataset(X[rows], np.array([labels[urls[i]] for i in rows]), tuple(urls[i] for i in rows),
                 tuple(header["schema"]))
    return header, ds


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# commands

def _read_url_list(path: Path) -> list[str]:
    try:
        text = path.read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise CliError(f"cannot read corpus: {exc}") from None
    first = text.splitlines()[0].strip().lower() if text.strip() else ""
    if first.startswith("url"):
        try:
            return [r.url for r in corpus_mod.load_rated_corpus(path, corpus_mod.detect_format(path),
                                                               skip_invalid=True)]
        except corpus_mod.RowError as exc:
            raise CliError(f"{path}: {exc}") from None
    urls = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            urls.append(corpus_mod.normalize_url(line))
    return list(dict.fromkeys(urls))


def cmd_ingest(settings: Settings) -> int:
    urls = _read_url_list(Path(settings.args.corpus))
    store = SnapshotStore(settings.cache_dir())
    todo = [u for u in urls if u not in store]
    cached = len(urls) - len(todo)
    results = fetch_many(todo, settings.fetch_policy(), fetch_page) if todo else {}
    fetched, failed = 0, []
    for url in todo:
        res = results[url]
        if isinstance(res, RawDocument):
            try:
                store_snapshot(store, res)
            except IngestError as exc:
                failed.append((url, str(exc)))
                continue
            fetched += 1
        else:
            failed.append((url, f"{type(res).__name__}: {res}"))
    print(f"{fetched} fetched, {cached} cached, {len(failed)} failed")
    for url, reason in failed:
        print(f"failed\t{url}\t{reason}", file=sys.stderr)
    return 0 if fetched + cached > 0 else 1


def cmd_extract(settings: Settings) -> int:
    store = SnapshotStore(settings.cache_dir())
    if not len(store):
        raise CliError(f"cache {store.root} is empty", 1)
    ex = _extraction(settings, store)
    vocab = build_domain_vocab(store.urls())
    resources, client = _resources(ex, vocab)
    today = parse_timestamp(ex.today)
    schema = feature_schema(FeatureConfig(), resources.gi.category_order)
    fp = schema_fingerprint(schema)
    header = {"format": FEATURES_FORMAT, "schema": list(schema), "fingerprint": fp,
              "domain_vocab": vocab, "extraction": ex.as_dict()}
    ext = extract_store(store, resources, client, today)
    lines = [json.dumps(header, sort_keys=True)]
    for url, row, notes in zip(ext.urls, ext.X, ext.notes):
        lines.append(json.dumps({"url": url, "schema_version": fp, "values": [float(v) for v in row],
                                 "notes": notes}, sort_keys=True))
    failed = ext.failures
    _emit("\n".join(lines) + "\n", settings.args.out)
    for url, reason in failed:
        print(f"excluded\t{url}\t{reason}", file=sys.stderr)
    log.info("%d records, %d excluded", len(lines) - 1, len(failed))
    return 0 if len(lines) > 1 else 1


def cmd_train(settings: Settings) -> int:
    scheme = _scheme(settings)
    spec = _learner(settings, scheme.regression)
    amount, mode = _selection(settings)
    header, ds = _dataset(settings)
    y = np.array([map_likert(int(r), scheme) for r in ds.y],
                 dtype=float if scheme.regression else object)
    if not scheme.regression and len(set(y.tolist())) < 2:
        raise CliError("training labels contain a single class", 1)
    vocabularies = {"domain_vocab": header.get("domain_vocab", {}),
                    "extraction": header.get("extraction", {}), "scheme": scheme.name}
    model = train(ds.X, y, ds.schema, spec, amount, regression=scheme.regression, mode=mode,
                  vocabularies=vocabularies)
    model.save(settings.args.out)
    rec = {"command": "train", "scheme": scheme.name, "learner": spec.describe(), "seed": settings.seed,
           "selection": {"amount": amount, "mode": mode, "selected": int(model.mask.sum())},
           "rows": len(ds.y), "fingerprint": model.fingerprint}
    if settings.args.record:
        Path(settings.args.record).write_text(json.dumps(rec, sort_keys=True) + "\n", encoding="utf-8")
    print(f"trained {spec.describe()} on {len(ds.y)} rows, {int(model.mask.sum())} features -> "
          f"{settings.args.out}")
    return 0


def _tag_counts(settings: Settings, urls, pad: int) -> np.ndarray:
    store = SnapshotStore(settings.cache_dir())
    streams = []
    for url in urls:
        try:
            streams.append(list(parse_html(load_snapshot(store, url)).tag_stream))
        except IngestError as exc:
            raise CliError(f"{url}: no usable cached page for tag features ({exc})", 1) from None
    vocab = build_vocab(streams)
    return count_matrix(streams, vocab, pad)


def cmd_eval(settings: Settings) -> int:
    scheme = _scheme(settings)
    spec = _learner(settings, scheme.regression)
    amount, mode = _selection(settings)
    folds = settings.get("learn", "folds", default=10, cast=int)
    header, ds = _dataset(settings)
    seed = settings.seed
    try:
        if settings.args.stack_pad:
            if scheme.regression:
                raise CliError("stacking needs a classification scheme")
            tag_spec = _learner(settings, False, "tag_learner", "tag_learner", default="nb", with_params=False)
            counts = _tag_counts(settings, ds.ids, settings.args.stack_pad)
            res = cross_validate_stacked(ds, counts, scheme, spec, amount, folds, seed,
                                         tag_spec=tag_spec, mode=mode)
        else:
            res = cross_validate(ds, scheme, spec, amount, folds, seed, mode=mode)
    except ValueError as exc:
        raise CliError(f"evaluation failed: {exc}", 1) from None
    selection = f"{mode}={amount:g}"
    out = res.report.to_table()
    _emit(out, settings.args.out)
    if settings.args.record:
        rec = run_record(protocol=res.protocol, seed=seed, scheme=scheme.name, learner=spec.describe(),
                         selection=selection, report=res.report, rows=len(ds.y),
                         fingerprint=header["fingerprint"], stack_pad=settings.args.stack_pad)
        Path(settings.args.record).write_text(rec + "\n", encoding="utf-8")
    return 0


def cmd_sweep(settings: Settings) -> int:
    scheme = _scheme(settings)
    if scheme.regression:
        raise CliError("the padding sweep reports F1; pick a classification scheme")
    grid = _grid(settings.get("sweep", "grid", default=list(PAD_GRID)))
    if not grid or any(p < 1 for p in grid):
        raise CliError("padding grid must hold positive integers")
    spec = _learner(settings, False, "sweep_learner", "sweep_learner", default="nb")
    folds = settings.get("learn", "folds", default=10, cast=int)
    store = SnapshotStore(settings.cache_dir())
    labels = _load_labels(Path(settings.args.labels), settings)
    urls = [u for u in store.urls() if u in labels]
    if not urls:
        raise CliError("no cached pages have ratings", 1)
    streams, targets = [], []
    for url in urls:
        try:
            streams.append(list(parse_html(load_snapshot(store, url)).tag_stream))
            targets.append(labels[url])
        except IngestError as exc:
            log.info("excluded %s: %s", url, exc)
    try:
        rows = padding_sweep(streams, targets, scheme, spec, grid, settings.seed, folds)
    except ValueError as exc:
        raise CliError(f"sweep failed: {exc}", 1) from None
    _emit(sweep_table(rows), settings.args.out)
    if settings.args.plot_data:
        Path(settings.args.plot_data).write_text(plot_data(rows), encoding="utf-8")
    return 0


def _load_model(path: str) -> ModelArtifact:
    try:
        return ModelArtifact.load(path)
    except (OSError, ValueError, KeyError) as exc:
        raise CliError(f"cannot load model {path}: {exc}") from None


def _page_for(url: str, settings: Settings, store: SnapshotStore | None, allow_fetch: bool):
    if store is not None and url in store:
        return parse_html(load_snapshot(store, url)), "cached"
    if not allow_fetch:
        raise NotCached(url)
    doc = fetch_page(url, settings.fetch_policy())
    if store is not None:
        store_snapshot(store, doc)
    return parse_html(doc), "fetched"


class _Scorer:
    def __init__(self, model: ModelArtifact, settings: Settings, store: SnapshotStore | None):
        self.model = model
        ex = _extraction(settings, store, model.vocabularies.get("extraction"))
        self.resources, self.client = _resources(ex, model.vocabularies.get("domain_vocab", {}))
        self.today = parse_timestamp(ex.today)
        model.check(feature_schema(FeatureConfig(), self.resources.gi.category_order))

    def __call__(self, page: ParsedPage):
        fv, notes = page_features(page, self.resources, self.client, self.today)
        return fv, predict(self.model, fv)


def cmd_score(settings: Settings) -> int:
    model = _load_model(settings.args.model)
    cache = settings.cache_dir(required=False)
    store = SnapshotStore(cache) if cache is not None else None
    try:
        scorer = _Scorer(model, settings, store)
    except SchemaError as exc:
        raise CliError(str(exc)) from None
    url = corpus_mod.normalize_url(settings.args.url)
    try:
        page, source = _page_for(url, settings, store, not settings.args.no_fetch)
    except IngestError as exc:
        raise CliError(f"{url}: cannot score ({type(exc).__name__}: {exc})", 1) from None
    fv, out = scorer(page)
    lines = [f"url\t{url}", f"source\t{source}"]
    if model.regression:
        lines.append(f"likert\t{out:.6f}")
        lines.append(f"rounded\t{min(5, max(1, int(np.floor(out + 0.5))))}")
    else:
        best = max(out, key=lambda c: (out[c], c))
        lines.append(f"prediction\t{best}")
        lines += [f"p({c})\t{p:.6f}" for c, p in sorted(out.items())]
    lines.append("top_features")
    idx = np.nonzero(model.mask)[0]
    if model.scores is not None:
        idx = sorted(idx, key=lambda j: (-float(model.scores[j]), j))
    for j in idx[:settings.args.top]:
        score = "" if model.scores is None else f"\tselection_score={float(model.scores[j]):.6g}"
        lines.append(f"  {model.schema[j]}\tvalue={float(fv.values[j]):.6g}{score}")
    print("\n".join(lines))
    return 0


def _read_predictions(path: Path) -> dict[str, str]:
    import csv

    try:
        text = path.read_text(encoding="utf-8-sig").splitlines()
    except OSError as exc:
        raise CliError(f"cannot read predictions: {exc}") from None
    rows = list(csv.reader(text, delimiter="\t" if text and "\t" in text[0] else ","))
    if rows and rows[0] and rows[0][0].strip().lower() == "url":
        rows = rows[1:]
    return {corpus_mod.normalize_url(r[0]): r[1].strip() for r in rows if len(r) >= 2}


def cmd_factcheck(settings: Settings) -> int:
    try:
        evidence = corpus_mod.load_claim_evidence(settings.args.evidence)
    except OSError as exc:
        raise CliError(f"cannot read evidence: {exc}") from None
    except corpus_mod.RowError as exc:
        raise CliError(f"{settings.args.evidence}: {exc}", 1) from None
    annotated = sorted({u for ev in evidence for u in ev.annotations})
    if settings.args.predictions:
        predictions = _read_predictions(Path(settings.args.predictions))
    elif settings.args.model:
        model = _load_model(settings.args.model)
        cache = settings.cache_dir(required=False)
        store = SnapshotStore(cache) if cache is not None else None
        try:
            scorer = _Scorer(model, settings, store) if annotated else None
        except SchemaError as exc:
            raise CliError(str(exc)) from None
        predictions = {}
        for url in annotated:
            try:
                page, _ = _page_for(url, settings, store, allow_fetch=False)
            except IngestError:
                continue
            _, out = scorer(page)
            predictions[url] = out if model.regression else max(out, key=lambda c: (out[c], c))
    else:
        raise CliError("factcheck needs --model or --predictions")
    try:
        report = corpus_mod.factcheck_report(evidence, predictions)
    except corpus_mod.IncompleteReport as exc:
        print(f"missing predictions for {len(exc.urls)} URLs:", file=sys.stderr)
        for u in exc.urls:
            print(f"missing\t{u}", file=sys.stderr)
        return 1
    _emit(report.to_table(), settings.args.out)
    return 0


# --------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    def common(suppress: bool) -> argparse.ArgumentParser:
        # Subcommand copies must not reset values given before the command name.
        kw = {"default": argparse.SUPPRESS} if suppress else {}
        c = argparse.ArgumentParser(add_help=False)
        c.add_argument("--config", help="INI config file; flags override it", **kw)
        c.add_argument("--seed", type=int, help="random seed (default 0)", **kw)
        c.add_argument("--cache-dir", dest="cache_dir", help="snapshot cache directory", **kw)
        c.add_argument("--quiet", action="store_true", help="only print primary output and errors", **kw)
        return c

    p = argparse.ArgumentParser(prog="webcred", description="Web page credibility features, models and reports.",
                                parents=[common(False)])
    sub = p.add_subparsers(dest="command", required=True, metavar="command")
    sub_common = common(True)

    def add(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[sub_common], description=help_text)

    def tables(sp):
        sp.add_argument("--tables", help="directory with gi.tsv, valence.tsv, opensources.txt, ranks.tsv, cdx.tsv")
        sp.add_argument("--disable", action="append", choices=sorted(TABLE_FILES),
                        help="run without a table (repeatable); its features take fallback values")
        sp.add_argument("--bundled-lexicons", dest="bundled_lexicons", action="store_const", const=True,
                        help="use the packaged GI and valence sample lexicons")
        sp.add_argument("--live-archive", dest="live_archive", action="store_const", const=True,
                        help="query the live CDX endpoint instead of cdx.tsv")
        sp.add_argument("--today", help="reference date for archive ages (default: newest snapshot time)")

    def learner(sp):
        sp.add_argument("--scheme", help="two_class | three_class | five_class (regression)")
        sp.add_argument("--learner", help=", ".join(sorted(LEARNERS)))
        sp.add_argument("--param", action="append", help="learner hyperparameter name=value (repeatable)")
        sp.add_argument("--percentile", type=float,
                        help=f"features kept: percentile (grid {','.join(map(str, PERCENTILES))}) or count with --selection-mode k")
        sp.add_argument("--selection-mode", dest="selection_mode", choices=("percentile", "k"))
        sp.add_argument("--aggregation", choices=("mean", "median"), help="multi-rater aggregation")

    sp = add("ingest", "Fetch uncached URLs of a corpus file into the snapshot cache.")
    sp.add_argument("corpus", help="rated corpus (url,rating[,rater_id]) or one URL per line")
    sp.set_defaults(func=cmd_ingest)

    sp = add("extract", "Compute feature vectors for every cached page.")
    tables(sp)
    sp.add_argument("--out", help="features file (JSON lines); default stdout")
    sp.set_defaults(func=cmd_extract)

    sp = add("train", "Fit feature selection and a learner; write a model artifact.")
    sp.add_argument("features")
    sp.add_argument("labels")
    learner(sp)
    sp.add_argument("--out", required=True, help="model artifact path")
    sp.add_argument("--record", help="write a JSON run record here")
    sp.set_defaults(func=cmd_train)

    sp = add("eval", "Cross-validate a learner on a features file.")
    sp.add_argument("features")
    sp.add_argument("labels")
    learner(sp)
    sp.add_argument("--folds", type=int)
    sp.add_argument("--stack-pad", dest="stack_pad", type=int,
                    help="stack out-of-fold tag-classifier probabilities from windows of this length")
    sp.add_argument("--tag-learner", dest="tag_learner", help="learner for the stacked tag model (default nb)")
    sp.add_argument("--out", help="metrics table path; default stdout")
    sp.add_argument("--record", help="write a JSON run record here")
    sp.set_defaults(func=cmd_eval)

    sp = add("sweep", "F1 of tag-window classifiers over a padding grid.")
    sp.add_argument("labels")
    sp.add_argument("--scheme")
    sp.add_argument("--learner", dest="sweep_learner", help="tag-count learner (default nb)")
    sp.add_argument("--param", action="append")
    sp.add_argument("--grid", help="comma-separated window lengths")
    sp.add_argument("--folds", type=int)
    sp.add_argument("--aggregation", choices=("mean", "median"))
    sp.add_argument("--out", help="sweep table path; default stdout")
    sp.add_argument("--plot-data", dest="plot_data", help="two-column numeric file for plotting")
    sp.set_defaults(func=cmd_sweep)

    sp = add("score", "Score one URL (cached, or fetched) with a model artifact.")
    sp.add_argument("model")
    sp.add_argument("url")
    tables(sp)
    sp.add_argument("--no-fetch", dest="no_fetch", action="store_true", help="fail instead of fetching")
    sp.add_argument("--top", type=int, default=5, help="selected features to list")
    sp.set_defaults(func=cmd_score)

    sp = add("factcheck", "Compare model credibility labels with annotated claim evidence.")
    sp.add_argument("evidence", help="claim_id,truth,url[,annotation] file")
    src = sp.add_mutually_exclusive_group()
    src.add_argument("--model", help="model artifact; annotated URLs are scored from the cache")
    src.add_argument("--predictions", help="url,label file instead of a model")
    tables(sp)
    sp.add_argument("--out", help="impact table path; default stdout")
    sp.set_defaults(func=cmd_factcheck)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s: %(message)s", stream=sys.stderr, force=True)
    try:
        settings = Settings(args)
        return args.func(settings)
    except CliError as exc:
        print(f"webcred {args.command}: {exc}", file=sys.stderr)
        return exc.code
    except SchemaError as exc:
        print(f"webcred {args.command}: schema mismatch: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
