"""Command line interface.

Subcommands cover the corpus flow end to end: filter, preprocess, tokenize,
pipeline (all three plus post-processing), vocab, eval, and stats.

Option precedence is flag, then THAIPREP_* environment variable, then config
file, then built-in default. Exit codes: 0 success, 1 input or configuration
problem, 2 internal error.
"""
from __future__ import annotations

import argparse
import json
import logging
import multiprocessing
import os
import sys
import traceback
from contextlib import ExitStack
from dataclasses import asdict
from importlib import resources
from typing import Iterator

from . import __version__, corpus_io, filters, metrics, normalizer, postproc, tokenizer

logger = logging.getLogger(__name__)

_ENV_PREFIX = "THAIPREP_"

STAGE_VERSIONS = {"filter": 1, "normalize": 1, "tokenize": 1, "postproc": 1}

_BUNDLED_SEED_LANGUAGES = ("en", "th")


class UsageError(ValueError):
    """Bad flags, bad config, or missing required inputs."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError("%s: %s" % (self.prog, message))


def _env(name: str) -> str | None:
    return os.environ.get(_ENV_PREFIX + name.upper())


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise UsageError("cannot interpret %r as a boolean" % raw)


def _effective_config(args) -> corpus_io.PipelineConfig:
    """Config file merged with environment and flag overrides."""
    config_path = getattr(args, "config", None) or _env("config")
    if config_path:
        config = corpus_io.load_config(config_path)
    else:
        config = corpus_io.PipelineConfig()

    for name, cast in (("vocab_size", int), ("min_body_chars", int),
                       ("target_language", str)):
        value = getattr(args, name, None)
        if value is None:
            raw = _env(name)
            value = cast(raw) if raw is not None else None
        if value is not None:
            setattr(config, name, value)

    include_title = getattr(args, "include_title", None)
    if include_title is None:
        raw = _env("include_title")
        include_title = _parse_bool(raw) if raw is not None else None
    if include_title is not None:
        config.include_title = include_title

    lexicon = getattr(args, "lexicon", None)
    if not lexicon:
        raw = _env("lexicon")
        lexicon = raw.split(os.pathsep) if raw else None
    if lexicon:
        config.lexicon_paths = list(lexicon)

    misspell = getattr(args, "misspell_map", None) or _env("misspell_map")
    if misspell:
        config.misspelling_map_path = misspell

    profiles = getattr(args, "lang_profiles", None)
    if not profiles:
        raw = _env("lang_profiles")
        profiles = raw.split(os.pathsep) if raw else None
    if profiles:
        config.language_profile_paths = list(profiles)

    config.validate()
    return config


def _resolve_jobs(args) -> int:
    jobs = getattr(args, "jobs", None)
    if jobs is None:
        raw = _env("jobs")
        jobs = int(raw) if raw is not None else 1
    if jobs < 1:
        raise UsageError("--jobs must be at least 1")
    return jobs


def _load_language_profiles(config: corpus_io.PipelineConfig,
                            ) -> dict[str, filters.LanguageProfile]:
    """Persisted profiles when configured, else profiles trained from seed
    text files (the bundled pair by default)."""
    if config.language_profile_paths:
        profiles: dict[str, filters.LanguageProfile] = {}
        for path in config.language_profile_paths:
            for language, profile in filters.load_profiles(path).items():
                if language in profiles:
                    raise ValueError("language %r defined in more than one "
                                     "profile file" % language)
                profiles[language] = profile
        return profiles
    labeled: list[tuple[str, str]] = []
    if config.language_seed_paths:
        for language in sorted(config.language_seed_paths):
            path = config.language_seed_paths[language]
            with open(path, encoding="utf-8") as handle:
                labeled.extend((language, line.strip())
                               for line in handle if line.strip())
    else:
        data = resources.files("thaiprep") / "data"
        for language in _BUNDLED_SEED_LANGUAGES:
            text = (data / ("lang_seed_%s.txt" % language)).read_text(
                encoding="utf-8")
            labeled.extend((language, line)
                           for line in text.splitlines() if line.strip())
    return filters.train_profiles(labeled)


# ---------------------------------------------------------------------------
# Worker processes. State is installed once per worker by an initializer so
# tries and profiles are built once, not per document.

_WORKER: dict = {}


def _init_normalize(config, keep_rewrites):
    _WORKER["config"] = config
    _WORKER["keep_rewrites"] = keep_rewrites


def _normalize_job(item):
    thread_id, title, body = item
    doc = normalizer.normalize_document(
        corpus_io.RawThread(id=thread_id, title=title, body=body),
        _WORKER["config"], keep_rewrites=_WORKER["keep_rewrites"])
    rewrites = None
    if _WORKER["keep_rewrites"]:
        rewrites = [{"rule": r.rule, "start": r.span[0], "end": r.span[1],
                     "replacement": r.replacement} for r in doc.rewrites]
    return thread_id, doc.text, rewrites


def _count_triggers(config) -> tuple[str, ...]:
    return (config.special_tokens["crep"], config.special_tokens["wrep"])


def _init_tokenize(config, want_labels):
    _WORKER["config"] = config
    _WORKER["want_labels"] = want_labels
    _WORKER["trie"] = tokenizer.load_lexicon(
        config.lexicon_paths,
        special_surfaces=config.special_tokens.values())


def _tokenize_job(item):
    doc_id, text = item
    stream = tokenizer.tokenize(text, _WORKER["trie"],
                                count_after=_count_triggers(_WORKER["config"]))
    labels = metrics.boundaries_from_tokens(stream) \
        if _WORKER["want_labels"] else None
    return doc_id, text, stream.surfaces(), labels


def _init_pipeline(config, keep_rewrites, want_labels):
    _init_normalize(config, keep_rewrites)
    _init_tokenize(config, want_labels)
    if config.misspelling_map_path:
        _WORKER["mapping"] = postproc.load_misspelling_map(
            config.misspelling_map_path)
    else:
        _WORKER["mapping"] = postproc.MisspellingMap({})


def _pipeline_job(item):
    thread_id, text, rewrites = _normalize_job(item)
    stream = tokenizer.tokenize(text, _WORKER["trie"],
                                count_after=_count_triggers(_WORKER["config"]))
    stream = postproc.ungroup_emoji(stream)
    stream = postproc.lowercase_english(stream)
    stream = postproc.correct_spelling(stream, _WORKER["mapping"])
    labels = metrics.boundaries_from_tokens(stream) \
        if _WORKER["want_labels"] else None
    return thread_id, stream.surfaces(), labels, rewrites


def _parallel(jobs, initializer, initargs, func, items) -> Iterator:
    """Order-preserving map, inline when jobs is 1."""
    if jobs <= 1:
        initializer(*initargs)
        for item in items:
            yield func(item)
        return
    try:
        context = multiprocessing.get_context("fork")
    except ValueError:
        context = multiprocessing.get_context()
    with context.Pool(processes=jobs, initializer=initializer,
                      initargs=initargs) as pool:
        yield from pool.imap(func, items, chunksize=16)


# ---------------------------------------------------------------------------
# Manifests and shared readers.


def _write_manifest(path, command, config, input_paths, read, emitted,
                    filtered=None, malformed=0, reconcile=True,
                    extra_counts=None) -> None:
    filtered = dict(filtered or {})
    if reconcile and read != emitted + sum(filtered.values()):
        raise RuntimeError(
            "count reconciliation failed: read=%d emitted=%d filtered=%r"
            % (read, emitted, filtered))
    counts = {"read": read, "malformed_lines": malformed,
              "filtered": filtered, "emitted": emitted}
    counts.update(extra_counts or {})
    payload = {
        "tool": "thaiprep",
        "version": __version__,
        "command": command,
        "config_sha256": corpus_io.config_digest(config),
        "stage_versions": STAGE_VERSIONS,
        "inputs": {p: corpus_io.file_sha256(p) for p in input_paths},
        "counts": counts,
    }
    with open(path, "w", encoding="utf-8") as out:
        json.dump(payload, out, ensure_ascii=False, indent=2, sort_keys=True)
        out.write("\n")


def _iter_id_text(path, errors) -> Iterator[tuple[str, str]]:
    """Read preprocessed JSONL records {"id": ..., "text": ...}."""
    seen: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                if not isinstance(obj, dict):
                    raise ValueError("record is not an object")
                doc_id, text = obj.get("id"), obj.get("text")
                if not isinstance(doc_id, str) or not doc_id:
                    raise ValueError("id must be a non-empty string")
                if not isinstance(text, str):
                    raise ValueError("text must be a string")
                if doc_id in seen:
                    raise ValueError("duplicate id %r" % doc_id)
            except ValueError as exc:
                errors.append(corpus_io.RecordError(line=line_no,
                                                    message=str(exc)))
                logger.warning("%s:%d: %s", path, line_no, exc)
                continue
            seen.add(doc_id)
            yield doc_id, text


def _labels_from_surface_walk(text: str, surfaces: list[str]) -> str:
    """Boundary labels recovered from in-order surfaces over their text."""
    labels = ["0"] * len(text)
    cursor = 0
    for surface in surfaces:
        while cursor < len(text) and text[cursor].isspace():
            cursor += 1
        if text[cursor:cursor + len(surface)] != surface:
            raise metrics.MetricError(
                "token %r does not match its text at position %d"
                % (surface, cursor))
        labels[cursor] = "1"
        cursor += len(surface)
    if text[cursor:].strip():
        raise metrics.MetricError("unmatched text after the last token")
    for i, char in enumerate(text):
        if char.isspace():
            labels[i] = "1"
    return "".join(labels)


def _labels_from_token_jsonl(path: str) -> dict[str, str]:
    """Per-document labels from {"id", "text", "tokens"} JSONL records."""
    labeled: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except ValueError as exc:
                raise metrics.MetricError("%s:%d: %s" % (path, line_no, exc)) \
                    from None
            if (not isinstance(obj, dict)
                    or not isinstance(obj.get("id"), str)
                    or not isinstance(obj.get("text"), str)
                    or not isinstance(obj.get("tokens"), list)):
                raise metrics.MetricError(
                    "%s:%d: expected an object with id, text, and tokens"
                    % (path, line_no))
            if obj["id"] in labeled:
                raise metrics.MetricError("%s:%d: duplicate id %r"
                                          % (path, line_no, obj["id"]))
            labeled[obj["id"]] = _labels_from_surface_walk(
                obj["text"], [str(t) for t in obj["tokens"]])
    return labeled


# ---------------------------------------------------------------------------
# Subcommands.


def cmd_filter(args) -> int:
    config = _effective_config(args)
    profiles = _load_language_profiles(config)
    errors: list[corpus_io.RecordError] = []
    read = emitted = 0
    filtered: dict[str, int] = {}
    with open(args.output, "w", encoding="utf-8") as out:
        for thread in corpus_io.read_threads(args.input, fmt=args.format,
                                             errors=errors):
            read += 1
            decision = filters.filter_thread(
                thread, config.min_body_chars, config.target_language,
                profiles)
            if not decision.passed:
                filtered[decision.reason] = filtered.get(decision.reason, 0) + 1
                continue
            record = {"id": thread.id, "title": thread.title,
                      "body": thread.body}
            if thread.meta:
                record["meta"] = thread.meta
            out.write(json.dumps(record, ensure_ascii=False))
            out.write("\n")
            emitted += 1
    if args.manifest:
        _write_manifest(args.manifest, "filter", config, [args.input],
                        read=read, emitted=emitted, filtered=filtered,
                        malformed=len(errors))
    print("filter: read=%d malformed=%d filtered=%d emitted=%d"
          % (read, len(errors), sum(filtered.values()), emitted),
          file=sys.stderr)
    return 0


def cmd_preprocess(args) -> int:
    config = _effective_config(args)
    jobs = _resolve_jobs(args)
    keep = args.audit_out is not None
    errors: list[corpus_io.RecordError] = []
    counts = {"read": 0}

    def items():
        for thread in corpus_io.read_threads(args.input, fmt=args.format,
                                             errors=errors):
            counts["read"] += 1
            yield thread.id, thread.title, thread.body

    emitted = 0
    with ExitStack() as stack:
        out = stack.enter_context(open(args.output, "w", encoding="utf-8"))
        audit = stack.enter_context(open(args.audit_out, "w",
                                         encoding="utf-8")) if keep else None
        results = _parallel(jobs, _init_normalize, (config, keep),
                            _normalize_job, items())
        for doc_id, text, rewrites in results:
            out.write(json.dumps({"id": doc_id, "text": text},
                                 ensure_ascii=False))
            out.write("\n")
            if audit is not None:
                audit.write(json.dumps({"id": doc_id, "rewrites": rewrites},
                                       ensure_ascii=False))
                audit.write("\n")
            emitted += 1
    if args.manifest:
        _write_manifest(args.manifest, "preprocess", config, [args.input],
                        read=counts["read"], emitted=emitted,
                        malformed=len(errors))
    print("preprocess: read=%d malformed=%d emitted=%d"
          % (counts["read"], len(errors), emitted), file=sys.stderr)
    return 0


def cmd_tokenize(args) -> int:
    config = _effective_config(args)
    if not config.lexicon_paths:
        raise UsageError("no lexicon files configured; pass --lexicon or set "
                         "lexicon_paths in the config")
    jobs = _resolve_jobs(args)
    want_labels = args.labels_out is not None
    errors: list[corpus_io.RecordError] = []
    counts = {"read": 0}

    def items():
        for doc_id, text in _iter_id_text(args.input, errors):
            counts["read"] += 1
            yield doc_id, text

    emitted = tokens = 0
    with ExitStack() as stack:
        out = stack.enter_context(open(args.output, "w", encoding="utf-8"))
        labels_out = stack.enter_context(
            open(args.labels_out, "w", encoding="utf-8")) if want_labels \
            else None
        results = _parallel(jobs, _init_tokenize, (config, want_labels),
                            _tokenize_job, items())
        for doc_id, text, surfaces, labels in results:
            if args.output_format == "jsonl":
                out.write(json.dumps({"id": doc_id, "text": text,
                                      "tokens": surfaces},
                                     ensure_ascii=False))
            else:
                out.write(" ".join(surfaces))
            out.write("\n")
            if labels_out is not None:
                labels_out.write("%s\t%s\n" % (doc_id, labels))
            emitted += 1
            tokens += len(surfaces)
    if args.manifest:
        _write_manifest(args.manifest, "tokenize", config,
                        [args.input] + list(config.lexicon_paths),
                        read=counts["read"], emitted=emitted,
                        malformed=len(errors), extra_counts={"tokens": tokens})
    print("tokenize: read=%d malformed=%d emitted=%d tokens=%d"
          % (counts["read"], len(errors), emitted, tokens), file=sys.stderr)
    return 0


def cmd_pipeline(args) -> int:
    config = _effective_config(args)
    if not config.lexicon_paths:
        raise UsageError("no lexicon files configured; pass --lexicon or set "
                         "lexicon_paths in the config")
    profiles = _load_language_profiles(config)
    jobs = _resolve_jobs(args)
    keep = args.audit_out is not None
    want_labels = args.labels_out is not None
    errors: list[corpus_io.RecordError] = []
    counts = {"read": 0}
    filtered: dict[str, int] = {}

    def items():
        for thread in corpus_io.read_threads(args.input, fmt=args.format,
                                             errors=errors):
            counts["read"] += 1
            decision = filters.filter_thread(
                thread, config.min_body_chars, config.target_language,
                profiles)
            if not decision.passed:
                filtered[decision.reason] = filtered.get(decision.reason, 0) + 1
                continue
            yield thread.id, thread.title, thread.body

    emitted = tokens = 0
    vocab_docs: list[list[str]] | None = [] if args.vocab_out else None
    with ExitStack() as stack:
        out = stack.enter_context(open(args.output, "w", encoding="utf-8"))
        labels_out = stack.enter_context(
            open(args.labels_out, "w", encoding="utf-8")) if want_labels \
            else None
        audit = stack.enter_context(open(args.audit_out, "w",
                                         encoding="utf-8")) if keep else None
        results = _parallel(jobs, _init_pipeline, (config, keep, want_labels),
                            _pipeline_job, items())
        for doc_id, surfaces, labels, rewrites in results:
            out.write(" ".join(surfaces))
            out.write("\n")
            if labels_out is not None:
                labels_out.write("%s\t%s\n" % (doc_id, labels))
            if audit is not None:
                audit.write(json.dumps({"id": doc_id, "rewrites": rewrites},
                                       ensure_ascii=False))
                audit.write("\n")
            if vocab_docs is not None:
                vocab_docs.append(surfaces)
            emitted += 1
            tokens += len(surfaces)
    if vocab_docs is not None:
        table = postproc.build_vocab(vocab_docs, config.vocab_size)
        postproc.save_vocab(table, args.vocab_out)
    if args.manifest:
        inputs = [args.input] + list(config.lexicon_paths)
        if config.misspelling_map_path:
            inputs.append(config.misspelling_map_path)
        inputs.extend(config.language_profile_paths)
        inputs.extend(config.language_seed_paths[lang]
                      for lang in sorted(config.language_seed_paths))
        _write_manifest(args.manifest, "pipeline", config, inputs,
                        read=counts["read"], emitted=emitted,
                        filtered=filtered, malformed=len(errors),
                        extra_counts={"tokens": tokens})
    print("pipeline: read=%d malformed=%d filtered=%d emitted=%d tokens=%d"
          % (counts["read"], len(errors), sum(filtered.values()), emitted,
             tokens), file=sys.stderr)
    return 0


def cmd_vocab(args) -> int:
    config = _effective_config(args)
    counts = {"read": 0, "tokens": 0}

    def docs():
        for surfaces in corpus_io.read_token_file(args.input):
            counts["read"] += 1
            counts["tokens"] += len(surfaces)
            yield surfaces

    table = postproc.build_vocab(docs(), config.vocab_size)
    postproc.save_vocab(table, args.output)
    if args.manifest:
        _write_manifest(args.manifest, "vocab", config, [args.input],
                        read=counts["read"], emitted=len(table),
                        reconcile=False,
                        extra_counts={"tokens": counts["tokens"]})
    print("vocab: documents=%d tokens=%d types=%d"
          % (counts["read"], counts["tokens"], len(table)), file=sys.stderr)
    return 0


def cmd_eval(args) -> int:
    gold = metrics.read_labels(args.gold)
    if args.predicted_format == "labels":
        predicted = metrics.read_labels(args.predicted)
    else:
        predicted = _labels_from_token_jsonl(args.predicted)
    pairs = []
    for _, pred, gold_labels in metrics.iter_label_pairs(predicted, gold):
        if not pred and not gold_labels:
            continue
        pairs.append((pred, gold_labels))
    score = metrics.aggregate_boundary_score(pairs)
    agree = total = 0
    for pred, gold_labels in pairs:
        agree += sum(1 for p, g in zip(pred, gold_labels) if p == g)
        total += len(gold_labels)
    payload = {
        "documents": len(pairs),
        "true_positives": score.true_positives,
        "false_positives": score.false_positives,
        "false_negatives": score.false_negatives,
        "precision": score.precision,
        "recall": score.recall,
        "f1": score.f1,
        "accuracy": agree / total,
    }
    _emit_json(payload, args.output)
    return 0


def cmd_stats(args) -> int:
    stats = metrics.corpus_stats(corpus_io.read_token_file(args.input))
    _emit_json(asdict(stats), args.output)
    return 0


def _emit_json(payload: dict, path: str | None) -> None:
    rendered = json.dumps(payload, ensure_ascii=False, indent=2,
                          sort_keys=True)
    if path:
        with open(path, "w", encoding="utf-8") as out:
            out.write(rendered)
            out.write("\n")
    else:
        print(rendered)


# ---------------------------------------------------------------------------
# Parser.


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="thaiprep",
        description="Prepare Thai discussion-forum text for language model "
                    "training: filter, normalize, segment, and evaluate.")
    parser.add_argument("--version", action="version",
                        version="thaiprep " + __version__)
    sub = parser.add_subparsers(dest="command", metavar="command",
                                required=True)

    def common(p, fmt=False, jobs=False):
        p.add_argument("--config", help="YAML or JSON config file")
        p.add_argument("--manifest",
                       help="write a run manifest (JSON) to this path")
        if fmt:
            p.add_argument("--format", choices=corpus_io.READ_FORMATS,
                           default="jsonl", help="input record format")
        if jobs:
            p.add_argument("--jobs", type=int,
                           help="worker process count (default 1)")

    p = sub.add_parser("filter", help="drop short and non-target-language "
                                      "threads")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True, help="surviving threads, JSONL")
    p.add_argument("--min-body-chars", type=int, dest="min_body_chars")
    p.add_argument("--target-language", dest="target_language")
    p.add_argument("--lang-profiles", action="append", dest="lang_profiles",
                   help="language profile file (repeatable)")
    common(p, fmt=True)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("preprocess", help="normalize thread text")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True,
                   help="JSONL of {id, text} records")
    p.add_argument("--audit-out", dest="audit_out",
                   help="JSONL of per-document rewrite records")
    p.add_argument("--include-title", dest="include_title",
                   action=argparse.BooleanOptionalAction)
    common(p, fmt=True, jobs=True)
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("tokenize", help="segment preprocessed text")
    p.add_argument("--input", required=True,
                   help="JSONL of {id, text} records")
    p.add_argument("--output", required=True)
    p.add_argument("--output-format", choices=("text", "jsonl"),
                   default="text", dest="output_format",
                   help="text: one space-joined line per document; "
                        "jsonl: {id, text, tokens} records")
    p.add_argument("--lexicon", action="append",
                   help="lexicon word list (repeatable)")
    p.add_argument("--labels-out", dest="labels_out",
                   help="per-document boundary labels, TSV")
    common(p, jobs=True)
    p.set_defaults(func=cmd_tokenize)

    p = sub.add_parser("pipeline", help="filter, normalize, segment, and "
                                        "post-process in one pass")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True,
                   help="one space-joined token line per document")
    p.add_argument("--lexicon", action="append",
                   help="lexicon word list (repeatable)")
    p.add_argument("--misspell-map", dest="misspell_map",
                   help="two-column TSV of misspelling corrections")
    p.add_argument("--vocab-out", dest="vocab_out",
                   help="write the corpus vocabulary here")
    p.add_argument("--vocab-size", type=int, dest="vocab_size")
    p.add_argument("--labels-out", dest="labels_out",
                   help="per-document boundary labels, TSV")
    p.add_argument("--audit-out", dest="audit_out",
                   help="JSONL of per-document rewrite records")
    p.add_argument("--lang-profiles", action="append", dest="lang_profiles",
                   help="language profile file (repeatable)")
    p.add_argument("--min-body-chars", type=int, dest="min_body_chars")
    p.add_argument("--target-language", dest="target_language")
    p.add_argument("--include-title", dest="include_title",
                   action=argparse.BooleanOptionalAction)
    common(p, fmt=True, jobs=True)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("vocab", help="build a vocabulary from a token file")
    p.add_argument("--input", required=True, help="token file")
    p.add_argument("--output", required=True, help="vocabulary TSV")
    p.add_argument("--vocab-size", type=int, dest="vocab_size")
    common(p)
    p.set_defaults(func=cmd_vocab)

    p = sub.add_parser("eval", help="score predicted boundaries against gold")
    p.add_argument("--predicted", required=True,
                   help="labels TSV or token JSONL")
    p.add_argument("--gold", required=True, help="labels TSV")
    p.add_argument("--predicted-format", choices=("labels", "tokens"),
                   default="labels", dest="predicted_format")
    p.add_argument("--output", help="write the score JSON here "
                                    "(default stdout)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("stats", help="token count statistics for a token "
                                     "file")
    p.add_argument("--input", required=True, help="token file")
    p.add_argument("--output", help="write the stats JSON here "
                                    "(default stdout)")
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print("thaiprep: %s" % exc, file=sys.stderr)
        return 1
    logging.basicConfig(level=logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print("thaiprep: %s" % exc, file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print("thaiprep: %s" % exc, file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
