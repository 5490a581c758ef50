"""Thread ingestion, token output, configuration, and deterministic splits.

Threads arrive as JSONL (one object per line with id/title/body and an
optional flat meta map) or three-column TSV. Malformed lines become
RecordError entries with their line numbers; they are never dropped silently.
"""
from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field, fields
from typing import Iterable, Iterator

import yaml

from .normalizer import (
    DEFAULT_REWRITE_CAPS,
    DEFAULT_SPECIAL_TOKENS,
    DEFAULT_STAGE_ORDER,
    validate_rewrite_caps,
    validate_stage_order,
)

logger = logging.getLogger(__name__)

READ_FORMATS = ("jsonl", "tsv")


@dataclass
class RawThread:
    id: str
    title: str
    body: str
    meta: dict[str, str] = field(default_factory=dict)


@dataclass
class RecordError:
    line: int
    message: str


@dataclass
class WriteSummary:
    documents: int
    tokens: int


@dataclass
class CorpusSplit:
    """Thread-count targets; train may be None to take the remainder."""

    valid: int
    test: int
    seed: int = 0
    train: int | None = None


@dataclass
class PipelineConfig:
    lexicon_paths: list[str] = field(default_factory=list)
    misspelling_map_path: str | None = None
    vocab_size: int = 80000
    min_body_chars: int = 100
    target_language: str = "th"
    special_tokens: dict[str, str] = field(
        default_factory=lambda: dict(DEFAULT_SPECIAL_TOKENS))
    rewrite_caps: dict[str, int] = field(
        default_factory=lambda: dict(DEFAULT_REWRITE_CAPS))
    stage_order: list[str] = field(
        default_factory=lambda: list(DEFAULT_STAGE_ORDER))
    include_title: bool = True
    extra_number_patterns: list[str] = field(default_factory=list)
    # language -> one-document-per-line training file for the language filter
    language_seed_paths: dict[str, str] = field(default_factory=dict)
    # persisted profile files; when set they replace seed training
    language_profile_paths: list[str] = field(default_factory=list)

    def validate(self) -> None:
        if not isinstance(self.vocab_size, int) or self.vocab_size < 1:
            raise ValueError("vocab_size must be a positive integer")
        if not isinstance(self.min_body_chars, int) or self.min_body_chars < 0:
            raise ValueError("min_body_chars must be a non-negative integer")
        if not self.target_language or not isinstance(self.target_language, str):
            raise ValueError("target_language must be a non-empty string")
        validate_stage_order(self.stage_order)
        validate_rewrite_caps(self.rewrite_caps)
        for role in DEFAULT_SPECIAL_TOKENS:
            surface = self.special_tokens.get(role)
            if not surface or any(c.isspace() for c in surface):
                raise ValueError(
                    "special token %r must be a non-empty surface without "
                    "whitespace" % role)


def config_from_mapping(data: dict) -> PipelineConfig:
    known = {f.name for f in fields(PipelineConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValueError("unknown config keys: %s" % ", ".join(unknown))
    config = PipelineConfig()
    for key, value in data.items():
        if key in ("special_tokens", "rewrite_caps") and isinstance(value, dict):
            merged = dict(getattr(config, key))
            merged.update(value)
            value = merged
        setattr(config, key, value)
    config.validate()
    return config


def load_config(path: str) -> PipelineConfig:
    """Load a nested key/value (YAML or JSON) config file."""
    with open(path, encoding="utf-8") as handle:
        try:
            data = yaml.safe_load(handle) or {}
        except yaml.YAMLError as exc:
            raise ValueError("%s: %s" % (path, exc)) from None
    if not isinstance(data, dict):
        raise ValueError("%s: config root must be a mapping" % path)
    return config_from_mapping(data)


def config_digest(config: PipelineConfig) -> str:
    canonical = json.dumps(asdict(config), sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def file_sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _thread_from_json(obj) -> RawThread:
    if not isinstance(obj, dict):
        raise ValueError("record is not an object")
    for key in ("id", "title", "body"):
        if key not in obj:
            raise ValueError("missing key %r" % key)
    thread_id = obj["id"]
    if not isinstance(thread_id, str) or not thread_id:
        raise ValueError("id must be a non-empty string")
    title, body = obj["title"], obj["body"]
    if not isinstance(title, str) or not isinstance(body, str):
        raise ValueError("title and body must be strings")
    meta_in = obj.get("meta", {})
    if not isinstance(meta_in, dict):
        raise ValueError("meta must be a mapping")
    meta = {}
    for key, value in meta_in.items():
        if isinstance(value, (dict, list)):
            raise ValueError("meta value for %r is not a scalar" % key)
        meta[str(key)] = "" if value is None else str(value)
    return RawThread(id=thread_id, title=title, body=body, meta=meta)


def read_threads(path: str, fmt: str = "jsonl",
                 errors: list[RecordError] | None = None) -> Iterator[RawThread]:
    """Yield RawThread records in file order.

    Malformed records (bad JSON, wrong column count, missing or duplicate
    ids) are appended to ``errors`` with their line number; when no list is
    given they are logged instead. Errors appear as the stream is consumed.
    """
    if fmt not in READ_FORMATS:
        raise ValueError("unknown input format %r (expected one of %s)"
                         % (fmt, ", ".join(READ_FORMATS)))
    own_errors = errors is None
    if own_errors:
        errors = []

    def report(line_no: int, message: str) -> None:
        errors.append(RecordError(line=line_no, message=message))
        if own_errors:
            logger.warning("%s:%d: %s", path, line_no, message)

    seen_ids: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            try:
                if fmt == "jsonl":
                    thread = _thread_from_json(json.loads(line))
                else:
                    columns = line.split("\t")
                    if len(columns) != 3:
                        raise ValueError("expected 3 tab-separated columns, "
                                         "got %d" % len(columns))
                    if not columns[0]:
                        raise ValueError("id must be a non-empty string")
                    thread = RawThread(id=columns[0], title=columns[1],
                                       body=columns[2])
            except ValueError as exc:  # json decode errors subclass ValueError
                report(line_no, str(exc))
                continue
            if thread.id in seen_ids:
                report(line_no, "duplicate id %r" % thread.id)
                continue
            seen_ids.add(thread.id)
            yield thread


def write_tokens(streams: Iterable, path: str) -> WriteSummary:
    """Write one line per document: space-joined token surfaces.

    Accepts TokenStream objects or plain surface sequences.
    """
    documents = 0
    tokens = 0
    with open(path, "w", encoding="utf-8") as out:
        for doc in streams:
            surfaces = doc.surfaces() if hasattr(doc, "surfaces") else list(doc)
            out.write(" ".join(surfaces))
            out.write("\n")
            documents += 1
            tokens += len(surfaces)
    return WriteSummary(documents=documents, tokens=tokens)


def read_token_file(path: str) -> Iterator[list[str]]:
    """Yield per-document surface lists from a write_tokens file."""
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            yield line.split()


def _split_rank(seed: int, thread_id: str) -> bytes:
    key = ("%d:%s" % (seed, thread_id)).encode("utf-8")
    return hashlib.blake2b(key, digest_size=8).digest()


def split_corpus(ids: Iterable[str], split: CorpusSplit):
    """Partition ids into (train, valid, test) sets.

    Ordering is by a stable hash of (seed, id), so the same inputs always
    produce the same partition. valid and test receive exactly their targets;
    train takes the remainder (a non-None train target must match it).
    """
    id_list = list(ids)
    if len(set(id_list)) != len(id_list):
        raise ValueError("duplicate ids in split input")
    if split.valid < 0 or split.test < 0:
        raise ValueError("split targets must be non-negative")
    if split.valid + split.test > len(id_list):
        raise ValueError(
            "split targets exceed corpus size (%d + %d > %d)"
            % (split.valid, split.test, len(id_list)))
    remainder = len(id_list) - split.valid - split.test
    if split.train is not None and split.train != remainder:
        raise ValueError(
            "train target %d does not match remainder %d"
            % (split.train, remainder))
    ranked = sorted(id_list, key=lambda i: (_split_rank(split.seed, i), i))
    valid = set(ranked[:split.valid])
    test = set(ranked[split.valid:split.valid + split.test])
    train = set(ranked[split.valid + split.test:])
    return train, valid, test
