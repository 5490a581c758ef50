"""Segmentation evaluation and corpus statistics.

Boundary labels are per-character bitstrings: '1' where a token starts,
'1' on every whitespace character (each acts as its own single-character
token), '0' elsewhere. Two segmentations of the same text therefore yield
equal-length label strings that can be compared position by position.
"""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Iterable, Iterator

from .tokenizer import TokenStream


class MetricError(ValueError):
    """Raised for malformed label strings or unusable inputs."""


@dataclass
class BoundaryScore:
    true_positives: int
    false_positives: int
    false_negatives: int
    precision: float
    recall: float
    f1: float


@dataclass
class CorpusStats:
    documents: int
    tokens: int
    mean_tokens: float
    std_tokens: float
    min_tokens: int
    max_tokens: int


def boundaries_from_tokens(stream: TokenStream) -> str:
    """Boundary bitstring for a token stream over its own text."""
    labels = ["0"] * len(stream.text)
    cursor = 0
    for token in stream.tokens:
        start, end = token.span
        if start < cursor or end > len(stream.text) or start >= end:
            raise MetricError("token span (%d, %d) out of order or out of "
                              "range" % (start, end))
        gap = stream.text[cursor:start]
        if gap.strip():
            raise MetricError("non-whitespace text %r not covered by any "
                              "token" % gap.strip())
        if stream.text[start:end] != token.surface:
            raise MetricError("token surface %r does not match text at "
                              "(%d, %d)" % (token.surface, start, end))
        if any(c.isspace() for c in token.surface):
            raise MetricError("token surface %r contains whitespace"
                              % token.surface)
        labels[start] = "1"
        cursor = end
    if stream.text[cursor:].strip():
        raise MetricError("non-whitespace text %r after the last token"
                          % stream.text[cursor:].strip())
    for i, char in enumerate(stream.text):
        if char.isspace():
            labels[i] = "1"
    return "".join(labels)


def _check_labels(labels: str, name: str) -> None:
    if not labels:
        raise MetricError("%s labels are empty" % name)
    if set(labels) - {"0", "1"}:
        raise MetricError("%s labels contain characters other than 0/1"
                          % name)


def boundary_prf(predicted: str, gold: str) -> BoundaryScore:
    """Micro-averaged precision/recall/F1 over boundary positions."""
    _check_labels(predicted, "predicted")
    _check_labels(gold, "gold")
    if len(predicted) != len(gold):
        raise MetricError("label length mismatch: %d vs %d"
                          % (len(predicted), len(gold)))
    tp = fp = fn = 0
    for p, g in zip(predicted, gold):
        if p == "1" and g == "1":
            tp += 1
        elif p == "1":
            fp += 1
        elif g == "1":
            fn += 1
    precision = tp / (tp + fp) if tp + fp else 1.0
    recall = tp / (tp + fn) if tp + fn else 1.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall else 0.0)
    return BoundaryScore(true_positives=tp, false_positives=fp,
                         false_negatives=fn, precision=precision,
                         recall=recall, f1=f1)


def accuracy(predicted: str, gold: str) -> float:
    """Per-position agreement between two equal-length label strings."""
    _check_labels(predicted, "predicted")
    _check_labels(gold, "gold")
    if len(predicted) != len(gold):
        raise MetricError("label length mismatch: %d vs %d"
                          % (len(predicted), len(gold)))
    agree = sum(1 for p, g in zip(predicted, gold) if p == g)
    return agree / len(gold)


def perplexity(mean_nll: float, base: float = math.e) -> float:
    """Perplexity from a mean negative log-likelihood in the given base."""
    if mean_nll < 0:
        raise MetricError("mean negative log-likelihood must be >= 0, got %r"
                          % mean_nll)
    if base <= 0 or base == 1:
        raise MetricError("perplexity base must be positive and not 1")
    return base ** mean_nll


def labels_from_separated(marked: str, separator: str = "|",
                          ) -> tuple[str, str]:
    """Text and labels from a separator-marked segmentation like "ตา|กลม".

    Separators mark token starts and are removed; whitespace stays in the
    text, labeled '1', and restarts the following token.
    """
    chars = []
    labels = []
    at_start = True
    for char in marked:
        if char == separator:
            at_start = True
            continue
        if char.isspace():
            chars.append(char)
            labels.append("1")
            at_start = True
            continue
        chars.append(char)
        labels.append("1" if at_start else "0")
        at_start = False
    return "".join(chars), "".join(labels)


def corpus_stats_from_counts(token_counts: list[int]) -> CorpusStats:
    if not token_counts:
        return CorpusStats(documents=0, tokens=0, mean_tokens=0.0,
                           std_tokens=0.0, min_tokens=0, max_tokens=0)
    return CorpusStats(
        documents=len(token_counts),
        tokens=sum(token_counts),
        mean_tokens=statistics.fmean(token_counts),
        std_tokens=statistics.pstdev(token_counts),
        min_tokens=min(token_counts),
        max_tokens=max(token_counts))


def corpus_stats(streams: Iterable) -> CorpusStats:
    """Per-document token count statistics (population deviation)."""
    counts = []
    for doc in streams:
        surfaces = doc.surfaces() if hasattr(doc, "surfaces") else list(doc)
        counts.append(len(surfaces))
    return corpus_stats_from_counts(counts)


def write_labels(labeled: Iterable[tuple[str, str]], path: str) -> None:
    """Write "<doc-id><TAB><bitstring>" lines."""
    with open(path, "w", encoding="utf-8") as out:
        for doc_id, labels in labeled:
            out.write("%s\t%s\n" % (doc_id, labels))


def read_labels(path: str) -> dict[str, str]:
    """Read "<doc-id><TAB><bitstring>" lines into an ordered mapping."""
    labeled: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            columns = line.split("\t")
            if len(columns) != 2:
                raise MetricError("%s:%d: expected two tab-separated columns"
                                  % (path, line_no))
            doc_id, labels = columns
            if doc_id in labeled:
                raise MetricError("%s:%d: duplicate document id %r"
                                  % (path, line_no, doc_id))
            if set(labels) - {"0", "1"}:
                raise MetricError("%s:%d: labels contain characters other "
                                  "than 0/1" % (path, line_no))
            labeled[doc_id] = labels
    return labeled


def iter_label_pairs(predicted: dict[str, str], gold: dict[str, str],
                     ) -> Iterator[tuple[str, str, str]]:
    """Pair up label strings by document id; ids must match exactly."""
    if set(predicted) != set(gold):
        missing = sorted(set(gold) - set(predicted))
        extra = sorted(set(predicted) - set(gold))
        raise MetricError("document ids differ (missing: %s; extra: %s)"
                          % (missing[:5], extra[:5]))
    for doc_id in gold:
        yield doc_id, predicted[doc_id], gold[doc_id]


def aggregate_boundary_score(pairs: Iterable[tuple[str, str]],
                             ) -> BoundaryScore:
    """Micro-average boundary P/R/F1 over many (predicted, gold) pairs."""
    tp = fp = fn = 0
    seen = False
    for predicted, gold in pairs:
        score = boundary_prf(predicted, gold)
        tp += score.true_positives
        fp += score.false_positives
        fn += score.false_negatives
        seen = True
    if not seen:
        raise MetricError("no label pairs to score")
    precision = tp / (tp + fp) if tp + fp else 1.0
    recall = tp / (tp + fn) if tp + fn else 1.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall else 0.0)
    return BoundaryScore(true_positives=tp, false_positives=fp,
                         false_negatives=fn, precision=precision,
                         recall=recall, f1=f1)
