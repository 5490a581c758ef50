"""Thread gating: length checks and character n-gram language identification.

Profiles hold add-one-smoothed log probabilities for character n-grams of
orders 1 to 3, extracted inside whitespace-delimited chunks. A text is scored
against a profile by the mean log probability over all extracted n-grams, so
concatenating a text with itself never changes its score.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

PROFILE_ORDERS = (1, 2, 3)

_HEADER_PREFIX = "#lang"


class LanguageFilterError(ValueError):
    """Raised for unusable profiles, training sets, or profile files."""


@dataclass
class LanguageProfile:
    language: str
    # n-gram -> smoothed log probability
    log_probs: dict[str, float]
    # order -> log probability assigned to any unseen n-gram of that order
    unseen_log_probs: dict[int, float]
    # raw training counts; kept for inspection, not serialized
    counts: dict[str, int] = field(default_factory=dict, repr=False)


@dataclass
class FilterDecision:
    thread_id: str
    passed: bool
    reason: str = ""
    language: str = ""
    score: float = 0.0


def extract_ngrams(text: str, orders=PROFILE_ORDERS) -> list[str]:
    """All character n-grams of the given orders within whitespace chunks."""
    grams = []
    for chunk in text.split():
        for n in orders:
            for i in range(len(chunk) - n + 1):
                grams.append(chunk[i:i + n])
    return grams


def train_profiles(labeled_docs: Iterable[tuple[str, str]],
                   ) -> dict[str, LanguageProfile]:
    """Build one profile per language from (language, text) pairs."""
    counters: dict[str, Counter] = {}
    for language, text in labeled_docs:
        if not language or not isinstance(language, str):
            raise LanguageFilterError("training document without a language "
                                      "label")
        counters.setdefault(language, Counter()).update(extract_ngrams(text))
    if not counters:
        raise LanguageFilterError("no training documents")
    profiles = {}
    for language in sorted(counters):
        counter = counters[language]
        if not counter:
            raise LanguageFilterError(
                "no n-grams in training text for language %r" % language)
        totals = {n: 0 for n in PROFILE_ORDERS}
        vocab = {n: 0 for n in PROFILE_ORDERS}
        for gram, count in counter.items():
            totals[len(gram)] += count
            vocab[len(gram)] += 1
        log_probs = {}
        for gram in sorted(counter):
            n = len(gram)
            log_probs[gram] = math.log(
                (counter[gram] + 1) / (totals[n] + vocab[n] + 1))
        unseen = {n: math.log(1.0 / (totals[n] + vocab[n] + 1))
                  for n in PROFILE_ORDERS}
        profiles[language] = LanguageProfile(
            language=language, log_probs=log_probs, unseen_log_probs=unseen,
            counts=dict(counter))
    return profiles


def score_text(text: str, profile: LanguageProfile) -> float:
    """Mean log probability of the text's n-grams under the profile."""
    grams = extract_ngrams(text)
    if not grams:
        raise LanguageFilterError("no scorable text")
    total = 0.0
    for gram in grams:
        log_prob = profile.log_probs.get(gram)
        if log_prob is None:
            log_prob = profile.unseen_log_probs[len(gram)]
        total += log_prob
    return total / len(grams)


def detect_language(text: str,
                    profiles: dict[str, LanguageProfile]) -> tuple[str, float]:
    """Best-scoring language for the text; ties go to the smaller code."""
    if not profiles:
        raise LanguageFilterError("no language profiles")
    best_language = None
    best_score = -math.inf
    for language in sorted(profiles):
        score = score_text(text, profiles[language])
        if score > best_score:
            best_language, best_score = language, score
    return best_language, best_score


def length_filter(thread, min_body_chars: int) -> str:
    """Rejection reason for too-short threads, or "" when acceptable."""
    if not thread.title.strip():
        return "empty_title"
    if len(thread.body) <= min_body_chars:
        return "short_body"
    return ""


def filter_thread(thread, min_body_chars: int, target_language: str,
                  profiles: dict[str, LanguageProfile]) -> FilterDecision:
    """Length gate first, then language gate on title plus body."""
    reason = length_filter(thread, min_body_chars)
    if reason:
        return FilterDecision(thread_id=thread.id, passed=False, reason=reason)
    try:
        language, score = detect_language(thread.title + "\n" + thread.body,
                                          profiles)
    except LanguageFilterError:
        return FilterDecision(thread_id=thread.id, passed=False,
                              reason="language")
    if language != target_language:
        return FilterDecision(thread_id=thread.id, passed=False,
                              reason="language", language=language,
                              score=score)
    return FilterDecision(thread_id=thread.id, passed=True,
                          language=language, score=score)


def _encode_gram(gram: str) -> str:
    return "-".join("%x" % ord(c) for c in gram)


def _decode_gram(encoded: str) -> str:
    return "".join(chr(int(part, 16)) for part in encoded.split("-"))


def save_profiles(profiles: dict[str, LanguageProfile], path: str) -> None:
    """Write profiles as text: a header per language, then n-gram lines.

    Header: "#lang\t<code>\t<unseen_1>\t<unseen_2>\t<unseen_3>".
    N-gram lines: hyphen-joined hex codepoints, a tab, the log probability.
    """
    with open(path, "w", encoding="utf-8") as out:
        for language in sorted(profiles):
            profile = profiles[language]
            unseen = [repr(profile.unseen_log_probs[n]) for n in PROFILE_ORDERS]
            out.write("%s\t%s\t%s\n" % (_HEADER_PREFIX, language,
                                        "\t".join(unseen)))
            for gram in sorted(profile.log_probs):
                out.write("%s\t%r\n" % (_encode_gram(gram),
                                        profile.log_probs[gram]))


def load_profiles(path: str) -> dict[str, LanguageProfile]:
    profiles: dict[str, LanguageProfile] = {}
    current: LanguageProfile | None = None
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            columns = line.split("\t")
            try:
                if columns[0] == _HEADER_PREFIX:
                    if len(columns) != 2 + len(PROFILE_ORDERS):
                        raise ValueError("bad header field count")
                    language = columns[1]
                    if not language or language in profiles:
                        raise ValueError("bad or repeated language %r"
                                         % language)
                    unseen = {n: float(columns[2 + i])
                              for i, n in enumerate(PROFILE_ORDERS)}
                    current = LanguageProfile(language=language, log_probs={},
                                              unseen_log_probs=unseen)
                    profiles[language] = current
                else:
                    if current is None:
                        raise ValueError("n-gram line before any language "
                                         "header")
                    if len(columns) != 2:
                        raise ValueError("bad n-gram field count")
                    current.log_probs[_decode_gram(columns[0])] = \
                        float(columns[1])
            except ValueError as exc:
                raise LanguageFilterError("%s:%d: %s" % (path, line_no, exc)) \
                    from None
    if not profiles:
        raise LanguageFilterError("%s: no profiles found" % path)
    return profiles
