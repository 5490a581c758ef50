"""Token-stream post-processing and vocabulary construction.

All transforms return a new TokenStream whose text, surfaces, and spans stay
mutually consistent, so a round trip through detokenize keeps working.
"""
from __future__ import annotations

from collections import Counter
from typing import Iterable

from .tokenizer import KIND_EMOJI, KIND_ENGLISH, Token, TokenStream

_ZWJ = 0x200D
_VARIATION_SELECTOR = 0xFE0F
_SKIN_TONE_LO, _SKIN_TONE_HI = 0x1F3FB, 0x1F3FF
_REGIONAL_LO, _REGIONAL_HI = 0x1F1E6, 0x1F1FF


class MisspellingMapError(ValueError):
    """Raised for unusable misspelling map files."""


def _is_modifier(char: str) -> bool:
    code = ord(char)
    return code == _VARIATION_SELECTOR or _SKIN_TONE_LO <= code <= _SKIN_TONE_HI


def _is_regional(char: str) -> bool:
    return _REGIONAL_LO <= ord(char) <= _REGIONAL_HI


def split_emoji_units(surface: str) -> list[tuple[int, int]]:
    """Character spans of the individual emoji inside an emoji run.

    A unit is a base character plus trailing variation selectors and skin
    tone modifiers, a regional-indicator pair (one flag), or several such
    parts glued by zero-width joiners.
    """
    units = []
    i = 0
    length = len(surface)
    while i < length:
        j = i + 1
        if _is_regional(surface[i]) and j < length and _is_regional(surface[j]):
            j += 1
        while j < length and _is_modifier(surface[j]):
            j += 1
        while j < length and ord(surface[j]) == _ZWJ and j + 1 < length:
            j += 2
            while j < length and _is_modifier(surface[j]):
                j += 1
        units.append((i, j))
        i = j
    return units


def ungroup_emoji(stream: TokenStream) -> TokenStream:
    """Split each emoji run token into one token per emoji."""
    tokens = []
    for token in stream.tokens:
        if token.kind != KIND_EMOJI or len(token.surface) <= 1:
            tokens.append(token)
            continue
        units = split_emoji_units(token.surface)
        if len(units) == 1:
            tokens.append(token)
            continue
        base = token.span[0]
        for start, end in units:
            tokens.append(Token(surface=token.surface[start:end],
                                kind=KIND_EMOJI,
                                span=(base + start, base + end)))
    return TokenStream(text=stream.text, tokens=tokens)


def _rebuild(stream: TokenStream, surfaces: list[str]) -> TokenStream:
    """Swap in new surfaces, preserving inter-token gaps and recomputing
    spans (surface lengths may change)."""
    parts = []
    tokens = []
    position = 0
    previous_end = 0
    for token, surface in zip(stream.tokens, surfaces):
        gap = stream.text[previous_end:token.span[0]]
        parts.append(gap)
        position += len(gap)
        tokens.append(Token(surface=surface, kind=token.kind,
                            span=(position, position + len(surface))))
        parts.append(surface)
        position += len(surface)
        previous_end = token.span[1]
    parts.append(stream.text[previous_end:])
    return TokenStream(text="".join(parts), tokens=tokens)


def lowercase_english(stream: TokenStream) -> TokenStream:
    """Lowercase tokens made of ASCII letters."""
    surfaces = []
    changed = False
    for token in stream.tokens:
        if token.kind == KIND_ENGLISH and not token.surface.islower():
            surfaces.append(token.surface.lower())
            changed = True
        else:
            surfaces.append(token.surface)
    if not changed:
        return stream
    return _rebuild(stream, surfaces)


class MisspellingMap:
    """Whole-token replacements loaded from a two-column TSV file."""

    def __init__(self, entries: dict[str, str]):
        self.entries = dict(entries)

    def __len__(self) -> int:
        return len(self.entries)

    def correct(self, surface: str) -> str:
        return self.entries.get(surface, surface)


def load_misspelling_map(path: str) -> MisspellingMap:
    """Read "misspelling<TAB>correction" lines; '#' starts a comment line.

    Self-maps, duplicate sources, chained corrections (a correction that is
    itself a misspelling), and whitespace inside entries are rejected.
    """
    entries: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            columns = line.split("\t")
            if len(columns) != 2 or not columns[0] or not columns[1]:
                raise MisspellingMapError(
                    "%s:%d: expected two non-empty tab-separated columns"
                    % (path, line_no))
            wrong, right = columns
            if any(c.isspace() for c in wrong + right):
                raise MisspellingMapError(
                    "%s:%d: entries must not contain whitespace"
                    % (path, line_no))
            if wrong == right:
                raise MisspellingMapError(
                    "%s:%d: %r maps to itself" % (path, line_no, wrong))
            if wrong in entries:
                raise MisspellingMapError(
                    "%s:%d: duplicate entry for %r" % (path, line_no, wrong))
            entries[wrong] = right
    for wrong, right in entries.items():
        if right in entries:
            raise MisspellingMapError(
                "correction chain: %r -> %r -> %r"
                % (wrong, right, entries[right]))
    return MisspellingMap(entries)


def correct_spelling(stream: TokenStream, mapping: MisspellingMap,
                     ) -> TokenStream:
    """Replace whole tokens that appear in the misspelling map."""
    if not mapping.entries:
        return stream
    surfaces = []
    changed = False
    for token in stream.tokens:
        corrected = mapping.correct(token.surface)
        if corrected != token.surface:
            changed = True
        surfaces.append(corrected)
    if not changed:
        return stream
    return _rebuild(stream, surfaces)


class VocabTable:
    """The most frequent token types; ties go to earlier first appearance."""

    def __init__(self, tokens: list[str], counts: dict[str, int], limit: int):
        self.tokens = list(tokens)
        self.counts = dict(counts)
        self.limit = limit
        self._members = frozenset(self.tokens)

    def __contains__(self, surface: str) -> bool:
        return surface in self._members

    def __len__(self) -> int:
        return len(self.tokens)


def _doc_surfaces(doc) -> list[str]:
    return doc.surfaces() if hasattr(doc, "surfaces") else list(doc)


def build_vocab(streams: Iterable, limit: int) -> VocabTable:
    """Rank token types by count, then by first corpus position; keep the
    top ``limit``."""
    if limit < 1:
        raise ValueError("vocabulary size must be positive")
    counts: Counter = Counter()
    first_position: dict[str, int] = {}
    position = 0
    for doc in streams:
        for surface in _doc_surfaces(doc):
            first_position.setdefault(surface, position)
            position += 1
            counts[surface] += 1
    ranked = sorted(counts, key=lambda s: (-counts[s], first_position[s]))
    ranked = ranked[:limit]
    return VocabTable(tokens=ranked,
                      counts={s: counts[s] for s in ranked},
                      limit=limit)


def save_vocab(vocab: VocabTable, path: str) -> None:
    with open(path, "w", encoding="utf-8") as out:
        for surface in vocab.tokens:
            out.write("%s\t%d\n" % (surface, vocab.counts[surface]))


def load_vocab(path: str) -> VocabTable:
    tokens = []
    counts = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            columns = line.split("\t")
            if len(columns) != 2:
                raise ValueError("%s:%d: expected two tab-separated columns"
                                 % (path, line_no))
            tokens.append(columns[0])
            counts[columns[0]] = int(columns[1])
    return VocabTable(tokens=tokens, counts=counts, limit=len(tokens))


def oov_rate(streams: Iterable, vocab) -> float:
    """Fraction of tokens not present in the vocabulary."""
    if isinstance(vocab, VocabTable):
        members = vocab._members
    else:
        members = frozenset(vocab)
    if not members:
        raise ValueError("empty vocabulary")
    total = 0
    unknown = 0
    for doc in streams:
        for surface in _doc_surfaces(doc):
            total += 1
            if surface not in members:
                unknown += 1
    if total == 0:
        raise ValueError("no tokens to score")
    return unknown / total
