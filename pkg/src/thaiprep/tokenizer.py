"""Character clustering and dictionary segmentation for Thai text.

Clustering applies a data-driven pair-binding rule table (``data/
tcc_rules.txt``) that keeps Thai combining material attached to its base
consonant, so no downstream token boundary can split a perceived character.
Segmentation is a dynamic program over cluster boundaries that minimizes the
piece count, where a piece is a dictionary word, a maximal non-Thai run, or a
single out-of-dictionary cluster; adjacent out-of-dictionary pieces merge
into one emitted token. Ties prefer the longest earliest piece, then
dictionary pieces over unknown ones.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .normalizer import DEFAULT_SPECIAL_TOKENS, normalize_char_order

logger = logging.getLogger(__name__)

KIND_WORD = "word"
KIND_SPECIAL = "special"
KIND_COUNT = "count"
KIND_EMOJI = "emoji"
KIND_ENGLISH = "english"
KIND_UNKNOWN = "unknown"

DEFAULT_COUNT_TRIGGERS = (
    DEFAULT_SPECIAL_TOKENS["crep"],
    DEFAULT_SPECIAL_TOKENS["wrep"],
)

# Thai letters, dependent vowels, tones, and signs; Thai digits and the few
# trailing symbols are deliberately outside so they behave like other
# non-Thai material (digit runs, standalone signs).
_THAI_LO, _THAI_HI = 0x0E01, 0x0E4E

EMOJI_RANGES = (
    (0x200D, 0x200D),  # zero-width joiner inside sequences
    (0x2600, 0x26FF),
    (0x2700, 0x27BF),
    (0x2B50, 0x2B55),
    (0xFE0F, 0xFE0F),  # variation selector-16
    (0x1F1E6, 0x1F1FF),  # regional indicators
    (0x1F300, 0x1F5FF),
    (0x1F600, 0x1F64F),
    (0x1F680, 0x1F6FF),
    (0x1F900, 0x1F9FF),
    (0x1FA70, 0x1FAFF),
)


def is_emoji_char(c: str) -> bool:
    cp = ord(c)
    for lo, hi in EMOJI_RANGES:
        if lo <= cp <= hi:
            return True
    return False


def is_emoji_token(surface: str) -> bool:
    return bool(surface) and all(is_emoji_char(c) for c in surface)


class TokenStreamError(ValueError):
    """Token spans are inconsistent with the stream text."""


class LexiconError(ValueError):
    """Bad lexicon input (empty entry, unreadable file)."""


@dataclass
class CharacterCluster:
    surface: str
    span: tuple[int, int]


@dataclass
class Token:
    surface: str
    kind: str
    span: tuple[int, int]


@dataclass
class TokenStream:
    text: str
    tokens: list[Token] = field(default_factory=list)

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]


class LexiconTrie:
    """Character trie over word surfaces; entries are stored as inserted."""

    __slots__ = ("root", "_size", "special_surfaces")

    _END = "\x00"  # terminal marker; no real surface contains NUL

    def __init__(self):
        self.root: dict = {}
        self._size = 0
        self.special_surfaces: frozenset[str] = frozenset()

    def insert(self, word: str) -> bool:
        """Add a surface; returns False when it was already present."""
        if not word:
            raise LexiconError("empty lexicon entry")
        node = self.root
        for ch in word:
            node = node.setdefault(ch, {})
        if self._END in node:
            return False
        node[self._END] = True
        self._size += 1
        return True

    def __contains__(self, word: str) -> bool:
        node = self._walk(word)
        return node is not None and self._END in node

    def has_prefix(self, prefix: str) -> bool:
        return self._walk(prefix) is not None

    def _walk(self, s: str):
        node = self.root
        for ch in s:
            node = node.get(ch)
            if node is None:
                return None
        return node

    def __len__(self) -> int:
        return self._size


def load_lexicon(paths, special_surfaces=None) -> LexiconTrie:
    """Build a trie from one-surface-per-line files plus special surfaces.

    Lines starting with '#' are comments. Empty lines are skipped with a
    warning, as are entries containing whitespace (they could never match a
    token). Entries are canonicalized with normalize_char_order before
    insertion; duplicates across files collapse.
    """
    if special_surfaces is None:
        special_surfaces = tuple(DEFAULT_SPECIAL_TOKENS.values())
    trie = LexiconTrie()
    for path in paths:
        with open(path, encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                entry = line.strip()
                if not entry:
                    logger.warning("%s:%d: empty lexicon line skipped",
                                   path, line_no)
                    continue
                if entry.startswith("#"):
                    continue
                if any(c.isspace() for c in entry):
                    logger.warning("%s:%d: entry with whitespace skipped",
                                   path, line_no)
                    continue
                trie.insert(normalize_char_order(entry))
    for surface in special_surfaces:
        trie.insert(surface)
    trie.special_surfaces = frozenset(special_surfaces)
    return trie


# ---------------------------------------------------------------------------
# Cluster rules.

def _parse_char_spec(spec: str) -> list[str]:
    if spec.startswith("U+"):
        if ".." in spec:
            lo, hi = spec.split("..")
            return [chr(cp) for cp in range(int(lo[2:], 16), int(hi[2:], 16) + 1)]
        return [chr(int(spec[2:], 16))]
    return list(spec)


def _parse_rules(text: str) -> tuple[dict[str, str], frozenset[tuple[str, str]]]:
    char_class: dict[str, str] = {}
    binds: set[tuple[str, str]] = set()
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "class" and len(parts) >= 3:
            for spec in parts[2:]:
                for c in _parse_char_spec(spec):
                    char_class[c] = parts[1]
        elif parts[0] == "bind" and len(parts) == 3:
            binds.add((parts[1], parts[2]))
        else:
            raise ValueError("tcc rules line %d: cannot parse %r" % (line_no, line))
    return char_class, frozenset(binds)


@lru_cache(maxsize=4)
def _load_rules(path: str | None = None):
    if path is None:
        text = (
            resources.files("thaiprep").joinpath("data/tcc_rules.txt")
            .read_text(encoding="utf-8")
        )
    else:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    return _parse_rules(text)


def cluster_tcc(text: str, rules_path: str | None = None) -> list[CharacterCluster]:
    """Partition ``text`` into perceived character clusters.

    Every character lands in exactly one cluster and cluster concatenation
    reproduces the input. Expects char-order-normalized text; unlisted
    characters (punctuation, emoji, whitespace) stand alone.
    """
    if not text:
        return []
    char_class, binds = _load_rules(rules_path)
    get_class = char_class.get
    clusters = []
    start = 0
    prev_class = get_class(text[0])
    for i in range(1, len(text)):
        cls = get_class(text[i])
        if (prev_class, cls) not in binds:
            clusters.append(CharacterCluster(text[start:i], (start, i)))
            start = i
        prev_class = cls
    clusters.append(CharacterCluster(text[start:], (start, len(text))))
    return clusters


# ---------------------------------------------------------------------------
# Segmentation.

def _is_thai(c: str) -> bool:
    return _THAI_LO <= ord(c) <= _THAI_HI


def _classify_run(surface: str) -> str:
    if is_emoji_token(surface):
        return KIND_EMOJI
    if surface.isascii() and surface.isalpha():
        return KIND_ENGLISH
    return KIND_UNKNOWN


def _segment(clusters: list[CharacterCluster], trie: LexiconTrie,
             tokens: list[Token], text: str) -> None:
    """Tokenize one whitespace-free cluster run, appending to ``tokens``."""
    n = len(clusters)
    surfaces = [c.surface for c in clusters]
    starts = [c.span[0] for c in clusters]
    ends = [c.span[1] for c in clusters]
    thai = [_is_thai(s[0]) for s in surfaces]

    # runend[i]: exclusive end of the maximal non-Thai cluster run from i
    runend = [0] * n
    end = n
    for i in range(n - 1, -1, -1):
        if thai[i]:
            end = i
            runend[i] = i
        else:
            runend[i] = end

    root = trie.root
    terminal = LexiconTrie._END
    INF = n + 2
    counts = [0] * (n + 1)
    choices: list[tuple] = [()] * (n + 1)

    for i in range(n - 1, -1, -1):
        best_total = INF
        best_len = -1
        best_rank = 2
        best_j = -1
        best_typ = ""
        # dictionary words spanning whole clusters
        node = root
        k = i
        while k < n:
            ok = True
            for ch in surfaces[k]:
                node = node.get(ch)
                if node is None:
                    ok = False
                    break
            if not ok:
                break
            k += 1
            if terminal in node:
                total = counts[k] + 1
                length = ends[k - 1] - starts[i]
                if (total < best_total
                        or (total == best_total
                            and (-length, 0) < (-best_len, best_rank))):
                    best_total, best_len, best_rank = total, length, 0
                    best_j, best_typ = k, "word"
        # maximal non-Thai run
        if runend[i] > i:
            k = runend[i]
            total = counts[k] + 1
            length = ends[k - 1] - starts[i]
            if (total < best_total
                    or (total == best_total
                        and (-length, 0) < (-best_len, best_rank))):
                best_total, best_len, best_rank = total, length, 0
                best_j, best_typ = k, "run"
        # single out-of-dictionary cluster
        total = counts[i + 1] + 1
        length = ends[i] - starts[i]
        if (total < best_total
                or (total == best_total
                    and (-length, 1) < (-best_len, best_rank))):
            best_total, best_len, best_rank = total, length, 1
            best_j, best_typ = i + 1, "atom"
        counts[i] = best_total
        choices[i] = (best_j, best_typ)

    specials = trie.special_surfaces
    i = 0
    pending_atom_start = -1  # cluster index where the current atom run began
    while i < n:
        j, typ = choices[i]
        if typ == "atom":
            if pending_atom_start < 0:
                pending_atom_start = i
            i = j
            continue
        if pending_atom_start >= 0:
            tokens.append(Token(
                text[starts[pending_atom_start]:ends[i - 1]],
                KIND_UNKNOWN,
                (starts[pending_atom_start], ends[i - 1]),
            ))
            pending_atom_start = -1
        surface = text[starts[i]:ends[j - 1]]
        if surface in specials:
            kind = KIND_SPECIAL
        elif typ == "word":
            kind = KIND_WORD
        else:
            kind = _classify_run(surface)
        tokens.append(Token(surface, kind, (starts[i], ends[j - 1])))
        i = j
    if pending_atom_start >= 0:
        tokens.append(Token(
            text[starts[pending_atom_start]:ends[n - 1]],
            KIND_UNKNOWN,
            (starts[pending_atom_start], ends[n - 1]),
        ))


def tokenize(text: str, trie: LexiconTrie,
             count_after=DEFAULT_COUNT_TRIGGERS) -> TokenStream:
    """Segment ``text`` into a TokenStream over cluster boundaries.

    Whitespace separates segments and is recorded only through token spans;
    a digit-only token directly after a repetition surface is kind ``count``.
    """
    clusters = cluster_tcc(text)
    tokens: list[Token] = []
    segment: list[CharacterCluster] = []
    for cluster in clusters:
        if cluster.surface[0].isspace():
            if segment:
                _segment(segment, trie, tokens, text)
                segment = []
        else:
            segment.append(cluster)
    if segment:
        _segment(segment, trie, tokens, text)

    count_after = frozenset(count_after)
    for idx, token in enumerate(tokens):
        if (idx > 0
                and tokens[idx - 1].surface in count_after
                and token.surface
                and all(c in "0123456789" for c in token.surface)):
            token.kind = KIND_COUNT
    return TokenStream(text=text, tokens=tokens)


def detokenize(stream: TokenStream) -> str:
    """Rebuild the exact source text; raises TokenStreamError on corruption."""
    out = []
    pos = 0
    text = stream.text
    for token in stream.tokens:
        start, end = token.span
        if start < pos:
            raise TokenStreamError("overlapping token span at %d" % start)
        gap = text[pos:start]
        if gap and not gap.isspace():
            raise TokenStreamError("non-whitespace gap %r before %d" % (gap, start))
        if text[start:end] != token.surface:
            raise TokenStreamError(
                "surface %r does not match text at %d..%d" % (token.surface,
                                                              start, end))
        out.append(gap)
        out.append(token.surface)
        pos = end
    tail = text[pos:]
    if tail and not tail.isspace():
        raise TokenStreamError("non-whitespace tail %r" % tail)
    out.append(tail)
    return "".join(out)
