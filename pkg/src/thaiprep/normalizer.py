"""Rule-based text cleanup for colloquial Thai web text.

Every stage is a pure text -> text rewrite. ``normalize_text`` runs the
configured stage order and can keep an audit trail of rewrites whose replay
over the original string reproduces the output exactly. Stage names double as
rule names in the audit records.

Stage order matters: laugh runs are rewritten before generic numbers so a
"55555" burst is never emitted as a number token, and repetition marking runs
after number marking so emitted counts stay literal digits.
"""
from __future__ import annotations

import html
import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache

logger = logging.getLogger(__name__)

DEFAULT_SPECIAL_TOKENS = {
    "crep": "[CREP]",
    "wrep": "[WREP]",
    "num": "[NUM]",
    "laugh": "[LAUGH]",
}
DEFAULT_REWRITE_CAPS = {"crep": 5, "wrep": 5}

# Bracket removal must precede character-order normalization: deleting an
# empty bracket pair can join two combining-mark runs, and the join has to
# happen before canonical ordering for the pipeline to be idempotent.
DEFAULT_STAGE_ORDER = (
    "fix_html",
    "remove_empty_brackets",
    "normalize_char_order",
    "pad_slash_hash",
    "mark_laugh",
    "mark_numbers",
    "mark_char_repetition",
    "mark_word_repetition",
    "collapse_whitespace",
)

# Thai combining classes, ordered by canonical position after the base
# consonant. SARA AM is a spacing letter, not a combining mark, but correctly
# typed text puts it after any tone mark, so it sorts last within a run.
BELOW_VOWELS = "ฺุู"
ABOVE_VOWELS = "ัิีึื็"
TONE_MARKS = "่้๊๋"
FINAL_SIGNS = "์ํ๎"
SARA_AM = "ำ"

_REORDER_RANK: dict[str, int] = {}
for _rank, _chars in enumerate(
    (BELOW_VOWELS, ABOVE_VOWELS, TONE_MARKS, FINAL_SIGNS, SARA_AM), start=1
):
    for _c in _chars:
        _REORDER_RANK[_c] = _rank

_THAI_DIGITS = "๐-๙"
_CURRENCY = "฿$€£¥"

_BR_RE = re.compile(r"<br\s*/?>", re.IGNORECASE)
_ENTITY_RE = re.compile(r"&(?:#[0-9]+|#[xX][0-9a-fA-F]+|[A-Za-z][A-Za-z0-9]*);?")
_MARK_RUN_RE = re.compile(
    "[%s]+" % (BELOW_VOWELS + ABOVE_VOWELS + TONE_MARKS + FINAL_SIGNS + SARA_AM)
)
_EMPTY_BRACKETS_RE = re.compile(r"\(\s*\)|\[\s*\]|\{\s*\}")
_SLASH_HASH_RE = re.compile(r"[ \t]*([/#])[ \t]*")
_LAUGH_RE = re.compile(r"5{4,}\+?")
_CHAR_RUN_RE = re.compile(r"(.)\1{2,}")
# Whitespace-free unit of 3..30 chars repeated 3+ times; copies may be
# separated by horizontal whitespace. The lazy middle makes the smallest
# period win at the leftmost start. Units must not contain whitespace and the
# separator class must cover exactly what whitespace collapsing later folds
# into one space; otherwise a run whose spacing the collapse rewrites would
# surface only on a second pass.
_WORD_RUN_RE = re.compile(r"(\S\S{1,28}?\S)(?:[^\S\n]*\1){2,}")
_HSPACE_RE = re.compile(r"[^\S\n]+")
_NEWLINE_RUN_RE = re.compile(r"\n{2,}")
_EDGE_SPACE_RE = re.compile(r"\A\s+|\s+\Z")

_MAX_FIXPOINT_ROUNDS = 32


@dataclass
class SpecialToken:
    """A reserved surface emitted by a rewrite rule."""

    role: str
    surface: str
    cap: int | None = None


@dataclass
class RewriteRecord:
    """One audit entry: source span in the original text and its replacement."""

    rule: str
    span: tuple[int, int]
    replacement: str


@dataclass
class NormalizedDocument:
    text: str
    rewrites: list[RewriteRecord] = field(default_factory=list)
    source: str = ""
    thread_id: str = ""


class StageError(ValueError):
    """Unknown stage name or invalid stage parameters."""


# ---------------------------------------------------------------------------
# Edit capture and audit-trail composition.

# An edit replaces text[start:end] with a string. Edit lists are sorted and
# non-overlapping because they come from left-to-right finditer scans.
Edit = tuple[int, int, str]


def _sub_edits(pattern: re.Pattern, repl, text: str) -> tuple[str, list[Edit]]:
    """Like re.sub but also returns the edit list; repl(m) may return None."""
    out: list[str] = []
    edits: list[Edit] = []
    pos = 0
    for m in pattern.finditer(text):
        replacement = repl(m)
        if replacement is None or replacement == m.group(0):
            continue
        out.append(text[pos : m.start()])
        out.append(replacement)
        edits.append((m.start(), m.end(), replacement))
        pos = m.end()
    if not edits:
        return text, []
    out.append(text[pos:])
    return "".join(out), edits


def apply_edits(text: str, edits: list[Edit]) -> str:
    """Replay a sorted, non-overlapping edit list over ``text``."""
    out = []
    pos = 0
    for start, end, replacement in edits:
        if start < pos:
            raise ValueError("overlapping edits at offset %d" % start)
        out.append(text[pos:start])
        out.append(replacement)
        pos = end
    out.append(text[pos:])
    return "".join(out)


class _AuditTrail:
    """Maps the current text back onto the original across stages.

    The current text is modeled as a piece sequence; a piece is either a
    copied span of the original, ("c", start, end), or an insertion that
    replaced one, ("i", start, end, text, rule). Splitting an insertion gives
    its left half a zero-width source span, so replaying the recorded pieces
    in order always reproduces the current text.
    """

    def __init__(self, source: str):
        self.source = source
        self.pieces: list[tuple] = [("c", 0, len(source))] if source else []

    @staticmethod
    def _plen(piece: tuple) -> int:
        return piece[2] - piece[1] if piece[0] == "c" else len(piece[3])

    @staticmethod
    def _split(piece: tuple, k: int) -> tuple[tuple, tuple]:
        # k is strictly inside the piece's current text
        if piece[0] == "c":
            cut = piece[1] + k
            return ("c", piece[1], cut), ("c", cut, piece[2])
        left = ("i", piece[1], piece[1], piece[3][:k], piece[4])
        right = ("i", piece[1], piece[2], piece[3][k:], piece[4])
        return left, right

    def apply(self, edits: list[Edit], rule: str) -> None:
        if not edits:
            return
        pieces = self.pieces
        new: list[tuple] = []
        idx = 0
        carry: tuple | None = None
        pos = 0

        def take() -> tuple | None:
            nonlocal idx, carry
            if carry is not None:
                piece, carry = carry, None
                return piece
            if idx < len(pieces):
                piece = pieces[idx]
                idx += 1
                return piece
            return None

        for e_start, e_end, e_rep in edits:
            while pos < e_start:
                piece = take()
                if piece is None:
                    raise ValueError("edit starts past end of text")
                length = self._plen(piece)
                if pos + length <= e_start:
                    new.append(piece)
                    pos += length
                else:
                    left, right = self._split(piece, e_start - pos)
                    new.append(left)
                    carry = right
                    pos = e_start
            span_start = span_end = None
            while pos < e_end:
                piece = take()
                if piece is None:
                    raise ValueError("edit ends past end of text")
                length = self._plen(piece)
                if pos + length <= e_end:
                    absorbed = piece
                    pos += length
                else:
                    absorbed, carry = self._split(piece, e_end - pos)
                    pos = e_end
                if span_start is None:
                    span_start = absorbed[1]
                span_end = absorbed[2]
            new.append(("i", span_start, span_end, e_rep, rule))
        piece = take()
        while piece is not None:
            new.append(piece)
            piece = take()
        self.pieces = new

    def records(self) -> list[RewriteRecord]:
        return [
            RewriteRecord(rule=p[4], span=(p[1], p[2]), replacement=p[3])
            for p in self.pieces
            if p[0] == "i"
        ]

    def text(self) -> str:
        return "".join(
            p[3] if p[0] == "i" else self.source[p[1] : p[2]] for p in self.pieces
        )


# ---------------------------------------------------------------------------
# Stages. Each private worker returns (new_text, rounds) where every round is
# an edit list relative to the text before that round; public wrappers return
# plain strings.

def _fix_html_rounds(text: str) -> tuple[str, list[list[Edit]]]:
    rounds = []

    def decode(m: re.Match) -> str | None:
        ref = m.group(0)
        if ref.startswith("&#"):
            decoded = html.unescape(ref)
            return None if decoded == ref else decoded
        # Named references decode only as a whole match; html.unescape alone
        # would also decode semicolon-less prefixes, turning the unknown
        # reference "&notareal;" into "¬areal;" via "&not".
        return html.entities.html5.get(ref[1:])

    # Decode repeatedly so double-escaped references reach a fixpoint; every
    # decode strictly shrinks the text, so this terminates. Decoding runs
    # before the <br> rewrite because references can decode into "<br>".
    while True:
        text, edits = _sub_edits(_ENTITY_RE, decode, text)
        if not edits:
            break
        rounds.append(edits)
    text, edits = _sub_edits(_BR_RE, lambda m: "\n", text)
    if edits:
        rounds.append(edits)
    return text, rounds


def fix_html(text: str) -> str:
    """Decode character references (to a fixpoint) and turn <br> into newlines.

    Undecodable references pass through unchanged.
    """
    return _fix_html_rounds(text)[0]


def _reorder_marks(run: str) -> str:
    ordered = sorted(run, key=_REORDER_RANK.__getitem__)
    out = [ordered[0]]
    for c in ordered[1:]:
        if c != out[-1]:  # duplicate marks collapse to one
            out.append(c)
    return "".join(out)


def _normalize_char_order_rounds(text: str) -> tuple[str, list[list[Edit]]]:
    def repl(m: re.Match) -> str | None:
        fixed = _reorder_marks(m.group(0))
        return None if fixed == m.group(0) else fixed

    text, edits = _sub_edits(_MARK_RUN_RE, repl, text)
    return text, [edits] if edits else []


def normalize_char_order(text: str) -> str:
    """Put Thai combining runs into canonical order.

    Within a run the order is below vowel, above vowel, tone mark, final
    sign, then SARA AM; consecutive duplicates collapse to one. The result is
    a fixpoint of the rewrite.
    """
    return _normalize_char_order_rounds(text)[0]


def _remove_empty_brackets_rounds(text: str) -> tuple[str, list[list[Edit]]]:
    rounds = []
    while True:
        text, edits = _sub_edits(_EMPTY_BRACKETS_RE, lambda m: "", text)
        if not edits:
            break
        rounds.append(edits)
    return text, rounds


def remove_empty_brackets(text: str) -> str:
    """Delete (), [], {} pairs that are empty or whitespace-only, to a fixpoint."""
    return _remove_empty_brackets_rounds(text)[0]


def _pad_slash_hash_rounds(text: str) -> tuple[str, list[list[Edit]]]:
    def repl(m: re.Match) -> str | None:
        lead = "" if m.start() == 0 else " "
        trail = "" if m.end() == len(m.string) else " "
        padded = lead + m.group(1) + trail
        return None if padded == m.group(0) else padded

    text, edits = _sub_edits(_SLASH_HASH_RE, repl, text)
    return text, [edits] if edits else []


def pad_slash_hash(text: str) -> str:
    """Give every '/' and '#' a single space on each side (none at the ends)."""
    return _pad_slash_hash_rounds(text)[0]


def _mark_laugh_rounds(text: str, surface: str) -> tuple[str, list[list[Edit]]]:
    padded = " %s " % surface
    text, edits = _sub_edits(_LAUGH_RE, lambda m: padded, text)
    return text, [edits] if edits else []


def mark_laugh(text: str, surface: str = DEFAULT_SPECIAL_TOKENS["laugh"]) -> str:
    """Replace runs of four or more '5' (plus one optional '+') with the surface."""
    return _mark_laugh_rounds(text, surface)[0]


@lru_cache(maxsize=32)
def _number_patterns(protected: tuple[str, ...], extra: tuple[str, ...]):
    digits = "0-9" + _THAI_DIGITS
    masked = re.compile(
        "(?<![0-9A-Za-z%s])[0-9xX%s][0-9xX%s.,:/-]*[0-9xX%s](?![0-9A-Za-z%s])"
        % (_THAI_DIGITS, _THAI_DIGITS, _THAI_DIGITS, _THAI_DIGITS, _THAI_DIGITS)
    )
    general = re.compile(
        "[%s]?(?<![%s])[%s]+(?:[.,:/-][%s]+)*[%s]?"
        % (_CURRENCY, digits, digits, digits, _CURRENCY)
    )
    # A protected surface followed by space-separated digit groups is an
    # emitted repetition count (or indistinguishable from one). The chain is
    # open-ended because later rewrites can stack a fresh count in front of
    # digits that were already being kept.
    chain = re.compile(
        "(?:%s) [0-9]+(?: [0-9]+)*"
        % "|".join(re.escape(s) for s in protected)
    ) if protected else None
    extras = tuple(re.compile(p) for p in extra)
    return masked, general, chain, extras


def _mark_numbers_rounds(
    text: str,
    surface: str,
    protected: tuple[str, ...],
    extra_patterns: tuple[str, ...],
) -> tuple[str, list[list[Edit]]]:
    masked, general, chain, extras = _number_patterns(protected,
                                                      extra_patterns)
    padded = " %s " % surface
    rounds = []

    def keep_counts(repl):
        # Wrap a replacement so matches touching a protected span are
        # skipped. Spans are found on the text each round runs against.
        spans = [m.span() for m in chain.finditer(text)] if chain else []

        def guarded(m: re.Match) -> str | None:
            for start, end in spans:
                if m.start() < end and start < m.end():
                    return None
            return repl(m)

        return guarded

    def masked_repl(m: re.Match) -> str | None:
        s = m.group(0)
        if len(s) < 6:
            return None
        if sum(c.isdigit() for c in s) < 3:
            return None
        if "x" not in s and "X" not in s:
            return None
        return padded

    text, edits = _sub_edits(masked, keep_counts(masked_repl), text)
    if edits:
        rounds.append(edits)
    text, edits = _sub_edits(general, keep_counts(lambda m: padded), text)
    if edits:
        rounds.append(edits)
    for pattern in extras:
        text, edits = _sub_edits(pattern, keep_counts(lambda m: padded), text)
        if edits:
            rounds.append(edits)
    return text, rounds


def mark_numbers(
    text: str,
    surface: str = DEFAULT_SPECIAL_TOKENS["num"],
    protected: tuple[str, ...] = (
        DEFAULT_SPECIAL_TOKENS["crep"],
        DEFAULT_SPECIAL_TOKENS["wrep"],
    ),
    extra_patterns: tuple[str, ...] = (),
) -> str:
    """Replace numeric material with the number surface.

    Covers Arabic and Thai digit strings with .,:/- separators (dates, times,
    plain numbers), digit strings attached to a currency sign, and masked
    phone numbers (digit/x mixes of 6+ chars with 3+ digits). Space-separated
    digit groups chained directly after a protected surface (emitted
    repetition counts) are left alone so the pipeline stays idempotent.
    """
    return _mark_numbers_rounds(text, surface, tuple(protected), tuple(extra_patterns))[0]


def _mark_char_repetition_rounds(
    text: str, surface: str, cap: int
) -> tuple[str, list[list[Edit]]]:
    def repl(m: re.Match) -> str | None:
        c = m.group(1)
        if c.isdigit() or c.isspace():
            return None
        return "%s %s %d " % (c, surface, min(m.end() - m.start(), cap))

    text, edits = _sub_edits(_CHAR_RUN_RE, repl, text)
    return text, [edits] if edits else []


def mark_char_repetition(
    text: str,
    surface: str = DEFAULT_SPECIAL_TOKENS["crep"],
    cap: int = DEFAULT_REWRITE_CAPS["crep"],
) -> str:
    """Rewrite runs of 3+ identical non-digit, non-space characters.

    A run of n chars becomes one copy, the surface, and the count min(n, cap).
    """
    return _mark_char_repetition_rounds(text, surface, cap)[0]


def _count_copies(matched: str, unit: str) -> int:
    count = 0
    pos = 0
    length = len(unit)
    while pos < len(matched):
        while pos < len(matched) and matched[pos].isspace():
            pos += 1
        if matched.startswith(unit, pos):
            count += 1
            pos += length
        else:  # pragma: no cover - the regex guarantees full coverage
            break
    return count


def _mark_word_repetition_rounds(
    text: str, surface: str, cap: int
) -> tuple[str, list[list[Edit]]]:
    def repl(m: re.Match) -> str:
        unit = m.group(1)
        k = _count_copies(m.group(0), unit)
        return "%s %s %d " % (unit, surface, min(k, cap))

    rounds = []
    # Replacements can themselves become units of a wider repetition, so
    # iterate to a fixpoint; convergence is quick in practice.
    for _ in range(_MAX_FIXPOINT_ROUNDS):
        text, edits = _sub_edits(_WORD_RUN_RE, repl, text)
        if not edits:
            return text, rounds
        rounds.append(edits)
    logger.warning("word repetition marking did not converge in %d rounds",
                   _MAX_FIXPOINT_ROUNDS)
    return text, rounds


def mark_word_repetition(
    text: str,
    surface: str = DEFAULT_SPECIAL_TOKENS["wrep"],
    cap: int = DEFAULT_REWRITE_CAPS["wrep"],
) -> str:
    """Rewrite units of 3..30 chars repeated 3+ times into one copy plus count.

    Units carry no whitespace; copies may be separated by horizontal
    whitespace. The smallest period at the leftmost start wins.
    """
    return _mark_word_repetition_rounds(text, surface, cap)[0]


def _collapse_whitespace_rounds(text: str) -> tuple[str, list[list[Edit]]]:
    rounds = []
    text, edits = _sub_edits(_HSPACE_RE, lambda m: " ", text)
    if edits:
        rounds.append(edits)
    text, edits = _sub_edits(_NEWLINE_RUN_RE, lambda m: "\n", text)
    if edits:
        rounds.append(edits)
    text, edits = _sub_edits(_EDGE_SPACE_RE, lambda m: "", text)
    if edits:
        rounds.append(edits)
    return text, rounds


def collapse_whitespace(text: str) -> str:
    """Collapse horizontal whitespace runs to one space and newline runs to
    one newline, then trim the ends."""
    return _collapse_whitespace_rounds(text)[0]


# ---------------------------------------------------------------------------
# Pipeline driver.

def _stage_runner(name: str, special: dict[str, str], caps: dict[str, int],
                  extra_number_patterns: tuple[str, ...]):
    if name == "fix_html":
        return _fix_html_rounds
    if name == "normalize_char_order":
        return _normalize_char_order_rounds
    if name == "remove_empty_brackets":
        return _remove_empty_brackets_rounds
    if name == "pad_slash_hash":
        return _pad_slash_hash_rounds
    if name == "mark_laugh":
        return lambda t: _mark_laugh_rounds(t, special["laugh"])
    if name == "mark_numbers":
        protected = (special["crep"], special["wrep"])
        return lambda t: _mark_numbers_rounds(
            t, special["num"], protected, extra_number_patterns
        )
    if name == "mark_char_repetition":
        return lambda t: _mark_char_repetition_rounds(t, special["crep"],
                                                      caps["crep"])
    if name == "mark_word_repetition":
        return lambda t: _mark_word_repetition_rounds(t, special["wrep"],
                                                      caps["wrep"])
    if name == "collapse_whitespace":
        return _collapse_whitespace_rounds
    raise StageError("unknown stage: %r" % name)


def validate_stage_order(stage_order) -> None:
    """Each known stage must appear exactly once."""
    seen = list(stage_order)
    if sorted(seen) != sorted(DEFAULT_STAGE_ORDER):
        raise StageError(
            "stage order must contain each of %s exactly once, got %r"
            % (", ".join(DEFAULT_STAGE_ORDER), seen)
        )


def validate_rewrite_caps(caps: dict[str, int]) -> None:
    for role, cap in caps.items():
        if not isinstance(cap, int) or cap < 2:
            raise StageError("rewrite cap for %r must be an integer >= 2" % role)


def normalize_text(
    text: str,
    stage_order=DEFAULT_STAGE_ORDER,
    special_tokens: dict[str, str] | None = None,
    rewrite_caps: dict[str, int] | None = None,
    extra_number_patterns: tuple[str, ...] = (),
    keep_rewrites: bool = True,
    thread_id: str = "",
) -> NormalizedDocument:
    """Run the stage pipeline over ``text``.

    With ``keep_rewrites`` the returned document carries an audit trail whose
    replay over ``source`` reproduces ``text`` exactly.
    """
    special = dict(DEFAULT_SPECIAL_TOKENS)
    if special_tokens:
        special.update(special_tokens)
    caps = dict(DEFAULT_REWRITE_CAPS)
    if rewrite_caps:
        caps.update(rewrite_caps)
    validate_stage_order(stage_order)
    validate_rewrite_caps(caps)

    source = text
    trail = _AuditTrail(source) if keep_rewrites else None
    extra = tuple(extra_number_patterns)
    for name in stage_order:
        text, rounds = _stage_runner(name, special, caps, extra)(text)
        if trail is not None:
            for edits in rounds:
                trail.apply(edits, name)
    rewrites = trail.records() if trail is not None else []
    return NormalizedDocument(
        text=text, rewrites=rewrites, source=source, thread_id=thread_id
    )


def normalize_document(raw, config=None,
                       keep_rewrites: bool = True) -> NormalizedDocument:
    """Normalize one raw thread (title and body joined by a newline)."""
    include_title = getattr(config, "include_title", True)
    if include_title and raw.title:
        source = "%s\n%s" % (raw.title, raw.body)
    else:
        source = raw.body
    return normalize_text(
        source,
        stage_order=getattr(config, "stage_order", DEFAULT_STAGE_ORDER),
        special_tokens=getattr(config, "special_tokens", None),
        rewrite_caps=getattr(config, "rewrite_caps", None),
        extra_number_patterns=tuple(getattr(config, "extra_number_patterns", ())),
        keep_rewrites=keep_rewrites,
        thread_id=getattr(raw, "id", ""),
    )


def special_tokens_from_config(config) -> list[SpecialToken]:
    special = dict(DEFAULT_SPECIAL_TOKENS)
    special.update(getattr(config, "special_tokens", {}) or {})
    caps = dict(DEFAULT_REWRITE_CAPS)
    caps.update(getattr(config, "rewrite_caps", {}) or {})
    return [
        SpecialToken(role=role, surface=surface, cap=caps.get(role))
        for role, surface in sorted(special.items())
    ]
