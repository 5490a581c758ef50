"""Reference implementations and input generators shared across tests.

The reference segmenter enumerates, over the cluster sequence of a
whitespace-free string, every split into pieces that are dictionary words,
maximal non-Thai cluster runs, or single clusters. It keeps the splits with
the fewest pieces, orders ties piece by piece (longer first; at equal length
a dictionary word or run before a bare cluster), and finally merges adjacent
single-cluster leftovers into one surface. Only the cluster partition itself
is taken from the library; the search is independent of the tokenizer.
"""

from thaiprep.tokenizer import cluster_tcc

THAI_CONSONANTS = [chr(c) for c in range(0x0E01, 0x0E2F)]
ABOVE_VOWELS = list("ัิีึื็")
BELOW_VOWELS = list("ุู")
TONE_MARKS = list("่้๊๋")
LEAD_VOWELS = list("เแโใไ")
FOLLOW_VOWELS = list("ะา")
SARA_AM = "ำ"


def _thai_char(c):
    return 0x0E01 <= ord(c) <= 0x0E4E


def reference_segment(text, words):
    """Return (surfaces, piece_count) for whitespace-free ``text``."""
    clusters = [c.surface for c in cluster_tcc(text)]
    n = len(clusters)
    starts = [0]
    for surface in clusters:
        starts.append(starts[-1] + len(surface))
    thai = [all(_thai_char(c) for c in surface) for surface in clusters]
    word_set = set(words)

    def candidates(i):
        # Pieces starting at cluster i as (end_cluster, rank): dictionary
        # words and non-Thai runs rank 0, a bare single cluster rank 1.
        found = []
        for j in range(i + 1, n + 1):
            if text[starts[i]:starts[j]] in word_set:
                found.append((j, 0))
        if not thai[i]:
            j = i
            while j < n and not thai[j]:
                j += 1
            found.append((j, 0))
        found.append((i + 1, 1))
        return found

    memo = {}

    def best(i):
        if i == n:
            return []
        if i not in memo:
            options = []
            for j, rank in candidates(i):
                piece = (starts[i] - starts[j], rank, i, j)
                options.append([piece] + best(j))
            # Fewest pieces first, then per-piece (longer, lower rank);
            # the sort is stable, so exact ties keep candidate order.
            options.sort(key=lambda seq: (len(seq), [p[:2] for p in seq]))
            memo[i] = options[0]
        return memo[i]

    pieces = best(0)
    surfaces = []
    merged = None  # [start_cluster, end_cluster) of pending bare clusters
    for _neg_len, rank, i, j in pieces:
        if rank == 1:
            if merged is None:
                merged = [i, j]
            else:
                merged[1] = j
            continue
        if merged is not None:
            surfaces.append(text[starts[merged[0]]:starts[merged[1]]])
            merged = None
        surfaces.append(text[starts[i]:starts[j]])
    if merged is not None:
        surfaces.append(text[starts[merged[0]]:starts[merged[1]]])
    return surfaces, len(pieces)


def random_thai_chunk(rng):
    """A short Thai sequence in canonical combining order."""
    parts = []
    if rng.random() < 0.2:
        parts.append(rng.choice(LEAD_VOWELS))
    parts.append(rng.choice(THAI_CONSONANTS))
    roll = rng.random()
    if roll < 0.3:
        parts.append(rng.choice(ABOVE_VOWELS))
        if rng.random() < 0.4:
            parts.append(rng.choice(TONE_MARKS))
    elif roll < 0.45:
        parts.append(rng.choice(BELOW_VOWELS))
        if rng.random() < 0.4:
            parts.append(rng.choice(TONE_MARKS))
    elif roll < 0.55:
        parts.append(rng.choice(TONE_MARKS))
    if rng.random() < 0.25:
        parts.append(SARA_AM if rng.random() < 0.3
                     else rng.choice(FOLLOW_VOWELS))
    return "".join(parts)


def random_instance(rng, max_clusters=20, max_words=50):
    """A whitespace-free mixed-script string plus a dictionary for it.

    Most dictionary entries are cluster-aligned substrings of the text so
    that segmentations overlap and tie-breaks are exercised.
    """
    target = rng.randint(3, max_clusters)
    parts = []
    while True:
        roll = rng.random()
        if roll < 0.72:
            parts.append(random_thai_chunk(rng))
        elif roll < 0.88:
            parts.append("".join(rng.choice("abcdefgh")
                                 for _ in range(rng.randint(1, 4))))
        else:
            parts.append("".join(rng.choice("0123456789")
                                 for _ in range(rng.randint(1, 3))))
        clusters = cluster_tcc("".join(parts))
        if len(clusters) >= target:
            break
    clusters = clusters[:max_clusters]
    text = "".join(c.surface for c in clusters)
    starts = [0]
    for cluster in clusters:
        starts.append(starts[-1] + len(cluster.surface))
    n = len(clusters)
    words = set()
    for _ in range(rng.randint(0, max_words)):
        if rng.random() < 0.85:
            i = rng.randrange(n)
            j = min(n, i + rng.randint(1, 4))
            words.add(text[starts[i]:starts[j]])
        else:
            words.add(random_thai_chunk(rng) + random_thai_chunk(rng))
        if len(words) >= max_words:
            break
    return text, sorted(words)


MESSY_FRAGMENTS = (
    "สวัสดี", "อร่อย", "กิน", "ข้าว", "มาก", "จริง",
    "&amp;", "&amp;amp;", "&lt;br&gt;", "&#36;", "&#x0E01;", "&notareal;",
    "&not;", "<br>", "<br/>", "<BR >",
    "()", "( )", "[ ]", "{}", "(x)", "(", ")", "[", "]",
    "/", "#", "a/b", "#tag", "ก/ข",
    "5555", "555555+", "555", "55555555++", "25555", "5",
    "1,500", "089-123-4567", "08x-xxx-1234", "๑๒๓", "10:30",
    "12/05/2021", "฿100", "100บาท", "3.14", "7",
    "มากกกก", "ๆๆๆๆ", "......", "!!!!", "นนนน",
    "อร่อยอร่อยอร่อย", "จริงจริงจริงจริง", "ไปไปไป", "abcabcabc",
    "[CREP]", "[WREP]", "[NUM]", "[LAUGH]", "[CREP] 4", "[WREP] 12",
    "[CREP]4", "[NUM] [NUM] [NUM]",
    "😀", "🇹🇭", "👍🏽", "👨‍👩‍👧",
    "Hello", "WORLD", "the",
    " ", "  ", "\t", "\n", "\n\n", "\r\n", "\r", " ", "​",
    "ก่่า", "นำ้", "เเ", "ก้ิ", "่", "ำ",
    "",
)


def random_messy_text(rng, max_fragments=12):
    """Forum-style noise: markup, repeats, numbers, emoji, odd whitespace."""
    count = rng.randint(1, max_fragments)
    pieces = []
    for _ in range(count):
        if rng.random() < 0.85:
            pieces.append(rng.choice(MESSY_FRAGMENTS))
        else:
            pieces.append(random_thai_chunk(rng))
    return "".join(pieces)


def random_thai_soup(rng, max_chars=40):
    """Thai text with arbitrary mark placement, plus mixed-script sprinkle."""
    out = []
    for _ in range(rng.randint(1, max_chars)):
        roll = rng.random()
        if roll < 0.5:
            out.append(rng.choice(THAI_CONSONANTS))
        elif roll < 0.62:
            out.append(rng.choice(ABOVE_VOWELS + BELOW_VOWELS))
        elif roll < 0.72:
            out.append(rng.choice(TONE_MARKS))
        elif roll < 0.78:
            out.append(rng.choice(LEAD_VOWELS))
        elif roll < 0.84:
            out.append(SARA_AM if rng.random() < 0.5
                       else rng.choice(FOLLOW_VOWELS))
        elif roll < 0.9:
            out.append(rng.choice("abcXYZ"))
        elif roll < 0.95:
            out.append(rng.choice("0123456789๐๑๒"))
        else:
            out.append(rng.choice(" \t\nๆฯ.!"))
    return "".join(out)
