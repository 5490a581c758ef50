"""Cluster, trie, segmentation, and round-trip tests for the tokenizer."""

import random

import pytest

from thaiprep.tokenizer import (
    KIND_COUNT,
    KIND_EMOJI,
    KIND_ENGLISH,
    KIND_SPECIAL,
    KIND_UNKNOWN,
    KIND_WORD,
    LexiconTrie,
    Token,
    TokenStream,
    TokenStreamError,
    cluster_tcc,
    detokenize,
    load_lexicon,
    tokenize,
)

from helpers import (
    random_instance,
    random_thai_soup,
    reference_segment,
)


def trie_of(words, specials=()):
    trie = LexiconTrie()
    for word in words:
        trie.insert(word)
    trie.special_surfaces = frozenset(specials)
    return trie


# --- character clusters -----------------------------------------------------

def test_clusters_bind_following_vowel():
    assert [c.surface for c in cluster_tcc("ตากลม")] == ["ตา", "ก", "ล", "ม"]


def test_clusters_bind_marks_to_base():
    assert [c.surface for c in cluster_tcc("กิ่น")] == ["กิ่", "น"]


def test_clusters_keep_latin_runs_together():
    assert [c.surface for c in cluster_tcc("abc ๆ")] == ["abc", " ", "ๆ"]


def test_clusters_split_runs_by_script_class():
    assert [c.surface for c in cluster_tcc("abc123ก")] == ["abc", "123", "ก"]


def test_clusters_keep_water_word_whole():
    assert [c.surface for c in cluster_tcc("น้ำ")] == ["น้ำ"]


def test_clusters_bind_leading_vowel():
    surfaces = [c.surface for c in cluster_tcc("เกม")]
    assert surfaces[0].startswith("เ")
    assert "".join(surfaces) == "เกม"


def test_cluster_empty_text():
    assert cluster_tcc("") == []


def test_cluster_partition_on_fuzzed_text():
    rng = random.Random(5)
    for _ in range(500):
        text = random_thai_soup(rng)
        clusters = cluster_tcc(text)
        assert "".join(c.surface for c in clusters) == text
        position = 0
        for cluster in clusters:
            assert cluster.span == (position, position + len(cluster.surface))
            assert cluster.surface
            position += len(cluster.surface)


# --- lexicon trie -----------------------------------------------------------

def test_trie_membership_and_prefixes():
    trie = trie_of(["ตา", "ตาก"])
    assert "ตา" in trie
    assert "ตาก" in trie
    assert "ต" not in trie
    assert trie.has_prefix("ต")
    assert not trie.has_prefix("ลม")
    assert len(trie) == 2


def test_trie_insert_reports_duplicates():
    trie = LexiconTrie()
    assert trie.insert("ตา")
    assert not trie.insert("ตา")
    assert len(trie) == 1


def test_load_lexicon_skips_comments_blanks_and_spaced_entries(tmp_path):
    path = tmp_path / "words.txt"
    path.write_text("# comment\nตา\n\n  กลม  \nมี ช่องว่าง\nตา\n",
                    encoding="utf-8")
    trie = load_lexicon([str(path)], special_surfaces=())
    assert "ตา" in trie and "กลม" in trie
    assert len(trie) == 2


def test_load_lexicon_canonicalizes_entries(tmp_path):
    # A misordered variant of น้ำ must match the canonical spelling.
    path = tmp_path / "words.txt"
    path.write_text("นำ้\n", encoding="utf-8")
    trie = load_lexicon([str(path)], special_surfaces=())
    assert "น้ำ" in trie


def test_load_lexicon_adds_special_surfaces():
    trie = load_lexicon([], special_surfaces=("[CREP]", "[NUM]"))
    assert "[CREP]" in trie and "[NUM]" in trie
    assert trie.special_surfaces == frozenset(("[CREP]", "[NUM]"))


def test_load_lexicon_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_lexicon([str(tmp_path / "absent.txt")])


# --- tokenize ---------------------------------------------------------------

def test_tokenize_prefers_longest_earliest_token():
    stream = tokenize("ตากลม", trie_of(["ตา", "ตาก", "ลม", "กลม"]))
    assert stream.surfaces() == ["ตาก", "ลม"]
    assert [t.kind for t in stream.tokens] == [KIND_WORD, KIND_WORD]


def test_tokenize_merges_unknown_clusters():
    stream = tokenize("ข้าว", trie_of([]))
    assert stream.surfaces() == ["ข้าว"]
    assert stream.tokens[0].kind == KIND_UNKNOWN


def test_tokenize_single_unknown_cluster():
    stream = tokenize("ตา", trie_of([]))
    assert stream.surfaces() == ["ตา"]
    assert stream.tokens[0].kind == KIND_UNKNOWN


def test_tokenize_whitespace_is_hard_boundary():
    stream = tokenize("ตา กลม", trie_of(["ตากลม"]))
    assert stream.surfaces() == ["ตา", "กลม"]
    spans = [t.span for t in stream.tokens]
    assert spans == [(0, 2), (3, 6)]


def test_tokenize_classifies_non_thai_runs():
    stream = tokenize("กิน pizza 😀", trie_of(["กิน"]))
    kinds = dict(zip(stream.surfaces(), (t.kind for t in stream.tokens)))
    assert kinds["pizza"] == KIND_ENGLISH
    assert kinds["😀"] == KIND_EMOJI


def test_tokenize_published_token_stream():
    trie = trie_of(["ฉัน", "ชอบ", "มัน", "มาก"],
                   specials=("[CREP]", "[WREP]", "[NUM]", "[LAUGH]"))
    for surface in ("[CREP]", "[WREP]", "[NUM]", "[LAUGH]"):
        trie.insert(surface)
    stream = tokenize("ฉันชอบมันมาก [CREP] 4 [LAUGH]", trie)
    assert stream.surfaces() == ["ฉัน", "ชอบ", "มัน", "มาก",
                                 "[CREP]", "4", "[LAUGH]"]
    assert [t.kind for t in stream.tokens] == [
        KIND_WORD, KIND_WORD, KIND_WORD, KIND_WORD,
        KIND_SPECIAL, KIND_COUNT, KIND_SPECIAL,
    ]


def test_tokenize_count_kind_requires_preceding_trigger():
    trie = trie_of([], specials=("[NUM]",))
    trie.insert("[NUM]")
    stream = tokenize("[NUM] 4", trie)
    assert [t.kind for t in stream.tokens] == [KIND_SPECIAL, KIND_UNKNOWN]


def test_tokenize_empty_and_whitespace_text():
    assert tokenize("", trie_of([])).surfaces() == []
    assert tokenize(" \t\n", trie_of([])).surfaces() == []


def test_tokenize_boundaries_respect_clusters():
    rng = random.Random(17)
    for _ in range(200):
        text, words = random_instance(rng)
        boundaries = {0, len(text)}
        for cluster in cluster_tcc(text):
            boundaries.add(cluster.span[0])
            boundaries.add(cluster.span[1])
        stream = tokenize(text, trie_of(words))
        for token in stream.tokens:
            assert token.span[0] in boundaries
            assert token.span[1] in boundaries


def test_tokenize_matches_reference_on_random_instances():
    rng = random.Random(23)
    for _ in range(150):
        text, words = random_instance(rng)
        got = tokenize(text, trie_of(words)).surfaces()
        want, _ = reference_segment(text, words)
        assert got == want, (text, words)


def test_adding_a_word_never_increases_piece_count():
    rng = random.Random(29)
    checked = 0
    while checked < 100:
        text, words = random_instance(rng)
        surfaces, before = reference_segment(text, words)
        assert tokenize(text, trie_of(words)).surfaces() == surfaces
        # Add a cluster-aligned substring that is not yet a dictionary word.
        clusters = cluster_tcc(text)
        i = rng.randrange(len(clusters))
        j = min(len(clusters), i + rng.randint(1, 3))
        new_word = text[clusters[i].span[0]:clusters[j - 1].span[1]]
        if not new_word or new_word in words or new_word.isspace():
            continue
        grown = sorted(words + [new_word])
        surfaces, after = reference_segment(text, grown)
        assert tokenize(text, trie_of(grown)).surfaces() == surfaces
        assert after <= before
        checked += 1


# --- detokenize -------------------------------------------------------------

def test_detokenize_round_trip_on_fuzzed_text():
    rng = random.Random(41)
    for _ in range(300):
        raw = random_thai_soup(rng)
        text = " ".join(raw.split())  # normalized spacing, as in the pipeline
        stream = tokenize(text, trie_of([]))
        assert detokenize(stream) == text


def test_detokenize_empty_stream():
    assert detokenize(TokenStream(text="", tokens=[])) == ""


def test_detokenize_rejects_overlapping_spans():
    stream = TokenStream(text="กขค", tokens=[
        Token(surface="กข", kind=KIND_UNKNOWN, span=(0, 2)),
        Token(surface="ขค", kind=KIND_UNKNOWN, span=(1, 3)),
    ])
    with pytest.raises(TokenStreamError):
        detokenize(stream)


def test_detokenize_rejects_surface_span_mismatch():
    stream = TokenStream(text="กขค", tokens=[
        Token(surface="กก", kind=KIND_UNKNOWN, span=(0, 2)),
    ])
    with pytest.raises(TokenStreamError):
        detokenize(stream)
