"""Length gate and character n-gram language identification tests."""

import math

import pytest

from thaiprep.corpus_io import RawThread
from thaiprep.filters import (
    LanguageFilterError,
    detect_language,
    extract_ngrams,
    filter_thread,
    length_filter,
    load_profiles,
    save_profiles,
    score_text,
    train_profiles,
)


def thread(title="หัวข้อ", body="เนื้อหา", thread_id="t1"):
    return RawThread(id=thread_id, title=title, body=body)


# --- n-gram extraction ------------------------------------------------------

def test_extract_ngrams_hand_counts():
    assert extract_ngrams("กิน ab") == [
        "ก", "ิ", "น", "กิ", "ิน", "กิน", "a", "b", "ab"]


def test_extract_ngrams_respects_chunk_boundaries():
    # No n-gram spans the space.
    assert "na" not in extract_ngrams("กิน ab")
    assert extract_ngrams("") == []
    assert extract_ngrams(" \t\n") == []


# --- training and smoothing -------------------------------------------------

def close(a, b):
    return math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12)


def test_add_one_smoothing_hand_values():
    # One doc "กา": counts ก=1, า=1, กา=1. Order-1 total 2 over 2 types,
    # order-2 total 1 over 1 type, no order-3 grams.
    profile = train_profiles([("th", "กา")])["th"]
    assert close(profile.log_probs["ก"], math.log(2 / 5))
    assert close(profile.log_probs["า"], math.log(2 / 5))
    assert close(profile.log_probs["กา"], math.log(2 / 3))
    assert close(profile.unseen_log_probs[1], math.log(1 / 5))
    assert close(profile.unseen_log_probs[2], math.log(1 / 3))
    assert profile.unseen_log_probs[3] == 0.0
    assert profile.counts == {"ก": 1, "า": 1, "กา": 1}


def test_train_profiles_error_paths():
    with pytest.raises(LanguageFilterError):
        train_profiles([])
    with pytest.raises(LanguageFilterError):
        train_profiles([("th", "   ")])
    with pytest.raises(LanguageFilterError):
        train_profiles([("", "abc")])


# --- scoring ----------------------------------------------------------------

def test_score_text_mean_with_unseen_grams():
    profile = train_profiles([("th", "กา")])["th"]
    expected = (math.log(2 / 5) + math.log(1 / 5) + math.log(1 / 3)) / 3
    assert close(score_text("กข", profile), expected)


def test_score_is_duplication_invariant():
    profiles = train_profiles([("th", "กินข้าวหรือยัง วันนี้อากาศดี"),
                               ("en", "hello there general greeting")])
    for text in ("กินอะไรดี", "what is up", "mixed กิน text"):
        for profile in profiles.values():
            single = score_text(text, profile)
            doubled = score_text(text + " " + text, profile)
            assert close(single, doubled)


def test_score_text_rejects_empty_input():
    profile = train_profiles([("th", "กา")])["th"]
    with pytest.raises(LanguageFilterError):
        score_text("", profile)
    with pytest.raises(LanguageFilterError):
        score_text(" \n\t", profile)


def test_detect_language_toy_corpus():
    profiles = train_profiles([
        ("th", "สวัสดีครับ วันนี้อากาศดีมาก กินข้าวหรือยัง"),
        ("en", "hello there how are you doing today"),
    ])
    language, score = detect_language("อากาศดีจัง", profiles)
    assert language == "th"
    assert score > score_text("อากาศดีจัง", profiles["en"])
    assert detect_language("how is today", profiles)[0] == "en"


def test_detect_language_tie_prefers_smaller_code():
    # Identical training data gives identical scores for any text.
    profiles = train_profiles([("bb", "กา"), ("aa", "กา")])
    assert detect_language("กากา", profiles)[0] == "aa"


def test_detect_language_requires_profiles():
    with pytest.raises(LanguageFilterError):
        detect_language("กา", {})


# --- thread gating ----------------------------------------------------------

def test_length_filter_reasons():
    assert length_filter(thread(title=""), 0) == "empty_title"
    assert length_filter(thread(title="  \t"), 0) == "empty_title"
    assert length_filter(thread(body="กกกกก"), 5) == "short_body"
    assert length_filter(thread(body="กกกกกก"), 5) == ""


def test_filter_thread_length_precedes_language():
    profiles = train_profiles([("en", "hello world")])
    decision = filter_thread(thread(title="", body="x"), 100, "th", profiles)
    assert not decision.passed and decision.reason == "empty_title"
    decision = filter_thread(thread(body="สั้น"), 100, "th", profiles)
    assert not decision.passed and decision.reason == "short_body"


def test_filter_thread_language_gate():
    profiles = train_profiles([
        ("th", "สวัสดีครับ วันนี้อากาศดีมาก กินข้าวหรือยัง"),
        ("en", "hello there how are you doing today"),
    ])
    passed = filter_thread(thread(body="อากาศดีมากเลยวันนี้"), 5, "th",
                           profiles)
    assert passed.passed and passed.language == "th"
    assert passed.reason == ""
    rejected = filter_thread(thread(title="greetings",
                                    body="hello how are you today"),
                             5, "th", profiles)
    assert not rejected.passed
    assert rejected.reason == "language"
    assert rejected.language == "en"


def test_filter_thread_scoring_failure_reads_as_language():
    decision = filter_thread(thread(body="ยาวพอสมควรเลยนะ"), 3, "th", {})
    assert not decision.passed and decision.reason == "language"


# --- profile files ----------------------------------------------------------

def test_profile_round_trip_is_exact(tmp_path):
    profiles = train_profiles([
        ("th", "สวัสดีครับ วันนี้อากาศดี"),
        ("en", "hello world example text"),
    ])
    path = str(tmp_path / "profiles.tsv")
    save_profiles(profiles, path)
    loaded = load_profiles(path)
    assert set(loaded) == {"th", "en"}
    for code, profile in profiles.items():
        assert loaded[code].log_probs == profile.log_probs
        assert loaded[code].unseen_log_probs == profile.unseen_log_probs
        assert loaded[code].counts == {}


@pytest.mark.parametrize("content,line", [
    ("#lang\tth\t-1.0\n", 1),
    ("#lang\t\t-1.0\t-1.0\t-1.0\n", 1),
    ("e01\t-0.5\n", 1),
    ("#lang\tth\t-1.0\t-1.0\t-1.0\ne01\tnotafloat\n", 2),
    ("#lang\tth\t-1.0\t-1.0\t-1.0\ne01\n", 2),
    ("#lang\tth\t-1.0\t-1.0\t-1.0\n#lang\tth\t-1.0\t-1.0\t-1.0\n", 2),
])
def test_load_profiles_reports_line_numbers(tmp_path, content, line):
    path = tmp_path / "profiles.tsv"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(LanguageFilterError) as err:
        load_profiles(str(path))
    assert ":%d:" % line in str(err.value)


def test_load_profiles_rejects_empty_file(tmp_path):
    path = tmp_path / "profiles.tsv"
    path.write_text("", encoding="utf-8")
    with pytest.raises(LanguageFilterError):
        load_profiles(str(path))
