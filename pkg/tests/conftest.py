"""Shared fixtures for the test suite."""

import pytest

from thaiprep.corpus_io import RawThread


@pytest.fixture
def make_thread():
    """Factory for RawThread records with sensible defaults."""

    def build(body="เนื้อหา", thread_id="t1", title="หัวข้อ", meta=None):
        return RawThread(id=thread_id, title=title, body=body,
                         meta=dict(meta or {}))

    return build


@pytest.fixture
def write_lexicon(tmp_path):
    """Factory writing a one-word-per-line lexicon file; returns its path."""

    def build(words, name="lexicon.txt"):
        path = tmp_path / name
        path.write_text("".join("%s\n" % word for word in words),
                        encoding="utf-8")
        return str(path)

    return build
