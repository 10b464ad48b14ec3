import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kgchat.embeddings import DEFAULT_STOPWORDS, WordVectorTable, similarity, tokenize


def test_tokenize_running_example():
    assert tokenize("Who did the score?") == ["who", "did", "the", "score"]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_possessive():
    assert tokenize("band's music") == ["band", "music"]
    assert tokenize("Genre of this band’s music?") == [
        "genre", "of", "this", "band", "music",
    ]


def test_tokenize_punctuation_and_case():
    assert tokenize("And Alan Arkin was behind ...?") == [
        "and", "alan", "arkin", "was", "behind",
    ]


def test_stopword_list_covers_paper_words():
    for w in ("and", "of", "to"):
        assert w in DEFAULT_STOPWORDS


@pytest.fixture()
def table():
    return WordVectorTable(
        {
            "red": np.array([1.0, 0.0]),
            "blue": np.array([0.0, 1.0]),
            "crimson": np.array([0.8, 0.6]),
        }
    )


def test_phrase_vector_single_token(table):
    assert np.allclose(table.phrase_vector("red"), [1.0, 0.0])


def test_phrase_vector_mean(table):
    assert np.allclose(table.phrase_vector("red blue"), [0.5, 0.5])


def test_phrase_vector_all_stopwords(table):
    assert table.phrase_vector("and of the") is None


def test_phrase_vector_keep_stopwords_flag():
    t = WordVectorTable({"the": np.array([2.0, 0.0]), "red": np.array([0.0, 2.0])})
    kept = t.phrase_vector("the red", drop_stopwords=False)
    assert np.allclose(kept, [1.0, 1.0])
    dropped = t.phrase_vector("the red")
    assert np.allclose(dropped, [0.0, 2.0])


def test_similarity_identical_and_antiparallel(table):
    v = np.array([0.3, 0.4])
    assert similarity(v, v) == pytest.approx(1.0)
    assert similarity(v, -v) == pytest.approx(0.0)


def test_similarity_orthogonal():
    assert similarity(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == pytest.approx(0.5)


def test_similarity_zero_norm_is_zero(caplog):
    assert similarity(np.zeros(2), np.array([1.0, 0.0])) == 0.0


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.floats(-5, 5), min_size=3, max_size=3),
    st.lists(st.floats(-5, 5), min_size=3, max_size=3),
    st.floats(0.1, 7.0),
)
def test_similarity_symmetric_scale_invariant_bounded(a, b, alpha):
    va, vb = np.array(a), np.array(b)
    s = similarity(va, vb)
    assert 0.0 <= s <= 1.0
    assert s == pytest.approx(similarity(vb, va))
    if np.linalg.norm(va) > 1e-6 and np.linalg.norm(vb) > 1e-6:
        assert similarity(alpha * va, vb) == pytest.approx(s, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.permutations(["red", "blue", "crimson"]))
def test_phrase_vector_permutation_invariant(order):
    t = WordVectorTable(
        {
            "red": np.array([1.0, 0.0]),
            "blue": np.array([0.0, 1.0]),
            "crimson": np.array([0.8, 0.6]),
        }
    )
    base = t.phrase_vector("red blue crimson")
    assert np.allclose(t.phrase_vector(" ".join(order)), base)


def test_load_save_roundtrip(tmp_path):
    src = "3 2\nred 1.0 0.0\nblue 0.0 1.0\ncrimson 0.8 0.6\n"
    t = WordVectorTable.load(io.StringIO(src))
    assert len(t) == 3 and t.dim == 2
    out = io.StringIO()
    t.save(out)
    t2 = WordVectorTable.load(io.StringIO(out.getvalue()))
    for w in ("red", "blue", "crimson"):
        assert np.allclose(t.vector(w), t2.vector(w))


def test_load_rejects_bad_dim():
    with pytest.raises(ValueError):
        WordVectorTable.load(io.StringIO("1 3\nred 1.0 0.0\n"))


def test_stopword_file(tmp_path):
    vec = tmp_path / "v.txt"
    vec.write_text("1 2\nred 1.0 0.0\n")
    stop = tmp_path / "s.txt"
    stop.write_text("foo\nbar\n")
    t = WordVectorTable.load(str(vec), str(stop))
    assert t.is_stopword("foo")
    assert not t.is_stopword("the")


def test_fixture_score_composer_cosine(vectors):
    vs = vectors.vector("score")
    vc = vectors.vector("composer")
    cos = float(vs @ vc / (np.linalg.norm(vs) * np.linalg.norm(vc)))
    assert cos == pytest.approx(0.6, abs=1e-9)
