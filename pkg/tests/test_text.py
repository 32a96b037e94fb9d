import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import dense_lexrank, full_svd_lsa
from webcred.text import (
    cosine_similarity, lexrank_scores, lexrank_top, lexrank_transition, lsa_scores, lsa_top, tfidf_matrix,
    words,
)


def test_words_lowercase_and_apostrophes():
    assert words("Don't STOP, it's 2024!") == ["don't", "stop", "it's", "2024"]


def test_tfidf_smoothed_idf():
    m, vocab = tfidf_matrix(["a b", "a"])
    assert vocab == ["a", "b"]
    idf_b = np.log(3 / 2) + 1
    np.testing.assert_allclose(m, [[1.0, idf_b], [1.0, 0.0]])


def test_cosine_zero_rows():
    sim = cosine_similarity(np.array([[1.0, 0.0], [0.0, 0.0]]))
    np.testing.assert_allclose(sim, [[1.0, 0.0], [0.0, 0.0]])


def test_lexrank_identical_sentences_uniform():
    s = ["the cat sat"] * 3
    np.testing.assert_allclose(lexrank_scores(s), [1 / 3] * 3, atol=1e-12)
    assert lexrank_top(s, 2) == [0, 1]


def test_lexrank_fewer_than_n():
    assert lexrank_top(["only one"], 3) == [0]
    assert lexrank_top([], 3) == []


def test_lexrank_orthogonal_sentence_last():
    s = ["markets rose as banks lent", "banks lent more as markets rose", "markets and banks rose",
         "penguins swim in cold water"]
    top = lexrank_top(s, 4)
    assert top[-1] == 3
    np.testing.assert_allclose(lexrank_scores(s), dense_lexrank(lexrank_transition(s)), atol=1e-6)


def test_lexrank_rejects_bad_n():
    with pytest.raises(ValueError):
        lexrank_top(["a"], 0)


_WORDS = st.sampled_from("alpha beta gamma delta eps zeta eta theta".split())
_SENTENCE = st.lists(_WORDS, min_size=0, max_size=6).map(" ".join)


@given(st.lists(_SENTENCE, min_size=1, max_size=5))
def test_lexrank_matches_dense_eigen_solution(sentences):
    ours = lexrank_scores(sentences)
    ref = dense_lexrank(lexrank_transition(sentences))
    np.testing.assert_allclose(ours, ref, atol=1e-6)
    assert ours.sum() == pytest.approx(1.0)


@given(st.lists(_SENTENCE, min_size=1, max_size=6))
def test_lsa_matches_full_svd(sentences):
    a = tfidf_matrix(sentences)[0].T
    ref = full_svd_lsa(a) if a.size else np.zeros(len(sentences))
    np.testing.assert_allclose(lsa_scores(sentences), ref, atol=1e-9)


def test_lsa_single_and_identical():
    assert lsa_top(["just one"], 2) == [0]
    s = ["same words here"] * 4
    sc = lsa_scores(s)
    assert np.ptp(sc) < 1e-12
    assert lsa_top(s, 3) == [0, 1, 2]


def test_lsa_majority_topic_first():
    s = ["stocks bonds markets rose sharply today", "stocks and bonds markets rose today",
         "markets rose as stocks and bonds rallied", "penguins swim"]
    assert lsa_top(s, 1)[0] in (0, 1, 2)
    a = tfidf_matrix(s)[0].T
    assert int(np.argmax(full_svd_lsa(a))) == lsa_top(s, 1)[0]
