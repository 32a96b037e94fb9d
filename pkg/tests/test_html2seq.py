import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from webcred.html2seq import (
    PAD_GRID, PAD_ID, UNK_ID, EmptyCorpus, TagSequence, TagVocab, build_vocab, count_matrix, count_schema,
    decode_window, encode_window, read_windows, tokenize_tags, window_to_counts, write_windows,
)

TAGS = st.lists(st.sampled_from(["div", "/div", "a", "/a", "p", "/p", "br", "img", "span", "/span"]),
                max_size=60)


def test_tokenize_examples():
    assert tokenize_tags("<a href='x'>t</a>") == ["a", "/a"]
    assert tokenize_tags("<br>") == ["br"]
    page = ("<html><!-- c --><body class='x'><DIV>text<a href=/>l</A></div><br/></body></html>")
    assert tokenize_tags(page) == ["html", "body", "div", "a", "/a", "/div", "br", "/body", "/html"]


def test_tokenize_hand_traced_eight():
    html = "<html><body><p>Hi <b>there</b></p></body></html>"
    assert tokenize_tags(html) == ["html", "body", "p", "b", "/b", "/p", "/body", "/html"]


def test_build_vocab_frequency_then_lexicographic():
    v = build_vocab([["div", "div", "p"], ["div", "a", "b"]])
    assert v.ids == {"div": 2, "a": 3, "b": 4, "p": 5}
    assert build_vocab([["p", "a"]]).ids == {"a": 2, "p": 3}
    with pytest.raises(EmptyCorpus):
        build_vocab([])


@given(st.lists(TAGS, min_size=1, max_size=6), st.randoms())
def test_vocab_determinism_any_order(corpus, rnd):
    shuffled = corpus[:]
    rnd.shuffle(shuffled)
    assert build_vocab(corpus) == build_vocab(shuffled)


def test_encode_window_examples():
    v = build_vocab([["a", "b", "c", "d", "e", "f", "g", "h"]])
    seq = encode_window(list("abcdefgh"), v, 10)
    assert seq.ids[8:] == (0, 0) and PAD_ID not in seq.ids[:8]
    long = encode_window(list("abcdefgh") * 13, v, 25)
    assert len(long.ids) == 25 and long.source_len == 104
    assert encode_window(["zzz"], v, 2).ids == (UNK_ID, 0)
    with pytest.raises(ValueError):
        encode_window([], v, 0)
    with pytest.raises(ValueError):
        TagSequence((1, 2), 3, 2)


def test_window_counts_example():
    v = TagVocab({"x": 2, "y": 3})
    counts = window_to_counts(TagSequence((2, 2, 3, 0, 0), 5, 3), v)
    np.testing.assert_array_equal(counts, [0, 0, 2, 1])
    np.testing.assert_array_equal(window_to_counts(TagSequence((0, 0), 2, 0), v), [0, 0, 0, 0])


@given(TAGS, st.sampled_from(PAD_GRID[:4]) | st.integers(1, 80))
def test_count_conservation(tags, pad):
    v = build_vocab([tags, ["div"]])
    assert window_to_counts(encode_window(tags, v, pad), v).sum() == min(len(tags), pad)


@given(TAGS, st.integers(1, 60), st.integers(1, 60))
def test_prefix_monotonicity(tags, p1, p2):
    p1, p2 = sorted((p1, p2))
    v = build_vocab([tags, ["div"]])
    a = window_to_counts(encode_window(tags, v, p1), v)
    b = window_to_counts(encode_window(tags, v, p2), v)
    assert (a <= b).all()


@given(TAGS, TAGS, st.integers(1, 70))
def test_reencoding_decoded_output_is_idempotent(train, tags, pad):
    v = build_vocab([train])
    seq = encode_window(tags, v, pad)
    again = encode_window(decode_window(seq, v), v, pad)
    assert again.ids == seq.ids


def test_vocab_and_window_files_round_trip(tmp_path):
    v = build_vocab([["div", "/div", "a"]])
    v.save(tmp_path / "vocab.tsv")
    assert TagVocab.load(tmp_path / "vocab.tsv") == v
    rows = [("https://a/", encode_window(["div", "a"], v, 4)), ("https://b/", encode_window([], v, 3))]
    write_windows(tmp_path / "w.tsv", rows)
    back = read_windows(tmp_path / "w.tsv")
    assert [(u, s.ids, s.pad, s.source_len) for u, s in back] == [(u, s.ids, s.pad, s.source_len) for u, s in rows]


def test_count_matrix_and_schema():
    v = build_vocab([["div", "a"]])
    m = count_matrix([["div", "a", "q"], []], v, 10)
    assert m.shape == (2, len(v))
    np.testing.assert_array_equal(m[0], [0, 1, 1, 1])
    assert count_schema(v) == ("tag_<pad>", "tag_<unk>", "tag_a", "tag_div")
