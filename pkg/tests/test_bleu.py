import pytest
from hypothesis import given, settings, strategies as st

from bleu_oracle import reference_bleu
from conftest import DATA
from mbse.bleu import GenPair, filter_generated, format_pairs_tsv, read_pairs_tsv, sentence_bleu

FOX = "the quick brown fox jumps over the lazy dog today"


def test_identical_is_one():
    assert sentence_bleu(FOX, FOX) == 1.0


def test_disjoint_is_zero():
    assert sentence_bleu("a b c d", "e f g h") == 0.0


def test_one_substitution():
    # (9/10 * 7/9 * 5/8 * 3/7) ** (1/4), checked against nltk
    hyp = FOX.replace("fox", "cat")
    assert sentence_bleu(FOX, hyp) == pytest.approx(0.6580370064762462, abs=1e-12)
    assert reference_bleu(FOX, hyp) == pytest.approx(0.6580370064762462, abs=1e-12)


def test_case_insensitive_and_token_lists():
    assert sentence_bleu(FOX.upper(), FOX) == 1.0
    assert sentence_bleu(FOX.split(), FOX.split()) == 1.0


def test_smoothing_none():
    assert sentence_bleu("a b c d", "a x c y", smoothing="none") == 0.0
    assert sentence_bleu("a b c d", "a x c y") > 0.0
    with pytest.raises(ValueError):
        sentence_bleu("a", "a", smoothing="laplace")


def test_empty_inputs():
    assert sentence_bleu("a b", "") == 0.0
    with pytest.raises(ValueError):
        sentence_bleu("", "a b")


def test_fixture_matches_reference():
    for p in read_pairs_tsv(DATA / "genpairs.tsv"):
        assert abs(p.bleu - reference_bleu(p.original_text, p.generated_text)) <= 1e-6


def test_filter_band():
    pairs = [GenPair("x", "y", b, str(i)) for i, b in enumerate([0.0, 0.05, 0.1, 0.5, 0.9, 0.95, 1.0])]
    kept = filter_generated(pairs)
    assert [p.bleu for p in kept] == [0.1, 0.5, 0.9]


@pytest.mark.parametrize("low, high", [(0.9, 0.1), (0.5, 0.5), (-0.1, 0.5), (0.2, 1.5)])
def test_filter_bad_thresholds(low, high):
    with pytest.raises(ValueError):
        filter_generated([], low, high)


def test_tsv_round_trip(tmp_path):
    path = tmp_path / "p.tsv"
    path.write_text(f"a\t{FOX}\t{FOX}\n\nb\t{FOX}\tsomething else\n", encoding="utf-8")
    pairs = read_pairs_tsv(path)
    assert [p.id for p in pairs] == ["a", "b"]
    assert format_pairs_tsv(pairs[:1]) == f"a\t{FOX}\t{FOX}\t1.000000\n"
    path.write_text("only\ttwo\n", encoding="utf-8")
    with pytest.raises(ValueError, match="3 tab-separated"):
        read_pairs_tsv(path)


words = st.lists(st.sampled_from("a b c d e f".split()), min_size=1, max_size=15)


@settings(max_examples=200, deadline=None)
@given(words, words, st.floats(0, 0.95), st.floats(0.01, 1))
def test_bounds_and_band_membership(ref, hyp, low, width):
    b = sentence_bleu(ref, hyp)
    assert 0.0 <= b <= 1.0
    assert b == pytest.approx(reference_bleu(" ".join(ref), " ".join(hyp)), abs=1e-9)
    high = min(1.0, low + width)
    kept = filter_generated([GenPair("", "", b)], low, high)
    assert bool(kept) == (low <= b <= high)
