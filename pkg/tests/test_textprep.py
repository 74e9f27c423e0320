import random

from hypothesis import given, strategies as st

from geoperc.textprep import (
    MISC,
    apply_stopwords,
    build_stopwords,
    build_vocab,
    normalize_text,
)


class TestNormalizeText:
    def test_hashtags_mentions_urls_dropped(self):
        assert normalize_text("Loving #NYC! Check http://t.co/x @bob") == [
            "loving",
            "check",
        ]

    def test_empty_input(self):
        assert normalize_text("") == []

    def test_lowercase_and_punctuation(self):
        assert normalize_text("I LOVE driving.") == ["i", "love", "driving"]

    def test_interior_punctuation_deleted_not_split(self):
        assert normalize_text("I-95 is jammed") == ["i95", "is", "jammed"]

    def test_url_variants(self):
        assert normalize_text("see https://x.com and www.x.com now") == ["see", "and", "now"]

    def test_digits_retained(self):
        assert normalize_text("route 66") == ["route", "66"]

    @given(st.text(max_size=80))
    def test_idempotent(self, raw):
        once = normalize_text(raw)
        assert normalize_text(" ".join(once)) == once


class TestStopwords:
    def test_unique_maximum(self):
        stream = ["z"] * 5 + ["a"] * 2 + ["b"] * 2
        assert build_stopwords(stream, size=1).words == {"z"}

    def test_tie_breaks_lexicographically(self):
        assert build_stopwords(["a", "b", "a", "b"], size=1).words == {"a"}

    def test_size_zero(self):
        assert build_stopwords(["a", "b"], size=0).words == set()

    def test_fewer_distinct_than_size(self):
        assert build_stopwords(["a", "b"], size=10).words == {"a", "b"}

    @given(st.lists(st.sampled_from("abcde"), max_size=50), st.randoms())
    def test_permutation_invariant(self, stream, rnd):
        shuffled = list(stream)
        rnd.shuffle(shuffled)
        assert build_stopwords(stream, 2).words == build_stopwords(shuffled, 2).words

    def test_apply_removes_and_preserves_order(self):
        stops = build_stopwords(["i", "i"], size=1)
        assert apply_stopwords(["i", "love", "driving"], stops) == ["love", "driving"]
        assert apply_stopwords([], stops) == []
        the = build_stopwords(["the"], size=1)
        assert apply_stopwords(["the", "the"], the) == []

    @given(st.lists(st.sampled_from("abcde"), max_size=30))
    def test_apply_idempotent(self, tokens):
        stops = build_stopwords(tokens, size=2)
        once = apply_stopwords(tokens, stops)
        assert apply_stopwords(once, stops) == once


class TestVocab:
    def test_singletons_mapped(self):
        vocabs, fractions = build_vocab({"c": [["a", "a", "b"]]}, singleton_threshold=1)
        assert vocabs["c"].kept == {"a"}
        assert vocabs["c"].map_token("b") == MISC
        assert fractions["c"] == 1 / 3

    def test_threshold_zero_disables_misc(self):
        vocabs, fractions = build_vocab({"c": [["a", "b"]]}, singleton_threshold=0)
        assert vocabs["c"].kept == {"a", "b"}
        assert fractions["c"] == 0.0

    def test_all_singletons(self):
        vocabs, fractions = build_vocab({"c": [["b"]]}, singleton_threshold=1)
        assert vocabs["c"].kept == set()
        assert fractions["c"] == 1.0

    def test_per_cell_decision(self):
        streams = {"x": [["a", "a"]], "y": [["a"]]}
        vocabs, _ = build_vocab(streams, singleton_threshold=1)
        assert vocabs["x"].map_token("a") == "a"
        assert vocabs["y"].map_token("a") == MISC

    @given(st.lists(st.lists(st.sampled_from("abc"), max_size=6), max_size=8))
    def test_singletons_never_kept(self, docs):
        vocabs, _ = build_vocab({"c": docs}, singleton_threshold=1)
        freq = {}
        for doc in docs:
            for t in doc:
                freq[t] = freq.get(t, 0) + 1
        for tok, n in freq.items():
            if n == 1:
                assert tok not in vocabs["c"].kept
