"""Frequency tables over corpora and token pools."""

import io

import pytest

from mixcat import (
    count_frequencies,
    count_pools,
    parse_corpus,
    soft_clusters,
    cluster_frequencies,
)


class TestCountFrequencies:
    def test_fixture_counts(self, sports_corpus):
        table = count_frequencies(sports_corpus)
        expected_c1 = {"racket": 4, "stroke": 1, "shot": 2, "goal": 1, "kick": 0, "ball": 2}
        expected_c2 = {"racket": 0, "stroke": 0, "shot": 0, "goal": 3, "kick": 2, "ball": 2}
        for word, count in expected_c1.items():
            assert table.count("c1", word) == count
        for word, count in expected_c2.items():
            assert table.count("c2", word) == count
        assert table.category_total("c1") == 10
        assert table.category_total("c2") == 7

    def test_vocabulary_first_appearance_order(self, sports_corpus):
        table = count_frequencies(sports_corpus)
        assert table.vocabulary == ("racket", "stroke", "shot", "ball", "goal", "kick")

    def test_word_total_sums_categories(self, sports_corpus):
        table = count_frequencies(sports_corpus)
        assert table.word_total("ball") == 4
        assert table.word_total("racket") == 4
        assert table.word_total("missing") == 0

    def test_multi_label_document_counts_into_every_label(self):
        corpus = parse_corpus(io.StringIO("a,b\tx x y\nb\ty\n"))
        table = count_frequencies(corpus)
        assert table.count("a", "x") == 2
        assert table.count("b", "x") == 2
        # the marginal doubles with the double counting, keeping
        # per-category shares summing to one
        assert table.word_total("x") == 4
        assert table.count("a", "x") / table.word_total("x") == 0.5

    def test_as_dict(self, sports_corpus):
        table = count_frequencies(sports_corpus)
        nested = table.as_dict()
        assert nested["c2"]["kick"] == 2
        nested["c2"]["kick"] = 99
        assert table.count("c2", "kick") == 2  # a copy, not a view


class TestCountPools:
    def test_binary_fixture(self, binary_table):
        assert binary_table.categories == ("c1", "~c1")
        assert binary_table.count("c1", "racket") == 4
        assert binary_table.count("~c1", "goal") == 3
        assert binary_table.count("~c1", "racket") == 0
        assert binary_table.category_total("~c1") == 7

    def test_duplicate_pool_name(self):
        with pytest.raises(ValueError, match="duplicate pool name"):
            count_pools([("a", ("x",)), ("a", ("y",))])

    def test_empty_pool_allowed(self):
        table = count_pools([("a", ("x",)), ("b", ())])
        assert table.category_total("b") == 0


class TestClusterFrequencies:
    def test_threshold_fixture(self, binary_table):
        clustering = soft_clusters(binary_table, 0.5)
        freqs = cluster_frequencies(binary_table, clustering)
        # k1 = {racket, stroke, shot}; k2 = {goal, kick}; ball discarded
        assert freqs[("c1", 0)] == 7
        assert freqs[("c1", 1)] == 1
        assert freqs[("~c1", 0)] == 0
        assert freqs[("~c1", 1)] == 5
        # the discarded word's counts appear nowhere
        total = sum(freqs.values())
        assert total == 17 - binary_table.word_total("ball")
