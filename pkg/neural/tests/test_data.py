import pytest

from premsel_neural.data import (
    PairExample,
    read_corpus,
    read_pair_file,
    read_score_file,
    scoring_pool,
    write_pair_file,
    write_score_file,
)


class TestCorpusReader:
    def test_reads_all_kinds(self, corpus_dir):
        entries = read_corpus(corpus_dir)
        assert len(entries) == 14
        assert entries["definition:group"].kind == "Definition"
        assert entries["lagrange_theorem"].kind == "Theorem"
        assert "subgroup" in entries["lagrange_theorem"].statement_text

    def test_missing_directory(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_corpus(tmp_path / "nope")

    def test_empty_directory_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            read_corpus(tmp_path)


class TestPairFiles:
    def test_round_trip(self, tmp_path):
        pairs = [
            PairExample("q1", "c1", "text a", "text b", 1),
            PairExample("q1", "c2", "text a", "other text", 0),
        ]
        path = write_pair_file(pairs, tmp_path / "pairs.tsv")
        assert read_pair_file(path) == pairs

    def test_malformed_row_rejected(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("only\tthree\tfields\n", encoding="utf-8")
        with pytest.raises(ValueError):
            read_pair_file(path)


class TestScoreFiles:
    def test_round_trip(self, tmp_path):
        records = [("q1", "c1", 0.25), ("q1", "c2", 1.0)]
        path = write_score_file(records, tmp_path / "scores.tsv")
        assert read_score_file(path) == records

    def test_non_finite_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            write_score_file([("q", "c", float("nan"))], tmp_path / "s.tsv")


class TestScoringPool:
    def test_covers_pool_and_excludes_self(self, corpus_dir):
        entries = read_corpus(corpus_dir)
        pairs = scoring_pool(entries, ["lagrange_theorem"])
        assert len(pairs) == len(entries) - 1
        assert all(p.candidate_id != "lagrange_theorem" for p in pairs)
        assert all(p.query_id == "lagrange_theorem" for p in pairs)

    def test_unknown_query_rejected(self, corpus_dir):
        entries = read_corpus(corpus_dir)
        with pytest.raises(KeyError):
            scoring_pool(entries, ["nope"])

    def test_restricted_candidates(self, corpus_dir):
        entries = read_corpus(corpus_dir)
        pairs = scoring_pool(entries, ["euclid_infinitude"], ["definition:prime", "fatou_lemma"])
        assert [p.candidate_id for p in pairs] == ["definition:prime", "fatou_lemma"]
