import math
import random
import threading

import pytest

from icls.errors import EmptyQueryError, UnitNotChunkedError, UnitNotIndexedError
from icls.gateway import Gateway, MockProvider
from icls.ingestion import Chunk, token_estimate
from icls.scribe import (
    DEFAULT_ALPHA,
    EMBEDDING_DIM,
    Scribe,
    VectorStore,
    cosine,
    embed,
    terms_of,
)

from conftest import random_text


def chunks_of(texts, unit_id="u1"):
    return [
        Chunk(
            chunk_id=f"{unit_id}:{i}",
            unit_id=unit_id,
            ordinal=i,
            text=text,
            token_estimate=token_estimate(text),
        )
        for i, text in enumerate(texts)
    ]


def brute_force_rank(records, query, alpha):
    """Independent scorer: plain loops over every record, then a stable sort."""
    query_terms = set(terms_of(query))
    query_vec = embed(query)
    rows = []
    for record in records:
        dot = 0.0
        for a, b in zip(query_vec.values, record.embedding.values):
            dot += a * b
        if query_vec.norm == 0.0 or record.embedding.norm == 0.0:
            cos = 0.0
        else:
            cos = max(-1.0, min(1.0, dot / (query_vec.norm * record.embedding.norm)))
        cos_component = (1.0 + cos) / 2.0
        if query_terms:
            kw = len(query_terms & record.term_set) / len(query_terms)
        else:
            kw = 0.0
        hybrid = alpha * cos_component + (1.0 - alpha) * kw
        rows.append((record.chunk_id, cos_component, kw, hybrid, record.ordinal))
    rows.sort(key=lambda r: (-r[3], r[4]))
    return rows


class TestEmbed:
    def test_deterministic(self):
        text = "green tea ceremony in kyoto"
        assert embed(text) == embed(text)

    def test_scaled_term_frequency_same_direction(self):
        a, b = embed("tea tea"), embed("tea")
        assert cosine(a, b) == pytest.approx(1.0, abs=1e-9)

    def test_empty_text_degenerate(self):
        vec = embed("")
        assert vec.degenerate
        assert vec.norm == 0.0
        assert all(v == 0.0 for v in vec.values)

    def test_stopwords_only_degenerate(self):
        assert embed("the and of").degenerate

    def test_dimension_and_norm(self):
        vec = embed("lantern festival parade")
        assert len(vec.values) == EMBEDDING_DIM
        assert vec.norm == pytest.approx(1.0, abs=1e-9)
        assert vec.norm == pytest.approx(math.sqrt(sum(v * v for v in vec.values)), abs=1e-12)


class TestIndex:
    def test_record_count(self):
        store = VectorStore()
        assert store.index_unit("u1", chunks_of(["one text", "two text", "three text"])) == 3
        assert store.record_count("u1") == 3

    def test_reindex_replaces(self):
        store = VectorStore()
        store.index_unit("u1", chunks_of(["old alpha", "old beta"]))
        store.index_unit("u1", chunks_of(["new gamma"]))
        records = store.records_for("u1")
        assert len(records) == 1
        assert "gamma" in records[0].term_set

    def test_unchunked_rejected(self):
        store = VectorStore()
        with pytest.raises(UnitNotChunkedError):
            store.index_unit("u1", [])

    def test_not_indexed(self):
        store = VectorStore()
        with pytest.raises(UnitNotIndexedError):
            store.retrieve("u1", "query")

    def test_concurrent_reindex_never_shows_mixed_sets(self):
        store = VectorStore()
        set_a = chunks_of([f"alpha marker text {i}" for i in range(8)])
        set_b = chunks_of([f"beta marker text {i}" for i in range(5)])
        store.index_unit("u1", set_a)
        stop = threading.Event()
        violations = []

        def reader():
            while not stop.is_set():
                records = store.records_for("u1")
                kinds = {("alpha" in r.term_set, "beta" in r.term_set) for r in records}
                sizes = len(records)
                if len(kinds) != 1 or sizes not in (8, 5):
                    violations.append((kinds, sizes))

        def writer():
            for i in range(200):
                store.index_unit("u1", set_a if i % 2 else set_b)

        readers = [threading.Thread(target=reader) for _ in range(4)]
        for t in readers:
            t.start()
        writer_thread = threading.Thread(target=writer)
        writer_thread.start()
        writer_thread.join()
        stop.set()
        for t in readers:
            t.join()
        assert violations == []


class TestRetrieve:
    def corpus(self):
        texts = [
            "the tea ceremony uses a bamboo whisk",
            "woodblock printing flourished in edo",
            "noodle broth simmers overnight in the market",
            "lantern festivals light the harbor in autumn",
            "calligraphy practice builds patient brushwork",
        ]
        return chunks_of(texts)

    def test_self_similarity_ranks_first(self):
        store = VectorStore()
        chunks = self.corpus()
        store.index_unit("u1", chunks)
        results = store.retrieve("u1", chunks[2].text, k=3)
        assert results[0].chunk_id == chunks[2].chunk_id
        assert results[0].cosine_component == pytest.approx(1.0, abs=1e-9)

    def test_matches_brute_force_on_random_corpora(self):
        rng = random.Random(99)
        for _ in range(30):
            store = VectorStore()
            texts = [random_text(rng, rng.randint(3, 20)) for _ in range(rng.randint(1, 40))]
            store.index_unit("u1", chunks_of(texts))
            query = random_text(rng, rng.randint(1, 8))
            alpha = rng.choice([0.0, 0.3, 0.7, 1.0])
            got = store.retrieve("u1", query, k=len(texts), alpha=alpha)
            expected = brute_force_rank(store.records_for("u1"), query, alpha)
            assert [s.chunk_id for s in got] == [r[0] for r in expected]
            for s, row in zip(got, expected):
                assert abs(s.cosine_component - row[1]) <= 1e-9
                assert abs(s.keyword_component - row[2]) <= 1e-9
                assert abs(s.hybrid_score - row[3]) <= 1e-9

    def test_stopword_query_scores_half_cosine(self):
        store = VectorStore()
        store.index_unit("u1", self.corpus())
        results = store.retrieve("u1", "the of and", k=1, alpha=DEFAULT_ALPHA)
        top = results[0]
        assert top.cosine_component == pytest.approx(0.5, abs=1e-12)
        assert top.keyword_component == 0.0
        assert top.hybrid_score == pytest.approx(DEFAULT_ALPHA * 0.5, abs=1e-12)

    def test_alpha_one_is_pure_cosine_order(self):
        store = VectorStore()
        store.index_unit("u1", self.corpus())
        results = store.retrieve("u1", "tea whisk ceremony", k=5, alpha=1.0)
        records = store.records_for("u1")
        cos_order = brute_force_rank(records, "tea whisk ceremony", 1.0)
        assert [s.chunk_id for s in results] == [r[0] for r in cos_order]
        for s in results:
            assert s.hybrid_score == pytest.approx(s.cosine_component, abs=1e-12)

    def test_alpha_zero_is_pure_keyword_order(self):
        store = VectorStore()
        store.index_unit("u1", self.corpus())
        results = store.retrieve("u1", "lantern harbor broth", k=5, alpha=0.0)
        for s in results:
            assert s.hybrid_score == pytest.approx(s.keyword_component, abs=1e-12)
        keyword_scores = [s.keyword_component for s in results]
        assert keyword_scores == sorted(keyword_scores, reverse=True)

    def test_k_clamped(self):
        store = VectorStore()
        store.index_unit("u1", self.corpus())
        assert len(store.retrieve("u1", "tea", k=99)) == 5

    def test_empty_query(self):
        store = VectorStore()
        store.index_unit("u1", self.corpus())
        with pytest.raises(EmptyQueryError):
            store.retrieve("u1", "   ")

    def test_score_bounds_on_random_inputs(self):
        rng = random.Random(5)
        store = VectorStore()
        store.index_unit("u1", chunks_of([random_text(rng, 12) for _ in range(25)]))
        for _ in range(50):
            alpha = rng.random()
            for s in store.retrieve("u1", random_text(rng, 4), k=25, alpha=alpha):
                assert 0.0 <= s.cosine_component <= 1.0
                assert 0.0 <= s.keyword_component <= 1.0
                assert 0.0 <= s.hybrid_score <= 1.0

    def test_ties_break_by_ordinal(self):
        store = VectorStore()
        store.index_unit("u1", chunks_of(["same tea text", "same tea text", "same tea text"]))
        results = store.retrieve("u1", "unrelated query words", k=3)
        assert [s.chunk_id for s in results] == ["u1:0", "u1:1", "u1:2"]


class TestSerialization:
    def test_round_trip_bit_exact(self):
        rng = random.Random(21)
        store = VectorStore()
        store.index_unit("u1", chunks_of([random_text(rng, 15) for _ in range(6)]))
        store.index_unit("u2", chunks_of([random_text(rng, 9) for _ in range(3)], unit_id="u2"))
        rows = store.to_rows()
        restored = VectorStore.from_rows(rows)
        assert restored.to_rows() == rows
        for unit_id in ("u1", "u2"):
            for a, b in zip(store.records_for(unit_id), restored.records_for(unit_id)):
                assert a.embedding.values == b.embedding.values  # exact float equality
                assert a.term_set == b.term_set
                assert a.text == b.text


class TestChat:
    def scribe(self):
        store = VectorStore()
        store.index_unit(
            "u1",
            chunks_of(
                [
                    "the tea ceremony uses a bamboo whisk",
                    "lantern festivals light the harbor",
                    "noodle broth simmers in the market",
                ]
            ),
        )
        return Scribe(store, Gateway(MockProvider()))

    def test_deterministic_answer(self):
        scribe = self.scribe()
        a = scribe.chat("u1", "What does the ceremony use?")
        b = scribe.chat("u1", "What does the ceremony use?")
        assert a.answer_text == b.answer_text
        assert a.used_chunk_ids == b.used_chunk_ids
        assert a.question == "What does the ceremony use?"

    def test_k_larger_than_corpus_uses_all(self):
        answer = self.scribe().chat("u1", "tea?", k=50)
        assert len(answer.used_chunk_ids) == 3

    def test_empty_question(self):
        with pytest.raises(EmptyQueryError):
            self.scribe().chat("u1", "")

    def test_used_chunks_in_score_order(self):
        scribe = self.scribe()
        answer = scribe.chat("u1", "tea ceremony whisk", k=2)
        ranked = scribe.store.retrieve("u1", "tea ceremony whisk", k=2)
        assert list(answer.used_chunk_ids) == [s.chunk_id for s in ranked]
