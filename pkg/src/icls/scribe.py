"""Vector store, hybrid retrieval, and retrieval-augmented chat.

Retrieval ranks a unit's chunks by a convex mix of two signals:

    cosine_component  = (1 + cos(query, chunk)) / 2          in [0, 1]
    keyword_component = |query_terms ∩ chunk_terms| / |query_terms|
    hybrid_score      = alpha * cosine + (1 - alpha) * keyword

The default embedder hashes normalized terms into a fixed number of buckets
weighted by term frequency, then L2-normalizes — deterministic, offline,
and exactly reproducible by a brute-force scorer. An external embedding
service can plug in behind the same callable seam.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
import struct
import threading
from collections import Counter
from dataclasses import dataclass

from .errors import (
    EmptyQueryError,
    InvalidParamsError,
    UnitNotChunkedError,
    UnitNotIndexedError,
)
from .gateway import Gateway, PromptKind, render_chat_prompt
from .ingestion import Chunk

EMBEDDING_DIM = 256
DEFAULT_TOP_K = 4
DEFAULT_ALPHA = 0.7

STOPWORDS = frozenset(
    "a an the and or but if then else of in on at to for with from by as is are was "
    "were be been being it its this that these those i you he she we they them his "
    "her their our your my me us not no nor so too very can could will would just "
    "do does did done have has had having what which who whom when where why how "
    "all any both each few more most other some such only own same than also about "
    "into over under again further once here there".split()
)

_TERM_RE = re.compile(r"[a-z0-9]+")


def terms_of(text: str) -> list[str]:
    """Lowercased alphanumeric terms with stopwords removed."""
    return [t for t in _TERM_RE.findall(text.lower()) if t not in STOPWORDS]


def _bucket(term: str, dim: int) -> int:
    digest = hashlib.blake2b(term.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") % dim


@dataclass(frozen=True)
class EmbeddingVector:
    values: tuple[float, ...]
    norm: float

    @property
    def degenerate(self) -> bool:
        return self.norm == 0.0


def embed(text: str, dim: int = EMBEDDING_DIM) -> EmbeddingVector:
    """Term-frequency hash embedding, L2-normalized. Empty term set → zero vector."""
    raw = [0.0] * dim
    for term, count in Counter(terms_of(text)).items():
        raw[_bucket(term, dim)] += float(count)
    norm = math.sqrt(sum(v * v for v in raw))
    if norm == 0.0:
        return EmbeddingVector(values=tuple(raw), norm=0.0)
    values = tuple(v / norm for v in raw)
    return EmbeddingVector(values=values, norm=math.sqrt(sum(v * v for v in values)))


def cosine(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """Cosine similarity; 0 when either vector is degenerate."""
    if a.degenerate or b.degenerate:
        return 0.0
    dot = sum(x * y for x, y in zip(a.values, b.values))
    return max(-1.0, min(1.0, dot / (a.norm * b.norm)))


@dataclass(frozen=True)
class VectorRecord:
    chunk_id: str
    unit_id: str
    ordinal: int
    embedding: EmbeddingVector
    term_set: frozenset
    text: str


@dataclass(frozen=True)
class ScoredChunk:
    chunk_id: str
    cosine_component: float
    keyword_component: float
    hybrid_score: float


@dataclass(frozen=True)
class ChatAnswer:
    answer_text: str
    used_chunk_ids: tuple[str, ...]
    question: str


def score_record(
    record: VectorRecord,
    query_vec: EmbeddingVector,
    query_terms: set,
    alpha: float,
) -> ScoredChunk:
    cos_component = (1.0 + cosine(query_vec, record.embedding)) / 2.0
    if query_terms:
        keyword_component = len(query_terms & record.term_set) / len(query_terms)
    else:
        keyword_component = 0.0
    hybrid = alpha * cos_component + (1.0 - alpha) * keyword_component
    return ScoredChunk(
        chunk_id=record.chunk_id,
        cosine_component=cos_component,
        keyword_component=keyword_component,
        hybrid_score=hybrid,
    )


class VectorStore:
    """Per-unit chunk index with atomic replacement on re-index.

    Readers take a snapshot reference of a unit's record tuple, so a
    concurrent re-index is invisible to an in-flight retrieval: it sees
    either the old or the new record set, never a mix.
    """

    def __init__(self, dim: int = EMBEDDING_DIM, embedder=embed):
        self.dim = dim
        self._embedder = embedder
        self._records: dict[str, tuple[VectorRecord, ...]] = {}
        self._write_lock = threading.Lock()

    def index_unit(self, unit_id: str, chunks: list[Chunk]) -> int:
        if not chunks:
            raise UnitNotChunkedError(f"unit {unit_id} has no chunks to index")
        records = tuple(
            VectorRecord(
                chunk_id=c.chunk_id,
                unit_id=unit_id,
                ordinal=c.ordinal,
                embedding=self._embedder(c.text, self.dim),
                term_set=frozenset(terms_of(c.text)),
                text=c.text,
            )
            for c in sorted(chunks, key=lambda c: c.ordinal)
        )
        with self._write_lock:
            self._records[unit_id] = records
        return len(records)

    def drop_unit(self, unit_id: str) -> None:
        with self._write_lock:
            self._records.pop(unit_id, None)

    def has_unit(self, unit_id: str) -> bool:
        return unit_id in self._records

    def records_for(self, unit_id: str) -> tuple[VectorRecord, ...]:
        records = self._records.get(unit_id)
        if records is None:
            raise UnitNotIndexedError(f"unit {unit_id} is not indexed")
        return records

    def record_count(self, unit_id: str) -> int:
        return len(self._records.get(unit_id, ()))

    def retrieve(
        self,
        unit_id: str,
        query: str,
        k: int = DEFAULT_TOP_K,
        alpha: float = DEFAULT_ALPHA,
    ) -> list[ScoredChunk]:
        records = self.records_for(unit_id)
        ranked = self.score_all(records, query, alpha)
        return [scored for scored, _ in ranked[: min(k, len(ranked))]]

    def score_all(self, records, query: str, alpha: float):
        """Score and rank a record snapshot; shared by retrieve and chat."""
        if not query or not query.strip():
            raise EmptyQueryError("query must be non-empty")
        if not 0.0 <= alpha <= 1.0:
            raise InvalidParamsError("alpha must be in [0, 1]")
        query_vec = self._embedder(query, self.dim)
        query_terms = set(terms_of(query))
        scored = [
            (score_record(record, query_vec, query_terms, alpha), record)
            for record in records
        ]
        scored.sort(key=lambda pair: (-pair[0].hybrid_score, pair[1].ordinal))
        return scored

    # -- persistence ---------------------------------------------------------

    def to_rows(self) -> list[tuple]:
        """(chunk_id, unit_id, ordinal, embedding blob, terms json, text) rows."""
        rows = []
        for unit_id in sorted(self._records):
            for record in self._records[unit_id]:
                rows.append(
                    (
                        record.chunk_id,
                        record.unit_id,
                        record.ordinal,
                        pack_embedding(record.embedding),
                        json.dumps(sorted(record.term_set)),
                        record.text,
                    )
                )
        return rows

    @classmethod
    def from_rows(cls, rows, dim: int = EMBEDDING_DIM, embedder=embed) -> "VectorStore":
        store = cls(dim=dim, embedder=embedder)
        grouped: dict[str, list[VectorRecord]] = {}
        for chunk_id, unit_id, ordinal, blob, terms_json, text in rows:
            grouped.setdefault(unit_id, []).append(
                VectorRecord(
                    chunk_id=chunk_id,
                    unit_id=unit_id,
                    ordinal=ordinal,
                    embedding=unpack_embedding(blob),
                    term_set=frozenset(json.loads(terms_json)),
                    text=text,
                )
            )
        for unit_id, records in grouped.items():
            records.sort(key=lambda r: r.ordinal)
            store._records[unit_id] = tuple(records)
        return store


def pack_embedding(embedding: EmbeddingVector) -> bytes:
    return struct.pack(f"<{len(embedding.values)}d", *embedding.values)


def unpack_embedding(blob: bytes) -> EmbeddingVector:
    values = struct.unpack(f"<{len(blob) // 8}d", blob)
    return EmbeddingVector(values=values, norm=math.sqrt(sum(v * v for v in values)))


class Scribe:
    """Retrieval-augmented chat scoped to a single unit's content."""

    def __init__(
        self,
        store: VectorStore,
        gateway: Gateway,
        top_k: int = DEFAULT_TOP_K,
        alpha: float = DEFAULT_ALPHA,
    ):
        self.store = store
        self.gateway = gateway
        self.top_k = top_k
        self.alpha = alpha

    def chat(self, unit_id: str, question: str, k: int | None = None) -> ChatAnswer:
        k = self.top_k if k is None else k
        if k <= 0:
            raise InvalidParamsError("k must be positive")
        records = self.store.records_for(unit_id)
        ranked = self.store.score_all(records, question, self.alpha)[: min(k, len(records))]
        texts = [record.text for _, record in ranked]
        prompt = render_chat_prompt(texts, question)
        completion = self.gateway.run(PromptKind.CHAT, prompt)
        return ChatAnswer(
            answer_text=completion.text,
            used_chunk_ids=tuple(scored.chunk_id for scored, _ in ranked),
            question=question,
        )
