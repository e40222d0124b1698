"""Source ingestion: normalization, token estimation, chunking, window checks.

Uploaded documents and video transcripts are reduced to normalized plain
text before anything downstream (summaries, quizzes, retrieval) sees them.
Token counts use a character heuristic so the whole pipeline stays
dependency-free and deterministic.
"""

from __future__ import annotations

import math
import re
import unicodedata
from dataclasses import dataclass

from .errors import EmptySourceError, InvalidParamsError, UndecodableBytesError

# Heuristic: one token per 4 characters of normalized text.
CHARS_PER_TOKEN = 4

DEFAULT_CHUNK_TOKENS = 256
DEFAULT_OVERLAP_TOKENS = 64
DEFAULT_REPLY_RESERVE = 1024

SOURCE_KINDS = ("plain_text", "transcript_lines", "pdf_text")

_TIMESTAMP_RE = re.compile(r"^\s*\d{1,3}:\d{2}(?::\d{2})?\s*")


def token_estimate(text: str) -> int:
    """ceil(len/4) token estimate; deterministic and pure."""
    return math.ceil(len(text) / CHARS_PER_TOKEN)


@dataclass(frozen=True)
class DocumentText:
    unit_id: str
    text: str
    token_estimate: int


@dataclass(frozen=True)
class Chunk:
    chunk_id: str
    unit_id: str
    ordinal: int
    text: str
    token_estimate: int
    # Chars shared with the previous chunk; dropping them while stitching
    # in ordinal order reconstructs the source exactly.
    lead_overlap: int = 0


def normalize_text(text: str) -> str:
    """Collapse all whitespace runs to single spaces and drop control chars."""
    collapsed = " ".join(text.split())
    return "".join(
        ch for ch in collapsed if not unicodedata.category(ch).startswith("C")
    )


def _decode(source: bytes | str) -> str:
    if isinstance(source, bytes):
        try:
            return source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise UndecodableBytesError(f"source is not valid UTF-8: {exc}") from exc
    return source


def extract_text(source, unit_id: str, kind: str = "plain_text") -> DocumentText:
    """Turn an upload payload into normalized ``DocumentText``.

    ``kind`` selects the adapter: plain text and pre-extracted PDF text are
    taken as-is; ``transcript_lines`` strips a leading ``MM:SS``/``HH:MM:SS``
    timestamp from each line. Binary formats must be converted to text by an
    external adapter before reaching this seam.
    """
    if kind not in SOURCE_KINDS:
        raise InvalidParamsError(f"unknown source kind: {kind!r}")

    if kind == "transcript_lines":
        if isinstance(source, (bytes, str)):
            lines = _decode(source).splitlines()
        else:
            lines = [_decode(line) for line in source]
        text = " ".join(_TIMESTAMP_RE.sub("", line) for line in lines)
    else:
        text = _decode(source)

    normalized = normalize_text(text)
    if not normalized:
        raise EmptySourceError("source contains no text")
    return DocumentText(unit_id=unit_id, text=normalized, token_estimate=token_estimate(normalized))


def _word_start_at_or_before(text: str, pos: int) -> int:
    while pos > 0 and text[pos - 1] != " ":
        pos -= 1
    return pos


def chunk(
    doc: DocumentText,
    chunk_size: int = DEFAULT_CHUNK_TOKENS,
    overlap: int = DEFAULT_OVERLAP_TOKENS,
) -> list[Chunk]:
    """Split a document into overlapping chunks of at most ``chunk_size`` tokens.

    Window arithmetic happens in character space (4 chars per token); cut
    points snap backward to the nearest whitespace so chunks end on word
    boundaries whenever the text allows it. Adjacent chunks share exactly
    the overlap region, recorded as ``lead_overlap`` on the later chunk.
    """
    if overlap < 0 or chunk_size <= 0 or overlap >= chunk_size:
        raise InvalidParamsError(
            f"need 0 <= overlap < chunk_size, got overlap={overlap} chunk_size={chunk_size}"
        )

    text = doc.text
    n = len(text)
    window = chunk_size * CHARS_PER_TOKEN
    cover = overlap * CHARS_PER_TOKEN

    chunks: list[Chunk] = []
    start = 0
    prev_end = 0
    while True:
        hard_end = start + window
        if hard_end >= n:
            end = n
        else:
            cut = text.rfind(" ", start + 1, hard_end)
            end = cut + 1 if cut != -1 else hard_end
        ordinal = len(chunks)
        piece = text[start:end]
        chunks.append(
            Chunk(
                chunk_id=f"{doc.unit_id}:{ordinal}",
                unit_id=doc.unit_id,
                ordinal=ordinal,
                text=piece,
                token_estimate=token_estimate(piece),
                lead_overlap=prev_end - start if ordinal else 0,
            )
        )
        if end >= n:
            return chunks
        next_start = _word_start_at_or_before(text, end - cover)
        if next_start <= start:
            # No usable word boundary (pathological overlap/word length);
            # fall back to a raw cut that still guarantees progress.
            next_start = min(end, max(start + 1, end - cover))
        prev_end = end
        start = next_start


def stitch(chunks: list[Chunk]) -> str:
    """Inverse of ``chunk``: drop each chunk's leading overlap and concatenate."""
    return "".join(c.text[c.lead_overlap:] for c in sorted(chunks, key=lambda c: c.ordinal))


def fits_context(prompt_tokens: int, model_window: int, reply_reserve: int = DEFAULT_REPLY_RESERVE) -> bool:
    """True iff the prompt plus reserved reply room fits the model window."""
    if prompt_tokens < 0 or model_window < 0 or reply_reserve < 0:
        raise InvalidParamsError("token counts must be non-negative")
    return prompt_tokens + reply_reserve <= model_window
