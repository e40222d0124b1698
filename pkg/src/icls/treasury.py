"""Thematic summary generation for content units.

A unit whose text fits the model window is summarized in a single pass;
anything larger goes through hierarchical map-reduce: summarize window-sized
slices, then summarize the concatenated slice summaries with the same
template. Accepted summaries must reach the 200-word floor; one corrective
re-prompt is allowed before the attempt is flagged as too short.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

from .domain import ContentUnit, utcnow
from .errors import EmptyDataError, GenerationTooShortError
from .gateway import DEFAULT_MAX_TOKENS, Gateway, PromptKind, render_summary_prompt
from .ingestion import DocumentText, chunk, fits_context, token_estimate

MIN_SUMMARY_WORDS = 200
LENGTH_REMINDER = "The summary should be at least 200 words long"

SINGLE_PASS = "single_pass"
MAP_REDUCE = "map_reduce"


def word_count(text: str) -> int:
    return len(text.split())


@dataclass(frozen=True)
class Summary:
    summary_id: str
    unit_id: str
    text: str
    word_count: int
    strategy: str
    generated_at: datetime


@dataclass(frozen=True)
class SummaryValidation:
    accepted: bool
    reason: str | None = None


def validate_summary(text: str) -> SummaryValidation:
    """Accept iff non-empty after trimming and at least 200 words. Never raises."""
    if not text or not text.strip():
        return SummaryValidation(accepted=False, reason="empty")
    if word_count(text) < MIN_SUMMARY_WORDS:
        return SummaryValidation(accepted=False, reason="too-short")
    return SummaryValidation(accepted=True)


def needs_map_reduce(unit_text: str, admin_instruction: str, context_window: int) -> bool:
    """Single-pass feasibility check; pure token arithmetic, no provider calls."""
    prompt = render_summary_prompt(unit_text, admin_instruction)
    return not fits_context(token_estimate(prompt), context_window, DEFAULT_MAX_TOKENS)


class TreasuryService:
    """Summary orchestration over the completion gateway."""

    def __init__(self, gateway: Gateway, id_factory=None, clock=utcnow):
        self.gateway = gateway
        self._id_factory = id_factory or _counter("summary")
        self._clock = clock

    def generate_summary(self, unit: ContentUnit, admin_instruction: str = "") -> Summary:
        if not unit.raw_text:
            raise EmptyDataError("unit has no text to summarize")
        if needs_map_reduce(unit.raw_text, admin_instruction, self.gateway.context_window):
            strategy = MAP_REDUCE
            source = self._reduce(unit, admin_instruction)
        else:
            strategy = SINGLE_PASS
            source = unit.raw_text
        text = self._complete_validated(source, admin_instruction)
        return Summary(
            summary_id=self._id_factory(),
            unit_id=unit.unit_id,
            text=text,
            word_count=word_count(text),
            strategy=strategy,
            generated_at=self._clock(),
        )

    def _reduce(self, unit: ContentUnit, admin_instruction: str) -> str:
        """Shrink oversized text by summarizing window-sized slices, repeatedly."""
        overhead = token_estimate(render_summary_prompt("x", admin_instruction + " " + LENGTH_REMINDER)) + 16
        slice_tokens = max(64, self.gateway.prompt_budget() - overhead)
        working = unit.raw_text
        while needs_map_reduce(working, admin_instruction, self.gateway.context_window):
            doc = DocumentText(unit_id=unit.unit_id, text=working, token_estimate=token_estimate(working))
            parts = chunk(doc, chunk_size=slice_tokens, overlap=min(64, slice_tokens // 4))
            summaries = [
                self.gateway.run(PromptKind.SUMMARY, render_summary_prompt(part.text, "")).text
                for part in parts
            ]
            working = " ".join(summaries)
        return working

    def _complete_validated(self, source: str, admin_instruction: str) -> str:
        first = self.gateway.run(
            PromptKind.SUMMARY, render_summary_prompt(source, admin_instruction)
        ).text
        if validate_summary(first).accepted:
            return first
        # One corrective retry with the length requirement repeated.
        reminder = (admin_instruction + " " if admin_instruction else "") + LENGTH_REMINDER
        second = self.gateway.run(
            PromptKind.SUMMARY, render_summary_prompt(source, reminder)
        ).text
        if validate_summary(second).accepted:
            return second
        best = max((first, second), key=word_count)
        raise GenerationTooShortError(
            f"summary stayed under {MIN_SUMMARY_WORDS} words after retry",
            best_candidate=best,
        )


def _counter(prefix: str):
    n = iter(range(1, 10**9))

    def make() -> str:
        return f"{prefix}-{next(n):06d}"

    return make
