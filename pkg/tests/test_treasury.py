import pytest

from icls.domain import ContentUnit
from icls.errors import GenerationTooShortError
from icls.gateway import DEFAULT_MAX_TOKENS, Gateway, MockProvider, render_summary_prompt
from icls.ingestion import fits_context, token_estimate
from icls.treasury import (
    MAP_REDUCE,
    SINGLE_PASS,
    TreasuryService,
    needs_map_reduce,
    validate_summary,
    word_count,
)


def unit_of(text: str, unit_id: str = "u1") -> ContentUnit:
    return ContentUnit(unit_id=unit_id, lesson_id="l1", kind="document", source_name="s", raw_text=text)


class TestValidateSummary:
    def test_exactly_200_words_accepted(self):
        assert validate_summary("word " * 200).accepted is True

    def test_199_words_rejected(self):
        outcome = validate_summary("word " * 199)
        assert outcome.accepted is False
        assert outcome.reason == "too-short"

    def test_empty_rejected(self):
        outcome = validate_summary("")
        assert outcome.accepted is False
        assert outcome.reason == "empty"
        assert validate_summary("   ").reason == "empty"


class TestGenerateSummary:
    def test_small_unit_single_pass(self, mock_gateway):
        service = TreasuryService(mock_gateway)
        summary = service.generate_summary(unit_of("tea " * 500))  # ~500 tokens
        assert summary.strategy == SINGLE_PASS
        assert summary.word_count >= 200
        assert summary.word_count == word_count(summary.text)

    def test_large_unit_map_reduce(self, mock_gateway):
        # 20k-token document against an 8192 window: token arithmetic says map_reduce
        text = "lore " * 16000  # 80000 chars -> 20000 tokens
        assert token_estimate(text.strip()) >= 20000 - 1
        prompt_tokens = token_estimate(render_summary_prompt(text.strip(), ""))
        assert not fits_context(prompt_tokens, mock_gateway.context_window, DEFAULT_MAX_TOKENS)
        service = TreasuryService(mock_gateway)
        summary = service.generate_summary(unit_of(text.strip()))
        assert summary.strategy == MAP_REDUCE
        assert summary.word_count >= 200

    def test_routing_predicate_matches_fits_context(self, mock_gateway):
        window = mock_gateway.context_window
        for tokens in (10, 100, 4000, 7000, 7168 + 1, 9000, 30000):
            text = ("abc " * tokens).strip()
            prompt_tokens = token_estimate(render_summary_prompt(text, ""))
            expected = not fits_context(prompt_tokens, window, DEFAULT_MAX_TOKENS)
            assert needs_map_reduce(text, "", window) is expected

    def test_mock_mode_deterministic(self, mock_gateway):
        service_a = TreasuryService(Gateway(MockProvider()))
        service_b = TreasuryService(Gateway(MockProvider()))
        unit = unit_of("pottery " * 300)
        assert service_a.generate_summary(unit).text == service_b.generate_summary(unit).text

    def test_too_short_after_retry_flagged(self):
        class ShortProvider:
            def __init__(self):
                self.prompts = []

            def send(self, request):
                self.prompts.append(request.prompt)
                return "fifty words " * 25  # 50 words, under the floor

        provider = ShortProvider()
        service = TreasuryService(Gateway(provider))
        with pytest.raises(GenerationTooShortError) as info:
            service.generate_summary(unit_of("content " * 50), "focus on food")
        assert len(provider.prompts) == 2  # one retry, then flagged
        assert "The summary should be at least 200 words long" in provider.prompts[1]
        assert word_count(info.value.best_candidate) == 50

    def test_retry_recovers_when_second_attempt_long_enough(self):
        class ImprovingProvider:
            def __init__(self):
                self.calls = 0

            def send(self, request):
                self.calls += 1
                return ("short text" if self.calls == 1 else "word " * 200).strip()

        service = TreasuryService(Gateway(ImprovingProvider()))
        summary = service.generate_summary(unit_of("content " * 50))
        assert summary.word_count == 200
