"""Prompt rendering and completion-provider access.

The three prompt templates are reproduced character-for-character from the
product's prompt sheet, typographic quirks included ("given,then",
"*Question :**", the stray quotes, "Answer::"). Downstream parsing is
tuned to real model output, so the templates must not be cleaned up.

Providers sit behind a small interface: an HTTP chat-completion client for
live runs and a seeded deterministic mock so every downstream module is
testable offline.
"""

from __future__ import annotations

import hashlib
import random
import threading
import time
from collections import deque
from dataclasses import dataclass
from enum import Enum

import requests

from .errors import (
    ContextOverflowError,
    EmptyDataError,
    EmptyQuestionError,
    NoContextError,
    ProviderRejectedError,
    ProviderUnreachableError,
    ValidationError,
)
from .ingestion import DEFAULT_REPLY_RESERVE, fits_context, token_estimate


class PromptKind(str, Enum):
    SUMMARY = "summary"
    QUIZ = "quiz"
    CHAT = "chat"


SUMMARY_TEMPLATE = (
    "Instruction: You are a summary generator, your job is to generate a summary of the given data.\n"
    "You have to follow the instructions given on how to generate the summary.\n"
    "If no instruction is given,then just generate the summary.\n"
    "Data: {combined text} User Instruction: {userPrompt}\n"
    "Instruction: The summary should be at least 200 words long\n"
    "Summary:"
)

QUIZ_TEMPLATE = (
    "Generate a quiz based on the following information: Data: {combined text} \"\n"
    "Instructions :\n"
    "1. Generate a quiz based on the given information.\n"
    "2. The quiz should be at least 10 questions long.\n"
    "3. The quiz should be in the form of a list of questions and options.\"\n"
    "Format of the quiz:\n"
    "Each question should be start with *Question :**\n"
    "Option should be start with *Option :**\n"
    "Each answer should be like *Answer :** and only give the option number for the answer\n"
    "Options: 1, 2, 3, 4\n"
    "Answer: Answer"
)

CHAT_TEMPLATE = (
    "Role: You are a Question Answer solver. Here is the information:\n"
    "Data: {text }\n"
    "Using this information, answer the following question:\n"
    "Question: {userPrompt}\n"
    "Instruction: Answer the question using information provided in data.\n"
    "Answer::"
)

CHUNK_SEPARATOR = "\n\n"

# Generation defaults; the prompt sheet specifies none of these.
DEFAULT_TEMPERATURES = {
    PromptKind.SUMMARY: 0.7,
    PromptKind.QUIZ: 0.2,
    PromptKind.CHAT: 0.2,
}
DEFAULT_MAX_TOKENS = DEFAULT_REPLY_RESERVE
DEFAULT_CONTEXT_WINDOW = 8192
DEFAULT_MAX_RETRIES = 3
DEFAULT_BACKOFF_BASE = 0.5
DEFAULT_CONCURRENCY = 4


def _fill(template: str, *slot_values: tuple[str, str]) -> str:
    """Substitute slots in template order; values are never re-scanned."""
    parts = []
    rest = template
    for slot, value in slot_values:
        before, found, rest = rest.partition(slot)
        if not found:
            raise ValueError(f"template is missing slot {slot!r}")
        parts.append(before)
        parts.append(value)
    parts.append(rest)
    return "".join(parts)


def render_summary_prompt(combined_text: str, user_instruction: str = "") -> str:
    if not combined_text:
        raise EmptyDataError("summary prompt needs non-empty data")
    return _fill(
        SUMMARY_TEMPLATE,
        ("{combined text}", combined_text),
        ("{userPrompt}", user_instruction),
    )


def render_quiz_prompt(combined_text: str) -> str:
    if not combined_text:
        raise EmptyDataError("quiz prompt needs non-empty data")
    return _fill(QUIZ_TEMPLATE, ("{combined text}", combined_text))


def render_chat_prompt(context_chunks: list[str], user_question: str) -> str:
    if not context_chunks:
        raise NoContextError("chat prompt needs at least one context chunk")
    if not user_question:
        raise EmptyQuestionError("chat prompt needs a non-empty question")
    return _fill(
        CHAT_TEMPLATE,
        ("{text }", CHUNK_SEPARATOR.join(context_chunks)),
        ("{userPrompt}", user_question),
    )


@dataclass(frozen=True)
class CompletionRequest:
    prompt: str
    model_name: str
    max_tokens: int = DEFAULT_MAX_TOKENS
    temperature: float = 0.2
    provenance: PromptKind = PromptKind.CHAT

    def __post_init__(self):
        if not self.prompt:
            raise ValidationError("prompt must be non-empty")
        if self.max_tokens <= 0:
            raise ValidationError("max_tokens must be positive")
        if not 0.0 <= self.temperature <= 2.0:
            raise ValidationError("temperature must be in [0, 2]")


@dataclass(frozen=True)
class CompletionResult:
    text: str
    provider_latency_ms: float
    attempt: int


class TransportError(Exception):
    """Retryable provider failure (network error, 5xx, timeout)."""


class HttpProvider:
    """Chat-completion HTTP client (request: model/messages/max_tokens/temperature)."""

    def __init__(self, base_url: str, api_key: str = "", timeout: float = 60.0, session=None):
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key
        self.timeout = timeout
        self._session = session or requests.Session()

    def send(self, request: CompletionRequest) -> str:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        payload = {
            "model": request.model_name,
            "messages": [{"role": "user", "content": request.prompt}],
            "max_tokens": request.max_tokens,
            "temperature": request.temperature,
        }
        try:
            response = self._session.post(
                f"{self.base_url}/chat/completions",
                json=payload,
                headers=headers,
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise TransportError(str(exc)) from exc
        if response.status_code >= 500:
            raise TransportError(f"provider returned {response.status_code}")
        if response.status_code >= 400:
            raise ProviderRejectedError(
                f"provider rejected request: {response.status_code} {response.text[:200]}"
            )
        data = response.json()
        try:
            choice = data["choices"][0]
            return choice["message"]["content"] if "message" in choice else choice["text"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderRejectedError(f"malformed provider response: {exc}") from exc


_MOCK_VOCAB = (
    "heritage tradition festival cuisine artisans ceremony rhythm calligraphy "
    "folklore harvest lantern pottery textile dialect etiquette pilgrimage "
    "melody costume mural spice tea shrine harbor village scroll garden dance "
    "drum weaving proverb recipe custom saga opera cinema poetry market temple "
    "carnival dynasty script mosaic ballad regalia banquet parade chant loom"
).split()

MOCK_SUMMARY_WORDS = 210
MOCK_QUIZ_QUESTIONS = 12


class MockProvider:
    """Deterministic offline provider.

    Output is a pure function of (provenance, prompt): the prompt hash seeds
    an RNG that emits structurally valid text for each provenance — a
    210-word summary, a well-formed 12-question quiz, or a short chat answer.
    Stable across processes and platforms.
    """

    def send(self, request: CompletionRequest) -> str:
        rng = self._rng(request)
        if request.provenance is PromptKind.SUMMARY:
            return self._summary(rng)
        if request.provenance is PromptKind.QUIZ:
            return self._quiz(rng)
        return self._chat(rng)

    @staticmethod
    def _rng(request: CompletionRequest) -> random.Random:
        digest = hashlib.sha256(
            request.provenance.value.encode() + b"\x00" + request.prompt.encode()
        ).digest()
        return random.Random(int.from_bytes(digest[:8], "big"))

    @staticmethod
    def _words(rng: random.Random, count: int) -> list[str]:
        return [rng.choice(_MOCK_VOCAB) for _ in range(count)]

    def _summary(self, rng: random.Random) -> str:
        sentences = []
        for _ in range(MOCK_SUMMARY_WORDS // 7):
            words = self._words(rng, 7)
            sentences.append(words[0].capitalize() + " " + " ".join(words[1:]) + ".")
        return " ".join(sentences)

    def _quiz(self, rng: random.Random) -> str:
        blocks = []
        for _ in range(MOCK_QUIZ_QUESTIONS):
            stem_words = self._words(rng, 4)
            lines = [f"*Question :** Which {stem_words[0]} is tied to {stem_words[1]} and {stem_words[2]}?"]
            for _ in range(4):
                option = self._words(rng, 2)
                lines.append(f"*Option :** The {option[0]} of {option[1]}")
            lines.append(f"*Answer :** {rng.randint(1, 4)}")
            blocks.append("\n".join(lines))
        return "\n\n".join(blocks)

    def _chat(self, rng: random.Random) -> str:
        words = self._words(rng, 36)
        body = " ".join(words)
        return f"Based on the provided context, the {words[0]} relates to {body}."


class _FairGate:
    """FIFO-fair concurrency limiter: slots are handed to waiters in arrival order."""

    def __init__(self, limit: int):
        self._limit = limit
        self._active = 0
        self._lock = threading.Lock()
        self._waiters: deque[threading.Event] = deque()

    def acquire(self):
        with self._lock:
            if self._active < self._limit and not self._waiters:
                self._active += 1
                return
            event = threading.Event()
            self._waiters.append(event)
        event.wait()

    def release(self):
        with self._lock:
            if self._waiters:
                self._waiters.popleft().set()  # slot handed over, _active unchanged
            else:
                self._active -= 1


class Gateway:
    """Completion front door: window check, retries with backoff, fair concurrency cap."""

    def __init__(
        self,
        provider,
        model_name: str = "mock-model",
        context_window: int = DEFAULT_CONTEXT_WINDOW,
        max_retries: int = DEFAULT_MAX_RETRIES,
        backoff_base: float = DEFAULT_BACKOFF_BASE,
        max_concurrent: int = DEFAULT_CONCURRENCY,
        sleep=time.sleep,
    ):
        self.provider = provider
        self.model_name = model_name
        self.context_window = context_window
        self.max_retries = max_retries
        self.backoff_base = backoff_base
        self._gate = _FairGate(max_concurrent)
        self._sleep = sleep

    def complete(self, request: CompletionRequest) -> CompletionResult:
        prompt_tokens = token_estimate(request.prompt)
        if not fits_context(prompt_tokens, self.context_window, request.max_tokens):
            raise ContextOverflowError(
                f"prompt of ~{prompt_tokens} tokens plus {request.max_tokens} reply tokens "
                f"exceeds window of {self.context_window}"
            )
        self._gate.acquire()
        try:
            attempt = 0
            while True:
                attempt += 1
                started = time.perf_counter()
                try:
                    text = self.provider.send(request)
                except TransportError as exc:
                    if attempt > self.max_retries:
                        raise ProviderUnreachableError(
                            f"provider unreachable after {attempt} attempts: {exc}"
                        ) from exc
                    self._sleep(self.backoff_base * (2 ** (attempt - 1)))
                    continue
                latency_ms = (time.perf_counter() - started) * 1000.0
                return CompletionResult(text=text, provider_latency_ms=latency_ms, attempt=attempt)
        finally:
            self._gate.release()

    def run(self, kind: PromptKind, prompt: str, max_tokens: int = DEFAULT_MAX_TOKENS) -> CompletionResult:
        """Build a request with the configured model and per-kind temperature."""
        request = CompletionRequest(
            prompt=prompt,
            model_name=self.model_name,
            max_tokens=max_tokens,
            temperature=DEFAULT_TEMPERATURES[kind],
            provenance=kind,
        )
        return self.complete(request)

    def prompt_budget(self, reply_reserve: int = DEFAULT_MAX_TOKENS) -> int:
        """Largest prompt token count that still fits the window."""
        return self.context_window - reply_reserve
