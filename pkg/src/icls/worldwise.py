"""Quiz generation, parsing, and grading.

Model output is expected in the marker format the quiz prompt asks for
(``*Question :**`` / ``*Option :**`` / ``*Answer :**``) but real completions
drift, so the parser is tolerant: extra or missing asterisks, any keyword
casing, optional space before the colon, and answers given as a bare number
or as "Option N". Blocks that still cannot yield a well-formed question are
collected as rejects with a reason; parsing itself never fails.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime

from .domain import ContentUnit, utcnow
from .errors import (
    EmptyDataError,
    QuizMismatchError,
    QuizUnderfullError,
    ValidationError,
)
from .gateway import Gateway, PromptKind, render_quiz_prompt
from .ingestion import token_estimate

MIN_QUIZ_QUESTIONS = 10
OPTIONS_PER_QUESTION = 4
GENERATION_ATTEMPTS = 3

QUESTION_MARKER = "*Question :**"
OPTION_MARKER = "*Option :**"
ANSWER_MARKER = "*Answer :**"

_MARKER_RE = re.compile(r"^[\s*]*(question|option|answer)\s*:\s*\**\s*(.*?)\s*$", re.IGNORECASE)
_ANSWER_VALUE_RE = re.compile(r"(?:option\s+)?(\d{1,4})\s*\.?", re.IGNORECASE)


@dataclass(frozen=True)
class Question:
    stem: str
    options: tuple[str, str, str, str]
    answer_index: int

    def __post_init__(self):
        if not self.stem or "\n" in self.stem:
            raise ValidationError("stem must be non-empty single-line text")
        if len(self.options) != OPTIONS_PER_QUESTION:
            raise ValidationError("a question has exactly 4 options")
        for option in self.options:
            if not option or "\n" in option:
                raise ValidationError("options must be non-empty single-line text")
        if not 1 <= self.answer_index <= OPTIONS_PER_QUESTION:
            raise ValidationError("answer_index must be in [1, 4]")


@dataclass(frozen=True)
class Quiz:
    quiz_id: str
    unit_id: str
    questions: tuple[Question, ...]


@dataclass(frozen=True)
class Submission:
    learner_id: str
    quiz_id: str
    answers: dict
    submitted_at: datetime

    def __post_init__(self):
        for ordinal, choice in self.answers.items():
            if not isinstance(ordinal, int) or ordinal < 0:
                raise ValidationError(f"bad question ordinal: {ordinal!r}")
            if not isinstance(choice, int) or not 1 <= choice <= OPTIONS_PER_QUESTION:
                raise ValidationError(f"chosen option must be in [1, 4], got {choice!r}")


@dataclass(frozen=True)
class QuestionFeedback:
    answered: bool
    correct: bool


@dataclass(frozen=True)
class GradeReport:
    correct_count: int
    total: int
    score: float
    per_question: tuple[QuestionFeedback, ...]


@dataclass(frozen=True)
class RejectedBlock:
    block_text: str
    reason: str


@dataclass
class ParsedQuiz:
    questions: list = field(default_factory=list)
    rejects: list = field(default_factory=list)


class _BlockBuilder:
    def __init__(self):
        self.lines: list[str] = []
        self.stem_parts: list[str] = []
        self.options: list[str] = []
        self.answers: list[str] = []
        self._collecting = "stem"

    def add_marker(self, kind: str, payload: str, line: str):
        self.lines.append(line)
        if kind == "question":
            if payload:
                self.stem_parts.append(payload)
            self._collecting = "stem"
        elif kind == "option":
            self.options.append(payload)
            self._collecting = "option"
        else:
            self.answers.append(payload)
            self._collecting = "answer"

    def add_continuation(self, line: str):
        self.lines.append(line)
        text = line.strip()
        if not text:
            return
        if self._collecting == "stem":
            self.stem_parts.append(text)
        elif self._collecting == "option" and self.options:
            self.options[-1] = (self.options[-1] + " " + text).strip()
        # trailing prose after the answer (explanations etc.) is ignored

    def finish(self):
        block_text = "\n".join(self.lines)
        stem = " ".join(part for part in self.stem_parts if part).strip()
        if not stem:
            return RejectedBlock(block_text, "empty-stem")
        if len(self.options) != OPTIONS_PER_QUESTION:
            return RejectedBlock(block_text, "option-count")
        if any(not option for option in self.options):
            return RejectedBlock(block_text, "empty-option")
        if not self.answers:
            return RejectedBlock(block_text, "missing-answer")
        if len(self.answers) > 1:
            return RejectedBlock(block_text, "multiple-answers")
        match = _ANSWER_VALUE_RE.fullmatch(self.answers[0].strip())
        if match is None:
            return RejectedBlock(block_text, "answer-unparseable")
        answer_index = int(match.group(1))
        if not 1 <= answer_index <= OPTIONS_PER_QUESTION:
            return RejectedBlock(block_text, "answer-out-of-range")
        return Question(stem=stem, options=tuple(self.options), answer_index=answer_index)


def parse_quiz(raw) -> ParsedQuiz:
    """Total parser: every detected block becomes a question or a reject."""
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8", errors="replace")
    result = ParsedQuiz()
    block: _BlockBuilder | None = None

    def close(builder):
        outcome = builder.finish()
        if isinstance(outcome, Question):
            result.questions.append(outcome)
        else:
            result.rejects.append(outcome)

    for line in raw.splitlines():
        match = _MARKER_RE.match(line)
        kind = match.group(1).lower() if match else None
        if kind == "question":
            if block is not None:
                close(block)
            block = _BlockBuilder()
            block.add_marker(kind, match.group(2), line)
        elif block is None:
            continue  # preamble before the first question marker
        elif kind is not None:
            block.add_marker(kind, match.group(2), line)
        else:
            block.add_continuation(line)
    if block is not None:
        close(block)
    return result


def render_question_text(question: Question) -> str:
    lines = [f"{QUESTION_MARKER} {question.stem}"]
    lines.extend(f"{OPTION_MARKER} {option}" for option in question.options)
    lines.append(f"{ANSWER_MARKER} {question.answer_index}")
    return "\n".join(lines)


def render_quiz_text(quiz: Quiz) -> str:
    """Canonical serialization; ``parse_quiz`` inverts it exactly."""
    return "\n\n".join(render_question_text(q) for q in quiz.questions)


def grade(quiz: Quiz, submission: Submission) -> GradeReport:
    """Score a submission against its quiz; unanswered questions count as wrong."""
    if submission.quiz_id != quiz.quiz_id:
        raise QuizMismatchError(
            f"submission targets quiz {submission.quiz_id}, not {quiz.quiz_id}"
        )
    total = len(quiz.questions)
    for ordinal in submission.answers:
        if ordinal >= total:
            raise QuizMismatchError(f"question ordinal {ordinal} out of range for quiz of {total}")
    per_question = []
    correct_count = 0
    for ordinal, question in enumerate(quiz.questions):
        choice = submission.answers.get(ordinal)
        answered = choice is not None
        correct = answered and choice == question.answer_index
        if correct:
            correct_count += 1
        per_question.append(QuestionFeedback(answered=answered, correct=correct))
    return GradeReport(
        correct_count=correct_count,
        total=total,
        score=correct_count / total if total else 0.0,
        per_question=tuple(per_question),
    )


class WorldWiseService:
    """Quiz generation over the completion gateway, bounded keep-best retries."""

    def __init__(self, gateway: Gateway, id_factory=None, clock=utcnow):
        self.gateway = gateway
        self._id_factory = id_factory or _counter("quiz")
        self._clock = clock

    def generate_quiz(self, unit: ContentUnit) -> Quiz:
        if not unit.raw_text:
            raise EmptyDataError("unit has no text for quiz generation")
        source = self._clamp_to_budget(unit.raw_text)
        best: list[Question] = []
        for _ in range(GENERATION_ATTEMPTS):
            completion = self.gateway.run(PromptKind.QUIZ, render_quiz_prompt(source))
            parsed = parse_quiz(completion.text)
            if len(parsed.questions) >= MIN_QUIZ_QUESTIONS:
                return Quiz(
                    quiz_id=self._id_factory(),
                    unit_id=unit.unit_id,
                    questions=tuple(parsed.questions),
                )
            if len(parsed.questions) > len(best):
                best = parsed.questions
        raise QuizUnderfullError(
            f"best attempt produced {len(best)} valid questions, need {MIN_QUIZ_QUESTIONS}",
            best_questions=best,
        )

    def _clamp_to_budget(self, text: str) -> str:
        """Trim oversized source to the window, cutting at a word boundary."""
        overhead = token_estimate(render_quiz_prompt("x"))
        budget_chars = max(256, (self.gateway.prompt_budget() - overhead) * 4)
        if len(text) <= budget_chars:
            return text
        cut = text.rfind(" ", 0, budget_chars)
        return text[: cut if cut > 0 else budget_chars]


def _counter(prefix: str):
    n = iter(range(1, 10**9))

    def make() -> str:
        return f"{prefix}-{next(n):06d}"

    return make
