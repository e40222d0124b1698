import random
from datetime import datetime, timezone

import pytest
from hypothesis import given, settings, strategies as st

from icls.domain import ContentUnit
from icls.errors import QuizMismatchError, QuizUnderfullError, ValidationError
from icls.gateway import Gateway
from icls.worldwise import (
    GradeReport,
    Question,
    Quiz,
    Submission,
    WorldWiseService,
    grade,
    parse_quiz,
    render_quiz_text,
)

from conftest import random_quiz

NOW = datetime(2024, 7, 1, tzinfo=timezone.utc)

CANONICAL_BLOCK = (
    "*Question :** Capital of Japan?\n"
    "*Option :** Kyoto\n"
    "*Option :** Tokyo\n"
    "*Option :** Osaka\n"
    "*Option :** Nara\n"
    "*Answer :** 2"
)


class TestParseQuiz:
    def test_canonical_block(self):
        parsed = parse_quiz(CANONICAL_BLOCK)
        assert len(parsed.questions) == 1
        q = parsed.questions[0]
        assert q.stem == "Capital of Japan?"
        assert q.options == ("Kyoto", "Tokyo", "Osaka", "Nara")
        assert q.answer_index == 2
        assert parsed.rejects == []

    def test_three_options_rejected(self):
        raw = (
            "*Question :** Three-legged?\n"
            "*Option :** a\n*Option :** b\n*Option :** c\n"
            "*Answer :** 1"
        )
        parsed = parse_quiz(raw)
        assert parsed.questions == []
        assert len(parsed.rejects) == 1
        assert parsed.rejects[0].reason == "option-count"

    def test_lowercase_option_answer(self):
        raw = (
            "question: Pick one\n"
            "option: a\noption: b\noption: c\noption: d\n"
            "answer: option 2"
        )
        parsed = parse_quiz(raw)
        assert len(parsed.questions) == 1
        assert parsed.questions[0].answer_index == 2

    def test_marker_tolerance_variants(self):
        raw = (
            "**QUESTION :** What?\n"
            "  * Option:  first\n"
            "*option :**second\n"
            "Option : third\n"
            "OPTION: fourth\n"
            "* Answer :  4."
        )
        parsed = parse_quiz(raw)
        assert len(parsed.questions) == 1
        q = parsed.questions[0]
        assert q.options == ("first", "second", "third", "fourth")
        assert q.answer_index == 4

    def test_answer_out_of_range(self):
        raw = CANONICAL_BLOCK.replace("*Answer :** 2", "*Answer :** 5")
        parsed = parse_quiz(raw)
        assert parsed.rejects[0].reason == "answer-out-of-range"

    def test_answer_unparseable(self):
        raw = CANONICAL_BLOCK.replace("*Answer :** 2", "*Answer :** maybe Tokyo")
        assert parse_quiz(raw).rejects[0].reason == "answer-unparseable"

    def test_missing_answer(self):
        raw = "\n".join(CANONICAL_BLOCK.splitlines()[:-1])
        assert parse_quiz(raw).rejects[0].reason == "missing-answer"

    def test_multiple_conflicting_answers(self):
        raw = CANONICAL_BLOCK + "\n*Answer :** 3"
        assert parse_quiz(raw).rejects[0].reason == "multiple-answers"

    def test_empty_stem(self):
        raw = "*Question :**\n*Option :** a\n*Option :** b\n*Option :** c\n*Option :** d\n*Answer :** 1"
        assert parse_quiz(raw).rejects[0].reason == "empty-stem"

    def test_preamble_ignored(self):
        raw = "Here is your quiz!\nGood luck.\n\n" + CANONICAL_BLOCK
        parsed = parse_quiz(raw)
        assert len(parsed.questions) == 1
        assert parsed.rejects == []

    def test_continuation_lines_join_stem_and_option(self):
        raw = (
            "*Question :** A very\nlong stem\n"
            "*Option :** first\npart\n"
            "*Option :** b\n*Option :** c\n*Option :** d\n"
            "*Answer :** 1\nBecause reasons."
        )
        parsed = parse_quiz(raw)
        q = parsed.questions[0]
        assert q.stem == "A very long stem"
        assert q.options[0] == "first part"

    def test_bytes_input(self):
        parsed = parse_quiz(CANONICAL_BLOCK.encode("utf-8"))
        assert len(parsed.questions) == 1

    def test_invalid_utf8_bytes_do_not_crash(self):
        parsed = parse_quiz(b"\xff\xfe*Question :** x\xff?")
        assert isinstance(parsed.questions, list)

    def test_twelve_blocks_two_malformed(self):
        from conftest import random_question

        rng = random.Random(42)
        quiz = Quiz("q", "u", tuple(random_question(rng) for _ in range(12)))
        assert len(quiz.questions) == 12
        blocks = render_quiz_text(quiz).split("\n\n")
        # corrupt block 3 (drop an option) and block 8 (answer out of range)
        lines = blocks[3].splitlines()
        blocks[3] = "\n".join(lines[:2] + lines[3:])
        blocks[8] = blocks[8].rsplit(" ", 1)[0] + " 9"
        parsed = parse_quiz("\n\n".join(blocks))
        assert len(parsed.questions) == 10
        assert len(parsed.rejects) == 2
        assert {r.reason for r in parsed.rejects} == {"option-count", "answer-out-of-range"}


class TestRoundTrip:
    def test_single_question_is_six_lines(self):
        quiz = Quiz("q", "u", (Question("S?", ("a", "b", "c", "d"), 4),))
        text = render_quiz_text(quiz)
        assert len(text.splitlines()) == 6
        assert text.splitlines()[-1] == "*Answer :** 4"

    def test_random_quiz_round_trip(self):
        rng = random.Random(7)
        for _ in range(50):
            quiz = random_quiz(rng)
            parsed = parse_quiz(render_quiz_text(quiz))
            assert tuple(parsed.questions) == quiz.questions
            assert parsed.rejects == []

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=10**9))
    def test_round_trip_property(self, seed):
        quiz = random_quiz(random.Random(seed))
        parsed = parse_quiz(render_quiz_text(quiz))
        assert tuple(parsed.questions) == quiz.questions

    @settings(max_examples=200, deadline=None)
    @given(raw=st.text(max_size=800))
    def test_parser_total_on_arbitrary_text(self, raw):
        parsed = parse_quiz(raw)
        assert isinstance(parsed.questions, list)
        assert isinstance(parsed.rejects, list)


class TestQuestionValidation:
    def test_answer_index_bounds(self):
        with pytest.raises(ValidationError):
            Question("s", ("a", "b", "c", "d"), 0)
        with pytest.raises(ValidationError):
            Question("s", ("a", "b", "c", "d"), 5)

    def test_option_count(self):
        with pytest.raises(ValidationError):
            Question("s", ("a", "b", "c"), 1)

    def test_newlines_forbidden(self):
        with pytest.raises(ValidationError):
            Question("s\nx", ("a", "b", "c", "d"), 1)


def make_submission(quiz, answers):
    return Submission(learner_id="L", quiz_id=quiz.quiz_id, answers=answers, submitted_at=NOW)


class TestGrade:
    def quiz(self) -> Quiz:
        questions = tuple(
            Question(f"q{i}?", ("a", "b", "c", "d"), answer_index=(i % 4) + 1) for i in range(10)
        )
        return Quiz("quiz-1", "u1", questions)

    def test_all_correct(self):
        quiz = self.quiz()
        answers = {i: q.answer_index for i, q in enumerate(quiz.questions)}
        report = grade(quiz, make_submission(quiz, answers))
        assert report.score == 1.0
        assert report.correct_count == 10

    def test_none_answered(self):
        quiz = self.quiz()
        report = grade(quiz, make_submission(quiz, {}))
        assert report.score == 0.0
        assert all(not f.answered for f in report.per_question)

    def test_seven_of_ten(self):
        quiz = self.quiz()
        # oracle: answer ordinals 0..6 correctly -> 7/10 = 0.7
        answers = {i: quiz.questions[i].answer_index for i in range(7)}
        report = grade(quiz, make_submission(quiz, answers))
        assert report.correct_count == 7
        assert report.score == pytest.approx(0.7)

    def test_wrong_quiz(self):
        quiz = self.quiz()
        submission = Submission("L", "other-quiz", {}, NOW)
        with pytest.raises(QuizMismatchError):
            grade(quiz, submission)

    def test_ordinal_out_of_range(self):
        quiz = self.quiz()
        with pytest.raises(QuizMismatchError):
            grade(quiz, make_submission(quiz, {99: 1}))

    def test_adding_correct_answer_never_decreases_score(self):
        quiz = self.quiz()
        rng = random.Random(5)
        answers = {}
        last = 0.0
        for i in rng.sample(range(10), 10):
            answers[i] = quiz.questions[i].answer_index
            score = grade(quiz, make_submission(quiz, dict(answers))).score
            assert score >= last
            last = score


class ScriptedProvider:
    def __init__(self, outputs):
        self.outputs = list(outputs)
        self.calls = 0

    def send(self, request):
        self.calls += 1
        return self.outputs[min(self.calls - 1, len(self.outputs) - 1)]


def valid_quiz_text(count: int, seed: int = 1) -> str:
    rng = random.Random(seed)
    quiz = random_quiz(rng)
    while len(quiz.questions) < count:
        quiz = Quiz(quiz.quiz_id, quiz.unit_id, quiz.questions + quiz.questions)
    return render_quiz_text(Quiz("q", "u", quiz.questions[:count]))


class TestGenerateQuiz:
    def unit(self):
        return ContentUnit("u1", "l1", "document", "s", "culture text " * 50)

    def test_mock_provider_generates_acceptable_quiz(self, mock_gateway):
        service = WorldWiseService(mock_gateway)
        quiz = service.generate_quiz(self.unit())
        assert len(quiz.questions) >= 10
        assert all(1 <= q.answer_index <= 4 for q in quiz.questions)

    def test_keep_best_across_attempts(self):
        provider = ScriptedProvider([valid_quiz_text(6), valid_quiz_text(8), valid_quiz_text(11)])
        service = WorldWiseService(Gateway(provider))
        quiz = service.generate_quiz(self.unit())
        assert provider.calls == 3
        assert len(quiz.questions) == 11

    def test_underfull_after_three_attempts(self):
        provider = ScriptedProvider([valid_quiz_text(6, seed=s) for s in (1, 2, 3)])
        service = WorldWiseService(Gateway(provider))
        with pytest.raises(QuizUnderfullError) as info:
            service.generate_quiz(self.unit())
        assert provider.calls == 3
        assert len(info.value.best_questions) == 6

    def test_first_attempt_good_enough_stops(self):
        provider = ScriptedProvider([valid_quiz_text(10)])
        service = WorldWiseService(Gateway(provider))
        quiz = service.generate_quiz(self.unit())
        assert provider.calls == 1
        assert len(quiz.questions) == 10

    def test_valid_blocks_kept_when_some_malformed(self):
        text = valid_quiz_text(12)
        blocks = text.split("\n\n")
        lines = blocks[0].splitlines()
        blocks[0] = "\n".join(lines[:2] + lines[3:])  # drop an option
        provider = ScriptedProvider(["\n\n".join(blocks)])
        service = WorldWiseService(Gateway(provider))
        quiz = service.generate_quiz(self.unit())
        assert len(quiz.questions) == 11
