from __future__ import annotations

import random
import string
from datetime import datetime, timedelta, timezone

import pytest

from icls.config import AppConfig
from icls.gateway import Gateway, MockProvider
from icls.service import Application
from icls.worldwise import Question, Quiz


class FakeClock:
    """Deterministic, manually advanced clock for service-level tests."""

    def __init__(self, start: datetime | None = None):
        self.now_value = start or datetime(2024, 7, 1, 12, 0, tzinfo=timezone.utc)

    def __call__(self) -> datetime:
        # tick a microsecond per read so event ordering stays strict
        self.now_value += timedelta(microseconds=1)
        return self.now_value

    def advance(self, **kwargs) -> None:
        self.now_value += timedelta(**kwargs)


@pytest.fixture
def mock_gateway() -> Gateway:
    return Gateway(MockProvider(), model_name="mock-model")


@pytest.fixture
def clock() -> FakeClock:
    return FakeClock()


@pytest.fixture
def app(tmp_path, clock) -> Application:
    config = AppConfig(database_path=str(tmp_path / "icls.db"), admin_bootstrap_token="admin-token")
    application = Application(config, clock=clock)
    yield application
    application.close()


_SAFE_WORDS = (
    "tokyo kyoto harvest lantern spice noodle garden temple script scroll parade "
    "costume melody rhythm drum flute market harbor village recipe pottery weave "
    "dialect proverb shrine mural canvas verse chapter author stage gesture"
).split()


def random_question(rng: random.Random) -> Question:
    def phrase(n: int) -> str:
        words = [rng.choice(_SAFE_WORDS) for _ in range(n)]
        if rng.random() < 0.3:
            words.append(str(rng.randint(0, 99)))
        return " ".join(words)

    return Question(
        stem=phrase(rng.randint(3, 8)) + "?",
        options=tuple(phrase(rng.randint(1, 4)) for _ in range(4)),
        answer_index=rng.randint(1, 4),
    )


def random_quiz(rng: random.Random, quiz_id: str = "quiz-x", unit_id: str = "unit-x") -> Quiz:
    count = rng.randint(10, 14)
    return Quiz(
        quiz_id=quiz_id,
        unit_id=unit_id,
        questions=tuple(random_question(rng) for _ in range(count)),
    )


def random_text(rng: random.Random, words: int) -> str:
    out = []
    for _ in range(words):
        length = rng.randint(2, 10)
        out.append("".join(rng.choice(string.ascii_lowercase) for _ in range(length)))
    return " ".join(out)
