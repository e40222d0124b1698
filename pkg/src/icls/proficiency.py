"""Engagement telemetry and per-country proficiency scoring.

Three signals feed the score: time on country content, quiz attempts, and
quiz performance. Time and attempts saturate (10 hours, 50 attempts) so
grinding cannot outweigh demonstrated knowledge, which carries most of the
weight:

    value = 0.2 * min(seconds/36000, 1) + 0.2 * min(attempts/50, 1) + 0.6 * mean_quiz_score
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum

from .errors import InvalidEventError

TIME_SATURATION_SECONDS = 36_000
ATTEMPT_SATURATION = 50
WEIGHT_TIME = 0.2
WEIGHT_ATTEMPTS = 0.2
WEIGHT_SCORE = 0.6


class EventKind(str, Enum):
    TIME_SPENT = "time_spent"
    QUIZ_ATTEMPT = "quiz_attempt"
    QUIZ_RESULT = "quiz_result"


@dataclass(frozen=True)
class EngagementEvent:
    learner_id: str
    country_id: str
    kind: EventKind
    at: datetime
    seconds: int = 0
    score: float | None = None

    def __post_init__(self):
        if self.kind is EventKind.TIME_SPENT and self.seconds <= 0:
            raise InvalidEventError("time_spent requires seconds > 0")
        if self.kind is EventKind.QUIZ_RESULT:
            if self.score is None or not 0.0 <= self.score <= 1.0:
                raise InvalidEventError("quiz_result requires score in [0, 1]")


@dataclass
class EngagementStats:
    learner_id: str
    country_id: str
    total_seconds: int = 0
    attempt_count: int = 0
    result_count: int = 0
    score_sum: float = 0.0

    @property
    def mean_quiz_score(self) -> float:
        return self.score_sum / self.result_count if self.result_count else 0.0

    def apply(self, event: EngagementEvent) -> None:
        if event.kind is EventKind.TIME_SPENT:
            self.total_seconds += event.seconds
        elif event.kind is EventKind.QUIZ_ATTEMPT:
            self.attempt_count += 1
        else:
            self.result_count += 1
            self.score_sum += event.score


def fold_events(learner_id: str, country_id: str, events) -> EngagementStats:
    """Batch recomputation; incremental tracking must match this exactly."""
    stats = EngagementStats(learner_id=learner_id, country_id=country_id)
    for event in events:
        stats.apply(event)
    return stats


class EngagementTracker:
    """Incremental per-(learner, country) aggregates plus the raw event log."""

    def __init__(self, keep_log: bool = True):
        self._stats: dict[tuple[str, str], EngagementStats] = {}
        self._log: list[EngagementEvent] | None = [] if keep_log else None
        self._lock = threading.Lock()

    def record(self, event: EngagementEvent) -> EngagementStats:
        key = (event.learner_id, event.country_id)
        with self._lock:
            stats = self._stats.get(key)
            if stats is None:
                stats = EngagementStats(learner_id=event.learner_id, country_id=event.country_id)
                self._stats[key] = stats
            stats.apply(event)
            if self._log is not None:
                self._log.append(event)
        return stats

    def stats_for(self, learner_id: str, country_id: str) -> EngagementStats:
        return self._stats.get(
            (learner_id, country_id),
            EngagementStats(learner_id=learner_id, country_id=country_id),
        )

    def restore(self, stats: EngagementStats) -> None:
        self._stats[(stats.learner_id, stats.country_id)] = stats

    def all_stats(self) -> list[EngagementStats]:
        return list(self._stats.values())

    @property
    def log(self) -> list[EngagementEvent]:
        return list(self._log or [])


@dataclass(frozen=True)
class ProficiencyScore:
    learner_id: str
    country_id: str
    value: float
    components: dict


def compute_proficiency(
    stats: EngagementStats,
    time_cap: int = TIME_SATURATION_SECONDS,
    attempt_cap: int = ATTEMPT_SATURATION,
    weights: tuple[float, float, float] = (WEIGHT_TIME, WEIGHT_ATTEMPTS, WEIGHT_SCORE),
) -> ProficiencyScore:
    time_norm = min(stats.total_seconds / time_cap, 1.0)
    attempt_norm = min(stats.attempt_count / attempt_cap, 1.0)
    score_term = stats.mean_quiz_score
    value = weights[0] * time_norm + weights[1] * attempt_norm + weights[2] * score_term
    return ProficiencyScore(
        learner_id=stats.learner_id,
        country_id=stats.country_id,
        value=value,
        components={
            "time_norm": time_norm,
            "attempt_norm": attempt_norm,
            "score_term": score_term,
        },
    )


@dataclass(frozen=True)
class LessonCandidate:
    lesson_id: str
    category_id: str


def rank_recommendations(
    lessons: list[LessonCandidate],
    finished_lessons: set,
    category_mean_scores: dict,
    friend_completed: set,
) -> list[str]:
    """Order unfinished lessons for a learner.

    Weakest categories come first (no recorded score counts as 0.0 — an
    untouched category is the widest gap); inside a score tier, lessons a
    friend already completed rank ahead; remaining ties break on lesson id.
    """
    def sort_key(candidate: LessonCandidate):
        mean = category_mean_scores.get(candidate.category_id)
        return (
            mean if mean is not None else 0.0,
            0 if candidate.lesson_id in friend_completed else 1,
            candidate.lesson_id,
        )

    unfinished = [c for c in lessons if c.lesson_id not in finished_lessons]
    return [c.lesson_id for c in sorted(unfinished, key=sort_key)]
