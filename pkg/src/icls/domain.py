"""Content hierarchy and learner identity shared by every other module.

Countries hold a fixed catalog of categories, categories hold lessons,
lessons hold content units (a document or video transcript plus the
summary/quiz generated from it). Learner progress on a unit climbs a
strict four-rung ladder and never skips or regresses.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum

from .errors import (
    DuplicateEmailError,
    RegressionAttemptError,
    SkippedRungError,
    UnknownCountryError,
    UnknownLearnerError,
    UnknownUnitError,
    ValidationError,
)

# The 11 category names every country course is built from.
CATEGORY_CATALOG = (
    "Art",
    "Music",
    "Cinema",
    "Literature",
    "Festivals",
    "Fashion",
    "Cuisine",
    "Beverage",
    "Customs",
    "Dance",
    "Travel",
)


class ProgressState(str, Enum):
    NOT_STARTED = "not_started"
    WATCHED = "watched"
    SUMMARY_TESTED = "summary_tested"
    PRACTICE_TESTED = "practice_tested"

    @property
    def rung(self) -> int:
        return _LADDER.index(self)


_LADDER = (
    ProgressState.NOT_STARTED,
    ProgressState.WATCHED,
    ProgressState.SUMMARY_TESTED,
    ProgressState.PRACTICE_TESTED,
)

UNIT_KINDS = ("document", "video_transcript")


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


@dataclass(frozen=True)
class LearnerProfile:
    learner_id: str
    name: str
    email: str
    password_digest: str
    immersion_country: str
    learning_motivation: str
    self_rated_knowledge: int
    daily_goal_minutes: int
    notifications_opt_in: bool
    created_at: datetime
    org_id: str | None = None


@dataclass(frozen=True)
class Country:
    country_id: str
    name: str
    categories: tuple[str, ...] = ()


@dataclass(frozen=True)
class Category:
    category_id: str
    country_id: str
    name: str
    lessons: tuple[str, ...] = ()


@dataclass(frozen=True)
class Lesson:
    lesson_id: str
    category_id: str
    title: str
    content_units: tuple[str, ...] = ()


@dataclass(frozen=True)
class ContentUnit:
    unit_id: str
    lesson_id: str
    kind: str
    source_name: str
    raw_text: str
    summary_id: str | None = None
    quiz_id: str | None = None
    indexed: bool = False


@dataclass(frozen=True)
class Enrollment:
    learner_id: str
    country_id: str
    enrolled_at: datetime
    unit_progress: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ProgressAdvanced:
    """Emitted by ``advance_progress`` for gamification/telemetry dispatch."""

    learner_id: str
    country_id: str
    unit_id: str
    new_state: ProgressState
    at: datetime


class CourseCatalog:
    """In-memory content tree: countries, categories, lessons, units."""

    def __init__(self):
        self.countries: dict[str, Country] = {}
        self.categories: dict[str, Category] = {}
        self.lessons: dict[str, Lesson] = {}
        self.units: dict[str, ContentUnit] = {}

    def add_country(self, country: Country) -> Country:
        self.countries[country.country_id] = country
        return country

    def add_category(self, category: Category) -> Category:
        if category.name not in CATEGORY_CATALOG:
            raise ValidationError(f"category name {category.name!r} not in catalog")
        country = self.countries.get(category.country_id)
        if country is None:
            raise UnknownCountryError(category.country_id)
        self.categories[category.category_id] = category
        if category.category_id not in country.categories:
            self.countries[country.country_id] = replace(
                country, categories=country.categories + (category.category_id,)
            )
        return category

    def add_lesson(self, lesson: Lesson) -> Lesson:
        category = self.categories[lesson.category_id]
        self.lessons[lesson.lesson_id] = lesson
        if lesson.lesson_id not in category.lessons:
            self.categories[category.category_id] = replace(
                category, lessons=category.lessons + (lesson.lesson_id,)
            )
        return lesson

    def add_unit(self, unit: ContentUnit) -> ContentUnit:
        if unit.kind not in UNIT_KINDS:
            raise ValidationError(f"unknown unit kind {unit.kind!r}")
        if not unit.raw_text:
            raise ValidationError("unit raw_text must be non-empty")
        lesson = self.lessons[unit.lesson_id]
        self.units[unit.unit_id] = unit
        if unit.unit_id not in lesson.content_units:
            self.lessons[lesson.lesson_id] = replace(
                lesson, content_units=lesson.content_units + (unit.unit_id,)
            )
        return unit

    def update_unit(self, unit: ContentUnit) -> ContentUnit:
        if unit.unit_id not in self.units:
            raise UnknownUnitError(unit.unit_id)
        self.units[unit.unit_id] = unit
        return unit

    def country_of_unit(self, unit_id: str) -> Country:
        unit = self.units.get(unit_id)
        if unit is None:
            raise UnknownUnitError(unit_id)
        category = self.categories[self.lessons[unit.lesson_id].category_id]
        return self.countries[category.country_id]

    def category_of_unit(self, unit_id: str) -> Category:
        unit = self.units.get(unit_id)
        if unit is None:
            raise UnknownUnitError(unit_id)
        return self.categories[self.lessons[unit.lesson_id].category_id]

    def units_in_country(self, country_id: str) -> list[str]:
        country = self.countries.get(country_id)
        if country is None:
            raise UnknownCountryError(country_id)
        unit_ids = []
        for category_id in country.categories:
            for lesson_id in self.categories[category_id].lessons:
                unit_ids.extend(self.lessons[lesson_id].content_units)
        return unit_ids

    def lessons_in_country(self, country_id: str) -> list[Lesson]:
        country = self.countries.get(country_id)
        if country is None:
            raise UnknownCountryError(country_id)
        out = []
        for category_id in country.categories:
            out.extend(self.lessons[lid] for lid in self.categories[category_id].lessons)
        return out


def validate_profile_fields(
    name: str,
    email: str,
    self_rated_knowledge: int,
    daily_goal_minutes: int,
) -> None:
    if not name or not name.strip():
        raise ValidationError("name must be non-empty")
    if "@" not in email:
        raise ValidationError("email must contain '@'")
    if not isinstance(self_rated_knowledge, int) or not 1 <= self_rated_knowledge <= 5:
        raise ValidationError("self_rated_knowledge must be an integer in [1, 5]")
    if not isinstance(daily_goal_minutes, int) or daily_goal_minutes <= 0:
        raise ValidationError("daily_goal_minutes must be a positive integer")


class Roster:
    """Learner registry and per-country enrollments over a catalog."""

    def __init__(self, catalog: CourseCatalog, id_factory=None, clock=utcnow):
        self.catalog = catalog
        self.profiles: dict[str, LearnerProfile] = {}
        self.enrollments: dict[tuple[str, str], Enrollment] = {}
        self._emails: dict[str, str] = {}
        self._id_factory = id_factory or _sequential_ids("learner")
        self._clock = clock
        self._lock = threading.Lock()

    def register(
        self,
        name: str,
        email: str,
        password_digest: str,
        immersion_country: str,
        learning_motivation: str = "",
        self_rated_knowledge: int = 3,
        daily_goal_minutes: int = 15,
        notifications_opt_in: bool = False,
        org_id: str | None = None,
    ) -> LearnerProfile:
        validate_profile_fields(name, email, self_rated_knowledge, daily_goal_minutes)
        if immersion_country not in self.catalog.countries:
            raise UnknownCountryError(immersion_country)
        normalized = email.strip().lower()
        with self._lock:
            if normalized in self._emails:
                raise DuplicateEmailError(f"email already registered: {normalized}")
            profile = LearnerProfile(
                learner_id=self._id_factory(),
                name=name.strip(),
                email=normalized,
                password_digest=password_digest,
                immersion_country=immersion_country,
                learning_motivation=learning_motivation,
                self_rated_knowledge=self_rated_knowledge,
                daily_goal_minutes=daily_goal_minutes,
                notifications_opt_in=notifications_opt_in,
                created_at=self._clock(),
                org_id=org_id,
            )
            self.profiles[profile.learner_id] = profile
            self._emails[normalized] = profile.learner_id
        return profile

    def restore(self, profile: LearnerProfile) -> None:
        self.profiles[profile.learner_id] = profile
        self._emails[profile.email] = profile.learner_id

    def by_email(self, email: str) -> LearnerProfile | None:
        learner_id = self._emails.get(email.strip().lower())
        return self.profiles.get(learner_id) if learner_id else None

    def get(self, learner_id: str) -> LearnerProfile:
        profile = self.profiles.get(learner_id)
        if profile is None:
            raise UnknownLearnerError(learner_id)
        return profile

    def enroll(self, learner_id: str, country_id: str) -> Enrollment:
        self.get(learner_id)
        if country_id not in self.catalog.countries:
            raise UnknownCountryError(country_id)
        key = (learner_id, country_id)
        existing = self.enrollments.get(key)
        if existing is not None:
            return existing
        enrollment = Enrollment(
            learner_id=learner_id,
            country_id=country_id,
            enrolled_at=self._clock(),
            unit_progress={
                unit_id: ProgressState.NOT_STARTED
                for unit_id in self.catalog.units_in_country(country_id)
            },
        )
        self.enrollments[key] = enrollment
        return enrollment

    def enrollment_for_unit(self, learner_id: str, unit_id: str) -> Enrollment:
        country = self.catalog.country_of_unit(unit_id)
        enrollment = self.enrollments.get((learner_id, country.country_id))
        if enrollment is None:
            raise UnknownUnitError(f"learner {learner_id} not enrolled for unit {unit_id}")
        return enrollment

    def progress(self, learner_id: str, unit_id: str) -> ProgressState:
        enrollment = self.enrollment_for_unit(learner_id, unit_id)
        return enrollment.unit_progress.get(unit_id, ProgressState.NOT_STARTED)

    def advance_progress(
        self, learner_id: str, unit_id: str, new_state: ProgressState
    ) -> tuple[Enrollment, ProgressAdvanced]:
        """Move one rung up the ladder; anything else is rejected."""
        self.get(learner_id)
        if unit_id not in self.catalog.units:
            raise UnknownUnitError(unit_id)
        enrollment = self.enrollment_for_unit(learner_id, unit_id)
        current = enrollment.unit_progress.get(unit_id, ProgressState.NOT_STARTED)
        if new_state.rung <= current.rung:
            raise RegressionAttemptError(
                f"unit {unit_id} already at {current.value}, cannot move to {new_state.value}"
            )
        if new_state.rung != current.rung + 1:
            raise SkippedRungError(
                f"unit {unit_id} at {current.value}, cannot skip to {new_state.value}"
            )
        enrollment.unit_progress[unit_id] = new_state
        event = ProgressAdvanced(
            learner_id=learner_id,
            country_id=enrollment.country_id,
            unit_id=unit_id,
            new_state=new_state,
            at=self._clock(),
        )
        return enrollment, event


def _sequential_ids(prefix: str):
    counter = iter(range(1, 10**9))

    def make() -> str:
        return f"{prefix}-{next(counter):06d}"

    return make
