"""Application container: orchestration, auth, and persistence mirroring.

This is the sole mutation path. Every write goes through a per-learner lock
and a single sqlite transaction, keeping the in-memory runtime and the
database in step; startup rebuilds the runtime from the database and
re-verifies cached totals against their ledgers.
"""

from __future__ import annotations

import hashlib
import hmac
import json
import secrets
import threading
import time
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone

from . import domain, gamification, ingestion, proficiency, scribe, treasury, worldwise
from .config import AppConfig
from .domain import CourseCatalog, ProgressState, Roster, utcnow
from .errors import (
    AuthenticationError,
    ConflictError,
    EmptySourceError,
    ForbiddenError,
    IclsError,
    NotFoundError,
    UnknownCountryError,
    UnknownLearnerError,
    UnknownScopeSubjectError,
    UnknownUnitError,
    ValidationError,
)
from .gateway import Gateway, HttpProvider, MockProvider
from .proficiency import EngagementEvent, EngagementStats, EngagementTracker, EventKind
from .store import Store, date_from_db, date_to_db, dt_from_db, dt_to_db
from .worldwise import Quiz, Question, Submission

PBKDF2_ITERATIONS = 60_000
PIPELINE_STAGES = ("ingestion", "treasury", "worldwise", "scribe")


def hash_password(password: str, iterations: int = PBKDF2_ITERATIONS) -> str:
    salt = secrets.token_bytes(16)
    digest = hashlib.pbkdf2_hmac("sha256", password.encode("utf-8"), salt, iterations)
    return f"pbkdf2_sha256${iterations}${salt.hex()}${digest.hex()}"


def verify_password(password: str, stored: str) -> bool:
    try:
        _, iterations, salt_hex, digest_hex = stored.split("$")
        digest = hashlib.pbkdf2_hmac(
            "sha256", password.encode("utf-8"), bytes.fromhex(salt_hex), int(iterations)
        )
        return hmac.compare_digest(digest.hex(), digest_hex)
    except (ValueError, AttributeError):
        return False


@dataclass
class UnitMeta:
    status: str = "draft"  # "draft" | "published"
    error_stage: str | None = None
    error_message: str | None = None
    position: int = 0


@dataclass
class FriendRequest:
    request_id: str
    from_learner: str
    to_learner: str
    state: str  # "pending" | "accepted" | "declined"


class Application:
    def __init__(self, config: AppConfig | None = None, clock=utcnow, provider=None):
        self.config = config or AppConfig()
        self.clock = clock
        self.store = Store(self.config.database_path)

        if provider is None:
            if self.config.llm_mode == "live":
                provider = HttpProvider(self.config.llm_base_url, self.config.llm_api_key)
            else:
                provider = MockProvider()
        self.gateway = Gateway(
            provider,
            model_name=self.config.llm_model,
            context_window=self.config.llm_context_window,
        )

        self.catalog = CourseCatalog()
        self.roster = Roster(self.catalog, id_factory=self.store.id_factory("learner"), clock=clock)
        self.engine = gamification.GamificationEngine(clock=clock)
        self.tracker = EngagementTracker(keep_log=False)
        self.vector_store = scribe.VectorStore()
        self.scribe = scribe.Scribe(
            self.vector_store,
            self.gateway,
            top_k=self.config.retrieval_top_k,
            alpha=self.config.retrieval_alpha,
        )
        self.treasury = treasury.TreasuryService(
            self.gateway, id_factory=self.store.id_factory("summary"), clock=clock
        )
        self.worldwise = worldwise.WorldWiseService(
            self.gateway, id_factory=self.store.id_factory("quiz"), clock=clock
        )

        self.summaries: dict[str, treasury.Summary] = {}
        self.quizzes: dict[str, Quiz] = {}
        self.chunks: dict[str, list[ingestion.Chunk]] = {}
        self.unit_meta: dict[str, UnitMeta] = {}
        self.sessions: dict[str, tuple[str, datetime]] = {}
        self.friend_requests: dict[str, FriendRequest] = {}
        self.category_scores: dict[tuple[str, str], list] = {}  # (learner, category) -> [sum, count]

        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        self._unit_pipeline_lock = threading.Lock()

        self._load_state()
        self.store.verify_gamification_totals()
        self.store.verify_engagement_stats()

    def close(self) -> None:
        self.store.close()

    def _lock_for(self, learner_id: str) -> threading.Lock:
        with self._locks_guard:
            lock = self._locks.get(learner_id)
            if lock is None:
                lock = self._locks[learner_id] = threading.Lock()
            return lock

    # ------------------------------------------------------------------
    # startup: rebuild runtime from the database
    # ------------------------------------------------------------------

    def _load_state(self) -> None:
        s = self.store
        for row in s.query("SELECT * FROM countries ORDER BY country_id"):
            self.catalog.add_country(domain.Country(row["country_id"], row["name"]))
        for row in s.query("SELECT * FROM categories ORDER BY country_id, position"):
            self.catalog.add_category(
                domain.Category(row["category_id"], row["country_id"], row["name"])
            )
        for row in s.query("SELECT * FROM lessons ORDER BY category_id, position"):
            self.catalog.add_lesson(domain.Lesson(row["lesson_id"], row["category_id"], row["title"]))
        for row in s.query("SELECT * FROM units ORDER BY lesson_id, position"):
            self.catalog.add_unit(
                domain.ContentUnit(
                    unit_id=row["unit_id"],
                    lesson_id=row["lesson_id"],
                    kind=row["kind"],
                    source_name=row["source_name"],
                    raw_text=row["raw_text"],
                    summary_id=row["summary_id"],
                    quiz_id=row["quiz_id"],
                    indexed=bool(row["indexed"]),
                )
            )
            self.unit_meta[row["unit_id"]] = UnitMeta(
                status=row["status"],
                error_stage=row["error_stage"],
                error_message=row["error_message"],
                position=row["position"],
            )
        for row in s.query("SELECT * FROM summaries"):
            self.summaries[row["summary_id"]] = treasury.Summary(
                summary_id=row["summary_id"],
                unit_id=row["unit_id"],
                text=row["text"],
                word_count=row["word_count"],
                strategy=row["strategy"],
                generated_at=dt_from_db(row["generated_at"]),
            )
        question_rows: dict[str, list] = {}
        for row in s.query("SELECT * FROM questions ORDER BY quiz_id, ordinal"):
            question_rows.setdefault(row["quiz_id"], []).append(
                Question(
                    stem=row["stem"],
                    options=(row["option_1"], row["option_2"], row["option_3"], row["option_4"]),
                    answer_index=row["answer_index"],
                )
            )
        for row in s.query("SELECT * FROM quizzes"):
            self.quizzes[row["quiz_id"]] = Quiz(
                quiz_id=row["quiz_id"],
                unit_id=row["unit_id"],
                questions=tuple(question_rows.get(row["quiz_id"], [])),
            )
        for row in s.query("SELECT * FROM chunks ORDER BY unit_id, ordinal"):
            self.chunks.setdefault(row["unit_id"], []).append(
                ingestion.Chunk(
                    chunk_id=row["chunk_id"],
                    unit_id=row["unit_id"],
                    ordinal=row["ordinal"],
                    text=row["text"],
                    token_estimate=row["token_estimate"],
                    lead_overlap=row["lead_overlap"],
                )
            )
        vector_rows = [
            (r["chunk_id"], r["unit_id"], r["ordinal"], r["embedding"], r["terms"], r["text"])
            for r in s.query("SELECT * FROM vector_records ORDER BY unit_id, ordinal")
        ]
        self.vector_store = scribe.VectorStore.from_rows(vector_rows)
        self.scribe.store = self.vector_store

        for row in s.query("SELECT * FROM learners"):
            self.roster.restore(
                domain.LearnerProfile(
                    learner_id=row["learner_id"],
                    name=row["name"],
                    email=row["email"],
                    password_digest=row["password_digest"],
                    immersion_country=row["immersion_country"],
                    learning_motivation=row["learning_motivation"],
                    self_rated_knowledge=row["self_rated_knowledge"],
                    daily_goal_minutes=row["daily_goal_minutes"],
                    notifications_opt_in=bool(row["notifications_opt_in"]),
                    created_at=dt_from_db(row["created_at"]),
                    org_id=row["org_id"],
                )
            )
        progress_rows: dict[str, dict] = {}
        for row in s.query("SELECT * FROM unit_progress"):
            progress_rows.setdefault(row["learner_id"], {})[row["unit_id"]] = ProgressState(
                row["state"]
            )
        for row in s.query("SELECT * FROM enrollments"):
            unit_progress = {
                unit_id: ProgressState.NOT_STARTED
                for unit_id in self.catalog.units_in_country(row["country_id"])
            }
            unit_progress.update(
                {
                    unit_id: state
                    for unit_id, state in progress_rows.get(row["learner_id"], {}).items()
                    if unit_id in unit_progress
                }
            )
            self.roster.enrollments[(row["learner_id"], row["country_id"])] = domain.Enrollment(
                learner_id=row["learner_id"],
                country_id=row["country_id"],
                enrolled_at=dt_from_db(row["enrolled_at"]),
                unit_progress=unit_progress,
            )

        for learner_row in s.query("SELECT * FROM gamification_totals"):
            learner_id = learner_row["learner_id"]
            xp_entries = [
                gamification.XpLedgerEntry(
                    learner_id=learner_id,
                    amount=r["amount"],
                    unit_id=r["unit_id"],
                    tier=r["tier"],
                    at=dt_from_db(r["at"]),
                )
                for r in s.query(
                    "SELECT * FROM xp_entries WHERE learner_id = ? ORDER BY seq", (learner_id,)
                )
            ]
            coin_entries = [
                gamification.CoinLedgerEntry(
                    learner_id=learner_id,
                    amount=r["amount"],
                    reason=r["reason"],
                    detail=r["detail"],
                    at=dt_from_db(r["at"]),
                )
                for r in s.query(
                    "SELECT * FROM coin_entries WHERE learner_id = ? ORDER BY seq", (learner_id,)
                )
            ]
            badges = [
                gamification.Badge(
                    learner_id=learner_id,
                    kind=r["kind"],
                    subject_id=r["subject_id"],
                    awarded_at=dt_from_db(r["awarded_at"]),
                )
                for r in s.query("SELECT * FROM badges WHERE learner_id = ?", (learner_id,))
            ]
            streak_row = s.one("SELECT * FROM streaks WHERE learner_id = ?", (learner_id,))
            streak = gamification.Streak(
                learner_id=learner_id,
                current_length=streak_row["current_length"] if streak_row else 0,
                last_active_utc_date=date_from_db(streak_row["last_active_date"])
                if streak_row
                else None,
            )
            challenges = {
                date_from_db(r["day"]): [bool(r["completed"]), bool(r["claimed"])]
                for r in s.query("SELECT * FROM challenge_days WHERE learner_id = ?", (learner_id,))
            }
            self.engine.restore_learner(
                learner_id,
                created_at=dt_from_db(learner_row["created_at"]),
                xp_entries=xp_entries,
                coin_entries=coin_entries,
                badges=badges,
                streak=streak,
                challenges=challenges,
            )

        for row in s.query("SELECT * FROM engagement_stats"):
            self.tracker.restore(
                EngagementStats(
                    learner_id=row["learner_id"],
                    country_id=row["country_id"],
                    total_seconds=row["total_seconds"],
                    attempt_count=row["attempt_count"],
                    result_count=row["result_count"],
                    score_sum=row["score_sum"],
                )
            )
        for row in s.query("SELECT * FROM sessions"):
            self.sessions[row["token"]] = (row["learner_id"], dt_from_db(row["expires_at"]))
        for row in s.query("SELECT * FROM friend_requests"):
            self.friend_requests[row["request_id"]] = FriendRequest(
                request_id=row["request_id"],
                from_learner=row["from_learner"],
                to_learner=row["to_learner"],
                state=row["state"],
            )
        for row in s.query("SELECT * FROM submissions"):
            quiz = self.quizzes.get(row["quiz_id"])
            if quiz is None:
                continue
            category = self.catalog.category_of_unit(quiz.unit_id)
            bucket = self.category_scores.setdefault(
                (row["learner_id"], category.category_id), [0.0, 0]
            )
            bucket[0] += row["score"]
            bucket[1] += 1

    # ------------------------------------------------------------------
    # auth
    # ------------------------------------------------------------------

    def register(self, fields: dict) -> dict:
        required = ("name", "email", "password", "immersion_country")
        for name in required:
            if not fields.get(name):
                raise ValidationError(f"missing required field: {name}")
        with self.store.transaction():
            profile = self.roster.register(
                name=fields["name"],
                email=fields["email"],
                password_digest=hash_password(fields["password"]),
                immersion_country=fields["immersion_country"],
                learning_motivation=fields.get("learning_motivation", ""),
                self_rated_knowledge=fields.get("self_rated_knowledge", 3),
                daily_goal_minutes=fields.get("daily_goal_minutes", 15),
                notifications_opt_in=bool(fields.get("notifications_opt_in", False)),
                org_id=fields.get("org_id"),
            )
            self.engine.register_learner(profile.learner_id, at=profile.created_at)
            self.store.execute(
                "INSERT INTO learners VALUES (?,?,?,?,?,?,?,?,?,?,?)",
                (
                    profile.learner_id,
                    profile.name,
                    profile.email,
                    profile.password_digest,
                    profile.immersion_country,
                    profile.learning_motivation,
                    profile.self_rated_knowledge,
                    profile.daily_goal_minutes,
                    int(profile.notifications_opt_in),
                    profile.org_id,
                    dt_to_db(profile.created_at),
                ),
            )
            self.store.execute(
                "INSERT INTO gamification_totals VALUES (?,?,?,?,?)",
                (profile.learner_id, 0, 0, None, dt_to_db(profile.created_at)),
            )
            self.store.execute(
                "INSERT INTO streaks VALUES (?,?,?)", (profile.learner_id, 0, None)
            )
        return self._public_profile(profile)

    def login(self, email: str, password: str) -> dict:
        profile = self.roster.by_email(email)
        if profile is None or not verify_password(password, profile.password_digest):
            raise AuthenticationError("invalid email or password")
        token = secrets.token_hex(32)
        expires = self.clock() + timedelta(hours=self.config.session_ttl_hours)
        with self._lock_for(profile.learner_id), self.store.transaction():
            self.sessions[token] = (profile.learner_id, expires)
            self.store.execute(
                "INSERT INTO sessions VALUES (?,?,?)",
                (token, profile.learner_id, dt_to_db(expires)),
            )
            streak = self.engine.record_login(profile.learner_id, self.clock())
            self._write_streak(profile.learner_id, streak)
        return {
            "token": token,
            "expires_at": dt_to_db(expires),
            "learner": self._public_profile(profile),
        }

    def logout(self, token: str) -> None:
        if token in self.sessions:
            with self.store.transaction():
                self.sessions.pop(token, None)
                self.store.execute("DELETE FROM sessions WHERE token = ?", (token,))

    def authenticate(self, token: str | None) -> str:
        if not token:
            raise AuthenticationError("missing bearer token")
        entry = self.sessions.get(token)
        if entry is None:
            raise AuthenticationError("unknown session token")
        learner_id, expires = entry
        if self.clock() >= expires:
            raise AuthenticationError("session expired")
        return learner_id

    def require_admin(self, token: str | None) -> None:
        if not token:
            raise AuthenticationError("missing bearer token")
        if token != self.config.admin_bootstrap_token:
            raise ForbiddenError("admin role required")

    # ------------------------------------------------------------------
    # catalog reads
    # ------------------------------------------------------------------

    def public_countries(self) -> list[dict]:
        """Unauthenticated id/name pairs so the sign-up form can offer a choice."""
        return [
            {"country_id": c.country_id, "name": c.name}
            for c in sorted(self.catalog.countries.values(), key=lambda c: c.country_id)
        ]

    def list_countries(self, learner_id: str) -> list[dict]:
        enrolled = {
            country_id
            for (lid, country_id) in self.roster.enrollments
            if lid == learner_id
        }
        return [
            {
                "country_id": c.country_id,
                "name": c.name,
                "category_count": len(c.categories),
                "enrolled": c.country_id in enrolled,
            }
            for c in sorted(self.catalog.countries.values(), key=lambda c: c.country_id)
        ]

    def _published_units(self, lesson: domain.Lesson) -> list[domain.ContentUnit]:
        return [
            self.catalog.units[unit_id]
            for unit_id in lesson.content_units
            if self.unit_meta.get(unit_id, UnitMeta()).status == "published"
        ]

    def _progress_of(self, learner_id: str, unit_id: str) -> ProgressState:
        country = self.catalog.country_of_unit(unit_id)
        enrollment = self.roster.enrollments.get((learner_id, country.country_id))
        if enrollment is None:
            return ProgressState.NOT_STARTED
        return enrollment.unit_progress.get(unit_id, ProgressState.NOT_STARTED)

    def list_categories(self, learner_id: str, country_id: str) -> list[dict]:
        country = self.catalog.countries.get(country_id)
        if country is None:
            raise UnknownCountryError(country_id)
        out = []
        for category_id in country.categories:
            category = self.catalog.categories[category_id]
            units = []
            for lesson_id in category.lessons:
                units.extend(self._published_units(self.catalog.lessons[lesson_id]))
            done = sum(
                1
                for u in units
                if self._progress_of(learner_id, u.unit_id).rung
                >= ProgressState.SUMMARY_TESTED.rung
            )
            out.append(
                {
                    "category_id": category_id,
                    "name": category.name,
                    "lesson_count": len(category.lessons),
                    "unit_count": len(units),
                    "progress": done / len(units) if units else 0.0,
                }
            )
        return out

    def list_lessons(self, learner_id: str, category_id: str) -> list[dict]:
        category = self.catalog.categories.get(category_id)
        if category is None:
            raise NotFoundError(f"unknown category {category_id}")
        out = []
        for lesson_id in category.lessons:
            lesson = self.catalog.lessons[lesson_id]
            units = self._published_units(lesson)
            done = sum(
                1
                for u in units
                if self._progress_of(learner_id, u.unit_id).rung
                >= ProgressState.SUMMARY_TESTED.rung
            )
            out.append(
                {
                    "lesson_id": lesson_id,
                    "title": lesson.title,
                    "unit_count": len(units),
                    "progress": done / len(units) if units else 0.0,
                }
            )
        return out

    def lesson_detail(self, learner_id: str, lesson_id: str) -> dict:
        lesson = self.catalog.lessons.get(lesson_id)
        if lesson is None:
            raise NotFoundError(f"unknown lesson {lesson_id}")
        units = []
        for unit in self._published_units(lesson):
            units.append(
                {
                    "unit_id": unit.unit_id,
                    "kind": unit.kind,
                    "source_name": unit.source_name,
                    "raw_text": unit.raw_text,
                    "progress_state": self._progress_of(learner_id, unit.unit_id).value,
                    "has_summary": unit.summary_id is not None,
                    "has_quiz": unit.quiz_id is not None,
                    "indexed": unit.indexed,
                }
            )
        category = self.catalog.categories[lesson.category_id]
        return {
            "lesson_id": lesson_id,
            "title": lesson.title,
            "category_id": lesson.category_id,
            "category_name": category.name,
            "country_id": category.country_id,
            "units": units,
        }

    def stories(self) -> list[dict]:
        return [
            {"story_id": r["story_id"], "title": r["title"], "url": r["url"]}
            for r in self.store.query("SELECT * FROM stories ORDER BY story_id")
        ]

    # ------------------------------------------------------------------
    # learner flows
    # ------------------------------------------------------------------

    def enroll(self, learner_id: str, country_id: str) -> dict:
        with self._lock_for(learner_id), self.store.transaction():
            existing = self.roster.enrollments.get((learner_id, country_id))
            enrollment = self.roster.enroll(learner_id, country_id)
            if existing is None:
                self.store.execute(
                    "INSERT INTO enrollments VALUES (?,?,?)",
                    (learner_id, country_id, dt_to_db(enrollment.enrolled_at)),
                )
        return {
            "learner_id": learner_id,
            "country_id": country_id,
            "enrolled_at": dt_to_db(enrollment.enrolled_at),
            "unit_progress": {u: s.value for u, s in sorted(enrollment.unit_progress.items())},
        }

    def _learner_unit(self, unit_id: str) -> domain.ContentUnit:
        unit = self.catalog.units.get(unit_id)
        if unit is None or self.unit_meta.get(unit_id, UnitMeta()).status != "published":
            raise UnknownUnitError(unit_id)
        return unit

    def _advance_and_award(self, learner_id: str, unit_id: str, new_state: ProgressState) -> int:
        """Domain ladder advance plus the matching XP award. Caller holds locks."""
        _, event = self.roster.advance_progress(learner_id, unit_id, new_state)
        delta = self.engine.award_lesson_xp(learner_id, unit_id, new_state)
        self.store.execute(
            "INSERT INTO unit_progress VALUES (?,?,?) "
            "ON CONFLICT(learner_id, unit_id) DO UPDATE SET state = excluded.state",
            (learner_id, unit_id, new_state.value),
        )
        entry = self.engine.xp_entries_of(learner_id)[-1]
        self.store.execute(
            "INSERT INTO xp_entries(learner_id, unit_id, tier, amount, at) VALUES (?,?,?,?,?)",
            (learner_id, unit_id, entry.tier, entry.amount, dt_to_db(entry.at)),
        )
        self._write_totals(learner_id)
        return delta

    def _record_event(self, event: EngagementEvent) -> None:
        self.tracker.record(event)
        self.store.execute(
            "INSERT INTO engagement_events(learner_id, country_id, kind, seconds, score, at) "
            "VALUES (?,?,?,?,?,?)",
            (
                event.learner_id,
                event.country_id,
                event.kind.value,
                event.seconds,
                event.score,
                dt_to_db(event.at),
            ),
        )
        stats = self.tracker.stats_for(event.learner_id, event.country_id)
        self.store.execute(
            "INSERT INTO engagement_stats VALUES (?,?,?,?,?,?) "
            "ON CONFLICT(learner_id, country_id) DO UPDATE SET "
            "total_seconds = excluded.total_seconds, attempt_count = excluded.attempt_count, "
            "result_count = excluded.result_count, score_sum = excluded.score_sum",
            (
                stats.learner_id,
                stats.country_id,
                stats.total_seconds,
                stats.attempt_count,
                stats.result_count,
                stats.score_sum,
            ),
        )

    def _write_totals(self, learner_id: str) -> None:
        xp, coins = self.engine.totals(learner_id)
        entries = self.engine.xp_entries_of(learner_id)
        last_xp_at = entries[-1].at if entries else None
        self.store.execute(
            "UPDATE gamification_totals SET total_xp = ?, total_coins = ?, last_xp_at = ? "
            "WHERE learner_id = ?",
            (xp, coins, dt_to_db(last_xp_at), learner_id),
        )

    def _write_streak(self, learner_id: str, streak: gamification.Streak) -> None:
        self.store.execute(
            "UPDATE streaks SET current_length = ?, last_active_date = ? WHERE learner_id = ?",
            (streak.current_length, date_to_db(streak.last_active_utc_date), learner_id),
        )

    def watch_unit(self, learner_id: str, unit_id: str, seconds: int | None = None) -> dict:
        unit = self._learner_unit(unit_id)
        country = self.catalog.country_of_unit(unit_id)
        with self._lock_for(learner_id), self.store.transaction():
            xp = self._advance_and_award(learner_id, unit_id, ProgressState.WATCHED)
            if seconds is not None:
                self._record_event(
                    EngagementEvent(
                        learner_id=learner_id,
                        country_id=country.country_id,
                        kind=EventKind.TIME_SPENT,
                        at=self.clock(),
                        seconds=seconds,
                    )
                )
        return {
            "unit_id": unit_id,
            "progress_state": ProgressState.WATCHED.value,
            "xp_delta": xp,
        }

    def unit_summary(self, learner_id: str, unit_id: str) -> dict:
        unit = self._learner_unit(unit_id)
        if unit.summary_id is None:
            raise NotFoundError(f"unit {unit_id} has no summary")
        summary = self.summaries[unit.summary_id]
        return {
            "summary_id": summary.summary_id,
            "unit_id": unit_id,
            "text": summary.text,
            "word_count": summary.word_count,
            "strategy": summary.strategy,
            "generated_at": dt_to_db(summary.generated_at),
        }

    def unit_quiz(self, learner_id: str, unit_id: str) -> dict:
        unit = self._learner_unit(unit_id)
        if unit.quiz_id is None:
            raise NotFoundError(f"unit {unit_id} has no quiz")
        return self._learner_quiz_payload(self.quizzes[unit.quiz_id])

    @staticmethod
    def _learner_quiz_payload(quiz: Quiz) -> dict:
        # answer_index is deliberately withheld from learner-facing payloads
        return {
            "quiz_id": quiz.quiz_id,
            "unit_id": quiz.unit_id,
            "questions": [
                {"ordinal": i, "stem": q.stem, "options": list(q.options)}
                for i, q in enumerate(quiz.questions)
            ],
        }

    def submit_quiz(self, learner_id: str, quiz_id: str, answers: dict) -> dict:
        quiz = self.quizzes.get(quiz_id)
        if quiz is None:
            raise NotFoundError(f"unknown quiz {quiz_id}")
        self._learner_unit(quiz.unit_id)
        country = self.catalog.country_of_unit(quiz.unit_id)
        category = self.catalog.category_of_unit(quiz.unit_id)
        self.roster.enrollment_for_unit(learner_id, quiz.unit_id)

        submission = Submission(
            learner_id=learner_id,
            quiz_id=quiz_id,
            answers={int(k): int(v) for k, v in answers.items()},
            submitted_at=self.clock(),
        )
        report = worldwise.grade(quiz, submission)

        with self._lock_for(learner_id), self.store.transaction():
            submission_id = self.store.next_id("submission")
            self.store.execute(
                "INSERT INTO submissions VALUES (?,?,?,?,?,?,?,?)",
                (
                    submission_id,
                    learner_id,
                    quiz_id,
                    json.dumps({str(k): v for k, v in submission.answers.items()}),
                    report.correct_count,
                    report.total,
                    report.score,
                    dt_to_db(submission.submitted_at),
                ),
            )
            bucket = self.category_scores.setdefault((learner_id, category.category_id), [0.0, 0])
            bucket[0] += report.score
            bucket[1] += 1

            coin_delta = self.engine.award_quiz_coins(learner_id, report.correct_count)
            if coin_delta:
                entry = self.engine.coin_entries_of(learner_id)[-1]
                self.store.execute(
                    "INSERT INTO coin_entries(learner_id, reason, detail, amount, at) "
                    "VALUES (?,?,?,?,?)",
                    (learner_id, entry.reason, entry.detail, entry.amount, dt_to_db(entry.at)),
                )

            xp_delta = 0
            if self._progress_of(learner_id, quiz.unit_id) is ProgressState.WATCHED:
                xp_delta = self._advance_and_award(
                    learner_id, quiz.unit_id, ProgressState.SUMMARY_TESTED
                )
            elif coin_delta:
                self._write_totals(learner_id)

            for event_kind, score in ((EventKind.QUIZ_ATTEMPT, None), (EventKind.QUIZ_RESULT, report.score)):
                self._record_event(
                    EngagementEvent(
                        learner_id=learner_id,
                        country_id=country.country_id,
                        kind=event_kind,
                        at=self.clock(),
                        score=score,
                    )
                )

            today = self.clock().astimezone(timezone.utc).date()
            challenge_completed = False
            if quiz_id == self._challenge_quiz_id(today):
                self.engine.complete_daily_challenge(learner_id, today)
                self._write_challenge_day(learner_id, today)
                challenge_completed = True

            new_badges = self._evaluate_badges(learner_id)

        return {
            "submission_id": submission_id,
            "grade": {
                "correct_count": report.correct_count,
                "total": report.total,
                "score": report.score,
                "per_question": [
                    {"answered": f.answered, "correct": f.correct} for f in report.per_question
                ],
            },
            "xp_delta": xp_delta,
            "coin_delta": coin_delta,
            "new_badges": [{"kind": b.kind, "subject_id": b.subject_id} for b in new_badges],
            "progress_state": self._progress_of(learner_id, quiz.unit_id).value,
            "challenge_completed": challenge_completed,
        }

    def _evaluate_badges(self, learner_id: str) -> list[gamification.Badge]:
        standings = []
        country_categories: dict[str, list[str]] = {}
        enrolled_countries = [
            country_id for (lid, country_id) in self.roster.enrollments if lid == learner_id
        ]
        for country_id in enrolled_countries:
            country = self.catalog.countries[country_id]
            country_categories[country_id] = list(country.categories)
            for category_id in country.categories:
                category = self.catalog.categories[category_id]
                units = []
                for lesson_id in category.lessons:
                    units.extend(self._published_units(self.catalog.lessons[lesson_id]))
                complete = bool(units) and all(
                    self._progress_of(learner_id, u.unit_id).rung
                    >= ProgressState.SUMMARY_TESTED.rung
                    for u in units
                )
                bucket = self.category_scores.get((learner_id, category_id))
                mean = bucket[0] / bucket[1] if bucket and bucket[1] else None
                standings.append(
                    gamification.CategoryStanding(
                        category_id=category_id,
                        country_id=country_id,
                        complete=complete,
                        mean_quiz_score=mean,
                    )
                )
        new_badges = self.engine.evaluate_badges(learner_id, standings, country_categories)
        for badge in new_badges:
            self.store.execute(
                "INSERT INTO badges VALUES (?,?,?,?)",
                (learner_id, badge.kind, badge.subject_id, dt_to_db(badge.awarded_at)),
            )
        return new_badges

    def chat_with_unit(self, learner_id: str, unit_id: str, question: str, k: int | None = None) -> dict:
        unit = self._learner_unit(unit_id)
        if not unit.indexed:
            raise NotFoundError(f"unit {unit_id} is not indexed for chat")
        self.roster.enrollment_for_unit(learner_id, unit_id)
        answer = self.scribe.chat(unit_id, question, k)
        xp_delta = 0
        with self._lock_for(learner_id), self.store.transaction():
            if self._progress_of(learner_id, unit_id) is ProgressState.SUMMARY_TESTED:
                xp_delta = self._advance_and_award(
                    learner_id, unit_id, ProgressState.PRACTICE_TESTED
                )
        return {
            "unit_id": unit_id,
            "question": answer.question,
            "answer_text": answer.answer_text,
            "used_chunk_ids": list(answer.used_chunk_ids),
            "xp_delta": xp_delta,
            "progress_state": self._progress_of(learner_id, unit_id).value,
        }

    # ------------------------------------------------------------------
    # gamification surfaces
    # ------------------------------------------------------------------

    def leaderboard(
        self,
        learner_id: str,
        scope: str = "global",
        subject: str | None = None,
        limit: int | None = None,
    ) -> dict:
        if scope == "global":
            members = list(self.roster.profiles)
        elif scope == "country":
            country_id = subject or self.roster.get(learner_id).immersion_country
            if country_id not in self.catalog.countries:
                raise UnknownScopeSubjectError(f"unknown country {country_id}")
            members = [lid for (lid, cid) in self.roster.enrollments if cid == country_id]
        elif scope == "friends":
            target = subject or learner_id
            if target not in self.roster.profiles:
                raise UnknownScopeSubjectError(f"unknown learner {target}")
            members = sorted(self._friends_of(target) | {target})
        elif scope == "organization":
            org_id = subject or self.roster.get(learner_id).org_id
            members = [
                lid for lid, profile in self.roster.profiles.items() if profile.org_id == org_id
            ]
            if not org_id or not members:
                raise UnknownScopeSubjectError(f"unknown organization {org_id}")
        else:
            raise ValidationError(f"unknown leaderboard scope {scope!r}")
        entries = self.engine.leaderboard(members, limit)
        return {
            "scope": scope,
            "subject": subject,
            "entries": [
                {
                    "rank": e.rank,
                    "learner_id": e.learner_id,
                    "name": self.roster.profiles[e.learner_id].name,
                    "total_xp": e.total_xp,
                }
                for e in entries
            ],
        }

    def profile_overview(self, learner_id: str) -> dict:
        profile = self.roster.get(learner_id)
        xp, coins = self.engine.totals(learner_id)
        streak = self.engine.streak_of(learner_id)
        scores = []
        for (lid, country_id) in sorted(self.roster.enrollments):
            if lid != learner_id:
                continue
            stats = self.tracker.stats_for(learner_id, country_id)
            score = proficiency.compute_proficiency(stats)
            scores.append(
                {
                    "country_id": country_id,
                    "value": score.value,
                    "components": score.components,
                }
            )
        return {
            **self._public_profile(profile),
            "total_xp": xp,
            "total_coins": coins,
            "streak": {
                "current_length": streak.current_length,
                "last_active_utc_date": date_to_db(streak.last_active_utc_date),
            },
            "badges": [
                {"kind": b.kind, "subject_id": b.subject_id, "awarded_at": dt_to_db(b.awarded_at)}
                for b in sorted(
                    self.engine.badges_of(learner_id), key=lambda b: (b.awarded_at, b.subject_id)
                )
            ],
            "proficiency": scores,
        }

    @staticmethod
    def _public_profile(profile: domain.LearnerProfile) -> dict:
        return {
            "learner_id": profile.learner_id,
            "name": profile.name,
            "email": profile.email,
            "immersion_country": profile.immersion_country,
            "learning_motivation": profile.learning_motivation,
            "self_rated_knowledge": profile.self_rated_knowledge,
            "daily_goal_minutes": profile.daily_goal_minutes,
            "notifications_opt_in": profile.notifications_opt_in,
            "org_id": profile.org_id,
            "created_at": dt_to_db(profile.created_at),
        }

    def recommendations(self, learner_id: str) -> list[dict]:
        self.roster.get(learner_id)
        candidates: list[proficiency.LessonCandidate] = []
        finished: set[str] = set()
        means: dict[str, float] = {}
        friend_completed: set[str] = set()
        friends = self._friends_of(learner_id)
        for (lid, country_id) in sorted(self.roster.enrollments):
            if lid != learner_id:
                continue
            for lesson in self.catalog.lessons_in_country(country_id):
                units = self._published_units(lesson)
                if not units:
                    continue
                candidates.append(
                    proficiency.LessonCandidate(
                        lesson_id=lesson.lesson_id, category_id=lesson.category_id
                    )
                )
                if all(
                    self._progress_of(learner_id, u.unit_id).rung
                    >= ProgressState.SUMMARY_TESTED.rung
                    for u in units
                ):
                    finished.add(lesson.lesson_id)
        for friend in friends:
            for (lid, country_id) in sorted(self.roster.enrollments):
                if lid != friend:
                    continue
                for lesson in self.catalog.lessons_in_country(country_id):
                    units = self._published_units(lesson)
                    if units and all(
                        self._progress_of(friend, u.unit_id).rung
                        >= ProgressState.SUMMARY_TESTED.rung
                        for u in units
                    ):
                        friend_completed.add(lesson.lesson_id)
        for (lid, category_id), bucket in self.category_scores.items():
            if lid == learner_id and bucket[1]:
                means[category_id] = bucket[0] / bucket[1]
        ranked = proficiency.rank_recommendations(candidates, finished, means, friend_completed)
        out = []
        for lesson_id in ranked:
            lesson = self.catalog.lessons[lesson_id]
            category = self.catalog.categories[lesson.category_id]
            out.append(
                {
                    "lesson_id": lesson_id,
                    "title": lesson.title,
                    "category_id": category.category_id,
                    "category_name": category.name,
                    "country_id": category.country_id,
                }
            )
        return out

    # ------------------------------------------------------------------
    # friends
    # ------------------------------------------------------------------

    def _friends_of(self, learner_id: str) -> set[str]:
        friends = set()
        for request in self.friend_requests.values():
            if request.state != "accepted":
                continue
            if request.from_learner == learner_id:
                friends.add(request.to_learner)
            elif request.to_learner == learner_id:
                friends.add(request.from_learner)
        return friends

    def send_friend_request(self, learner_id: str, to_learner: str) -> dict:
        self.roster.get(learner_id)
        self.roster.get(to_learner)
        if learner_id == to_learner:
            raise ValidationError("cannot befriend yourself")
        pair = frozenset((learner_id, to_learner))
        for request in self.friend_requests.values():
            if frozenset((request.from_learner, request.to_learner)) == pair and request.state != "declined":
                raise ConflictError(f"request already {request.state} for this pair")
        with self.store.transaction():
            request = FriendRequest(
                request_id=self.store.next_id("friendreq"),
                from_learner=learner_id,
                to_learner=to_learner,
                state="pending",
            )
            self.friend_requests[request.request_id] = request
            self.store.execute(
                "INSERT INTO friend_requests VALUES (?,?,?,?)",
                (request.request_id, request.from_learner, request.to_learner, request.state),
            )
        return self._request_payload(request)

    def respond_friend_request(self, learner_id: str, request_id: str, accept: bool) -> dict:
        request = self.friend_requests.get(request_id)
        if request is None:
            raise NotFoundError(f"unknown friend request {request_id}")
        if request.to_learner != learner_id:
            raise ForbiddenError("only the recipient can respond")
        if request.state != "pending":
            raise ConflictError(f"request already {request.state}")
        with self.store.transaction():
            request.state = "accepted" if accept else "declined"
            self.store.execute(
                "UPDATE friend_requests SET state = ? WHERE request_id = ?",
                (request.state, request_id),
            )
        return self._request_payload(request)

    def _request_payload(self, request: FriendRequest) -> dict:
        return {
            "request_id": request.request_id,
            "from_learner": request.from_learner,
            "from_name": self.roster.profiles[request.from_learner].name,
            "to_learner": request.to_learner,
            "to_name": self.roster.profiles[request.to_learner].name,
            "state": request.state,
        }

    def list_friends(self, learner_id: str) -> dict:
        self.roster.get(learner_id)
        friends = [
            {"learner_id": fid, "name": self.roster.profiles[fid].name}
            for fid in sorted(self._friends_of(learner_id))
        ]
        incoming = [
            self._request_payload(r)
            for r in self.friend_requests.values()
            if r.to_learner == learner_id and r.state == "pending"
        ]
        outgoing = [
            self._request_payload(r)
            for r in self.friend_requests.values()
            if r.from_learner == learner_id and r.state == "pending"
        ]
        return {"friends": friends, "incoming": incoming, "outgoing": outgoing}

    # ------------------------------------------------------------------
    # daily challenge
    # ------------------------------------------------------------------

    def _challenge_quiz_id(self, day: date) -> str | None:
        quiz_ids = sorted(
            quiz_id
            for quiz_id, quiz in self.quizzes.items()
            if self.unit_meta.get(quiz.unit_id, UnitMeta()).status == "published"
        )
        if not quiz_ids:
            return None
        digest = hashlib.sha256(day.isoformat().encode()).digest()
        return quiz_ids[int.from_bytes(digest[:4], "big") % len(quiz_ids)]

    def daily_challenge(self, learner_id: str) -> dict:
        today = self.clock().astimezone(timezone.utc).date()
        quiz_id = self._challenge_quiz_id(today)
        completed, claimed = self.engine.challenge_status(learner_id, today)
        quiz = self.quizzes.get(quiz_id) if quiz_id else None
        return {
            "date": today.isoformat(),
            "quiz_id": quiz_id,
            "unit_id": quiz.unit_id if quiz else None,
            "completed": completed,
            "claimed": claimed,
            "reward_coins": self.engine.daily_challenge_coins,
        }

    def _write_challenge_day(self, learner_id: str, day: date) -> None:
        completed, claimed = self.engine.challenge_status(learner_id, day)
        self.store.execute(
            "INSERT INTO challenge_days VALUES (?,?,?,?) "
            "ON CONFLICT(learner_id, day) DO UPDATE SET completed = excluded.completed, "
            "claimed = excluded.claimed",
            (learner_id, date_to_db(day), int(completed), int(claimed)),
        )

    def claim_daily_challenge(self, learner_id: str) -> dict:
        today = self.clock().astimezone(timezone.utc).date()
        with self._lock_for(learner_id), self.store.transaction():
            coins = self.engine.claim_daily_challenge(learner_id, today)
            entry = self.engine.coin_entries_of(learner_id)[-1]
            self.store.execute(
                "INSERT INTO coin_entries(learner_id, reason, detail, amount, at) VALUES (?,?,?,?,?)",
                (learner_id, entry.reason, entry.detail, entry.amount, dt_to_db(entry.at)),
            )
            self._write_challenge_day(learner_id, today)
            self._write_totals(learner_id)
        return {"date": today.isoformat(), "coin_delta": coins}

    # ------------------------------------------------------------------
    # admin pipeline
    # ------------------------------------------------------------------

    def admin_upload(self, metadata: dict, payload: bytes | str) -> dict:
        for name in ("country", "category", "lesson"):
            if not metadata.get(name):
                raise ValidationError(f"metadata missing {name!r}")
        if isinstance(payload, (bytes, str)) and not payload:
            raise EmptySourceError("upload payload is empty")
        kind = metadata.get("kind", "document")
        if kind not in domain.UNIT_KINDS:
            raise ValidationError(f"unknown unit kind {kind!r}")
        source_format = metadata.get(
            "source_format",
            "transcript_lines" if kind == "video_transcript" else "plain_text",
        )

        deadline = time.monotonic() + self.config.pipeline_timeout_seconds
        with self._unit_pipeline_lock, self.store.transaction():
            country, category, lesson = self._ensure_hierarchy(metadata)
            unit = domain.ContentUnit(
                unit_id=self.store.next_id("unit"),
                lesson_id=lesson.lesson_id,
                kind=kind,
                source_name=metadata.get("source_name", "upload"),
                raw_text="(pending)",
            )
            meta = UnitMeta(status="draft", position=len(lesson.content_units))

            stage = "ingestion"
            error: tuple[str, str] | None = None
            doc = None
            try:
                doc = ingestion.extract_text(payload, unit.unit_id, kind=source_format)
                unit = domain.ContentUnit(
                    unit_id=unit.unit_id,
                    lesson_id=unit.lesson_id,
                    kind=unit.kind,
                    source_name=unit.source_name,
                    raw_text=doc.text,
                )
                unit_chunks = ingestion.chunk(doc)
            except IclsError as exc:
                error = (stage, f"{exc.code}: {exc}")
                unit_chunks = []

            summary = None
            if error is None:
                stage = "treasury"
                try:
                    self._check_deadline(deadline, stage)
                    summary = self.treasury.generate_summary(
                        unit, metadata.get("instruction", "")
                    )
                except IclsError as exc:
                    error = (stage, f"{exc.code}: {exc}")

            quiz = None
            if error is None:
                stage = "worldwise"
                try:
                    self._check_deadline(deadline, stage)
                    quiz = self.worldwise.generate_quiz(unit)
                except IclsError as exc:
                    error = (stage, f"{exc.code}: {exc}")

            indexed = False
            if error is None:
                stage = "scribe"
                try:
                    self._check_deadline(deadline, stage)
                    self.vector_store.index_unit(unit.unit_id, unit_chunks)
                    indexed = True
                except IclsError as exc:
                    error = (stage, f"{exc.code}: {exc}")

            unit = domain.ContentUnit(
                unit_id=unit.unit_id,
                lesson_id=unit.lesson_id,
                kind=unit.kind,
                source_name=unit.source_name,
                raw_text=unit.raw_text,
                summary_id=summary.summary_id if summary else None,
                quiz_id=quiz.quiz_id if quiz else None,
                indexed=indexed,
            )
            if error is None:
                meta.status = "published"
            else:
                meta.status = "draft"
                meta.error_stage, meta.error_message = error

            self.catalog.add_unit(unit)
            self.unit_meta[unit.unit_id] = meta
            if summary:
                self.summaries[summary.summary_id] = summary
            if quiz:
                self.quizzes[quiz.quiz_id] = quiz
            if error is None:
                self.chunks[unit.unit_id] = unit_chunks
            self._persist_unit_bundle(unit, meta, summary, quiz, unit_chunks if error is None else [])
            self._extend_enrollments(country.country_id, unit.unit_id)

        return self.admin_unit(unit.unit_id)

    @staticmethod
    def _check_deadline(deadline: float, stage: str) -> None:
        if time.monotonic() > deadline:
            raise ValidationError(f"pipeline timeout before stage {stage}")

    def _ensure_hierarchy(self, metadata: dict):
        country_name = metadata["country"]
        category_name = metadata["category"]
        lesson_title = metadata["lesson"]
        country = next(
            (c for c in self.catalog.countries.values() if c.name == country_name), None
        )
        if country is None:
            country = self.catalog.add_country(
                domain.Country(country_id=self.store.next_id("country"), name=country_name)
            )
            self.store.execute(
                "INSERT INTO countries VALUES (?,?)", (country.country_id, country.name)
            )
        category = next(
            (
                self.catalog.categories[cid]
                for cid in country.categories
                if self.catalog.categories[cid].name == category_name
            ),
            None,
        )
        if category is None:
            category = self.catalog.add_category(
                domain.Category(
                    category_id=self.store.next_id("category"),
                    country_id=country.country_id,
                    name=category_name,
                )
            )
            country = self.catalog.countries[country.country_id]
            self.store.execute(
                "INSERT INTO categories VALUES (?,?,?,?)",
                (
                    category.category_id,
                    category.country_id,
                    category.name,
                    len(country.categories) - 1,
                ),
            )
        category = self.catalog.categories[category.category_id]
        lesson = next(
            (
                self.catalog.lessons[lid]
                for lid in category.lessons
                if self.catalog.lessons[lid].title == lesson_title
            ),
            None,
        )
        if lesson is None:
            lesson = self.catalog.add_lesson(
                domain.Lesson(
                    lesson_id=self.store.next_id("lesson"),
                    category_id=category.category_id,
                    title=lesson_title,
                )
            )
            category = self.catalog.categories[category.category_id]
            self.store.execute(
                "INSERT INTO lessons VALUES (?,?,?,?)",
                (lesson.lesson_id, lesson.category_id, lesson.title, len(category.lessons) - 1),
            )
        return country, category, self.catalog.lessons[lesson.lesson_id]

    def _persist_unit_bundle(self, unit, meta, summary, quiz, unit_chunks) -> None:
        self.store.execute(
            "INSERT INTO units VALUES (?,?,?,?,?,?,?,?,?,?,?,?) "
            "ON CONFLICT(unit_id) DO UPDATE SET raw_text = excluded.raw_text, "
            "summary_id = excluded.summary_id, quiz_id = excluded.quiz_id, "
            "indexed = excluded.indexed, status = excluded.status, "
            "error_stage = excluded.error_stage, error_message = excluded.error_message",
            (
                unit.unit_id,
                unit.lesson_id,
                unit.kind,
                unit.source_name,
                unit.raw_text,
                unit.summary_id,
                unit.quiz_id,
                int(unit.indexed),
                meta.status,
                meta.error_stage,
                meta.error_message,
                meta.position,
            ),
        )
        if summary:
            self.store.execute(
                "INSERT INTO summaries VALUES (?,?,?,?,?,?)",
                (
                    summary.summary_id,
                    summary.unit_id,
                    summary.text,
                    summary.word_count,
                    summary.strategy,
                    dt_to_db(summary.generated_at),
                ),
            )
        if quiz:
            self.store.execute(
                "INSERT INTO quizzes VALUES (?,?)", (quiz.quiz_id, quiz.unit_id)
            )
            for i, question in enumerate(quiz.questions):
                self.store.execute(
                    "INSERT INTO questions VALUES (?,?,?,?,?,?,?,?)",
                    (
                        quiz.quiz_id,
                        i,
                        question.stem,
                        question.options[0],
                        question.options[1],
                        question.options[2],
                        question.options[3],
                        question.answer_index,
                    ),
                )
        for c in unit_chunks:
            self.store.execute(
                "INSERT INTO chunks VALUES (?,?,?,?,?,?)",
                (c.chunk_id, c.unit_id, c.ordinal, c.text, c.token_estimate, c.lead_overlap),
            )
        if unit.indexed:
            for row in self.vector_store.to_rows():
                if row[1] != unit.unit_id:
                    continue
                self.store.execute(
                    "INSERT INTO vector_records VALUES (?,?,?,?,?,?) "
                    "ON CONFLICT(chunk_id) DO UPDATE SET embedding = excluded.embedding, "
                    "terms = excluded.terms, text = excluded.text",
                    row,
                )

    def _extend_enrollments(self, country_id: str, unit_id: str) -> None:
        for (learner_id, enrolled_country), enrollment in self.roster.enrollments.items():
            if enrolled_country == country_id and unit_id not in enrollment.unit_progress:
                enrollment.unit_progress[unit_id] = ProgressState.NOT_STARTED

    def admin_unit(self, unit_id: str) -> dict:
        unit = self.catalog.units.get(unit_id)
        if unit is None:
            raise UnknownUnitError(unit_id)
        meta = self.unit_meta.get(unit_id, UnitMeta())
        quiz = self.quizzes.get(unit.quiz_id) if unit.quiz_id else None
        summary = self.summaries.get(unit.summary_id) if unit.summary_id else None
        return {
            "unit_id": unit.unit_id,
            "lesson_id": unit.lesson_id,
            "kind": unit.kind,
            "source_name": unit.source_name,
            "status": meta.status,
            "error": (
                {"stage": meta.error_stage, "message": meta.error_message}
                if meta.error_stage
                else None
            ),
            "indexed": unit.indexed,
            "chunk_count": self.vector_store.record_count(unit.unit_id),
            "summary": (
                {
                    "summary_id": summary.summary_id,
                    "word_count": summary.word_count,
                    "strategy": summary.strategy,
                    "text": summary.text,
                }
                if summary
                else None
            ),
            "quiz": (
                {
                    "quiz_id": quiz.quiz_id,
                    "question_count": len(quiz.questions),
                    "questions": [
                        {
                            "ordinal": i,
                            "stem": q.stem,
                            "options": list(q.options),
                            "answer_index": q.answer_index,
                        }
                        for i, q in enumerate(quiz.questions)
                    ],
                }
                if quiz
                else None
            ),
        }

    def add_story(self, story_id: str, title: str, url: str) -> None:
        with self.store.transaction():
            self.store.execute(
                "INSERT INTO stories VALUES (?,?,?) ON CONFLICT(story_id) DO UPDATE SET "
                "title = excluded.title, url = excluded.url",
                (story_id, title, url),
            )
