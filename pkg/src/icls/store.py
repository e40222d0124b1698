"""Relational persistence on sqlite.

The schema mirrors the domain invariants with foreign keys and unique
constraints; the engine is incidental. Everything needed to rebuild the
in-memory runtime — including the vector store blobs — lives here, and
cached totals are re-verified against their ledgers on every startup.
"""

from __future__ import annotations

import json
import sqlite3
import threading
from contextlib import contextmanager
from datetime import date, datetime

from .errors import IntegrityViolationError

SCHEMA = """
PRAGMA foreign_keys = ON;

CREATE TABLE IF NOT EXISTS countries (
    country_id TEXT PRIMARY KEY,
    name TEXT NOT NULL UNIQUE
);
CREATE TABLE IF NOT EXISTS categories (
    category_id TEXT PRIMARY KEY,
    country_id TEXT NOT NULL REFERENCES countries(country_id),
    name TEXT NOT NULL,
    position INTEGER NOT NULL,
    UNIQUE (country_id, name)
);
CREATE TABLE IF NOT EXISTS lessons (
    lesson_id TEXT PRIMARY KEY,
    category_id TEXT NOT NULL REFERENCES categories(category_id),
    title TEXT NOT NULL,
    position INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS units (
    unit_id TEXT PRIMARY KEY,
    lesson_id TEXT NOT NULL REFERENCES lessons(lesson_id),
    kind TEXT NOT NULL,
    source_name TEXT NOT NULL,
    raw_text TEXT NOT NULL,
    summary_id TEXT,
    quiz_id TEXT,
    indexed INTEGER NOT NULL DEFAULT 0,
    status TEXT NOT NULL DEFAULT 'draft',
    error_stage TEXT,
    error_message TEXT,
    position INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS summaries (
    summary_id TEXT PRIMARY KEY,
    unit_id TEXT NOT NULL REFERENCES units(unit_id),
    text TEXT NOT NULL,
    word_count INTEGER NOT NULL,
    strategy TEXT NOT NULL,
    generated_at TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS quizzes (
    quiz_id TEXT PRIMARY KEY,
    unit_id TEXT NOT NULL REFERENCES units(unit_id)
);
CREATE TABLE IF NOT EXISTS questions (
    quiz_id TEXT NOT NULL REFERENCES quizzes(quiz_id),
    ordinal INTEGER NOT NULL,
    stem TEXT NOT NULL,
    option_1 TEXT NOT NULL,
    option_2 TEXT NOT NULL,
    option_3 TEXT NOT NULL,
    option_4 TEXT NOT NULL,
    answer_index INTEGER NOT NULL CHECK (answer_index BETWEEN 1 AND 4),
    PRIMARY KEY (quiz_id, ordinal)
);
CREATE TABLE IF NOT EXISTS chunks (
    chunk_id TEXT PRIMARY KEY,
    unit_id TEXT NOT NULL REFERENCES units(unit_id),
    ordinal INTEGER NOT NULL,
    text TEXT NOT NULL,
    token_estimate INTEGER NOT NULL,
    lead_overlap INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS vector_records (
    chunk_id TEXT PRIMARY KEY,
    unit_id TEXT NOT NULL REFERENCES units(unit_id),
    ordinal INTEGER NOT NULL,
    embedding BLOB NOT NULL,
    terms TEXT NOT NULL,
    text TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS learners (
    learner_id TEXT PRIMARY KEY,
    name TEXT NOT NULL,
    email TEXT NOT NULL UNIQUE,
    password_digest TEXT NOT NULL,
    immersion_country TEXT NOT NULL REFERENCES countries(country_id),
    learning_motivation TEXT NOT NULL DEFAULT '',
    self_rated_knowledge INTEGER NOT NULL CHECK (self_rated_knowledge BETWEEN 1 AND 5),
    daily_goal_minutes INTEGER NOT NULL CHECK (daily_goal_minutes > 0),
    notifications_opt_in INTEGER NOT NULL,
    org_id TEXT,
    created_at TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS enrollments (
    learner_id TEXT NOT NULL REFERENCES learners(learner_id),
    country_id TEXT NOT NULL REFERENCES countries(country_id),
    enrolled_at TEXT NOT NULL,
    PRIMARY KEY (learner_id, country_id)
);
CREATE TABLE IF NOT EXISTS unit_progress (
    learner_id TEXT NOT NULL REFERENCES learners(learner_id),
    unit_id TEXT NOT NULL REFERENCES units(unit_id),
    state TEXT NOT NULL,
    PRIMARY KEY (learner_id, unit_id)
);
CREATE TABLE IF NOT EXISTS xp_entries (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    learner_id TEXT NOT NULL REFERENCES learners(learner_id),
    unit_id TEXT NOT NULL,
    tier INTEGER NOT NULL,
    amount INTEGER NOT NULL CHECK (amount > 0),
    at TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS coin_entries (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    learner_id TEXT NOT NULL REFERENCES learners(learner_id),
    reason TEXT NOT NULL,
    detail TEXT NOT NULL,
    amount INTEGER NOT NULL CHECK (amount > 0),
    at TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS gamification_totals (
    learner_id TEXT PRIMARY KEY REFERENCES learners(learner_id),
    total_xp INTEGER NOT NULL,
    total_coins INTEGER NOT NULL,
    last_xp_at TEXT,
    created_at TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS badges (
    learner_id TEXT NOT NULL REFERENCES learners(learner_id),
    kind TEXT NOT NULL,
    subject_id TEXT NOT NULL,
    awarded_at TEXT NOT NULL,
    PRIMARY KEY (learner_id, kind, subject_id)
);
CREATE TABLE IF NOT EXISTS streaks (
    learner_id TEXT PRIMARY KEY REFERENCES learners(learner_id),
    current_length INTEGER NOT NULL,
    last_active_date TEXT
);
CREATE TABLE IF NOT EXISTS challenge_days (
    learner_id TEXT NOT NULL REFERENCES learners(learner_id),
    day TEXT NOT NULL,
    completed INTEGER NOT NULL,
    claimed INTEGER NOT NULL,
    PRIMARY KEY (learner_id, day)
);
CREATE TABLE IF NOT EXISTS engagement_events (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    learner_id TEXT NOT NULL REFERENCES learners(learner_id),
    country_id TEXT NOT NULL REFERENCES countries(country_id),
    kind TEXT NOT NULL,
    seconds INTEGER NOT NULL DEFAULT 0,
    score REAL,
    at TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS engagement_stats (
    learner_id TEXT NOT NULL REFERENCES learners(learner_id),
    country_id TEXT NOT NULL REFERENCES countries(country_id),
    total_seconds INTEGER NOT NULL,
    attempt_count INTEGER NOT NULL,
    result_count INTEGER NOT NULL,
    score_sum REAL NOT NULL,
    PRIMARY KEY (learner_id, country_id)
);
CREATE TABLE IF NOT EXISTS submissions (
    submission_id TEXT PRIMARY KEY,
    learner_id TEXT NOT NULL REFERENCES learners(learner_id),
    quiz_id TEXT NOT NULL REFERENCES quizzes(quiz_id),
    answers TEXT NOT NULL,
    correct_count INTEGER NOT NULL,
    total INTEGER NOT NULL,
    score REAL NOT NULL,
    submitted_at TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS friend_requests (
    request_id TEXT PRIMARY KEY,
    from_learner TEXT NOT NULL REFERENCES learners(learner_id),
    to_learner TEXT NOT NULL REFERENCES learners(learner_id),
    state TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS sessions (
    token TEXT PRIMARY KEY,
    learner_id TEXT NOT NULL REFERENCES learners(learner_id),
    expires_at TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS stories (
    story_id TEXT PRIMARY KEY,
    title TEXT NOT NULL,
    url TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS sequences (
    kind TEXT PRIMARY KEY,
    next INTEGER NOT NULL
);
"""


def dt_to_db(value: datetime | None) -> str | None:
    return value.isoformat() if value is not None else None


def dt_from_db(value: str | None) -> datetime | None:
    return datetime.fromisoformat(value) if value else None


def date_to_db(value: date | None) -> str | None:
    return value.isoformat() if value is not None else None


def date_from_db(value: str | None) -> date | None:
    return date.fromisoformat(value) if value else None


class Store:
    def __init__(self, path: str = ":memory:"):
        self.path = path
        self._conn = sqlite3.connect(path, check_same_thread=False, isolation_level=None)
        self._conn.row_factory = sqlite3.Row
        self._conn.execute("PRAGMA foreign_keys = ON")
        self._lock = threading.RLock()
        self._in_tx = False
        with self._lock:
            self._conn.executescript(SCHEMA)

    def close(self) -> None:
        self._conn.close()

    @contextmanager
    def transaction(self):
        """Serialize writers and wrap them in a single sqlite transaction."""
        with self._lock:
            if self._in_tx:  # nested call joins the outer transaction
                yield self._conn
                return
            self._conn.execute("BEGIN IMMEDIATE")
            self._in_tx = True
            try:
                yield self._conn
            except sqlite3.IntegrityError as exc:
                self._conn.execute("ROLLBACK")
                raise IntegrityViolationError(str(exc)) from exc
            except Exception:
                self._conn.execute("ROLLBACK")
                raise
            else:
                self._conn.execute("COMMIT")
            finally:
                self._in_tx = False

    def execute(self, sql: str, params=()):
        with self._lock:
            try:
                return self._conn.execute(sql, params)
            except sqlite3.IntegrityError as exc:
                raise IntegrityViolationError(str(exc)) from exc

    def query(self, sql: str, params=()) -> list[sqlite3.Row]:
        with self._lock:
            return self._conn.execute(sql, params).fetchall()

    def one(self, sql: str, params=()) -> sqlite3.Row | None:
        rows = self.query(sql, params)
        return rows[0] if rows else None

    def next_id(self, kind: str) -> str:
        """Allocate the next id for a kind; persisted so ids survive restarts."""
        with self._lock:
            row = self.one("SELECT next FROM sequences WHERE kind = ?", (kind,))
            value = row["next"] if row else 1
            self.execute(
                "INSERT INTO sequences(kind, next) VALUES(?, ?) "
                "ON CONFLICT(kind) DO UPDATE SET next = excluded.next",
                (kind, value + 1),
            )
            return f"{kind}-{value:06d}"

    def id_factory(self, kind: str):
        return lambda: self.next_id(kind)

    # -- targeted helpers -------------------------------------------------

    def delete_country(self, country_id: str) -> None:
        """Fails with integrity-violation while dependent rows exist."""
        with self.transaction() as conn:
            conn.execute("DELETE FROM countries WHERE country_id = ?", (country_id,))

    def verify_gamification_totals(self) -> None:
        """Cached totals must equal their ledger sums."""
        for row in self.query("SELECT learner_id, total_xp, total_coins FROM gamification_totals"):
            xp = self.one(
                "SELECT COALESCE(SUM(amount), 0) AS s FROM xp_entries WHERE learner_id = ?",
                (row["learner_id"],),
            )["s"]
            coins = self.one(
                "SELECT COALESCE(SUM(amount), 0) AS s FROM coin_entries WHERE learner_id = ?",
                (row["learner_id"],),
            )["s"]
            if xp != row["total_xp"] or coins != row["total_coins"]:
                raise IntegrityViolationError(
                    f"ledger mismatch for {row['learner_id']}: "
                    f"xp {row['total_xp']} vs {xp}, coins {row['total_coins']} vs {coins}"
                )

    def verify_engagement_stats(self) -> None:
        """Cached engagement aggregates must equal a fold over the event log."""
        for row in self.query("SELECT * FROM engagement_stats"):
            events = self.query(
                "SELECT kind, seconds, score FROM engagement_events "
                "WHERE learner_id = ? AND country_id = ? ORDER BY seq",
                (row["learner_id"], row["country_id"]),
            )
            seconds = sum(e["seconds"] for e in events if e["kind"] == "time_spent")
            attempts = sum(1 for e in events if e["kind"] == "quiz_attempt")
            results = [e["score"] for e in events if e["kind"] == "quiz_result"]
            score_sum = 0.0
            for s in results:
                score_sum += s
            if (
                seconds != row["total_seconds"]
                or attempts != row["attempt_count"]
                or len(results) != row["result_count"]
                or abs(score_sum - row["score_sum"]) > 1e-9
            ):
                raise IntegrityViolationError(
                    f"engagement stats mismatch for {row['learner_id']}/{row['country_id']}"
                )


def dump_state(store: Store) -> dict:
    """Canonical snapshot of every table, for restart-equality checks.

    Embeddings stay as raw bytes (hex) so the comparison is bit-exact.
    """
    snapshot = {}
    tables = [
        "countries", "categories", "lessons", "units", "summaries", "quizzes",
        "questions", "chunks", "vector_records", "learners", "enrollments",
        "unit_progress", "xp_entries", "coin_entries", "gamification_totals",
        "badges", "streaks", "challenge_days", "engagement_events",
        "engagement_stats", "submissions", "friend_requests", "sessions",
        "stories", "sequences",
    ]
    for table in tables:
        rows = []
        for row in store.query(f"SELECT * FROM {table}"):
            item = {}
            for key in row.keys():
                value = row[key]
                item[key] = value.hex() if isinstance(value, bytes) else value
            rows.append(item)
        rows.sort(key=lambda r: json.dumps(r, sort_keys=True, default=str))
        snapshot[table] = rows
    return snapshot
