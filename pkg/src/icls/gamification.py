"""XP, coins, badges, streaks, daily challenges, and leaderboards.

XP for a unit is cumulative across the three completion tiers — 5 after
watching, 7 after the summary test, 12 after the practice test — so awards
are the tier deltas (5, then +2, then +5) and a unit can never pay out more
than 12. Coins come from quizzes (1 per correct answer) and daily challenge
claims (10). Streaks count consecutive UTC calendar days with a login.
Everything is ledgered; displayed totals are always the ledger sum.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone

from .domain import ProgressState, utcnow
from .errors import (
    AlreadyClaimedError,
    ChallengeNotCompletedError,
    ConflictError,
    DuplicateAwardError,
    UnknownLearnerError,
    ValidationError,
)

XP_TIER_TOTALS = {
    ProgressState.WATCHED: 5,
    ProgressState.SUMMARY_TESTED: 7,
    ProgressState.PRACTICE_TESTED: 12,
}

COINS_PER_CORRECT = 1
DAILY_CHALLENGE_COINS = 10
MASTERY_THRESHOLD = 0.8

BADGE_CATEGORY = "category"
BADGE_COUNTRY = "country"

_EPOCH = datetime.min.replace(tzinfo=timezone.utc)


@dataclass(frozen=True)
class XpLedgerEntry:
    learner_id: str
    amount: int
    unit_id: str
    tier: int
    at: datetime


@dataclass(frozen=True)
class CoinLedgerEntry:
    learner_id: str
    amount: int
    reason: str  # "quiz_correct" | "daily_challenge"
    detail: str
    at: datetime


@dataclass(frozen=True)
class Badge:
    learner_id: str
    kind: str  # BADGE_CATEGORY | BADGE_COUNTRY
    subject_id: str
    awarded_at: datetime


@dataclass
class Streak:
    learner_id: str
    current_length: int = 0
    last_active_utc_date: date | None = None


@dataclass(frozen=True)
class LeaderboardEntry:
    learner_id: str
    total_xp: int
    rank: int


@dataclass(frozen=True)
class CategoryStanding:
    """Snapshot of one category for badge evaluation."""

    category_id: str
    country_id: str
    complete: bool  # every lesson in the category reached summary_tested
    mean_quiz_score: float | None


@dataclass
class _LearnerState:
    learner_id: str
    created_at: datetime
    xp_entries: list = field(default_factory=list)
    coin_entries: list = field(default_factory=list)
    total_xp: int = 0
    total_coins: int = 0
    last_xp_at: datetime | None = None
    unit_tiers: dict = field(default_factory=dict)
    badges: dict = field(default_factory=dict)
    streak: Streak = None  # type: ignore[assignment]
    challenges: dict = field(default_factory=dict)  # date -> [completed, claimed]
    lock: threading.Lock = field(default_factory=threading.Lock)

    def __post_init__(self):
        if self.streak is None:
            self.streak = Streak(learner_id=self.learner_id)


def advance_streak(streak: Streak, login_date: date) -> Streak:
    """Pure streak transition for one login on the given UTC date."""
    last = streak.last_active_utc_date
    if last is None:
        return Streak(streak.learner_id, 1, login_date)
    if login_date <= last:
        return streak  # same day, or clock skew: no change
    if login_date == last + timedelta(days=1):
        return Streak(streak.learner_id, streak.current_length + 1, login_date)
    return Streak(streak.learner_id, 1, login_date)


class GamificationEngine:
    def __init__(
        self,
        clock=utcnow,
        coins_per_correct: int = COINS_PER_CORRECT,
        daily_challenge_coins: int = DAILY_CHALLENGE_COINS,
        mastery_threshold: float = MASTERY_THRESHOLD,
    ):
        self._clock = clock
        self.coins_per_correct = coins_per_correct
        self.daily_challenge_coins = daily_challenge_coins
        self.mastery_threshold = mastery_threshold
        self._states: dict[str, _LearnerState] = {}
        self._registry_lock = threading.Lock()

    # -- state management ------------------------------------------------

    def register_learner(self, learner_id: str, at: datetime | None = None) -> None:
        with self._registry_lock:
            if learner_id in self._states:
                raise ConflictError(f"gamification state already exists for {learner_id}")
            self._states[learner_id] = _LearnerState(
                learner_id=learner_id, created_at=at or self._clock()
            )

    def has_learner(self, learner_id: str) -> bool:
        return learner_id in self._states

    def _state(self, learner_id: str) -> _LearnerState:
        state = self._states.get(learner_id)
        if state is None:
            raise UnknownLearnerError(learner_id)
        return state

    # -- XP and coins ------------------------------------------------------

    def award_lesson_xp(self, learner_id: str, unit_id: str, reached_state: ProgressState) -> int:
        tier_total = XP_TIER_TOTALS.get(reached_state)
        if tier_total is None:
            raise ValidationError(f"no XP tier for state {reached_state!r}")
        state = self._state(learner_id)
        with state.lock:
            current = state.unit_tiers.get(unit_id, 0)
            if tier_total <= current:
                raise DuplicateAwardError(
                    f"unit {unit_id} already at XP tier {current} for {learner_id}"
                )
            delta = tier_total - current
            entry = XpLedgerEntry(
                learner_id=learner_id,
                amount=delta,
                unit_id=unit_id,
                tier=tier_total,
                at=self._clock(),
            )
            state.xp_entries.append(entry)
            state.total_xp += delta
            state.last_xp_at = entry.at
            state.unit_tiers[unit_id] = tier_total
        return delta

    def award_quiz_coins(self, learner_id: str, correct_count: int) -> int:
        if correct_count < 0:
            raise ValidationError("correct_count must be non-negative")
        amount = correct_count * self.coins_per_correct
        if amount == 0:
            return 0  # ledger entries must be positive
        state = self._state(learner_id)
        with state.lock:
            state.coin_entries.append(
                CoinLedgerEntry(
                    learner_id=learner_id,
                    amount=amount,
                    reason="quiz_correct",
                    detail=str(correct_count),
                    at=self._clock(),
                )
            )
            state.total_coins += amount
        return amount

    # -- streaks and daily challenges -------------------------------------

    def record_login(self, learner_id: str, at: datetime | None = None) -> Streak:
        state = self._state(learner_id)
        moment = at or self._clock()
        login_date = moment.astimezone(timezone.utc).date()
        with state.lock:
            state.streak = advance_streak(state.streak, login_date)
            return Streak(
                state.streak.learner_id,
                state.streak.current_length,
                state.streak.last_active_utc_date,
            )

    def streak_of(self, learner_id: str) -> Streak:
        return self._state(learner_id).streak

    def complete_daily_challenge(self, learner_id: str, day: date) -> None:
        state = self._state(learner_id)
        with state.lock:
            entry = state.challenges.setdefault(day, [False, False])
            entry[0] = True

    def challenge_status(self, learner_id: str, day: date) -> tuple[bool, bool]:
        entry = self._state(learner_id).challenges.get(day, [False, False])
        return bool(entry[0]), bool(entry[1])

    def claim_daily_challenge(self, learner_id: str, day: date) -> int:
        state = self._state(learner_id)
        with state.lock:
            entry = state.challenges.get(day)
            if entry is None or not entry[0]:
                raise ChallengeNotCompletedError(f"challenge for {day} not completed")
            if entry[1]:
                raise AlreadyClaimedError(f"challenge for {day} already claimed")
            entry[1] = True
            amount = self.daily_challenge_coins
            state.coin_entries.append(
                CoinLedgerEntry(
                    learner_id=learner_id,
                    amount=amount,
                    reason="daily_challenge",
                    detail=day.isoformat(),
                    at=self._clock(),
                )
            )
            state.total_coins += amount
        return amount

    # -- badges ------------------------------------------------------------

    def evaluate_badges(
        self,
        learner_id: str,
        standings: list[CategoryStanding],
        country_categories: dict,
    ) -> list[Badge]:
        """Award any category/country badges now earned; idempotent, never revokes."""
        state = self._state(learner_id)
        new_badges = []
        with state.lock:
            for standing in standings:
                key = (BADGE_CATEGORY, standing.category_id)
                if key in state.badges:
                    continue
                if (
                    standing.complete
                    and standing.mean_quiz_score is not None
                    and standing.mean_quiz_score >= self.mastery_threshold
                ):
                    badge = Badge(learner_id, BADGE_CATEGORY, standing.category_id, self._clock())
                    state.badges[key] = badge
                    new_badges.append(badge)
            for country_id, category_ids in country_categories.items():
                key = (BADGE_COUNTRY, country_id)
                if key in state.badges or not category_ids:
                    continue
                if all((BADGE_CATEGORY, cid) in state.badges for cid in category_ids):
                    badge = Badge(learner_id, BADGE_COUNTRY, country_id, self._clock())
                    state.badges[key] = badge
                    new_badges.append(badge)
        return new_badges

    def badges_of(self, learner_id: str) -> list[Badge]:
        return list(self._state(learner_id).badges.values())

    # -- totals and leaderboard ---------------------------------------------

    def totals(self, learner_id: str) -> tuple[int, int]:
        state = self._state(learner_id)
        return state.total_xp, state.total_coins

    def xp_entries_of(self, learner_id: str) -> list[XpLedgerEntry]:
        return list(self._state(learner_id).xp_entries)

    def coin_entries_of(self, learner_id: str) -> list[CoinLedgerEntry]:
        return list(self._state(learner_id).coin_entries)

    def unit_tier(self, learner_id: str, unit_id: str) -> int:
        return self._state(learner_id).unit_tiers.get(unit_id, 0)

    def leaderboard(self, member_ids, limit: int | None = None) -> list[LeaderboardEntry]:
        """Rank members by total XP; ties break on when the total was reached,
        then on learner id. Ranks are 1-based and contiguous."""
        rows = []
        for learner_id in set(member_ids):
            state = self._states.get(learner_id)
            if state is None:
                continue
            rows.append((-state.total_xp, state.last_xp_at or _EPOCH, learner_id))
        rows.sort()
        entries = [
            LeaderboardEntry(learner_id=learner_id, total_xp=-neg_xp, rank=i + 1)
            for i, (neg_xp, _, learner_id) in enumerate(rows)
        ]
        return entries[:limit] if limit is not None else entries

    # -- restore (persistence rebuild) ----------------------------------------

    def restore_learner(
        self,
        learner_id: str,
        created_at: datetime,
        xp_entries: list,
        coin_entries: list,
        badges: list,
        streak: Streak,
        challenges: dict,
    ) -> None:
        state = _LearnerState(learner_id=learner_id, created_at=created_at)
        for entry in xp_entries:
            state.xp_entries.append(entry)
            state.total_xp += entry.amount
            state.last_xp_at = entry.at
            state.unit_tiers[entry.unit_id] = max(
                state.unit_tiers.get(entry.unit_id, 0), entry.tier
            )
        for entry in coin_entries:
            state.coin_entries.append(entry)
            state.total_coins += entry.amount
        for badge in badges:
            state.badges[(badge.kind, badge.subject_id)] = badge
        state.streak = streak
        state.challenges = {day: list(flags) for day, flags in challenges.items()}
        self._states[learner_id] = state
