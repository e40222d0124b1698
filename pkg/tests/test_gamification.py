import random
import threading
from datetime import date, datetime, timedelta, timezone

import pytest

from icls.domain import ProgressState
from icls.errors import (
    AlreadyClaimedError,
    ChallengeNotCompletedError,
    ConflictError,
    DuplicateAwardError,
    UnknownLearnerError,
    ValidationError,
)
from icls.gamification import (
    BADGE_CATEGORY,
    BADGE_COUNTRY,
    CategoryStanding,
    GamificationEngine,
    Streak,
    advance_streak,
)

NOW = datetime(2024, 7, 1, 9, 0, tzinfo=timezone.utc)


def engine_with(*learners) -> GamificationEngine:
    engine = GamificationEngine()
    for learner in learners:
        engine.register_learner(learner, at=NOW)
    return engine


class TestXp:
    def test_watch_pays_five(self):
        engine = engine_with("L")
        assert engine.award_lesson_xp("L", "u1", ProgressState.WATCHED) == 5

    def test_cumulative_tiers_5_7_12(self):
        engine = engine_with("L")
        deltas = [
            engine.award_lesson_xp("L", "u1", state)
            for state in (
                ProgressState.WATCHED,
                ProgressState.SUMMARY_TESTED,
                ProgressState.PRACTICE_TESTED,
            )
        ]
        assert deltas == [5, 2, 5]
        assert engine.totals("L")[0] == 12
        assert engine.unit_tier("L", "u1") == 12

    def test_duplicate_award_rejected(self):
        engine = engine_with("L")
        engine.award_lesson_xp("L", "u1", ProgressState.WATCHED)
        engine.award_lesson_xp("L", "u1", ProgressState.SUMMARY_TESTED)
        with pytest.raises(DuplicateAwardError):
            engine.award_lesson_xp("L", "u1", ProgressState.SUMMARY_TESTED)
        assert engine.totals("L")[0] == 7

    def test_not_started_is_not_a_tier(self):
        engine = engine_with("L")
        with pytest.raises(ValidationError):
            engine.award_lesson_xp("L", "u1", ProgressState.NOT_STARTED)

    def test_unknown_learner(self):
        engine = engine_with("L")
        with pytest.raises(UnknownLearnerError):
            engine.award_lesson_xp("nope", "u1", ProgressState.WATCHED)

    def test_register_twice_rejected(self):
        engine = engine_with("L")
        with pytest.raises(ConflictError):
            engine.register_learner("L")

    def test_per_unit_totals_stay_in_allowed_set(self):
        rng = random.Random(3)
        engine = engine_with("L")
        states = list(ProgressState)[1:]
        for _ in range(500):
            unit = f"u{rng.randint(0, 20)}"
            try:
                engine.award_lesson_xp("L", unit, rng.choice(states))
            except DuplicateAwardError:
                pass
            assert engine.unit_tier("L", unit) in (0, 5, 7, 12)
        ledger_by_unit = {}
        for entry in engine.xp_entries_of("L"):
            ledger_by_unit[entry.unit_id] = ledger_by_unit.get(entry.unit_id, 0) + entry.amount
        assert all(total in (5, 7, 12) for total in ledger_by_unit.values())


class TestCoins:
    def test_one_coin_per_correct(self):
        engine = engine_with("L")
        assert engine.award_quiz_coins("L", 8) == 8
        assert engine.totals("L")[1] == 8

    def test_zero_correct_no_entry(self):
        engine = engine_with("L")
        assert engine.award_quiz_coins("L", 0) == 0
        assert engine.coin_entries_of("L") == []

    def test_ledger_additivity(self):
        engine = engine_with("L")
        engine.award_quiz_coins("L", 3)
        engine.award_quiz_coins("L", 4)
        entries = engine.coin_entries_of("L")
        assert len(entries) == 2
        assert engine.totals("L")[1] == sum(e.amount for e in entries) == 7


class TestStreak:
    def test_first_login(self):
        engine = engine_with("L")
        streak = engine.record_login("L", NOW)
        assert streak.current_length == 1
        assert streak.last_active_utc_date == NOW.date()

    def test_same_day_unchanged(self):
        engine = engine_with("L")
        engine.record_login("L", NOW)
        streak = engine.record_login("L", NOW + timedelta(hours=5))
        assert streak.current_length == 1

    def test_consecutive_days(self):
        engine = engine_with("L")
        engine.record_login("L", datetime(2024, 7, 1, tzinfo=timezone.utc))
        streak = engine.record_login("L", datetime(2024, 7, 2, tzinfo=timezone.utc))
        assert streak.current_length == 2

    def test_gap_resets(self):
        engine = engine_with("L")
        engine.record_login("L", datetime(2024, 7, 1, tzinfo=timezone.utc))
        engine.record_login("L", datetime(2024, 7, 2, tzinfo=timezone.utc))
        streak = engine.record_login("L", datetime(2024, 7, 5, tzinfo=timezone.utc))
        assert streak.current_length == 1

    def test_utc_date_boundary(self):
        engine = engine_with("L")
        engine.record_login("L", datetime(2024, 7, 1, 23, 59, tzinfo=timezone.utc))
        streak = engine.record_login("L", datetime(2024, 7, 2, 0, 1, tzinfo=timezone.utc))
        assert streak.current_length == 2

    def test_trailing_run_property(self):
        rng = random.Random(11)
        for _ in range(300):
            start = date(2024, 1, 1)
            days = sorted(rng.sample(range(0, 60), rng.randint(1, 25)))
            streak = Streak("L")
            for offset in days:
                streak = advance_streak(streak, start + timedelta(days=offset))
            run = 1
            for earlier, later in zip(days, days[1:]):
                run = run + 1 if later == earlier + 1 else 1
            assert streak.current_length == run


class TestDailyChallenge:
    def test_claim_flow(self):
        engine = engine_with("L")
        day = NOW.date()
        engine.complete_daily_challenge("L", day)
        assert engine.claim_daily_challenge("L", day) == 10
        assert engine.totals("L")[1] == 10

    def test_double_claim(self):
        engine = engine_with("L")
        day = NOW.date()
        engine.complete_daily_challenge("L", day)
        engine.claim_daily_challenge("L", day)
        with pytest.raises(AlreadyClaimedError):
            engine.claim_daily_challenge("L", day)

    def test_claim_without_completion(self):
        engine = engine_with("L")
        with pytest.raises(ChallengeNotCompletedError):
            engine.claim_daily_challenge("L", NOW.date())


def standing(category, country="jp", complete=True, mean=0.85):
    return CategoryStanding(
        category_id=category, country_id=country, complete=complete, mean_quiz_score=mean
    )


class TestBadges:
    def test_category_badge_at_threshold(self):
        engine = engine_with("L")
        badges = engine.evaluate_badges("L", [standing("art", mean=0.85)], {"jp": ["art", "music"]})
        assert [(b.kind, b.subject_id) for b in badges] == [(BADGE_CATEGORY, "art")]

    def test_below_threshold_no_badge(self):
        engine = engine_with("L")
        assert engine.evaluate_badges("L", [standing("art", mean=0.75)], {}) == []

    def test_incomplete_no_badge(self):
        engine = engine_with("L")
        assert engine.evaluate_badges("L", [standing("art", complete=False)], {}) == []

    def test_idempotent(self):
        engine = engine_with("L")
        engine.evaluate_badges("L", [standing("art")], {})
        assert engine.evaluate_badges("L", [standing("art")], {}) == []
        assert len(engine.badges_of("L")) == 1

    def test_country_badge_when_all_categories_badged(self):
        engine = engine_with("L")
        categories = [f"cat{i}" for i in range(11)]
        standings = [standing(c) for c in categories]
        badges = engine.evaluate_badges("L", standings, {"jp": categories})
        kinds = {(b.kind, b.subject_id) for b in badges}
        assert (BADGE_COUNTRY, "jp") in kinds
        assert len(kinds) == 12

    def test_country_badge_needs_every_category(self):
        engine = engine_with("L")
        categories = ["a", "b", "c"]
        badges = engine.evaluate_badges(
            "L", [standing("a"), standing("b")], {"jp": categories}
        )
        assert all(b.kind == BADGE_CATEGORY for b in badges)

    def test_badges_never_shrink(self):
        rng = random.Random(4)
        engine = engine_with("L")
        categories = [f"c{i}" for i in range(5)]
        owned = set()
        for _ in range(200):
            standings = [
                standing(c, complete=rng.random() < 0.5, mean=rng.random()) for c in categories
            ]
            engine.evaluate_badges("L", standings, {"jp": categories})
            now_owned = {(b.kind, b.subject_id) for b in engine.badges_of("L")}
            assert owned <= now_owned
            owned = now_owned


class TestLeaderboard:
    def test_tie_break_by_time_reached_then_id(self):
        engine = GamificationEngine()
        moments = iter(
            datetime(2024, 7, 1, 10, minute, tzinfo=timezone.utc) for minute in range(10)
        )
        engine._clock = lambda: next(moments)
        for learner in ("A", "B", "C"):
            engine.register_learner(learner, at=NOW)
        engine.award_lesson_xp("A", "u1", ProgressState.WATCHED)  # A reaches 100... use tiers
        # A: 5+2+5 = 12 first; C same total later; B lower total
        engine.award_lesson_xp("A", "u1", ProgressState.SUMMARY_TESTED)
        engine.award_lesson_xp("A", "u1", ProgressState.PRACTICE_TESTED)
        engine.award_lesson_xp("B", "u1", ProgressState.WATCHED)
        engine.award_lesson_xp("C", "u1", ProgressState.WATCHED)
        engine.award_lesson_xp("C", "u1", ProgressState.SUMMARY_TESTED)
        engine.award_lesson_xp("C", "u1", ProgressState.PRACTICE_TESTED)
        entries = engine.leaderboard(["A", "B", "C"])
        assert [(e.learner_id, e.total_xp, e.rank) for e in entries] == [
            ("A", 12, 1),
            ("C", 12, 2),
            ("B", 5, 3),
        ]

    def test_limit(self):
        engine = engine_with("A", "B", "C")
        engine.award_lesson_xp("B", "u", ProgressState.WATCHED)
        entries = engine.leaderboard(["A", "B", "C"], limit=2)
        assert len(entries) == 2
        assert entries[0].learner_id == "B"

    def test_ranks_contiguous(self):
        engine = engine_with(*[f"L{i}" for i in range(6)])
        rng = random.Random(9)
        for i in range(6):
            for unit in range(rng.randint(0, 4)):
                engine.award_lesson_xp(f"L{i}", f"u{unit}", ProgressState.WATCHED)
        entries = engine.leaderboard([f"L{i}" for i in range(6)])
        assert [e.rank for e in entries] == list(range(1, 7))
        totals = [e.total_xp for e in entries]
        assert totals == sorted(totals, reverse=True)

    def test_total_order_antisymmetric(self):
        # identical totals and times order strictly by learner id
        engine = GamificationEngine(clock=lambda: NOW)
        for learner in ("B", "A"):
            engine.register_learner(learner, at=NOW)
            engine.award_lesson_xp(learner, "u", ProgressState.WATCHED)
        entries = engine.leaderboard(["B", "A"])
        assert [e.learner_id for e in entries] == ["A", "B"]


class TestConcurrentConservation:
    def test_eight_way_awards_conserve_ledger(self):
        engine = engine_with("L")
        errors = []

        def worker(worker_id: int):
            rng = random.Random(worker_id)
            for i in range(50):
                try:
                    engine.award_lesson_xp("L", f"w{worker_id}-u{i}", ProgressState.WATCHED)
                    engine.award_quiz_coins("L", rng.randint(1, 5))
                except Exception as exc:  # pragma: no cover
                    errors.append(exc)

        threads = [threading.Thread(target=worker, args=(i,)) for i in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert errors == []
        xp_total, coin_total = engine.totals("L")
        assert xp_total == sum(e.amount for e in engine.xp_entries_of("L")) == 8 * 50 * 5
        assert coin_total == sum(e.amount for e in engine.coin_entries_of("L"))
