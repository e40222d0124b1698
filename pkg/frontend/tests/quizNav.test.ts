import { describe, expect, it } from "vitest";

import {
  answer,
  answersRecord,
  colorFor,
  createQuizNav,
  grade,
  jumpTo,
  markerFor,
  next,
  previous,
  skip,
  MARKER_COLORS,
  type QuizNavState,
} from "../src/quizNav";

function markers(state: QuizNavState): string[] {
  return Array.from({ length: state.total }, (_, i) => markerFor(state, i));
}

describe("quiz indicator colors", () => {
  it("maps the four markers to orange/green/silver/red", () => {
    expect(MARKER_COLORS).toEqual({
      current: "orange",
      answered: "green",
      unanswered: "silver",
      wrong: "red",
    });
  });

  it("starts with question 1 current (orange) and the rest silver", () => {
    const state = createQuizNav(5);
    expect(markers(state)).toEqual([
      "current",
      "unanswered",
      "unanswered",
      "unanswered",
      "unanswered",
    ]);
    expect(colorFor(state, 0)).toBe("orange");
    expect(colorFor(state, 1)).toBe("silver");
  });

  it("answering question 3 turns it green; moving to 4 makes 4 orange", () => {
    let state = createQuizNav(5);
    state = jumpTo(state, 2);
    expect(markerFor(state, 2)).toBe("current");
    state = answer(state, 1);
    expect(colorFor(state, 2)).toBe("green");
    state = next(state);
    expect(colorFor(state, 3)).toBe("orange");
    expect(colorFor(state, 2)).toBe("green");
  });

  it("skip moves on without answering, leaving the skipped question silver", () => {
    let state = createQuizNav(3);
    state = skip(state);
    expect(markerFor(state, 0)).toBe("unanswered");
    expect(markerFor(state, 1)).toBe("current");
  });

  it("previous and next clamp at the ends", () => {
    let state = createQuizNav(2);
    state = previous(state);
    expect(state.current).toBe(0);
    state = next(next(state));
    expect(state.current).toBe(1);
  });

  it("wrong appears only after grading", () => {
    let state = createQuizNav(3);
    state = answer(state, 2);
    state = next(state);
    state = answer(state, 4);
    expect(markers(state)).not.toContain("wrong");
    state = grade(state, [
      { answered: true, correct: false },
      { answered: true, correct: true },
      { answered: false, correct: false },
    ]);
    expect(markers(state)).toEqual(["wrong", "answered", "unanswered"]);
    expect(colorFor(state, 0)).toBe("red");
    expect(colorFor(state, 1)).toBe("green");
    expect(colorFor(state, 2)).toBe("silver");
  });

  it("cannot answer after grading", () => {
    let state = createQuizNav(1);
    state = grade(state, [{ answered: false, correct: false }]);
    expect(() => answer(state, 1)).toThrow();
  });

  it("rejects out-of-range choices and indices", () => {
    const state = createQuizNav(2);
    expect(() => answer(state, 0)).toThrow(RangeError);
    expect(() => answer(state, 5)).toThrow(RangeError);
    expect(() => jumpTo(state, 2)).toThrow(RangeError);
    expect(() => createQuizNav(0)).toThrow(RangeError);
  });

  it("keeps exactly one current question through any navigation sequence", () => {
    let state = createQuizNav(8);
    let seed = 1234567;
    const rand = () => {
      seed = (seed * 1103515245 + 12345) % 2147483648;
      return seed / 2147483648;
    };
    for (let step = 0; step < 500; step += 1) {
      const op = Math.floor(rand() * 4);
      if (op === 0) state = next(state);
      else if (op === 1) state = previous(state);
      else if (op === 2) state = jumpTo(state, Math.floor(rand() * 8));
      else state = answer(state, 1 + Math.floor(rand() * 4));
      const currents = Array.from({ length: 8 }, (_, i) => i).filter((i) => i === state.current);
      expect(currents).toHaveLength(1);
      // pre-grading, red never appears
      expect(markers(state)).not.toContain("wrong");
    }
  });

  it("produces a submission record keyed by ordinal", () => {
    let state = createQuizNav(3);
    state = answer(state, 2);
    state = next(state);
    state = next(state);
    state = answer(state, 4);
    expect(answersRecord(state)).toEqual({ 0: 2, 2: 4 });
  });
});
