// Quiz navigation state machine.
//
// Question indicator semantics: the current unanswered question is orange,
// answered questions turn green the moment they are answered, everything
// else is silver, and red (wrong) exists only after grading. Exactly one
// question is current at any time.

import type { QuestionFeedback } from "./api";

export type Marker = "current" | "answered" | "unanswered" | "wrong";

export const MARKER_COLORS: Record<Marker, string> = {
  current: "orange",
  answered: "green",
  unanswered: "silver",
  wrong: "red",
};

export interface QuizNavState {
  readonly total: number;
  readonly current: number;
  readonly answers: ReadonlyMap<number, number>;
  readonly feedback: readonly QuestionFeedback[] | null;
}

export function createQuizNav(total: number): QuizNavState {
  if (!Number.isInteger(total) || total <= 0) {
    throw new RangeError(`quiz needs at least one question, got ${total}`);
  }
  return { total, current: 0, answers: new Map(), feedback: null };
}

function withCurrent(state: QuizNavState, index: number): QuizNavState {
  const clamped = Math.min(Math.max(index, 0), state.total - 1);
  return { ...state, current: clamped };
}

export function jumpTo(state: QuizNavState, index: number): QuizNavState {
  if (!Number.isInteger(index) || index < 0 || index >= state.total) {
    throw new RangeError(`question index ${index} out of range`);
  }
  return withCurrent(state, index);
}

export function next(state: QuizNavState): QuizNavState {
  return withCurrent(state, state.current + 1);
}

export function previous(state: QuizNavState): QuizNavState {
  return withCurrent(state, state.current - 1);
}

// Skip moves on without recording an answer for the current question.
export function skip(state: QuizNavState): QuizNavState {
  return next(state);
}

export function answer(state: QuizNavState, choice: number): QuizNavState {
  if (state.feedback) throw new Error("quiz already graded");
  if (!Number.isInteger(choice) || choice < 1 || choice > 4) {
    throw new RangeError(`option choice must be 1..4, got ${choice}`);
  }
  const answers = new Map(state.answers);
  answers.set(state.current, choice);
  return { ...state, answers };
}

export function grade(state: QuizNavState, perQuestion: QuestionFeedback[]): QuizNavState {
  if (perQuestion.length !== state.total) {
    throw new RangeError(
      `feedback for ${perQuestion.length} questions does not match quiz of ${state.total}`,
    );
  }
  return { ...state, feedback: [...perQuestion] };
}

export function markerFor(state: QuizNavState, index: number): Marker {
  if (index < 0 || index >= state.total) throw new RangeError(`index ${index} out of range`);
  if (state.feedback) {
    const feedback = state.feedback[index];
    if (!feedback.answered) return "unanswered";
    return feedback.correct ? "answered" : "wrong";
  }
  if (state.answers.has(index)) return "answered";
  if (index === state.current) return "current";
  return "unanswered";
}

export function colorFor(state: QuizNavState, index: number): string {
  return MARKER_COLORS[markerFor(state, index)];
}

export function answersRecord(state: QuizNavState): Record<number, number> {
  const record: Record<number, number> = {};
  for (const [ordinal, choice] of state.answers) record[ordinal] = choice;
  return record;
}
