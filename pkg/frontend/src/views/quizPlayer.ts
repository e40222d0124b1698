import type { GradeEnvelope, QuizPayload } from "../api";
import type { AppContext } from "../context";
import { savePracticeEntry } from "../context";
import { clear, el, toast } from "../dom";
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
  type QuizNavState,
} from "../quizNav";

export interface QuizPlayerOptions {
  // Practice mode: show only these question ordinals (previously wrong).
  ordinalFilter?: number[];
  lessonId?: string;
  lessonTitle?: string;
  onGraded?(result: GradeEnvelope): void;
}

// Renders the quiz player. Question ordinals are positions in the full
// quiz; in practice mode navigation walks the filtered subset while
// submissions and feedback still use full-quiz ordinals.
export function renderQuizPlayer(
  root: HTMLElement,
  ctx: AppContext,
  quiz: QuizPayload,
  options: QuizPlayerOptions = {},
): void {
  const visible = options.ordinalFilter?.length
    ? [...options.ordinalFilter].sort((a, b) => a - b)
    : quiz.questions.map((q) => q.ordinal);
  let nav: QuizNavState = createQuizNav(visible.length);
  let graded: GradeEnvelope | null = null;

  const indicators = el("div", { class: "quiz-indicators", "data-testid": "indicators" });
  const body = el("div", { class: "quiz-body" });
  const controls = el("div", { class: "quiz-controls" });

  function fullOrdinal(position: number): number {
    return visible[position];
  }

  function redraw(): void {
    clear(indicators);
    for (let position = 0; position < nav.total; position += 1) {
      const marker = markerFor(nav, position);
      const dot = el(
        "button",
        {
          class: `indicator indicator-${marker}`,
          "data-marker": marker,
          "data-color": colorFor(nav, position),
          "data-testid": `indicator-${fullOrdinal(position)}`,
          title: `Question ${fullOrdinal(position) + 1}`,
        },
        String(fullOrdinal(position) + 1),
      );
      if (position === nav.current) dot.classList.add("indicator-here");
      dot.addEventListener("click", () => {
        nav = jumpTo(nav, position);
        redraw();
      });
      indicators.append(dot);
    }

    clear(body);
    const question = quiz.questions[fullOrdinal(nav.current)];
    body.append(el("h4", { "data-testid": "stem" }, `Q${question.ordinal + 1}. ${question.stem}`));
    const chosen = nav.answers.get(nav.current);
    question.options.forEach((option, index) => {
      const choice = index + 1;
      const input = el("input", {
        type: "radio",
        name: "quiz-option",
        value: String(choice),
        "data-testid": `option-${choice}`,
      }) as HTMLInputElement;
      input.checked = chosen === choice;
      input.disabled = graded !== null;
      input.addEventListener("change", () => {
        nav = answer(nav, choice);
        redraw();
      });
      body.append(el("label", { class: "quiz-option" }, input, `${choice}. ${option}`));
    });

    if (graded) {
      const feedback = graded.grade.per_question[fullOrdinal(nav.current)];
      body.append(
        el(
          "p",
          { class: feedback.correct ? "feedback-good" : "feedback-bad" },
          feedback.answered ? (feedback.correct ? "Correct" : "Wrong") : "Not answered",
        ),
      );
    }

    clear(controls);
    const prevButton = el("button", { class: "secondary", "data-testid": "prev" }, "Previous");
    prevButton.addEventListener("click", () => {
      nav = previous(nav);
      redraw();
    });
    const skipButton = el("button", { class: "secondary", "data-testid": "skip" }, "Skip");
    skipButton.addEventListener("click", () => {
      nav = skip(nav);
      redraw();
    });
    const nextButton = el("button", { class: "secondary", "data-testid": "next" }, "Next");
    nextButton.addEventListener("click", () => {
      nav = next(nav);
      redraw();
    });
    controls.append(prevButton, skipButton, nextButton);

    if (!graded) {
      const submitButton = el("button", { class: "primary", "data-testid": "submit-quiz" }, "Submit quiz");
      submitButton.addEventListener("click", submitQuiz);
      controls.append(submitButton);
    }
  }

  async function submitQuiz(): Promise<void> {
    const record = answersRecord(nav);
    const fullAnswers: Record<number, number> = {};
    for (const [position, choice] of Object.entries(record)) {
      fullAnswers[fullOrdinal(Number(position))] = choice;
    }
    const result = await ctx.api.submit(quiz.quiz_id, fullAnswers);
    graded = result;
    // Map full-quiz feedback back onto the visible subset for the indicators.
    nav = grade(
      nav,
      visible.map((ordinal) => result.grade.per_question[ordinal]),
    );
    const wrong = result.grade.per_question
      .map((feedback, ordinal) => ({ feedback, ordinal }))
      .filter(({ feedback }) => !feedback.correct)
      .map(({ ordinal }) => ordinal);
    savePracticeEntry({
      quiz_id: quiz.quiz_id,
      unit_id: quiz.unit_id,
      lesson_id: options.lessonId ?? "",
      title: options.lessonTitle ?? quiz.unit_id,
      wrong_ordinals: wrong,
    });
    // Server truth only: the banner shows the grade payload verbatim and the
    // header re-fetches totals rather than adding deltas locally.
    const banner = el(
      "div",
      { class: "grade-banner", "data-testid": "grade-banner" },
      el("h3", {}, `Score: ${result.grade.correct_count} / ${result.grade.total}`),
      el("p", { "data-testid": "xp-coins" }, `+${result.xp_delta} XP · +${result.coin_delta} coins`),
    );
    if (result.new_badges.length > 0) {
      banner.append(
        el("p", {}, `New badges: ${result.new_badges.map((b) => b.subject_id).join(", ")}`),
      );
    }
    root.prepend(banner);
    toast(`+${result.xp_delta} XP, +${result.coin_delta} coins`);
    void ctx.refreshHeader();
    options.onGraded?.(result);
    redraw();
  }

  clear(root).append(indicators, body, controls);
  redraw();
}
