import type { AppContext } from "../context";
import { practiceEntries } from "../context";
import { clear, el } from "../dom";
import { renderQuizPlayer } from "./quizPlayer";

// Practice: re-take quizzes, filtered to the questions answered wrong last
// time. The wrong-question sets live client-side; grading stays on the server.
export async function renderPractice(root: HTMLElement, ctx: AppContext): Promise<void> {
  const entries = practiceEntries();
  const list = el("div", { class: "practice-list" });
  const playerRoot = el("div", { class: "quiz-player" });

  if (entries.length === 0) {
    list.append(
      el("p", {}, "Nothing to practice yet — take a quiz and any missed questions land here."),
    );
  }
  for (const entry of entries) {
    const retake = el(
      "button",
      { class: "primary" },
      `Practice ${entry.wrong_ordinals.length} missed question(s)`,
    );
    retake.addEventListener("click", async () => {
      const quiz = await ctx.api.quiz(entry.unit_id);
      clear(playerRoot);
      playerRoot.append(el("h3", {}, `Practicing: ${entry.title}`));
      const host = el("div", {});
      playerRoot.append(host);
      renderQuizPlayer(host, ctx, quiz, {
        ordinalFilter: entry.wrong_ordinals,
        lessonId: entry.lesson_id,
        lessonTitle: entry.title,
      });
    });
    list.append(
      el("div", { class: "card practice-card" }, el("h3", {}, entry.title), retake),
    );
  }
  clear(root).append(el("h2", {}, "Practice"), list, playerRoot);
}
