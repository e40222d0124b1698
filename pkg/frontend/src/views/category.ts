import type { AppContext } from "../context";
import { clear, el, progressBar } from "../dom";

export async function renderCategory(
  root: HTMLElement,
  ctx: AppContext,
  categoryId: string,
): Promise<void> {
  const lessons = await ctx.api.lessons(categoryId);
  const list = el("div", { class: "lesson-list" });
  for (const lesson of lessons) {
    const start = el("button", { class: "primary" }, "Start");
    start.addEventListener("click", () => ctx.navigate(`#/lesson/${lesson.lesson_id}`));
    list.append(
      el(
        "div",
        { class: "card lesson-card" },
        el("h3", {}, lesson.title),
        el("p", {}, `${lesson.unit_count} video${lesson.unit_count === 1 ? "" : "s"}`),
        progressBar(lesson.progress),
        start,
      ),
    );
  }
  const back = el("button", { class: "link" }, "← Back to categories");
  back.addEventListener("click", () => ctx.navigate("#/learn"));
  clear(root).append(back, el("h2", {}, "Lessons"), list);
}
