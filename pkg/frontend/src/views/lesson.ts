import type { UnitDetail } from "../api";
import { ApiError } from "../api";
import type { AppContext } from "../context";
import { clear, el, errorBox, toast } from "../dom";
import { renderQuizPlayer } from "./quizPlayer";

type Pane = "watch" | "summary" | "quiz" | "chat";

export async function renderLesson(
  root: HTMLElement,
  ctx: AppContext,
  lessonId: string,
): Promise<void> {
  const lesson = await ctx.api.lesson(lessonId);
  if (lesson.units.length === 0) {
    clear(root).append(el("p", {}, "This lesson has no published content yet."));
    return;
  }
  let unit = lesson.units[0];
  let pane: Pane = "watch";
  let openedAt = Date.now();

  const unitTabs = el("div", { class: "unit-tabs" });
  const paneTabs = el("div", { class: "pane-tabs" });
  const paneRoot = el("div", { class: "pane-root" });

  function selectUnit(next: UnitDetail): void {
    unit = next;
    pane = "watch";
    openedAt = Date.now();
    redraw();
  }

  function selectPane(next: Pane): void {
    pane = next;
    redraw();
  }

  function redraw(): void {
    clear(unitTabs);
    for (const u of lesson.units) {
      const tab = el(
        "button",
        { class: u.unit_id === unit.unit_id ? "tab active" : "tab" },
        `${u.kind === "video_transcript" ? "🎬" : "📄"} ${u.source_name} · ${u.progress_state}`,
      );
      tab.addEventListener("click", () => selectUnit(u));
      unitTabs.append(tab);
    }
    clear(paneTabs);
    const panes: [Pane, string][] = [
      ["watch", "Watch"],
      ["summary", "Read Summary"],
      ["quiz", "Take Quiz"],
      ["chat", "Chatbot"],
    ];
    for (const [name, label] of panes) {
      const tab = el("button", { class: name === pane ? "tab active" : "tab" }, label);
      tab.addEventListener("click", () => selectPane(name));
      paneTabs.append(tab);
    }
    void renderPane();
  }

  async function renderPane(): Promise<void> {
    clear(paneRoot);
    if (pane === "watch") {
      renderWatch();
    } else if (pane === "summary") {
      await renderSummary();
    } else if (pane === "quiz") {
      await renderQuiz();
    } else {
      renderChat();
    }
  }

  function renderWatch(): void {
    const markWatched = el("button", { class: "primary" }, "Mark as watched");
    if (unit.progress_state !== "not_started") markWatched.setAttribute("disabled", "true");
    markWatched.addEventListener("click", async () => {
      const seconds = Math.max(1, Math.round((Date.now() - openedAt) / 1000));
      try {
        const result = await ctx.api.watch(unit.unit_id, seconds);
        unit.progress_state = result.progress_state;
        toast(`+${result.xp_delta} XP`);
        void ctx.refreshHeader();
        redraw();
      } catch (error) {
        paneRoot.append(errorBox(error instanceof ApiError ? error.message : "Could not update"));
      }
    });
    paneRoot.append(
      el("div", { class: "transcript card" }, el("p", {}, unit.raw_text)),
      markWatched,
    );
  }

  async function renderSummary(): Promise<void> {
    if (!unit.has_summary) {
      paneRoot.append(el("p", {}, "No summary available for this unit."));
      return;
    }
    const summary = await ctx.api.summary(unit.unit_id);
    paneRoot.append(
      el(
        "div",
        { class: "card summary" },
        el("h3", {}, "Key points"),
        el("p", {}, summary.text),
        el("p", { class: "muted" }, `${summary.word_count} words`),
      ),
    );
  }

  async function renderQuiz(): Promise<void> {
    if (!unit.has_quiz) {
      paneRoot.append(el("p", {}, "No quiz available for this unit."));
      return;
    }
    const quiz = await ctx.api.quiz(unit.unit_id);
    const playerRoot = el("div", { class: "quiz-player" });
    paneRoot.append(playerRoot);
    renderQuizPlayer(playerRoot, ctx, quiz, {
      lessonId: lesson.lesson_id,
      lessonTitle: lesson.title,
      onGraded: (result) => {
        unit.progress_state = result.progress_state;
      },
    });
  }

  function renderChat(): void {
    const log = el("div", { class: "chat-log" });
    const input = el("input", { placeholder: "Ask about this lesson…", "data-testid": "chat-input" });
    const send = el("button", { class: "primary" }, "Send");
    const form = el("form", { class: "chat-form" }, input, send);
    form.addEventListener("submit", async (event) => {
      event.preventDefault();
      const question = input.value.trim();
      if (!question) return;
      input.value = "";
      log.append(el("div", { class: "chat-msg mine" }, question));
      try {
        const reply = await ctx.api.chat(unit.unit_id, question);
        log.append(
          el(
            "div",
            { class: "chat-msg theirs" },
            el("p", {}, reply.answer_text),
            el("p", { class: "muted" }, `sources: ${reply.used_chunk_ids.length} chunk(s)`),
          ),
        );
        if (reply.xp_delta > 0) {
          unit.progress_state = reply.progress_state;
          toast(`+${reply.xp_delta} XP — practice complete`);
          void ctx.refreshHeader();
        }
      } catch (error) {
        log.append(errorBox(error instanceof ApiError ? error.message : "Chat failed"));
      }
      log.scrollTop = log.scrollHeight;
    });
    paneRoot.append(el("div", { class: "chat card" }, log, form));
  }

  const back = el("button", { class: "link" }, `← ${lesson.category_name}`);
  back.addEventListener("click", () => ctx.navigate(`#/category/${lesson.category_id}`));
  clear(root).append(back, el("h2", {}, lesson.title), unitTabs, paneTabs, paneRoot);
  redraw();
}
