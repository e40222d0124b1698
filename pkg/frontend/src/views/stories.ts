import type { AppContext } from "../context";
import { clear, el } from "../dom";

export async function renderStories(root: HTMLElement, ctx: AppContext): Promise<void> {
  const stories = await ctx.api.stories();
  const list = el("div", { class: "story-list" });
  if (stories.length === 0) list.append(el("p", {}, "No stories published yet."));
  for (const story of stories) {
    list.append(
      el(
        "div",
        { class: "card story-card" },
        el("h3", {}, story.title),
        el("a", { href: story.url, target: "_blank", rel: "noopener" }, "Listen ↗"),
      ),
    );
  }
  clear(root).append(
    el("h2", {}, "Stories"),
    el("p", { class: "muted" }, "Podcasts about real intercultural experiences."),
    list,
  );
}
