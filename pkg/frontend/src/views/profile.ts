import type { AppContext } from "../context";
import { clear, el, progressBar } from "../dom";

export async function renderProfile(root: HTMLElement, ctx: AppContext): Promise<void> {
  const profile = await ctx.api.profile();
  const stats = el(
    "div",
    { class: "card profile-stats" },
    el("h3", {}, profile.name),
    el("p", {}, profile.email),
    el("p", { "data-testid": "totals" }, `${profile.total_xp} XP · ${profile.total_coins} coins`),
    el("p", {}, `🔥 ${profile.streak.current_length}-day streak`),
  );
  const badges = el("div", { class: "card" }, el("h3", {}, "Badges"));
  if (profile.badges.length === 0) badges.append(el("p", {}, "None yet."));
  for (const badge of profile.badges) {
    badges.append(el("div", { class: "badge" }, `${badge.kind} · ${badge.subject_id}`));
  }
  const proficiency = el("div", { class: "card" }, el("h3", {}, "Proficiency"));
  if (profile.proficiency.length === 0) proficiency.append(el("p", {}, "Enroll to start tracking."));
  for (const score of profile.proficiency) {
    proficiency.append(
      el(
        "div",
        { class: "journey-row" },
        el("span", {}, score.country_id),
        progressBar(score.value),
        el("span", { class: "muted" }, score.value.toFixed(2)),
      ),
    );
  }
  clear(root).append(el("h2", {}, "Profile"), stats, badges, proficiency);
}

export async function renderSettings(root: HTMLElement, ctx: AppContext): Promise<void> {
  const profile = await ctx.api.profile();
  const logout = el("button", { class: "secondary" }, "Log out");
  logout.addEventListener("click", () => ctx.navigate("#/logout"));
  clear(root).append(
    el("h2", {}, "Account Settings"),
    el(
      "div",
      { class: "card settings" },
      el("p", {}, `Name: ${profile.name}`),
      el("p", {}, `Email: ${profile.email}`),
      el("p", {}, `Motivation: ${profile.learning_motivation || "—"}`),
      el("p", {}, `Self-rated knowledge: ${profile.self_rated_knowledge} / 5`),
      el("p", {}, `Daily goal: ${profile.daily_goal_minutes} minutes`),
      el("p", {}, `Daily reminders: ${profile.notifications_opt_in ? "on" : "off"}`),
      el("p", {}, `Organization: ${profile.org_id ?? "—"}`),
    ),
    logout,
  );
}
