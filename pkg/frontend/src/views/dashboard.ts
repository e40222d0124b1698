import type { AppContext } from "../context";
import { activeCountry, setActiveCountry } from "../context";
import { clear, el, progressBar } from "../dom";

// Main dashboard (Learn): country header, category cards, Journey So Far,
// and the latest achievements. All progress numbers come from the API.
export async function renderDashboard(root: HTMLElement, ctx: AppContext): Promise<void> {
  const profile = await ctx.api.profile();
  const countryId = activeCountry() ?? profile.immersion_country;
  setActiveCountry(countryId);
  const countries = await ctx.api.countries();
  const country = countries.find((c) => c.country_id === countryId);

  if (!country?.enrolled) {
    const enroll = el("button", { class: "primary" }, `Enroll in ${country?.name ?? "a country"}`);
    enroll.addEventListener("click", async () => {
      await ctx.api.enroll(countryId);
      await renderDashboard(root, ctx);
    });
    clear(root).append(
      el(
        "div",
        { class: "dashboard-empty" },
        el("h2", {}, country?.name ?? "Your course"),
        el("p", {}, "Enroll to unlock lessons, quizzes, and the culture companion."),
        enroll,
      ),
    );
    return;
  }

  const categories = await ctx.api.categories(countryId);
  const cards = el("div", { class: "category-grid" });
  for (const category of categories) {
    const view = el("button", { class: "secondary" }, "View");
    view.addEventListener("click", () => ctx.navigate(`#/category/${category.category_id}`));
    cards.append(
      el(
        "div",
        { class: "card category-card" },
        el("div", { class: "card-art" }, category.name.slice(0, 1)),
        el("h3", {}, category.name),
        el("p", {}, `${category.lesson_count} lesson${category.lesson_count === 1 ? "" : "s"}`),
        progressBar(category.progress),
        view,
      ),
    );
  }

  const journey = el("div", { class: "card journey" }, el("h3", {}, "Journey So Far"));
  for (const category of categories) {
    journey.append(
      el(
        "div",
        { class: "journey-row" },
        el("span", {}, category.name),
        progressBar(category.progress),
      ),
    );
  }

  const achievements = el("div", { class: "card achievements" }, el("h3", {}, "Achievements"));
  if (profile.badges.length === 0) {
    achievements.append(el("p", {}, "No badges yet — finish a category with strong quiz scores."));
  }
  for (const badge of profile.badges.slice(-5).reverse()) {
    achievements.append(
      el("div", { class: "badge" }, `${badge.kind === "country" ? "🌍" : "⭐"} ${badge.kind} · ${badge.subject_id}`),
    );
  }

  clear(root).append(
    el(
      "div",
      { class: "dashboard" },
      el("h2", { "data-testid": "country-name" }, country.name),
      cards,
      el("div", { class: "dashboard-side" }, journey, achievements),
    ),
  );
}
