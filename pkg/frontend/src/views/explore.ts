import type { AppContext } from "../context";
import { setActiveCountry } from "../context";
import { clear, el } from "../dom";

export async function renderExplore(root: HTMLElement, ctx: AppContext): Promise<void> {
  const countries = await ctx.api.countries();
  const list = el("div", { class: "country-list" });
  for (const country of countries) {
    const action = el(
      "button",
      { class: country.enrolled ? "secondary" : "primary" },
      country.enrolled ? "Continue" : "Enroll",
    );
    action.addEventListener("click", async () => {
      if (!country.enrolled) await ctx.api.enroll(country.country_id);
      setActiveCountry(country.country_id);
      ctx.navigate("#/learn");
    });
    list.append(
      el(
        "div",
        { class: "card country-card" },
        el("h3", {}, country.name),
        el("p", {}, `${country.category_count} categories`),
        action,
      ),
    );
  }
  clear(root).append(el("h2", {}, "Immerse in a country"), list);
}
