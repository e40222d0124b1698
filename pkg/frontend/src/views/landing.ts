import type { AppContext } from "../context";
import { clear, el } from "../dom";

export function renderLanding(root: HTMLElement, ctx: AppContext): void {
  const getStarted = el("button", { class: "primary", "data-testid": "get-started" }, "Get Started");
  getStarted.addEventListener("click", () => ctx.navigate("#/signup"));
  const haveAccount = el(
    "button",
    { class: "secondary", "data-testid": "have-account" },
    "Already Have an Account",
  );
  haveAccount.addEventListener("click", () => ctx.navigate("#/login"));

  clear(root).append(
    el(
      "div",
      { class: "landing" },
      el("h1", {}, "Explore the world's cultures"),
      el(
        "p",
        {},
        "Lessons, quizzes, and a cultural companion for every country you want to understand.",
      ),
      el("div", { class: "landing-actions" }, getStarted, haveAccount),
    ),
  );
}
