import { ApiError } from "../api";
import type { AppContext } from "../context";
import { clear, el, errorBox } from "../dom";

export function renderLogin(root: HTMLElement, ctx: AppContext): void {
  const email = el("input", { name: "email", type: "email", placeholder: "Email" });
  const password = el("input", { name: "password", type: "password", placeholder: "Password" });
  const inline = el("div", { class: "form-errors" });
  const form = el(
    "form",
    { class: "login-form" },
    el("h2", {}, "Welcome back"),
    el("label", {}, "Email", email),
    el("label", {}, "Password", password),
    inline,
    el("button", { class: "primary", type: "submit" }, "Log in"),
  );
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    inline.replaceChildren();
    try {
      await ctx.api.login(email.value, password.value);
      ctx.navigate("#/learn");
    } catch (error) {
      inline.append(errorBox(error instanceof ApiError ? error.message : "Login failed"));
    }
  });
  const toSignup = el("button", { class: "link" }, "New here? Get started");
  toSignup.addEventListener("click", () => ctx.navigate("#/signup"));
  clear(root).append(form, toSignup);
}
