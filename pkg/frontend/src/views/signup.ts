import { ApiError, type RegisterFields } from "../api";
import type { AppContext } from "../context";
import { setActiveCountry } from "../context";
import { clear, el, errorBox } from "../dom";

// Client-side validation mirrors (but never replaces) the server rules.
export function validateSignup(fields: RegisterFields): Record<string, string> {
  const errors: Record<string, string> = {};
  if (!fields.name.trim()) errors.name = "Name is required";
  if (!fields.email.includes("@")) errors.email = "Enter a valid email address";
  if (fields.password.length < 6) errors.password = "Password needs at least 6 characters";
  if (!fields.immersion_country) errors.immersion_country = "Pick a country to immerse in";
  if (
    !Number.isInteger(fields.self_rated_knowledge) ||
    fields.self_rated_knowledge < 1 ||
    fields.self_rated_knowledge > 5
  ) {
    errors.self_rated_knowledge = "Rating must be between 1 and 5";
  }
  if (!Number.isInteger(fields.daily_goal_minutes) || fields.daily_goal_minutes <= 0) {
    errors.daily_goal_minutes = "Daily goal must be a positive number of minutes";
  }
  return errors;
}

export async function renderSignup(root: HTMLElement, ctx: AppContext): Promise<void> {
  const countries = await ctx.api.metaCountries();

  const name = el("input", { name: "name", placeholder: "Full name" });
  const email = el("input", { name: "email", type: "email", placeholder: "Email address" });
  const password = el("input", { name: "password", type: "password", placeholder: "Password" });
  const country = el("select", { name: "immersion_country" });
  country.append(el("option", { value: "" }, "Select a country of interest"));
  for (const c of countries) {
    country.append(el("option", { value: c.country_id }, c.name));
  }
  const motivation = el("textarea", {
    name: "learning_motivation",
    placeholder: "Why do you want to learn about this culture?",
  });
  // Constrained control: only 1..5 can be produced from the UI.
  const rating = el("select", { name: "self_rated_knowledge", "data-testid": "rating" });
  for (const value of [1, 2, 3, 4, 5]) {
    rating.append(el("option", { value: String(value) }, `${value} / 5`));
  }
  rating.value = "3";
  const goal = el("input", {
    name: "daily_goal_minutes",
    type: "number",
    min: "1",
    value: "15",
  });
  const notifications = el("input", { name: "notifications_opt_in", type: "checkbox" });
  const inline = el("div", { class: "form-errors", "data-testid": "form-errors" });
  const submit = el("button", { class: "primary", type: "submit" }, "Create my profile");

  const form = el(
    "form",
    { class: "signup-form", "data-testid": "signup-form" },
    el("h2", {}, "Create your profile"),
    el("label", {}, "Personal details", name, email, password),
    el("label", {}, "Country immersion", country),
    el("label", {}, "Learning motivation", motivation),
    el("label", {}, "Current knowledge of the culture", rating),
    el("label", {}, "Daily learning goal (minutes)", goal),
    el("label", { class: "checkbox" }, notifications, "Send me daily reminders"),
    inline,
    submit,
  );

  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    inline.replaceChildren();
    const fields: RegisterFields = {
      name: name.value,
      email: email.value,
      password: password.value,
      immersion_country: country.value,
      learning_motivation: motivation.value,
      self_rated_knowledge: Number(rating.value),
      daily_goal_minutes: Number(goal.value),
      notifications_opt_in: notifications.checked,
    };
    const errors = validateSignup(fields);
    if (Object.keys(errors).length > 0) {
      for (const message of Object.values(errors)) inline.append(errorBox(message));
      return;
    }
    submit.setAttribute("disabled", "true");
    try {
      await ctx.api.register(fields);
      await ctx.api.login(fields.email, fields.password);
      await ctx.api.enroll(fields.immersion_country);
      setActiveCountry(fields.immersion_country);
      ctx.navigate("#/learn");
    } catch (error) {
      // Surface server rejections (409 duplicate email, 422 validation)
      // inline; the form keeps its values.
      if (error instanceof ApiError) inline.append(errorBox(error.message));
      else inline.append(errorBox("Something went wrong, please try again"));
    } finally {
      submit.removeAttribute("disabled");
    }
  });

  clear(root).append(form);
}
