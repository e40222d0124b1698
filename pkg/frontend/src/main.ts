import { ApiClient } from "./api";
import type { AppContext } from "./context";
import { clear, el } from "./dom";
import { NAV_ITEMS, resolveRoute, type Route } from "./router";
import { renderCategory } from "./views/category";
import { renderDashboard } from "./views/dashboard";
import { renderExplore } from "./views/explore";
import { renderLanding } from "./views/landing";
import { renderLesson } from "./views/lesson";
import { renderLeaderboard } from "./views/leaderboard";
import { renderLogin } from "./views/login";
import { renderPractice } from "./views/practice";
import { renderProfile, renderSettings } from "./views/profile";
import { renderSignup } from "./views/signup";
import { renderStories } from "./views/stories";

const api = new ApiClient();
const root = document.getElementById("app") as HTMLElement;

const ctx: AppContext = {
  api,
  navigate(hash: string): void {
    if (window.location.hash === hash) void render();
    else window.location.hash = hash;
  },
  async refreshHeader(): Promise<void> {
    const slot = document.querySelector("[data-header-totals]");
    if (!slot || !api.authenticated) return;
    try {
      const profile = await api.profile();
      slot.textContent = `${profile.total_xp} XP · ${profile.total_coins} 🪙 · 🔥 ${profile.streak.current_length}`;
    } catch {
      // header totals are cosmetic; auth errors surface through routing
    }
  },
};

function layout(content: HTMLElement, routeName: string): HTMLElement {
  const nav = el("nav", { class: "sidebar" });
  for (const item of NAV_ITEMS) {
    const link = el(
      "a",
      { href: item.hash, class: item.name === routeName ? "nav-item active" : "nav-item" },
      item.label,
    );
    nav.append(link);
  }
  const header = el(
    "header",
    { class: "topbar" },
    el("span", { class: "brand" }, "ICLS"),
    el("span", { "data-header-totals": "true", class: "totals" }, ""),
  );
  return el("div", { class: "shell" }, nav, el("div", { class: "main" }, header, content));
}

async function render(): Promise<void> {
  const route: Route = resolveRoute(window.location.hash, api.authenticated);

  if (route.name === "logout") {
    await api.logout();
    ctx.navigate("#/login");
    return;
  }

  const content = el("section", { class: "content" });
  if (route.name === "landing" || route.name === "signup" || route.name === "login") {
    clear(root).append(el("div", { class: "public-page" }, content));
  } else {
    clear(root).append(layout(content, route.name));
    void ctx.refreshHeader();
  }

  try {
    switch (route.name) {
      case "landing":
        renderLanding(content, ctx);
        break;
      case "signup":
        await renderSignup(content, ctx);
        break;
      case "login":
        renderLogin(content, ctx);
        break;
      case "learn":
        await renderDashboard(content, ctx);
        break;
      case "explore":
        await renderExplore(content, ctx);
        break;
      case "practice":
        await renderPractice(content, ctx);
        break;
      case "stories":
        await renderStories(content, ctx);
        break;
      case "leaderboard":
        await renderLeaderboard(content, ctx);
        break;
      case "profile":
        await renderProfile(content, ctx);
        break;
      case "settings":
        await renderSettings(content, ctx);
        break;
      case "category":
        await renderCategory(content, ctx, route.params.id);
        break;
      case "lesson":
        await renderLesson(content, ctx, route.params.id);
        break;
      default:
        renderLanding(content, ctx);
    }
  } catch (error) {
    // Expired or missing session: bounce to login.
    if ((error as { status?: number }).status === 401) {
      api.token = null;
      ctx.navigate("#/login");
      return;
    }
    content.append(el("p", { class: "error-box" }, `Failed to load: ${String(error)}`));
  }
}

window.addEventListener("hashchange", () => void render());
void render();
