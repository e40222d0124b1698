// Hash router with an auth guard: everything except the landing, sign-up,
// and login pages requires a session and falls back to #/login.

export interface Route {
  name: string;
  params: Record<string, string>;
}

interface RouteDef {
  pattern: RegExp;
  name: string;
  paramNames: string[];
}

function def(path: string, name: string): RouteDef {
  const paramNames: string[] = [];
  const source = path
    .split("/")
    .map((segment) => {
      if (segment.startsWith(":")) {
        paramNames.push(segment.slice(1));
        return "([^/]+)";
      }
      return segment.replace(/[.*+?^${}()|[\]\\]/g, "\\$&");
    })
    .join("/");
  return { pattern: new RegExp(`^${source}$`), name, paramNames };
}

const ROUTES: RouteDef[] = [
  def("", "landing"),
  def("signup", "signup"),
  def("login", "login"),
  def("learn", "learn"),
  def("explore", "explore"),
  def("practice", "practice"),
  def("stories", "stories"),
  def("leaderboard", "leaderboard"),
  def("profile", "profile"),
  def("settings", "settings"),
  def("logout", "logout"),
  def("category/:id", "category"),
  def("lesson/:id", "lesson"),
];

export const PUBLIC_ROUTES = new Set(["landing", "signup", "login"]);

// The eight sidebar destinations, in dashboard order.
export const NAV_ITEMS: { label: string; hash: string; name: string }[] = [
  { label: "Learn", hash: "#/learn", name: "learn" },
  { label: "Explore", hash: "#/explore", name: "explore" },
  { label: "Practice", hash: "#/practice", name: "practice" },
  { label: "Stories", hash: "#/stories", name: "stories" },
  { label: "Leaderboard", hash: "#/leaderboard", name: "leaderboard" },
  { label: "Profile", hash: "#/profile", name: "profile" },
  { label: "Account Settings", hash: "#/settings", name: "settings" },
  { label: "Logout", hash: "#/logout", name: "logout" },
];

export function parseHash(hash: string): Route {
  const path = hash.replace(/^#\/?/, "").replace(/\/$/, "");
  for (const route of ROUTES) {
    const match = route.pattern.exec(path);
    if (match) {
      const params: Record<string, string> = {};
      route.paramNames.forEach((name, i) => {
        params[name] = decodeURIComponent(match[i + 1]);
      });
      return { name: route.name, params };
    }
  }
  return { name: "landing", params: {} };
}

export function resolveRoute(hash: string, authenticated: boolean): Route {
  const route = parseHash(hash);
  if (!authenticated && !PUBLIC_ROUTES.has(route.name)) {
    return { name: "login", params: {} };
  }
  if (authenticated && route.name === "landing") {
    return { name: "learn", params: {} };
  }
  return route;
}
