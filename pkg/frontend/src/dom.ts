// Tiny DOM helpers; no framework.

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function clear(node: HTMLElement): HTMLElement {
  node.replaceChildren();
  return node;
}

export function errorBox(message: string): HTMLElement {
  return el("div", { class: "error-box", role: "alert" }, message);
}

export function toast(message: string): void {
  const node = el("div", { class: "toast" }, message);
  document.body.append(node);
  setTimeout(() => node.remove(), 4000);
}

export function progressBar(fraction: number): HTMLElement {
  const fill = el("div", { class: "progress-fill" });
  fill.style.width = `${Math.round(fraction * 100)}%`;
  return el("div", { class: "progress-bar" }, fill);
}
