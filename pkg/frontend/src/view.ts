/**
 * DOM rendering.
 *
 * render() rebuilds the whole app subtree from the session state. The
 * tree is small (one task card plus a dashboard), so a full rebuild per
 * action keeps the view a pure function of the state.
 */

import type { Label } from "./api.js";
import { LABELS } from "./api.js";
import { highlightTerm } from "./highlight.js";
import type { SessionState } from "./state.js";

export interface ViewHandlers {
  onLabel: (label: Label) => void;
  onSkip: () => void;
  onUndo: () => void;
  onRetry: () => void;
}

const BUTTON_TEXT: Record<Label, string> = {
  yes: "Yes (y)",
  inflected: "Inflected (i)",
  no: "No (n)",
};

function el(
  tag: string,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElement {
  const node = document.createElement(tag);
  for (const [name, value] of Object.entries(attrs)) {
    node.setAttribute(name, value);
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function renderTask(state: SessionState, handlers: ViewHandlers): HTMLElement {
  const card = el("section", { class: "task-card", "data-testid": "task-card" });
  const task = state.current;
  if (state.phase === "loading") {
    card.append(el("p", { class: "muted" }, "loading next task..."));
    return card;
  }
  if (state.phase === "error") {
    card.append(
      el(
        "p",
        { class: "error-banner", "data-testid": "error-banner" },
        "service unreachable, press r to retry",
      ),
    );
    return card;
  }
  if (state.phase === "done" || task === null) {
    card.append(
      el("p", { class: "muted", "data-testid": "queue-empty" }, "queue empty, all tasks handled"),
    );
    return card;
  }

  card.dataset.pairId = task.pair_id;
  const head = el("div", { class: "pair" });
  head.append(
    el("span", { class: "lemma", "data-testid": "lemma" }, task.lemma),
    el("span", { class: "badge", "data-testid": "pos-badge" }, task.pos_max),
    el("span", { class: "freq" }, `freq ${task.lemma_freq}`),
    el("span", { class: "arrow" }, "→"),
    el("span", { class: "term", "data-testid": "term" }, task.term),
    el("span", { class: "badge distance", "data-testid": "distance" }, `LD ${task.distance}`),
  );
  card.append(head);

  const contexts = el("ul", { class: "contexts", "data-testid": "contexts" });
  for (const snippet of task.contexts.slice(0, 3)) {
    const item = el("li", { class: "context" });
    item.innerHTML = highlightTerm(snippet, task.term);
    contexts.append(item);
  }
  card.append(contexts);

  const row = el("div", { class: "buttons" });
  const busy = state.phase !== "ready" || state.offline;
  for (const label of LABELS) {
    const button = el("button", { "data-label": label }, BUTTON_TEXT[label]);
    if (busy) {
      button.setAttribute("disabled", "");
    }
    if (state.pending === label) {
      button.classList.add("pending");
    }
    button.addEventListener("click", () => handlers.onLabel(label));
    row.append(button);
  }
  const skip = el("button", { "data-action": "skip" }, "Skip (s)");
  const undo = el("button", { "data-action": "undo" }, "Undo (u)");
  if (busy) {
    skip.setAttribute("disabled", "");
  }
  if (busy || state.history.length === 0) {
    undo.setAttribute("disabled", "");
  }
  skip.addEventListener("click", () => handlers.onSkip());
  undo.addEventListener("click", () => handlers.onUndo());
  row.append(skip, undo);
  card.append(row);
  return card;
}

function renderDashboard(state: SessionState): HTMLElement {
  const panel = el("section", { class: "dashboard", "data-testid": "dashboard" });
  panel.append(el("h2", {}, "Progress"));
  if (state.staleStatus) {
    panel.append(
      el("p", { class: "stale-banner", "data-testid": "stale-banner" }, "showing stale data, status refresh failed"),
    );
  }
  const progress = state.progress;
  if (progress === null) {
    panel.append(el("p", { class: "muted" }, "no progress data yet"));
  } else {
    const totals = el("p", { "data-testid": "progress-totals" });
    totals.textContent =
      `${progress.total_labels} labels on ${progress.total_pairs} pairs, ` +
      `${progress.fully_labeled} fully labeled`;
    panel.append(totals);
    const table = el("table", { class: "annotators" });
    for (const [name, entry] of Object.entries(progress.annotators)) {
      const row = el("tr", { "data-annotator": name });
      row.append(
        el("td", {}, name),
        el("td", {}, String(entry.labeled)),
        el(
          "td",
          {},
          `y ${entry.by_label.yes} / i ${entry.by_label.inflected} / n ${entry.by_label.no}`,
        ),
      );
      table.append(row);
    }
    panel.append(table);
  }

  const agreement = state.agreement;
  const kappaText =
    agreement !== null && agreement.kappa !== null
      ? `kappa ${agreement.kappa.toFixed(3)} over ${agreement.n_items} items`
      : "kappa n/a";
  panel.append(el("p", { class: "kappa", "data-testid": "kappa" }, kappaText));
  return panel;
}

export function render(
  root: HTMLElement,
  state: SessionState,
  handlers: ViewHandlers,
): void {
  root.textContent = "";
  const header = el("header", { class: "top" });
  header.append(
    el("h1", {}, "dialex annotation"),
    el("span", { class: "annotator", "data-testid": "annotator" }, state.annotator),
    el("span", { class: "remaining", "data-testid": "remaining" }, `${state.remaining} remaining`),
  );
  root.append(header);

  if (state.offline) {
    root.append(
      el("p", { class: "offline-banner", "data-testid": "offline-banner" }, "offline, input disabled"),
    );
  }
  if (state.toast !== null) {
    root.append(el("p", { class: "toast", role: "alert", "data-testid": "toast" }, state.toast));
  }

  root.append(renderTask(state, handlers));
  root.append(renderDashboard(state));
}
