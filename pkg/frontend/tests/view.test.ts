import { beforeEach, describe, expect, it, vi } from "vitest";

import type { Agreement, Progress } from "../src/api.js";
import type { SessionState } from "../src/state.js";
import { initialState, reduce } from "../src/state.js";
import type { ViewHandlers } from "../src/view.js";
import { render } from "../src/view.js";
import { TEN_PAIRS } from "./fixture.js";

const handlers: ViewHandlers = {
  onLabel: vi.fn(),
  onSkip: vi.fn(),
  onUndo: vi.fn(),
  onRetry: vi.fn(),
};

function readyState(): SessionState {
  return reduce(initialState("anna"), {
    type: "next-loaded",
    task: TEN_PAIRS[0]!,
    remaining: 10,
  });
}

function progressFixture(): Progress {
  return {
    total_pairs: 10,
    total_labels: 12,
    annotators: {
      anna: { labeled: 7, by_label: { yes: 3, inflected: 1, no: 3 } },
      bert: { labeled: 5, by_label: { yes: 2, inflected: 2, no: 1 } },
    },
    fully_labeled: 5,
  };
}

let root: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = '<div id="app"></div>';
  root = document.getElementById("app")!;
});

function query(selector: string): HTMLElement {
  const node = root.querySelector<HTMLElement>(selector);
  if (node === null) {
    throw new Error(`missing ${selector}`);
  }
  return node;
}

describe("task card", () => {
  it("renders the pair verbatim with the term highlighted in context", () => {
    render(root, readyState(), handlers);
    expect(query('[data-testid="lemma"]').textContent).toBe("dazwischen");
    expect(query('[data-testid="term"]').textContent).toBe("dozwischn");
    expect(query('[data-testid="pos-badge"]').textContent).toBe("ADV");
    expect(query('[data-testid="distance"]').textContent).toBe("LD 3");
    const marks = root.querySelectorAll("mark");
    expect(marks).toHaveLength(2);
    expect(marks[0]!.textContent).toBe("dozwischn");
  });

  it("shows at most three context snippets", () => {
    const state = readyState();
    const task = { ...state.current!, contexts: ["a", "b", "c", "d", "e"] };
    render(root, { ...state, current: task }, handlers);
    expect(root.querySelectorAll(".context")).toHaveLength(3);
  });

  it("label buttons dispatch and are disabled while submitting", () => {
    const state = readyState();
    render(root, state, handlers);
    (query('button[data-label="yes"]') as HTMLButtonElement).click();
    expect(handlers.onLabel).toHaveBeenCalledWith("yes");

    const submitting = reduce(state, { type: "submit-started", label: "yes" });
    render(root, submitting, handlers);
    const button = query('button[data-label="yes"]') as HTMLButtonElement;
    expect(button.disabled).toBe(true);
    expect(button.classList.contains("pending")).toBe(true);
  });

  it("undo is disabled with an empty history", () => {
    render(root, readyState(), handlers);
    expect((query('button[data-action="undo"]') as HTMLButtonElement).disabled).toBe(true);
  });

  it("renders the queue-empty state", () => {
    const state = reduce(initialState("anna"), { type: "next-loaded", task: null, remaining: 0 });
    render(root, state, handlers);
    expect(query('[data-testid="queue-empty"]').textContent).toContain("queue empty");
  });

  it("renders the unreachable-service banner in the error phase", () => {
    const state = reduce(initialState("anna"), {
      type: "request-failed",
      message: "down",
      offline: true,
    });
    render(root, state, handlers);
    expect(query('[data-testid="error-banner"]').textContent).toContain("press r to retry");
    expect(query('[data-testid="offline-banner"]')).toBeTruthy();
  });
});

describe("toast", () => {
  it("shows the failure message as an alert", () => {
    const state = reduce(readyState(), {
      type: "request-failed",
      message: "label must be one of ('yes', 'inflected', 'no'), got 'х'",
      offline: false,
    });
    render(root, state, handlers);
    const toast = query('[data-testid="toast"]');
    expect(toast.getAttribute("role")).toBe("alert");
    expect(toast.textContent).toContain("label must be one of");
  });

  it("is absent without a message", () => {
    render(root, readyState(), handlers);
    expect(root.querySelector('[data-testid="toast"]')).toBeNull();
  });
});

describe("dashboard", () => {
  it("renders totals and per-annotator counts", () => {
    const state = reduce(readyState(), {
      type: "status-loaded",
      progress: progressFixture(),
      agreement: { kappa: null, n_items: 0, n_annotators: 1 },
    });
    render(root, state, handlers);
    expect(query('[data-testid="progress-totals"]').textContent).toBe(
      "12 labels on 10 pairs, 5 fully labeled",
    );
    expect(query('tr[data-annotator="bert"]').textContent).toContain("y 2 / i 2 / n 1");
  });

  it("shows kappa n/a when the service reports no defined kappa", () => {
    const state = reduce(readyState(), {
      type: "status-loaded",
      progress: progressFixture(),
      agreement: { kappa: null, n_items: 0, n_annotators: 1 },
    });
    render(root, state, handlers);
    expect(query('[data-testid="kappa"]').textContent).toBe("kappa n/a");
  });

  it("shows a defined kappa to three decimals", () => {
    const agreement: Agreement = { kappa: 1.0, n_items: 10, n_annotators: 2 };
    const state = reduce(readyState(), {
      type: "status-loaded",
      progress: progressFixture(),
      agreement,
    });
    render(root, state, handlers);
    expect(query('[data-testid="kappa"]').textContent).toBe("kappa 1.000 over 10 items");
  });

  it("flags stale data after a status refresh failure", () => {
    const state = reduce(readyState(), { type: "status-failed" });
    render(root, state, handlers);
    expect(query('[data-testid="stale-banner"]').textContent).toContain("stale");
  });
});
