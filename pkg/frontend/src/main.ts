/**
 * App controller: wires the API client, the reducer, the keyboard
 * handler, and the view into one session.
 *
 * Every label shown as saved corresponds to an acknowledged POST. A
 * submit locks the card, and a failed request rolls the view back to the
 * exact pre-submit state with a toast, so no optimistic state survives
 * an error. idle() resolves when no operation is in flight, which is the
 * synchronization point for scripted tests.
 */

import type { FetchLike, Label, TaskView } from "./api.js";
import { ApiClient, ApiError } from "./api.js";
import { createKeyboardHandler } from "./keyboard.js";
import { optimistic } from "./optimistic.js";
import type { Action, HistoryEntry, SessionState } from "./state.js";
import { initialState, reduce } from "./state.js";
import { render } from "./view.js";

export interface AppConfig {
  apiBase: string;
  annotator: string;
  fetchFn?: FetchLike;
}

export interface AppController {
  getState(): SessionState;
  client: ApiClient;
  idle(): Promise<void>;
  destroy(): void;
}

function errorMessage(err: unknown): { message: string; offline: boolean } {
  if (err instanceof ApiError) {
    return { message: err.message, offline: err.status === 0 };
  }
  return { message: err instanceof Error ? err.message : String(err), offline: false };
}

export function createApp(root: HTMLElement, config: AppConfig): AppController {
  const client = new ApiClient(config.apiBase, config.fetchFn);
  let state: SessionState = initialState(config.annotator);
  let inFlight = 0;
  let waiters: Array<() => void> = [];

  const handlers = {
    onLabel: (label: Label) => void track(submit(label)),
    onSkip: () => void track(skipCurrent()),
    onUndo: () => void track(undoLast()),
    onRetry: () => void track(retry()),
  };

  function dispatch(action: Action): void {
    state = reduce(state, action);
    render(root, state, handlers);
  }

  function track<T>(promise: Promise<T>): Promise<T> {
    inFlight += 1;
    return promise.finally(() => {
      inFlight -= 1;
      if (inFlight === 0) {
        const pending = waiters;
        waiters = [];
        for (const wake of pending) {
          wake();
        }
      }
    });
  }

  function idle(): Promise<void> {
    if (inFlight === 0) {
      return Promise.resolve();
    }
    return new Promise((resolve) => waiters.push(resolve));
  }

  async function loadNext(): Promise<void> {
    dispatch({ type: "next-loading" });
    try {
      const next = await client.nextTask(state.annotator);
      dispatch({ type: "next-loaded", task: next.task, remaining: next.remaining });
    } catch (err) {
      const { message, offline } = errorMessage(err);
      dispatch({ type: "request-failed", message, offline });
    }
  }

  async function refreshStatus(): Promise<void> {
    try {
      const [progress, agreement] = await Promise.all([
        client.progress(),
        client.agreement(),
      ]);
      dispatch({ type: "status-loaded", progress, agreement });
    } catch {
      dispatch({ type: "status-failed" });
    }
  }

  async function submit(label: Label): Promise<void> {
    const task = state.current;
    if (task === null || state.phase !== "ready" || state.offline) {
      return;
    }
    const prior = state.saved[task.pair_id] ?? null;
    const acknowledged = await optimistic({
      apply: () => {
        dispatch({ type: "submit-started", label });
        return null;
      },
      remote: async () => {
        await client.submitLabel(task.pair_id, state.annotator, label);
      },
      revert: () => {
        /* request-failed repaints the pre-submit card */
      },
      onError: (err) => {
        const { message, offline } = errorMessage(err);
        dispatch({ type: "request-failed", message, offline });
      },
    });
    if (!acknowledged) {
      return;
    }
    dispatch({ type: "label-acknowledged", task, label, prior });
    await loadNext();
    await refreshStatus();
  }

  async function skipCurrent(): Promise<void> {
    const task = state.current;
    if (task === null || state.phase !== "ready" || state.offline) {
      return;
    }
    const acknowledged = await optimistic({
      apply: () => {
        dispatch({ type: "skip-started" });
        return null;
      },
      remote: async () => {
        await client.skipTask(task.pair_id, state.annotator);
      },
      revert: () => {
        /* request-failed repaints the pre-skip card */
      },
      onError: (err) => {
        const { message, offline } = errorMessage(err);
        dispatch({ type: "request-failed", message, offline });
      },
    });
    if (!acknowledged) {
      return;
    }
    dispatch({ type: "skip-acknowledged", task });
    await loadNext();
  }

  async function undoLast(): Promise<void> {
    if (state.phase !== "ready" && state.phase !== "done") {
      return;
    }
    const entry: HistoryEntry | undefined = state.history[state.history.length - 1];
    if (entry === undefined) {
      return;
    }
    if (entry.kind === "label" && entry.prior !== null) {
      try {
        await client.submitLabel(entry.task.pair_id, state.annotator, entry.prior);
      } catch (err) {
        const { message, offline } = errorMessage(err);
        dispatch({ type: "request-failed", message, offline });
        return;
      }
    }
    dispatch({ type: "undo-applied", entry });
  }

  async function retry(): Promise<void> {
    if (state.phase === "submitting" || state.phase === "loading") {
      return;
    }
    await loadNext();
    await refreshStatus();
  }

  const onKey = createKeyboardHandler(handlers);
  window.addEventListener("keydown", onKey);
  render(root, state, handlers);
  void track(loadNext().then(refreshStatus));

  return {
    getState: () => state,
    client,
    idle,
    destroy: () => window.removeEventListener("keydown", onKey),
  };
}
