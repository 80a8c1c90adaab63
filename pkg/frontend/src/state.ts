/**
 * Session state and reducer.
 *
 * `saved` holds acknowledged labels only. The in-flight selection lives
 * in `pending` and never survives a failed request: request-failed drops
 * it and restores the pre-submit view, so nothing optimistic is ever
 * shown as saved.
 */

import type { Agreement, Label, Progress, TaskView } from "./api.js";

export type HistoryEntry =
  | { kind: "label"; task: TaskView; prior: Label | null }
  | { kind: "skip"; task: TaskView };

export type Phase = "loading" | "ready" | "submitting" | "done" | "error";

export interface SessionState {
  annotator: string;
  phase: Phase;
  current: TaskView | null;
  remaining: number;
  pending: Label | null;
  saved: Record<string, Label>;
  history: HistoryEntry[];
  toast: string | null;
  offline: boolean;
  staleStatus: boolean;
  progress: Progress | null;
  agreement: Agreement | null;
}

export function initialState(annotator: string): SessionState {
  return {
    annotator,
    phase: "loading",
    current: null,
    remaining: 0,
    pending: null,
    saved: {},
    history: [],
    toast: null,
    offline: false,
    staleStatus: false,
    progress: null,
    agreement: null,
  };
}

export type Action =
  | { type: "next-loading" }
  | { type: "next-loaded"; task: TaskView | null; remaining: number }
  | { type: "submit-started"; label: Label }
  | { type: "skip-started" }
  | { type: "label-acknowledged"; task: TaskView; label: Label; prior: Label | null }
  | { type: "skip-acknowledged"; task: TaskView }
  | { type: "request-failed"; message: string; offline: boolean }
  | { type: "undo-applied"; entry: HistoryEntry }
  | { type: "toast-cleared" }
  | { type: "status-loaded"; progress: Progress; agreement: Agreement }
  | { type: "status-failed" };

export function reduce(state: SessionState, action: Action): SessionState {
  switch (action.type) {
    case "next-loading":
      return { ...state, phase: "loading", current: null, pending: null };

    case "next-loaded":
      if (action.task === null) {
        return {
          ...state,
          phase: "done",
          current: null,
          remaining: 0,
          pending: null,
          offline: false,
          toast: null,
        };
      }
      return {
        ...state,
        phase: "ready",
        current: action.task,
        remaining: action.remaining,
        pending: null,
        offline: false,
        toast: null,
      };

    case "submit-started":
      return { ...state, phase: "submitting", pending: action.label };

    case "skip-started":
      return { ...state, phase: "submitting", pending: null };

    case "label-acknowledged": {
      const saved = { ...state.saved, [action.task.pair_id]: action.label };
      const entry: HistoryEntry = {
        kind: "label",
        task: action.task,
        prior: action.prior,
      };
      return {
        ...state,
        saved,
        history: [...state.history, entry],
        pending: null,
        toast: null,
        offline: false,
      };
    }

    case "skip-acknowledged": {
      const entry: HistoryEntry = { kind: "skip", task: action.task };
      return {
        ...state,
        history: [...state.history, entry],
        pending: null,
        toast: null,
        offline: false,
      };
    }

    case "request-failed":
      return {
        ...state,
        phase: state.current !== null ? "ready" : "error",
        pending: null,
        toast: action.message,
        offline: action.offline,
      };

    case "undo-applied": {
      const history = state.history.slice(0, -1);
      const saved = { ...state.saved };
      if (action.entry.kind === "label") {
        if (action.entry.prior !== null) {
          saved[action.entry.task.pair_id] = action.entry.prior;
        } else {
          delete saved[action.entry.task.pair_id];
        }
      }
      return {
        ...state,
        phase: "ready",
        current: action.entry.task,
        pending: null,
        saved,
        history,
        toast: null,
      };
    }

    case "toast-cleared":
      return { ...state, toast: null };

    case "status-loaded":
      return {
        ...state,
        progress: action.progress,
        agreement: action.agreement,
        staleStatus: false,
      };

    case "status-failed":
      return { ...state, staleStatus: true };
  }
}
