/**
 * Keyboard shortcuts for the labeling loop.
 *
 * y/i/n submit a label, s skips, u undoes the last submission, r retries
 * after a failed load. Shortcuts are inert while the focus is in a text
 * field and when a modifier is held, so typing an annotator name never
 * fires a label.
 */

import type { Label } from "./api.js";

export interface KeyboardDeps {
  onLabel: (label: Label) => void;
  onSkip: () => void;
  onUndo: () => void;
  onRetry: () => void;
}

const LABEL_KEYS: Record<string, Label> = {
  y: "yes",
  i: "inflected",
  n: "no",
};

function isTyping(target: EventTarget | null): boolean {
  if (!(target instanceof HTMLElement)) {
    return false;
  }
  if (target instanceof HTMLInputElement || target instanceof HTMLTextAreaElement) {
    return true;
  }
  return target.isContentEditable;
}

export function createKeyboardHandler(deps: KeyboardDeps): (e: KeyboardEvent) => void {
  return (e: KeyboardEvent) => {
    if (e.ctrlKey || e.metaKey || e.altKey) {
      return;
    }
    if (isTyping(e.target)) {
      return;
    }
    const key = e.key.toLowerCase();
    const label = LABEL_KEYS[key];
    if (label !== undefined) {
      e.preventDefault();
      deps.onLabel(label);
      return;
    }
    if (key === "s") {
      e.preventDefault();
      deps.onSkip();
      return;
    }
    if (key === "u") {
      e.preventDefault();
      deps.onUndo();
      return;
    }
    if (key === "r") {
      e.preventDefault();
      deps.onRetry();
    }
  };
}
