/**
 * Browser entry point.
 *
 * Configuration is the API base URL plus the annotator id, read from the
 * query string. Without both, a small form collects them and reloads the
 * page with the parameters set.
 */

import { createApp } from "./main.js";

function renderConfigForm(root: HTMLElement): void {
  root.textContent = "";
  const form = document.createElement("form");
  form.className = "config-form";

  const apiLabel = document.createElement("label");
  apiLabel.textContent = "API base URL ";
  const apiInput = document.createElement("input");
  apiInput.name = "api";
  apiInput.value = window.location.origin;
  apiLabel.append(apiInput);

  const nameLabel = document.createElement("label");
  nameLabel.textContent = "Annotator id ";
  const nameInput = document.createElement("input");
  nameInput.name = "annotator";
  nameInput.required = true;
  nameLabel.append(nameInput);

  const start = document.createElement("button");
  start.type = "submit";
  start.textContent = "Start annotating";

  form.append(apiLabel, nameLabel, start);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const params = new URLSearchParams({
      api: apiInput.value.trim(),
      annotator: nameInput.value.trim(),
    });
    window.location.search = params.toString();
  });
  root.append(form);
}

export function boot(root: HTMLElement): void {
  const params = new URLSearchParams(window.location.search);
  const api = params.get("api")?.trim() ?? "";
  const annotator = params.get("annotator")?.trim() ?? "";
  if (api === "" || annotator === "") {
    renderConfigForm(root);
    return;
  }
  createApp(root, { apiBase: api, annotator });
}

const rootElement = document.getElementById("app");
if (rootElement !== null) {
  boot(rootElement);
}
