/** User settings form: context size and page size, saved to localStorage. */

import { saveSettings, validateSettings } from "../settings";
import type { UiState } from "../state";

export function renderSettingsView(container: HTMLElement, state: UiState): void {
  container.replaceChildren();

  const form = document.createElement("form");
  form.className = "settings-form";

  const contextLabel = document.createElement("label");
  contextLabel.textContent = "Context size (tokens per side) ";
  const contextInput = document.createElement("input");
  contextInput.type = "number";
  contextInput.name = "contextSize";
  contextInput.value = String(state.settings.contextSize);
  contextLabel.append(contextInput);

  const pageLabel = document.createElement("label");
  pageLabel.textContent = "Page size ";
  const pageInput = document.createElement("input");
  pageInput.type = "number";
  pageInput.name = "pageSize";
  pageInput.value = String(state.settings.pageSize);
  pageLabel.append(pageInput);

  const apply = document.createElement("button");
  apply.type = "submit";
  apply.textContent = "Apply";

  const feedback = document.createElement("div");
  feedback.className = "settings-feedback";

  form.append(contextLabel, pageLabel, apply);
  container.append(form, feedback);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    feedback.replaceChildren();
    const candidate = {
      contextSize: Number(contextInput.value),
      pageSize: Number(pageInput.value),
    };
    const errors = validateSettings(candidate);
    if (Object.keys(errors).length > 0) {
      for (const message of Object.values(errors)) {
        const note = document.createElement("p");
        note.className = "error inline-error";
        note.textContent = message;
        feedback.append(note);
      }
      return;
    }
    state.settings = candidate;
    saveSettings(candidate);
    const note = document.createElement("p");
    note.className = "saved-note";
    note.textContent = "saved; applies to the next query";
    feedback.append(note);
  });
}
