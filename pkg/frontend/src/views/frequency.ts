/** Frequency list view: attribute picker, optional subcorpus, ranked table. */

import { ApiError } from "../api";
import type { UiState } from "../state";
import { option, subcorpusPicker } from "./pickers";

export function renderFrequencyView(container: HTMLElement, state: UiState): void {
  container.replaceChildren();

  const form = document.createElement("form");
  form.className = "frequency-form";
  const attrSelect = document.createElement("select");
  attrSelect.name = "attr";
  for (const attr of ["word", "pos", "lemma"]) {
    const option = document.createElement("option");
    option.value = attr;
    option.textContent = attr;
    attrSelect.append(option);
  }
  const topInput = document.createElement("input");
  topInput.type = "number";
  topInput.name = "top";
  topInput.value = "50";
  const scopeSelect = subcorpusPicker("subcorpus");
  const submit = document.createElement("button");
  submit.type = "submit";
  submit.textContent = "Compute";
  form.append(attrSelect, topInput, scopeSelect, submit);

  const feedback = document.createElement("div");
  feedback.className = "frequency-feedback";
  const meta = document.createElement("p");
  meta.className = "scope-size";
  const table = document.createElement("table");
  table.className = "frequency-table";
  const tbody = document.createElement("tbody");
  table.append(tbody);
  container.append(form, feedback, meta, table);

  async function loadScopes(): Promise<void> {
    if (!state.selectedCorpus) return;
    const subs = await state.client.listSubcorpora(state.selectedCorpus);
    scopeSelect.replaceChildren(option("(whole corpus)", ""));
    for (const sub of subs) {
      scopeSelect.append(option(`${sub.name} (${sub.size})`, sub.name));
    }
  }

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void (async () => {
      feedback.replaceChildren();
      if (!state.selectedCorpus) return;
      try {
        const top = Number(topInput.value) || undefined;
        const response = await state.client.frequency(
          state.selectedCorpus,
          attrSelect.value,
          top,
          scopeSelect.value || undefined,
        );
        meta.textContent = `${response.attribute} over ${response.scope_size} tokens`;
        tbody.replaceChildren();
        for (const [value, count] of response.rows) {
          const row = document.createElement("tr");
          const valueCell = document.createElement("td");
          valueCell.textContent = value;
          const countCell = document.createElement("td");
          countCell.textContent = String(count);
          row.append(valueCell, countCell);
          tbody.append(row);
        }
      } catch (error) {
        const banner = document.createElement("p");
        banner.className = "error banner";
        banner.textContent = error instanceof ApiError ? error.message : String(error);
        feedback.append(banner);
      }
    })();
  });

  void loadScopes();
}
