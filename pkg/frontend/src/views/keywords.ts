/** Keyword view: target/reference subcorpus pickers, G2-ranked table. */

import { ApiError } from "../api";
import type { UiState } from "../state";
import { option, subcorpusPicker } from "./pickers";

export function renderKeywordsView(container: HTMLElement, state: UiState): void {
  container.replaceChildren();

  const form = document.createElement("form");
  form.className = "keywords-form";
  const targetSelect = subcorpusPicker("target");
  const referenceSelect = subcorpusPicker("reference");
  const minCount = document.createElement("input");
  minCount.type = "number";
  minCount.name = "minCount";
  minCount.value = "3";
  const submit = document.createElement("button");
  submit.type = "submit";
  submit.textContent = "Compute";
  const targetLabel = document.createElement("label");
  targetLabel.textContent = "target ";
  targetLabel.append(targetSelect);
  const referenceLabel = document.createElement("label");
  referenceLabel.textContent = "reference ";
  referenceLabel.append(referenceSelect);
  form.append(targetLabel, referenceLabel, minCount, submit);

  const feedback = document.createElement("div");
  feedback.className = "keywords-feedback";
  const table = document.createElement("table");
  table.className = "keywords-table";
  const head = document.createElement("thead");
  head.innerHTML =
    "<tr><th>value</th><th>target</th><th>reference</th><th>G2</th><th>direction</th></tr>";
  const tbody = document.createElement("tbody");
  table.append(head, tbody);
  container.append(form, feedback, table);

  async function loadScopes(): Promise<void> {
    if (!state.selectedCorpus) return;
    const subs = await state.client.listSubcorpora(state.selectedCorpus);
    for (const select of [targetSelect, referenceSelect]) {
      select.replaceChildren(option("(whole corpus)", ""));
      for (const sub of subs) {
        select.append(option(`${sub.name} (${sub.size})`, sub.name));
      }
    }
  }

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void (async () => {
      feedback.replaceChildren();
      if (!state.selectedCorpus) return;
      try {
        const response = await state.client.keywords(state.selectedCorpus, {
          target_subcorpus: targetSelect.value || null,
          reference_subcorpus: referenceSelect.value || null,
          min_count: Number(minCount.value) || 3,
        });
        tbody.replaceChildren();
        for (const row of response.rows) {
          const tr = document.createElement("tr");
          tr.className = "keyword-row";
          for (const text of [
            row.value,
            String(row.target_count),
            String(row.reference_count),
            row.g2.toFixed(4),
            row.direction,
          ]) {
            const td = document.createElement("td");
            td.textContent = text;
            tr.append(td);
          }
          tbody.append(tr);
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
