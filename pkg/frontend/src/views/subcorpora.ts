/** Subcorpus management: metadata predicate form, listing, deletion. */

import { ApiError } from "../api";
import type { UiState } from "../state";

export function renderSubcorporaView(container: HTMLElement, state: UiState): void {
  container.replaceChildren();

  const form = document.createElement("form");
  form.className = "subcorpus-form";
  const nameInput = document.createElement("input");
  nameInput.name = "name";
  nameInput.placeholder = "name (e.g. cent17)";
  const keyInput = document.createElement("input");
  keyInput.name = "key";
  keyInput.placeholder = "metadata key (e.g. century)";
  const valueInput = document.createElement("input");
  valueInput.name = "value";
  valueInput.placeholder = "value (e.g. 17)";
  const submit = document.createElement("button");
  submit.type = "submit";
  submit.textContent = "Create";
  form.append(nameInput, keyInput, valueInput, submit);

  const feedback = document.createElement("div");
  feedback.className = "subcorpus-feedback";
  const list = document.createElement("ul");
  list.className = "subcorpus-list";
  container.append(form, feedback, list);

  async function refresh(): Promise<void> {
    if (!state.selectedCorpus) return;
    const subs = await state.client.listSubcorpora(state.selectedCorpus);
    list.replaceChildren();
    for (const sub of subs) {
      const item = document.createElement("li");
      item.className = "subcorpus-item";
      const label = document.createElement("span");
      label.textContent = `${sub.name}: ${sub.size} tokens (${sub.predicate})`;
      const remove = document.createElement("button");
      remove.type = "button";
      remove.className = "delete";
      remove.textContent = "delete";
      remove.addEventListener("click", () => {
        void (async () => {
          if (!state.selectedCorpus) return;
          await state.client.deleteSubcorpus(state.selectedCorpus, sub.name);
          await refresh();
        })();
      });
      item.append(label, remove);
      list.append(item);
    }
  }

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void (async () => {
      feedback.replaceChildren();
      if (!state.selectedCorpus) return;
      if (!nameInput.value.trim() || !keyInput.value.trim()) {
        const note = document.createElement("p");
        note.className = "error inline-error";
        note.textContent = "name and metadata key are required";
        feedback.append(note);
        return;
      }
      try {
        await state.client.createSubcorpus(state.selectedCorpus, {
          name: nameInput.value.trim(),
          where: { [keyInput.value.trim()]: valueInput.value },
        });
        await refresh();
      } catch (error) {
        const banner = document.createElement("p");
        banner.className = "error banner";
        banner.textContent = error instanceof ApiError ? error.message : String(error);
        feedback.append(banner);
      }
    })();
  });

  void refresh();
}
