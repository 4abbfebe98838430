/** Single-page concordancer: tab navigation over one shared state. */

import { ApiClient } from "./api";
import { loadSettings } from "./settings";
import { createState, type UiState, type ViewName } from "./state";
import { option } from "./views/pickers";
import { renderFrequencyView } from "./views/frequency";
import { renderKeywordsView } from "./views/keywords";
import { renderQueryView } from "./views/query";
import { renderSettingsView } from "./views/settings";
import { renderSubcorporaView } from "./views/subcorpora";

const VIEWS: Record<ViewName, (container: HTMLElement, state: UiState) => void> = {
  query: renderQueryView,
  frequency: renderFrequencyView,
  keywords: renderKeywordsView,
  subcorpora: renderSubcorporaView,
  settings: renderSettingsView,
};

export function mountApp(root: HTMLElement, baseUrl: string): UiState {
  const state = createState(new ApiClient(baseUrl), loadSettings());

  const header = document.createElement("header");
  const title = document.createElement("h1");
  title.textContent = "concord";
  const corpusSelect = document.createElement("select");
  corpusSelect.className = "corpus-select";
  header.append(title, corpusSelect);

  const nav = document.createElement("nav");
  const main = document.createElement("main");
  main.className = "view-container";
  for (const name of Object.keys(VIEWS) as ViewName[]) {
    const button = document.createElement("button");
    button.type = "button";
    button.dataset.view = name;
    button.textContent = name;
    button.addEventListener("click", () => {
      state.activeView = name;
      for (const sibling of nav.querySelectorAll("button")) {
        sibling.classList.toggle("active", sibling === button);
      }
      VIEWS[name](main, state);
    });
    nav.append(button);
  }

  corpusSelect.addEventListener("change", () => {
    state.selectedCorpus = corpusSelect.value || null;
    state.results = null;
    VIEWS[state.activeView](main, state);
  });

  root.replaceChildren(header, nav, main);

  void (async () => {
    state.corpora = await state.client.listCorpora();
    corpusSelect.replaceChildren();
    for (const corpus of state.corpora) {
      corpusSelect.append(option(`${corpus.name} (${corpus.tokens} tokens)`, corpus.name));
    }
    const first = state.corpora[0];
    state.selectedCorpus = first ? first.name : null;
    VIEWS[state.activeView](main, state);
  })();

  return state;
}

declare global {
  interface Window {
    CONCORD_API_URL?: string;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const base = window.CONCORD_API_URL ?? "http://127.0.0.1:8787";
  mountApp(document.getElementById("app") as HTMLElement, base);
}
