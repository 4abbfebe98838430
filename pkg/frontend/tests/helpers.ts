import { inject } from "vitest";

import { ApiClient } from "../src/api";
import { DEFAULT_SETTINGS } from "../src/settings";
import { createState, type UiState } from "../src/state";

export function serviceClient(): ApiClient {
  return new ApiClient(inject("serviceUrl"));
}

/** UiState wired to the live fixture service with MINI pre-selected. */
export function fixtureState(): UiState {
  const state = createState(serviceClient(), { ...DEFAULT_SETTINGS });
  state.selectedCorpus = "MINI";
  return state;
}

export function mountContainer(): HTMLElement {
  const container = document.createElement("div");
  document.body.append(container);
  return container;
}

export async function waitFor<T>(
  probe: () => T | false | null | undefined,
  timeoutMs = 15_000,
): Promise<T> {
  const started = Date.now();
  for (;;) {
    const value = probe();
    if (value) return value;
    if (Date.now() - started > timeoutMs) {
      throw new Error("timed out waiting for condition");
    }
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
}

export function submit(form: HTMLFormElement): void {
  form.dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
}
