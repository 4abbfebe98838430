import { afterEach, describe, expect, it } from "vitest";

import { DEFAULT_SETTINGS, loadSettings, SETTINGS_KEY } from "../src/settings";
import { renderSettingsView } from "../src/views/settings";
import { fixtureState, mountContainer, submit } from "./helpers";

afterEach(() => {
  document.body.replaceChildren();
  localStorage.clear();
});

function fill(container: HTMLElement, context: string, page: string): void {
  const contextInput = container.querySelector<HTMLInputElement>('input[name="contextSize"]');
  const pageInput = container.querySelector<HTMLInputElement>('input[name="pageSize"]');
  contextInput!.value = context;
  pageInput!.value = page;
  submit(container.querySelector("form.settings-form") as HTMLFormElement);
}

describe("settings view", () => {
  it("persists valid settings to localStorage", () => {
    const state = fixtureState();
    const container = mountContainer();
    renderSettingsView(container, state);
    fill(container, "4", "25");
    expect(state.settings).toEqual({ contextSize: 4, pageSize: 25 });
    expect(loadSettings()).toEqual({ contextSize: 4, pageSize: 25 });
    expect(container.querySelector(".saved-note")).not.toBeNull();
  });

  it("rejects out-of-range values inline and keeps the old settings", () => {
    const state = fixtureState();
    const container = mountContainer();
    renderSettingsView(container, state);
    fill(container, "-1", "25");
    expect(container.querySelector(".inline-error")?.textContent).toContain("context size");
    expect(state.settings).toEqual(DEFAULT_SETTINGS);
    expect(localStorage.getItem(SETTINGS_KEY)).toBeNull();
  });

  it("restores persisted settings on reload", () => {
    localStorage.setItem(SETTINGS_KEY, JSON.stringify({ contextSize: 3, pageSize: 10 }));
    expect(loadSettings()).toEqual({ contextSize: 3, pageSize: 10 });
  });

  it("falls back to defaults on corrupt storage", () => {
    localStorage.setItem(SETTINGS_KEY, "{not json");
    expect(loadSettings()).toEqual(DEFAULT_SETTINGS);
    localStorage.setItem(SETTINGS_KEY, JSON.stringify({ contextSize: -5, pageSize: 10 }));
    expect(loadSettings()).toEqual(DEFAULT_SETTINGS);
  });
});
