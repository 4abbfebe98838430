/** User settings: context size and page size, persisted per browser. */

export interface UserSettings {
  contextSize: number;
  pageSize: number;
}

export const DEFAULT_SETTINGS: UserSettings = { contextSize: 8, pageSize: 50 };

export const SETTINGS_KEY = "concord.settings";

export interface SettingsErrors {
  contextSize?: string;
  pageSize?: string;
}

/** Validate raw form values; empty result means acceptable. */
export function validateSettings(values: { contextSize: number; pageSize: number }): SettingsErrors {
  const errors: SettingsErrors = {};
  if (!Number.isInteger(values.contextSize) || values.contextSize < 0 || values.contextSize > 100) {
    errors.contextSize = "context size must be an integer between 0 and 100";
  }
  if (!Number.isInteger(values.pageSize) || values.pageSize < 1 || values.pageSize > 1000) {
    errors.pageSize = "page size must be an integer between 1 and 1000";
  }
  return errors;
}

export function loadSettings(storage: Storage = localStorage): UserSettings {
  try {
    const raw = storage.getItem(SETTINGS_KEY);
    if (!raw) return { ...DEFAULT_SETTINGS };
    const parsed = JSON.parse(raw) as Partial<UserSettings>;
    const candidate = {
      contextSize: parsed.contextSize ?? DEFAULT_SETTINGS.contextSize,
      pageSize: parsed.pageSize ?? DEFAULT_SETTINGS.pageSize,
    };
    if (Object.keys(validateSettings(candidate)).length > 0) {
      return { ...DEFAULT_SETTINGS };
    }
    return candidate;
  } catch {
    return { ...DEFAULT_SETTINGS };
  }
}

export function saveSettings(settings: UserSettings, storage: Storage = localStorage): void {
  storage.setItem(SETTINGS_KEY, JSON.stringify(settings));
}
