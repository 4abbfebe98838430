/** Shared UI state: one object the views read and update. */

import type { ApiClient, CorpusInfo, KwicRow } from "./api";
import type { UserSettings } from "./settings";

export type ViewName = "query" | "frequency" | "keywords" | "subcorpora" | "settings";

/** Result set accumulated across pages; present only after a successful query. */
export interface ResultSet {
  query: string;
  lines: KwicRow[];
  matchesTotal: number;
  truncated: boolean;
  nextCursor: string | null;
}

export interface UiState {
  client: ApiClient;
  corpora: CorpusInfo[];
  selectedCorpus: string | null;
  queryText: string;
  settings: UserSettings;
  results: ResultSet | null;
  activeView: ViewName;
}

export function createState(client: ApiClient, settings: UserSettings): UiState {
  return {
    client,
    corpora: [],
    selectedCorpus: null,
    queryText: "",
    settings,
    results: null,
    activeView: "query",
  };
}
