/** Standard query window: query form, KWIC result table, paging. */

import { ApiError } from "../api";
import type { UiState } from "../state";

let inFlight: AbortController | null = null;

function kwicRow(line: { text_id: string; left: string[]; focus: string[]; right: string[] }): HTMLTableRowElement {
  const row = document.createElement("tr");
  row.className = "kwic-row";

  const idCell = document.createElement("td");
  idCell.className = "kwic-text-id";
  idCell.textContent = line.text_id;

  const leftCell = document.createElement("td");
  leftCell.className = "kwic-left";
  leftCell.textContent = line.left.join(" ");

  const focusCell = document.createElement("td");
  focusCell.className = "kwic-focus";
  const mark = document.createElement("mark");
  mark.textContent = line.focus.join(" ");
  focusCell.append(mark);

  const rightCell = document.createElement("td");
  rightCell.className = "kwic-right";
  rightCell.textContent = line.right.join(" ");

  row.append(idCell, leftCell, focusCell, rightCell);
  return row;
}

function renderSyntaxError(container: HTMLElement, query: string, error: ApiError): void {
  const box = document.createElement("div");
  box.className = "error inline-error";
  const message = document.createElement("p");
  message.textContent = error.message;
  box.append(message);
  if (error.position !== undefined) {
    const snippet = document.createElement("pre");
    snippet.className = "syntax-pointer";
    snippet.textContent = query + "\n" + " ".repeat(error.position) + "^";
    box.append(snippet);
  }
  container.append(box);
}

function renderBanner(container: HTMLElement, text: string, onRetry: () => void): void {
  const banner = document.createElement("div");
  banner.className = "error banner";
  const label = document.createElement("span");
  label.textContent = text;
  const retry = document.createElement("button");
  retry.type = "button";
  retry.className = "retry";
  retry.textContent = "retry";
  retry.addEventListener("click", onRetry);
  banner.append(label, retry);
  container.append(banner);
}

export function renderQueryView(container: HTMLElement, state: UiState): void {
  container.replaceChildren();

  const form = document.createElement("form");
  form.className = "query-form";
  const input = document.createElement("input");
  input.type = "text";
  input.name = "q";
  input.placeholder = '"isso" or [pos="NOM"] [pos="ADJ"] within s';
  input.value = state.queryText;
  const submit = document.createElement("button");
  submit.type = "submit";
  submit.textContent = "Search";
  form.append(input, submit);

  const feedback = document.createElement("div");
  feedback.className = "query-feedback";
  const summary = document.createElement("p");
  summary.className = "result-summary";
  const table = document.createElement("table");
  table.className = "kwic-table";
  const tbody = document.createElement("tbody");
  table.append(tbody);
  const more = document.createElement("button");
  more.type = "button";
  more.className = "load-more";
  more.textContent = "More";
  more.hidden = true;

  container.append(form, feedback, summary, table, more);

  const cheatsheet = document.createElement("details");
  cheatsheet.className = "cheatsheet";
  const title = document.createElement("summary");
  title.textContent = "query syntax";
  const body = document.createElement("pre");
  body.textContent = [
    '"word"                literal word (regex over the whole value)',
    '[pos="NOM"]           attribute constraint; also lemma=, word=, !=',
    '[a="x" & !(b="y")]    boolean constraints',
    '"x"%c                 case-insensitive atom',
    '[] ? * + {n,m}        any token; quantifiers (max 64 in braces)',
    '... within s          keep the match inside one sentence',
  ].join("\n");
  cheatsheet.append(title, body);
  container.append(cheatsheet);

  function showResults(): void {
    const results = state.results;
    tbody.replaceChildren();
    if (!results) {
      summary.textContent = "";
      more.hidden = true;
      return;
    }
    for (const line of results.lines) {
      tbody.append(kwicRow(line));
    }
    summary.textContent =
      `${results.matchesTotal} match${results.matchesTotal === 1 ? "" : "es"}` +
      (results.truncated ? " (truncated)" : "");
    more.hidden = results.nextCursor === null;
  }

  async function runQuery(cursor: string | null): Promise<void> {
    const corpus = state.selectedCorpus;
    if (!corpus) {
      feedback.replaceChildren();
      renderBanner(feedback, "no corpus selected", () => void runQuery(null));
      return;
    }
    const q = state.queryText;
    // Supersede any in-flight request: one query at a time per tab.
    inFlight?.abort();
    const controller = new AbortController();
    inFlight = controller;
    try {
      const response = await state.client.query(
        corpus,
        {
          q,
          context: state.settings.contextSize,
          page_size: state.settings.pageSize,
          ...(cursor ? { cursor } : {}),
        },
        controller.signal,
      );
      if (controller !== inFlight) return; // superseded while awaiting
      feedback.replaceChildren();
      if (cursor && state.results) {
        state.results.lines.push(...response.lines);
        state.results.nextCursor = response.next_cursor;
        state.results.matchesTotal = response.matches_total;
        state.results.truncated = response.truncated;
      } else {
        state.results = {
          query: q,
          lines: [...response.lines],
          matchesTotal: response.matches_total,
          truncated: response.truncated,
          nextCursor: response.next_cursor,
        };
      }
      showResults();
    } catch (error) {
      if (controller.signal.aborted) return;
      feedback.replaceChildren();
      if (error instanceof ApiError && error.status === 400) {
        renderSyntaxError(feedback, q, error);
      } else if (error instanceof ApiError) {
        renderBanner(feedback, `${error.status}: ${error.message}`, () => void runQuery(cursor));
      } else {
        renderBanner(feedback, String(error), () => void runQuery(cursor));
      }
    } finally {
      if (inFlight === controller) inFlight = null;
    }
  }

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    state.queryText = input.value;
    feedback.replaceChildren();
    if (!input.value.trim()) {
      const note = document.createElement("p");
      note.className = "error inline-error empty-query";
      note.textContent = "enter a query first";
      feedback.append(note);
      return; // no API call for an empty query
    }
    state.results = null;
    showResults();
    void runQuery(null);
  });

  more.addEventListener("click", () => {
    if (state.results?.nextCursor) {
      void runQuery(state.results.nextCursor);
    }
  });

  showResults();
}
