/** Typed client for the concord HTTP/JSON API.
 *
 * Every number shown in the UI comes from these calls; the browser never
 * computes corpus statistics itself.
 */

export interface CorpusInfo {
  name: string;
  tokens: number;
  positional_attrs: string[];
  structural_attrs: string[];
}

export interface KwicRow {
  text_id: string;
  left: string[];
  focus: string[];
  right: string[];
}

export interface QueryRequest {
  q: string;
  context?: number;
  page_size?: number;
  cursor?: string;
  max_hits?: number;
  subcorpus?: string;
}

export interface QueryResponse {
  matches_total: number;
  truncated: boolean;
  offset: number;
  lines: KwicRow[];
  next_cursor: string | null;
}

export interface FrequencyResponse {
  attribute: string;
  scope_size: number;
  rows: [string, number][];
}

export interface KeywordRow {
  value: string;
  target_count: number;
  reference_count: number;
  target_size: number;
  reference_size: number;
  g2: number;
  direction: "over" | "under";
}

export interface SubcorpusInfo {
  name: string;
  size: number;
  predicate: string;
}

export interface DistributionResponse {
  categories: Record<string, number>;
  total: number;
}

interface ErrorBody {
  code?: string;
  message?: string;
  position?: number;
}

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly position: number | undefined;

  constructor(status: number, body: ErrorBody) {
    super(body.message ?? `request failed with status ${status}`);
    this.name = "ApiError";
    this.status = status;
    this.code = body.code ?? "error";
    this.position = body.position;
  }
}

async function parseError(response: Response): Promise<never> {
  let body: ErrorBody = {};
  try {
    body = (await response.json()) as ErrorBody;
  } catch {
    // non-JSON error body; keep the status-derived message
  }
  throw new ApiError(response.status, body);
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    if (!response.ok) {
      await parseError(response);
    }
    if (response.status === 204) {
      return undefined as T;
    }
    return (await response.json()) as T;
  }

  listCorpora(): Promise<CorpusInfo[]> {
    return this.request<CorpusInfo[]>("/corpora");
  }

  query(corpus: string, req: QueryRequest, signal?: AbortSignal): Promise<QueryResponse> {
    return this.request<QueryResponse>(`/corpora/${encodeURIComponent(corpus)}/query`, {
      method: "POST",
      body: JSON.stringify(req),
      signal: signal ?? null,
    });
  }

  frequency(
    corpus: string,
    attr: string,
    top?: number,
    subcorpus?: string,
  ): Promise<FrequencyResponse> {
    const params = new URLSearchParams({ attr });
    if (top !== undefined) params.set("top", String(top));
    if (subcorpus) params.set("subcorpus", subcorpus);
    return this.request<FrequencyResponse>(
      `/corpora/${encodeURIComponent(corpus)}/frequency?${params}`,
    );
  }

  keywords(
    corpus: string,
    req: {
      target_subcorpus?: string | null;
      reference_subcorpus?: string | null;
      attr?: string;
      min_count?: number;
    },
  ): Promise<{ rows: KeywordRow[] }> {
    return this.request<{ rows: KeywordRow[] }>(
      `/corpora/${encodeURIComponent(corpus)}/keywords`,
      { method: "POST", body: JSON.stringify(req) },
    );
  }

  distribution(
    corpus: string,
    req: { q: string; key: string; subcorpus?: string },
  ): Promise<DistributionResponse> {
    return this.request<DistributionResponse>(
      `/corpora/${encodeURIComponent(corpus)}/distribution`,
      { method: "POST", body: JSON.stringify(req) },
    );
  }

  listSubcorpora(corpus: string): Promise<SubcorpusInfo[]> {
    return this.request<SubcorpusInfo[]>(`/corpora/${encodeURIComponent(corpus)}/subcorpora`);
  }

  createSubcorpus(
    corpus: string,
    req: { name: string; where?: Record<string, string>; text_ids?: string[] },
  ): Promise<SubcorpusInfo> {
    return this.request<SubcorpusInfo>(`/corpora/${encodeURIComponent(corpus)}/subcorpora`, {
      method: "POST",
      body: JSON.stringify(req),
    });
  }

  deleteSubcorpus(corpus: string, name: string): Promise<void> {
    return this.request<void>(
      `/corpora/${encodeURIComponent(corpus)}/subcorpora/${encodeURIComponent(name)}`,
      { method: "DELETE" },
    );
  }
}
