/**
 * Typed client for the guesswho advisor REST API.
 *
 * Probabilities cross the wire as exact fractions ({num, den, approx});
 * this client never converts them, so the UI can render exactly what the
 * service computed.
 */

export interface FractionJson {
  num: number;
  den: number;
  approx: number;
}

export type Mover = "me" | "opponent";
export type Answer = "yes" | "no";

export type RegionName = "weeds" | "upper-hand" | "terminal-win" | "terminal-loss";

export interface WhatIfPoint {
  bid: number;
  p: FractionJson;
}

export interface Advice {
  mover: Mover | null;
  region: RegionName;
  level: number | null;
  recommended_bid: number | null;
  win_prob: FractionJson;
  whatif: WhatIfPoint[];
}

export interface HistoryState {
  my_pool: number;
  opp_pool: number;
  to_move: Mover;
  terminal: boolean;
}

export interface HistoryEntry {
  actor: Mover;
  bid: number | null;
  answer: Answer | null;
  new_pool: number;
  state_after: HistoryState;
}

export interface SessionView {
  session_id: string;
  my_pool: number;
  opp_pool: number;
  to_move: Mover;
  terminal: boolean;
  winner: Mover | null;
  created: number;
  updated: number;
  advice: Advice;
  history: HistoryEntry[];
}

export interface WhatIfResponse {
  session_id: string;
  mover: Mover;
  bid: number;
  p: FractionJson;
}

export interface Health {
  status: string;
  version: string;
  backend: string;
  sessions: number;
}

/** A move is either the mover's (bid, answer) or the observed new pool. */
export type MoveRequest =
  | { actor: Mover; bid: number; answer: Answer }
  | { actor: Mover; new_pool: number };

/** The slice of the service the UI talks to. */
export interface AdvisorApi {
  health(): Promise<Health>;
  createSession(myPool: number, oppPool: number, toMove?: Mover): Promise<SessionView>;
  getSession(sessionId: string): Promise<SessionView>;
  recordMove(sessionId: string, move: MoveRequest): Promise<SessionView>;
  whatIf(sessionId: string, bid: number): Promise<WhatIfResponse>;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class AdvisorClient implements AdvisorApi {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    // bind lazily so a late-polyfilled global fetch still works
    this.fetchImpl = fetchImpl ?? ((input, init) => globalThis.fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    } catch (cause) {
      throw new ApiError(0, `cannot reach ${this.baseUrl}: ${String(cause)}`);
    }
    if (!response.ok) {
      throw new ApiError(response.status, await extractDetail(response));
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  health(): Promise<Health> {
    return this.request<Health>("/api/health");
  }

  createSession(myPool: number, oppPool: number, toMove: Mover = "me"): Promise<SessionView> {
    return this.post<SessionView>("/api/session", {
      my_pool: myPool,
      opp_pool: oppPool,
      to_move: toMove,
    });
  }

  getSession(sessionId: string): Promise<SessionView> {
    return this.request<SessionView>(`/api/session/${sessionId}`);
  }

  recordMove(sessionId: string, move: MoveRequest): Promise<SessionView> {
    return this.post<SessionView>(`/api/session/${sessionId}/move`, move);
  }

  whatIf(sessionId: string, bid: number): Promise<WhatIfResponse> {
    return this.request<WhatIfResponse>(`/api/session/${sessionId}/whatif?bid=${bid}`);
  }
}

async function extractDetail(response: Response): Promise<string> {
  try {
    const body: unknown = await response.json();
    if (body && typeof body === "object" && "detail" in body) {
      const detail = (body as { detail: unknown }).detail;
      return typeof detail === "string" ? detail : JSON.stringify(detail);
    }
  } catch {
    // fall through to the status line
  }
  return `${response.status} ${response.statusText}`;
}
