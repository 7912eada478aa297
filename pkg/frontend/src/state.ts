/**
 * Application state: a single store holding the last service-confirmed
 * session view.
 *
 * The UI renders from confirmed state only.  A pending request flips `busy`
 * (disabling inputs) but changes nothing else until the service's response
 * replaces the whole session view; there are no optimistic updates anywhere.
 * What-if probes are cached per confirmed game state, so a value is shown
 * for the slider only once the service has priced that exact (state, bid).
 */

import type { FractionJson, SessionView } from "./api.js";

export type Phase = "setup" | "playing";

export interface AppState {
  phase: Phase;
  baseUrl: string;
  session: SessionView | null;
  busy: boolean;
  error: string | null;
  /** slider position, a candidate bid for the current mover */
  whatIfBid: number | null;
  /** service-confirmed value at the slider position, if cached */
  whatIfValue: FractionJson | null;
}

export type Listener = (state: AppState) => void;

export const DEFAULT_BASE_URL = "http://127.0.0.1:8000";

/** Identity of a game position; what-if caching is keyed by it. */
export function stateKey(view: SessionView): string {
  return `${view.my_pool}:${view.opp_pool}:${view.to_move}`;
}

export function formatFraction(f: FractionJson): string {
  return f.den === 1 ? `${f.num}` : `${f.num}/${f.den}`;
}

export function formatPercent(f: FractionJson): string {
  return `${((100 * f.num) / f.den).toFixed(1)}%`;
}

export class Store {
  private state: AppState = {
    phase: "setup",
    baseUrl: DEFAULT_BASE_URL,
    session: null,
    busy: false,
    error: null,
    whatIfBid: null,
    whatIfValue: null,
  };

  private readonly whatIfCache = new Map<string, FractionJson>();
  private readonly listeners: Listener[] = [];

  getState(): AppState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      const index = this.listeners.indexOf(listener);
      if (index >= 0) this.listeners.splice(index, 1);
    };
  }

  private emit(next: Partial<AppState>): void {
    this.state = { ...this.state, ...next };
    for (const listener of [...this.listeners]) listener(this.state);
  }

  setBaseUrl(baseUrl: string): void {
    this.emit({ baseUrl });
  }

  /** A mutation request went out; keep rendering the last confirmed state. */
  beginRequest(): void {
    this.emit({ busy: true, error: null });
  }

  failRequest(message: string): void {
    this.emit({ busy: false, error: message });
  }

  /** Replace the session with what the service confirmed. */
  confirmSession(view: SessionView): void {
    const bid = view.terminal ? null : view.advice.recommended_bid;
    this.emit({
      phase: "playing",
      session: view,
      busy: false,
      error: null,
      whatIfBid: bid,
      whatIfValue: bid === null ? null : this.cachedWhatIf(view, bid) ?? null,
    });
  }

  /** Move the slider; show a value only if this exact probe is confirmed. */
  setWhatIfBid(bid: number): void {
    const view = this.state.session;
    if (view === null || view.terminal) return;
    this.emit({ whatIfBid: bid, whatIfValue: this.cachedWhatIf(view, bid) ?? null });
  }

  cachedWhatIf(view: SessionView, bid: number): FractionJson | undefined {
    return this.whatIfCache.get(`${stateKey(view)}#${bid}`);
  }

  /**
   * Record a service-priced probe.  `key` names the state the probe was
   * issued from; a response that arrives after the game moved on still
   * lands in the cache but never touches the rendered value.
   */
  cacheWhatIf(key: string, bid: number, p: FractionJson): void {
    this.whatIfCache.set(`${key}#${bid}`, p);
    const view = this.state.session;
    if (view !== null && stateKey(view) === key && this.state.whatIfBid === bid) {
      this.emit({ whatIfValue: p });
    }
  }

  /** Back to the setup screen; the what-if cache dies with the session. */
  reset(): void {
    this.whatIfCache.clear();
    this.emit({
      phase: "setup",
      session: null,
      busy: false,
      error: null,
      whatIfBid: null,
      whatIfValue: null,
    });
  }
}
