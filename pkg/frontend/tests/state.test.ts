import { describe, expect, it } from "vitest";

import type { SessionView } from "../src/api.js";
import {
  DEFAULT_BASE_URL,
  formatFraction,
  formatPercent,
  stateKey,
  Store,
} from "../src/state.js";

function view(partial: Partial<SessionView> = {}): SessionView {
  return {
    session_id: "s1",
    my_pool: 7,
    opp_pool: 4,
    to_move: "me",
    terminal: false,
    winner: null,
    created: 0,
    updated: 0,
    advice: {
      mover: "me",
      region: "weeds",
      level: 1,
      recommended_bid: 2,
      win_prob: { num: 5, den: 14, approx: 0.3571428571 },
      whatif: [],
    },
    history: [],
    ...partial,
  };
}

describe("formatting helpers", () => {
  it("renders proper fractions with a slash", () => {
    expect(formatFraction({ num: 5, den: 14, approx: 0.3571428571 })).toBe("5/14");
  });

  it("renders integers without a denominator", () => {
    expect(formatFraction({ num: 1, den: 1, approx: 1.0 })).toBe("1");
    expect(formatFraction({ num: 0, den: 1, approx: 0.0 })).toBe("0");
  });

  it("renders percentages to one decimal", () => {
    expect(formatPercent({ num: 5, den: 14, approx: 0.3571428571 })).toBe("35.7%");
    expect(formatPercent({ num: 3, den: 4, approx: 0.75 })).toBe("75.0%");
  });

  it("keys states by pools and mover", () => {
    expect(stateKey(view())).toBe("7:4:me");
    expect(stateKey(view({ my_pool: 2, to_move: "opponent" }))).toBe("2:4:opponent");
  });
});

describe("Store request lifecycle", () => {
  it("starts on the setup screen with the default service URL", () => {
    const store = new Store();
    const state = store.getState();
    expect(state.phase).toBe("setup");
    expect(state.baseUrl).toBe(DEFAULT_BASE_URL);
    expect(state.session).toBeNull();
    expect(state.busy).toBe(false);
  });

  it("keeps the confirmed session untouched while a request is pending", () => {
    const store = new Store();
    store.confirmSession(view());
    store.beginRequest();
    const state = store.getState();
    expect(state.busy).toBe(true);
    expect(state.session).toEqual(view());
  });

  it("keeps the confirmed session when a request fails", () => {
    const store = new Store();
    store.confirmSession(view());
    store.beginRequest();
    store.failRequest("session is over");
    const state = store.getState();
    expect(state.busy).toBe(false);
    expect(state.error).toBe("session is over");
    expect(state.session).toEqual(view());
  });

  it("replaces the session wholesale on confirmation", () => {
    const store = new Store();
    store.confirmSession(view());
    const next = view({ my_pool: 2, to_move: "opponent" });
    store.confirmSession(next);
    expect(store.getState().session).toEqual(next);
    expect(store.getState().error).toBeNull();
  });

  it("seeds the slider at the recommended bid", () => {
    const store = new Store();
    store.confirmSession(view());
    expect(store.getState().whatIfBid).toBe(2);
  });

  it("clears the slider on a terminal position", () => {
    const store = new Store();
    store.confirmSession(view({
      my_pool: 1,
      terminal: true,
      winner: "me",
      advice: {
        mover: null,
        region: "terminal-win",
        level: null,
        recommended_bid: null,
        win_prob: { num: 1, den: 1, approx: 1.0 },
        whatif: [],
      },
    }));
    expect(store.getState().whatIfBid).toBeNull();
    expect(store.getState().whatIfValue).toBeNull();
  });

  it("notifies subscribers and honors unsubscribe", () => {
    const store = new Store();
    let seen = 0;
    const off = store.subscribe(() => { seen += 1; });
    store.beginRequest();
    expect(seen).toBe(1);
    off();
    store.failRequest("x");
    expect(seen).toBe(1);
  });

  it("reset returns to setup and clears everything but the URL", () => {
    const store = new Store();
    store.setBaseUrl("http://example:1");
    store.confirmSession(view());
    store.reset();
    const state = store.getState();
    expect(state.phase).toBe("setup");
    expect(state.session).toBeNull();
    expect(state.baseUrl).toBe("http://example:1");
  });
});

describe("Store what-if cache", () => {
  const p27 = { num: 2, den: 7, approx: 0.2857142857 };
  const p514 = { num: 5, den: 14, approx: 0.3571428571 };

  it("shows no value for an unpriced bid", () => {
    const store = new Store();
    store.confirmSession(view());
    store.setWhatIfBid(3);
    expect(store.getState().whatIfBid).toBe(3);
    expect(store.getState().whatIfValue).toBeNull();
  });

  it("shows a value once the probe for the current state and bid lands", () => {
    const store = new Store();
    store.confirmSession(view());
    store.setWhatIfBid(3);
    store.cacheWhatIf("7:4:me", 3, p27);
    expect(store.getState().whatIfValue).toEqual(p27);
  });

  it("returns to the cached value when the slider revisits a bid", () => {
    const store = new Store();
    store.confirmSession(view());
    store.cacheWhatIf("7:4:me", 3, p27);
    store.cacheWhatIf("7:4:me", 2, p514);
    store.setWhatIfBid(3);
    expect(store.getState().whatIfValue).toEqual(p27);
    store.setWhatIfBid(2);
    expect(store.getState().whatIfValue).toEqual(p514);
    expect(store.cachedWhatIf(view(), 1)).toBeUndefined();
  });

  it("a stale probe response never touches the rendered value", () => {
    const store = new Store();
    store.confirmSession(view());
    store.setWhatIfBid(3);
    // response for a position the game has already left
    store.cacheWhatIf("9:9:me", 3, p514);
    expect(store.getState().whatIfValue).toBeNull();
    // response for the right position but a different bid
    store.cacheWhatIf("7:4:me", 5, p514);
    expect(store.getState().whatIfValue).toBeNull();
    // the exact probe finally lands
    store.cacheWhatIf("7:4:me", 3, p27);
    expect(store.getState().whatIfValue).toEqual(p27);
  });

  it("confirmSession picks up an already-cached value for the recommendation", () => {
    const store = new Store();
    store.cacheWhatIf("7:4:me", 2, p514);
    store.confirmSession(view());
    expect(store.getState().whatIfBid).toBe(2);
    expect(store.getState().whatIfValue).toEqual(p514);
  });

  it("ignores slider moves when there is no live session", () => {
    const store = new Store();
    store.setWhatIfBid(3);
    expect(store.getState().whatIfBid).toBeNull();
  });

  it("reset clears the cache", () => {
    const store = new Store();
    store.confirmSession(view());
    store.cacheWhatIf("7:4:me", 3, p27);
    store.reset();
    store.confirmSession(view());
    store.setWhatIfBid(3);
    expect(store.getState().whatIfValue).toBeNull();
  });
});
