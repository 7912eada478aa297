/**
 * DOM rendering and event wiring.  The whole screen is re-rendered from the
 * store on every state change; handlers only issue requests and feed the
 * confirmed responses back into the store.  Nothing in here mutates game
 * state locally.
 */

import { ApiError } from "./api.js";
import type { AdvisorApi, Answer, Mover, SessionView } from "./api.js";
import { formatFraction, formatPercent, stateKey, Store } from "./state.js";
import type { AppState } from "./state.js";

export type ClientFactory = (baseUrl: string) => AdvisorApi;

const REGION_LABEL: Record<string, string> = {
  weeds: "weeds",
  "upper-hand": "upper hand",
  "terminal-win": "game over",
  "terminal-loss": "game over",
};

// one-line read on the recommended style of play in each region
const REGION_CAPTION: Record<string, string> = {
  weeds: "bold play",
  "upper-hand": "safe halving",
  "terminal-win": "you won",
  "terminal-loss": "you lost",
};

function messageOf(error: unknown): string {
  if (error instanceof ApiError) return error.message;
  return String(error);
}

export function mountApp(root: HTMLElement, store: Store, makeClient: ClientFactory): void {
  let client: AdvisorApi | null = null;
  const inflightProbes = new Set<string>();

  function handle(promise: Promise<SessionView>): void {
    store.beginRequest();
    promise
      .then((view) => store.confirmSession(view))
      .catch((error) => store.failRequest(messageOf(error)));
  }

  function probeWhatIf(bid: number): void {
    store.setWhatIfBid(bid);
    const view = store.getState().session;
    if (client === null || view === null || view.terminal) return;
    if (store.cachedWhatIf(view, bid) !== undefined) return;
    const key = stateKey(view);
    const probe = `${key}#${bid}`;
    if (inflightProbes.has(probe)) return;
    inflightProbes.add(probe);
    client
      .whatIf(view.session_id, bid)
      .then((response) => store.cacheWhatIf(key, bid, response.p))
      .catch((error) => store.failRequest(messageOf(error)))
      .finally(() => inflightProbes.delete(probe));
  }

  function render(state: AppState): void {
    root.textContent = "";
    root.appendChild(state.phase === "setup" ? renderSetup(state) : renderGame(state));
  }

  function renderSetup(state: AppState): HTMLElement {
    const panel = el("div", { class: "panel setup" });
    panel.appendChild(el("h1", { text: "Guess Who? advisor" }));
    panel.appendChild(errorBanner(state));

    const form = el("form", { id: "setup-form" });
    form.appendChild(labeled("service URL", numberlessInput("base-url", state.baseUrl)));
    form.appendChild(labeled("your candidates", numberInput("my-pool", "7", 1)));
    form.appendChild(labeled("opponent's candidates", numberInput("opp-pool", "4", 1)));

    const toMove = el("select", { id: "to-move" }) as HTMLSelectElement;
    toMove.appendChild(el("option", { value: "me", text: "I move first" }));
    toMove.appendChild(el("option", { value: "opponent", text: "opponent moves first" }));
    form.appendChild(labeled("first move", toMove));

    const start = el("button", {
      id: "start",
      type: "submit",
      text: state.busy ? "starting..." : "start advising",
    }) as HTMLButtonElement;
    start.disabled = state.busy;
    form.appendChild(start);

    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const baseUrl = inputValue(form, "base-url").trim();
      const myPool = Number(inputValue(form, "my-pool"));
      const oppPool = Number(inputValue(form, "opp-pool"));
      const mover = (form.querySelector("#to-move") as HTMLSelectElement).value as Mover;
      if (!Number.isInteger(myPool) || !Number.isInteger(oppPool)) {
        store.failRequest("pool sizes must be whole numbers");
        return;
      }
      store.setBaseUrl(baseUrl);
      client = makeClient(baseUrl);
      handle(client.createSession(myPool, oppPool, mover));
    });

    panel.appendChild(form);
    return panel;
  }

  function renderGame(state: AppState): HTMLElement {
    const view = state.session;
    if (view === null) return el("div");
    const panel = el("div", { class: "panel game" });

    const header = el("div", { class: "header" });
    header.appendChild(el("h1", { text: "Guess Who? advisor" }));
    const newGame = el("button", { id: "new-game", text: "new game" }) as HTMLButtonElement;
    newGame.addEventListener("click", () => store.reset());
    header.appendChild(newGame);
    panel.appendChild(header);

    panel.appendChild(errorBanner(state));
    panel.appendChild(renderPools(view));
    panel.appendChild(renderGauge(view));
    panel.appendChild(renderRegion(view));
    if (view.terminal) {
      panel.appendChild(el("div", {
        id: "terminal-banner",
        class: view.winner === "me" ? "banner win" : "banner loss",
        text: view.winner === "me" ? "You won" : "You lost",
      }));
    } else {
      panel.appendChild(renderMoveForm(view, state.busy));
      panel.appendChild(renderWhatIf(view, state));
    }
    panel.appendChild(renderHistory(view));
    return panel;
  }

  function renderMoveForm(view: SessionView, busy: boolean): HTMLElement {
    const mover = view.to_move;
    const moverPool = mover === "me" ? view.my_pool : view.opp_pool;
    const box = el("div", { class: "move" });
    box.appendChild(el("h2", {
      text: mover === "me" ? "Your move" : "Opponent's move",
    }));
    box.appendChild(el("span", { id: "move-actor", class: "hidden", text: mover }));

    // form 1: the mover's bid and the truthful answer
    const bidForm = el("form", { id: "bid-form" });
    const bid = numberInput("move-bid", "", 1);
    (bid as HTMLInputElement).max = String(moverPool - 1);
    bidForm.appendChild(labeled(`bid (1 to ${moverPool - 1})`, bid));
    const answer = el("select", { id: "move-answer" }) as HTMLSelectElement;
    answer.appendChild(el("option", { value: "yes", text: "yes" }));
    answer.appendChild(el("option", { value: "no", text: "no" }));
    bidForm.appendChild(labeled("answer", answer));
    const record = el("button", {
      id: "record-move", type: "submit", text: "record move",
    }) as HTMLButtonElement;
    record.disabled = busy;
    bidForm.appendChild(record);
    bidForm.addEventListener("submit", (event) => {
      event.preventDefault();
      if (client === null) return;
      const chosen = Number(inputValue(bidForm, "move-bid"));
      const said = (bidForm.querySelector("#move-answer") as HTMLSelectElement).value as Answer;
      handle(client.recordMove(view.session_id, { actor: mover, bid: chosen, answer: said }));
    });
    box.appendChild(bidForm);

    // form 2: just the observed resulting pool size
    const poolForm = el("form", { id: "pool-form" });
    const observed = numberInput("move-new-pool", "", 1);
    (observed as HTMLInputElement).max = String(moverPool - 1);
    poolForm.appendChild(labeled("or the resulting pool size", observed));
    const recordPool = el("button", {
      id: "record-pool", type: "submit", text: "record pool",
    }) as HTMLButtonElement;
    recordPool.disabled = busy;
    poolForm.appendChild(recordPool);
    poolForm.addEventListener("submit", (event) => {
      event.preventDefault();
      if (client === null) return;
      const pool = Number(inputValue(poolForm, "move-new-pool"));
      handle(client.recordMove(view.session_id, { actor: mover, new_pool: pool }));
    });
    box.appendChild(poolForm);
    return box;
  }

  function renderWhatIf(view: SessionView, state: AppState): HTMLElement {
    const mover = view.to_move;
    const moverPool = mover === "me" ? view.my_pool : view.opp_pool;
    const box = el("div", { class: "whatif" });
    box.appendChild(el("h2", { text: "What if the bid were..." }));

    const slider = el("input", { id: "whatif-slider", type: "range" }) as HTMLInputElement;
    slider.min = "1";
    slider.max = String(moverPool - 1);
    slider.value = String(state.whatIfBid ?? 1);
    slider.addEventListener("input", () => probeWhatIf(Number(slider.value)));
    box.appendChild(slider);

    const value = state.whatIfValue;
    box.appendChild(el("div", {
      id: "whatif-value",
      text: value === null
        ? `bid ${state.whatIfBid ?? "?"}: ...`
        : `bid ${state.whatIfBid}: ${formatFraction(value)} (${formatPercent(value)})`,
    }));
    const note = mover === "me"
      ? "mover's win probability for each bid, priced exactly by the service"
      : "the opponent is on move; values are the opponent's";
    box.appendChild(el("p", { class: "note", text: note }));
    return box;
  }

  render(store.getState());
  store.subscribe(render);
}

function renderPools(view: SessionView): HTMLElement {
  const box = el("div", { class: "pools" });
  box.appendChild(stat("you", "my-pool-value", String(view.my_pool)));
  box.appendChild(stat("opponent", "opp-pool-value", String(view.opp_pool)));
  box.appendChild(stat("to move", "to-move-value", view.terminal ? "-" : view.to_move));
  return box;
}

function renderGauge(view: SessionView): HTMLElement {
  const p = view.advice.win_prob;
  const share = p.num / p.den;
  const box = el("div", { class: "gauge" });
  // semicircular dial: the arc length of the top half circle is pi * r
  const r = 45;
  const half = Math.PI * r;
  const svg = `
    <svg viewBox="0 0 120 70" role="img" aria-label="win probability">
      <path d="M 15 60 A ${r} ${r} 0 0 1 105 60" fill="none"
            stroke="#d8d3c8" stroke-width="10" stroke-linecap="round"/>
      <path d="M 15 60 A ${r} ${r} 0 0 1 105 60" fill="none"
            stroke="#2a7f62" stroke-width="10" stroke-linecap="round"
            stroke-dasharray="${(share * half).toFixed(2)} ${half.toFixed(2)}"/>
    </svg>`;
  const dial = el("div", { class: "dial" });
  dial.innerHTML = svg;
  box.appendChild(dial);
  const readout = el("div", { class: "readout" });
  readout.appendChild(el("div", {
    id: "win-prob-fraction", class: "fraction", text: formatFraction(p),
  }));
  readout.appendChild(el("div", {
    id: "win-prob-percent", class: "percent", text: formatPercent(p),
  }));
  readout.appendChild(el("div", { class: "caption", text: "your chance to win" }));
  box.appendChild(readout);
  return box;
}

function renderRegion(view: SessionView): HTMLElement {
  const advice = view.advice;
  const box = el("div", { class: "region" });
  const label = REGION_LABEL[advice.region] ?? advice.region;
  const withLevel = advice.level === null ? label : `${label} · level ${advice.level}`;
  box.appendChild(el("span", { id: "region-badge", class: `badge ${advice.region}`, text: withLevel }));
  box.appendChild(el("span", { id: "region-caption", class: "caption", text: REGION_CAPTION[advice.region] ?? "" }));
  if (advice.recommended_bid !== null) {
    const mover = advice.mover === "me" ? "your" : "opponent's";
    box.appendChild(el("div", {
      id: "recommended-bid",
      text: `${mover} best bid: ${advice.recommended_bid}`,
    }));
  }
  return box;
}

function renderHistory(view: SessionView): HTMLElement {
  const box = el("div", { class: "history" });
  box.appendChild(el("h2", { text: "Moves" }));
  const list = el("ol", { id: "history" });
  for (const entry of view.history) {
    const who = entry.actor === "me" ? "you" : "opponent";
    const text = entry.bid === null
      ? `${who}: pool shrank to ${entry.new_pool}`
      : `${who}: bid ${entry.bid}, answer ${entry.answer}, pool ${entry.new_pool}`;
    list.appendChild(el("li", { text }));
  }
  if (view.history.length === 0) {
    list.appendChild(el("li", { class: "empty", text: "no moves yet" }));
  }
  box.appendChild(list);
  return box;
}

function errorBanner(state: AppState): HTMLElement {
  if (state.error === null) return el("span", { class: "hidden" });
  return el("div", { id: "error", class: "banner error", text: state.error });
}

function stat(label: string, id: string, value: string): HTMLElement {
  const box = el("div", { class: "stat" });
  box.appendChild(el("span", { class: "label", text: label }));
  box.appendChild(el("span", { id, class: "value", text: value }));
  return box;
}

function labeled(text: string, control: HTMLElement): HTMLElement {
  const wrap = el("label");
  wrap.appendChild(el("span", { text }));
  wrap.appendChild(control);
  return wrap;
}

function numberInput(id: string, value: string, min: number): HTMLElement {
  const input = el("input", { id, type: "number", value }) as HTMLInputElement;
  input.min = String(min);
  input.required = true;
  return input;
}

function numberlessInput(id: string, value: string): HTMLElement {
  return el("input", { id, type: "text", value });
}

function inputValue(scope: HTMLElement, id: string): string {
  return (scope.querySelector(`#${id}`) as HTMLInputElement).value;
}

type Attrs = Partial<{ id: string; class: string; text: string; type: string; value: string }>;

function el(tag: string, attrs: Attrs = {}): HTMLElement {
  const node = document.createElement(tag);
  if (attrs.id !== undefined) node.id = attrs.id;
  if (attrs.class !== undefined) node.className = attrs.class;
  if (attrs.text !== undefined) node.textContent = attrs.text;
  if (attrs.type !== undefined) node.setAttribute("type", attrs.type);
  if (attrs.value !== undefined) (node as HTMLInputElement).value = attrs.value;
  return node;
}
