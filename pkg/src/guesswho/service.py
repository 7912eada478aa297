"""Live-game advisor as a small REST service.

Sessions track a real game from the advised player's side ("me" vs
"opponent").  Advice is pure closed form (classify / closed_form_value /
optimal_bid / bid_value), never a DP table, so every request is O(pool) at
worst (the what-if curve) and O(1) otherwise.

All probabilities cross the wire as exact fractions with a float preview:
{"num": 5, "den": 14, "approx": 0.3571428571}.  State transitions accept
either the mover's (bid, answer) or the observed resulting pool size; both
validate to a legal transition.  Session mutations are serialized per
session, and the store can mirror itself to a JSON snapshot that restores
bit-exactly (a corrupt snapshot raises SnapshotError and leaves the store
untouched).
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import __version__
from ._kernel import active_backend
from .game import RegionKind, bid_value, classify, closed_form_value, optimal_bid

__all__ = ["Session", "SessionStore", "SnapshotError", "create_app", "fraction_json"]

Mover = Literal["me", "opponent"]


def fraction_json(p: Fraction) -> dict:
    """Wire form of an exact probability: numerator, denominator, preview."""
    return {"num": p.numerator, "den": p.denominator, "approx": round(float(p), 10)}


class SnapshotError(Exception):
    """A snapshot file could not be restored; the store was not modified."""


@dataclass
class Session:
    """One advised game, seen from the advised player's side."""

    session_id: str
    my_pool: int
    opp_pool: int
    to_move: Mover
    created: float
    updated: float
    initial: dict = field(default_factory=dict)
    history: list[dict] = field(default_factory=list)

    @property
    def terminal(self) -> bool:
        return self.my_pool == 1 or self.opp_pool == 1

    @property
    def winner(self) -> Mover | None:
        if self.my_pool == 1:
            return "me"
        if self.opp_pool == 1:
            return "opponent"
        return None

    def mover_pools(self) -> tuple[int, int]:
        """(mover pool, waiting pool) for the player on turn."""
        if self.to_move == "me":
            return self.my_pool, self.opp_pool
        return self.opp_pool, self.my_pool

    def my_win_prob(self) -> Fraction:
        """Advised player's win probability under optimal play by both."""
        if self.my_pool == 1:
            return Fraction(1)
        if self.opp_pool == 1:
            return Fraction(0)
        n, m = self.mover_pools()
        p_mover = closed_form_value(n, m)
        return p_mover if self.to_move == "me" else 1 - p_mover

    def advice(self) -> dict:
        """Closed-form advice for the current position."""
        if self.terminal:
            return {
                "mover": None,
                "region": "terminal-win" if self.winner == "me" else "terminal-loss",
                "level": None,
                "recommended_bid": None,
                "win_prob": fraction_json(self.my_win_prob()),
                "whatif": [],
            }
        n, m = self.mover_pools()
        region = classify(n, m)
        return {
            "mover": self.to_move,
            "region": region.kind.value,
            "level": region.level,
            "recommended_bid": optimal_bid(n, m),
            "win_prob": fraction_json(self.my_win_prob()),
            # mover-perspective curve; recommended_bid maximizes it
            "whatif": [
                {"bid": b, "p": fraction_json(bid_value(n, m, b))} for b in range(1, n)
            ],
        }

    def view(self) -> dict:
        return {
            "session_id": self.session_id,
            "my_pool": self.my_pool,
            "opp_pool": self.opp_pool,
            "to_move": self.to_move,
            "terminal": self.terminal,
            "winner": self.winner,
            "created": self.created,
            "updated": self.updated,
            "advice": self.advice(),
            "history": self.history,
        }

    def to_record(self) -> dict:
        """Snapshot form; everything needed to restore bit-exactly."""
        return {
            "session_id": self.session_id,
            "my_pool": self.my_pool,
            "opp_pool": self.opp_pool,
            "to_move": self.to_move,
            "created": self.created,
            "updated": self.updated,
            "initial": self.initial,
            "history": self.history,
        }

    @classmethod
    def from_record(cls, record: dict) -> "Session":
        try:
            session = cls(
                session_id=str(record["session_id"]),
                my_pool=int(record["my_pool"]),
                opp_pool=int(record["opp_pool"]),
                to_move=record["to_move"],
                created=float(record["created"]),
                updated=float(record["updated"]),
                initial=dict(record["initial"]),
                history=list(record["history"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SnapshotError(f"malformed session record: {exc}") from exc
        if session.to_move not in ("me", "opponent"):
            raise SnapshotError(f"bad to_move {session.to_move!r}")
        if session.my_pool < 1 or session.opp_pool < 1 \
                or (session.my_pool == 1 and session.opp_pool == 1):
            raise SnapshotError(
                f"bad pools ({session.my_pool}, {session.opp_pool})")
        return session


class SessionStore:
    """In-memory sessions with per-session locking and JSON snapshots."""

    def __init__(self) -> None:
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._store_lock = threading.Lock()

    def create(self, my_pool: int, opp_pool: int, to_move: Mover) -> Session:
        now = time.time()
        session = Session(
            session_id=uuid.uuid4().hex,
            my_pool=my_pool,
            opp_pool=opp_pool,
            to_move=to_move,
            created=now,
            updated=now,
            initial={"my_pool": my_pool, "opp_pool": opp_pool, "to_move": to_move},
        )
        with self._store_lock:
            self._sessions[session.session_id] = session
            self._locks[session.session_id] = threading.Lock()
        return session

    def get(self, session_id: str) -> Session | None:
        with self._store_lock:
            return self._sessions.get(session_id)

    def lock(self, session_id: str) -> threading.Lock:
        with self._store_lock:
            return self._locks[session_id]

    def __len__(self) -> int:
        with self._store_lock:
            return len(self._sessions)

    def snapshot(self, path: str) -> None:
        """Write all sessions, in creation order, as {"sessions": [...]}."""
        with self._store_lock:
            doc = {"sessions": [s.to_record() for s in self._sessions.values()]}
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")

    def restore(self, path: str) -> int:
        """Replace the store's contents from a snapshot file.

        All-or-nothing: any parse or validation failure raises SnapshotError
        and the current contents stay exactly as they were.
        """
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise SnapshotError(f"cannot read snapshot {path!r}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise SnapshotError(f"snapshot {path!r} is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict) or not isinstance(doc.get("sessions"), list):
            raise SnapshotError(f"snapshot {path!r} lacks a 'sessions' list")
        incoming: dict[str, Session] = {}
        for record in doc["sessions"]:
            session = Session.from_record(record)
            if session.session_id in incoming:
                raise SnapshotError(f"duplicate session id {session.session_id}")
            incoming[session.session_id] = session
        with self._store_lock:
            self._sessions = incoming
            self._locks = {sid: threading.Lock() for sid in incoming}
        return len(incoming)


class CreateBody(BaseModel):
    my_pool: int
    opp_pool: int
    to_move: Mover = "me"


class MoveBody(BaseModel):
    actor: Mover
    bid: int | None = None
    answer: Literal["yes", "no"] | None = None
    new_pool: int | None = None


def create_app(store: SessionStore | None = None, snapshot_path: str | None = None,
               ui_origin: str = "*") -> FastAPI:
    """Build the advisor app.

    Args:
        store: session store to serve (a fresh one by default).
        snapshot_path: if set, the store is mirrored here after every mutation.
        ui_origin: CORS origin allowed to call the API ("*" by default).
    """
    store = store if store is not None else SessionStore()
    app = FastAPI(title="guesswho advisor", version=__version__)
    app.state.store = store
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[ui_origin],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def persist() -> None:
        if snapshot_path is not None:
            store.snapshot(snapshot_path)

    def fetch(session_id: str) -> Session:
        session = store.get(session_id)
        if session is None:
            raise HTTPException(404, f"no session {session_id!r}")
        return session

    @app.get("/api/health")
    def health() -> dict:
        return {
            "status": "ok",
            "version": __version__,
            "backend": active_backend(),
            "sessions": len(store),
        }

    @app.post("/api/session", status_code=201)
    def create_session(body: CreateBody) -> dict:
        if body.my_pool < 1 or body.opp_pool < 1:
            raise HTTPException(400, f"pools must be >= 1, got ({body.my_pool}, {body.opp_pool})")
        if body.my_pool == 1 and body.opp_pool == 1:
            raise HTTPException(400, "state (1, 1) is not a reachable game position")
        session = store.create(body.my_pool, body.opp_pool, body.to_move)
        persist()
        return session.view()

    @app.get("/api/session/{session_id}")
    def get_session(session_id: str) -> dict:
        return fetch(session_id).view()

    @app.post("/api/session/{session_id}/move")
    def record_move(session_id: str, body: MoveBody) -> dict:
        session = fetch(session_id)
        with store.lock(session_id):
            if session.terminal:
                raise HTTPException(409, "session is terminal; no further moves")
            if body.actor != session.to_move:
                raise HTTPException(
                    409, f"out of turn: {session.to_move!r} is on move, not {body.actor!r}")
            pool = session.my_pool if body.actor == "me" else session.opp_pool
            if body.new_pool is not None:
                if body.bid is not None or body.answer is not None:
                    raise HTTPException(422, "give either (bid, answer) or new_pool, not both")
                if not 1 <= body.new_pool <= pool - 1:
                    raise HTTPException(
                        422, f"resulting pool {body.new_pool} impossible from pool {pool}")
                new_pool = body.new_pool
            else:
                if body.bid is None or body.answer is None:
                    raise HTTPException(422, "a move needs (bid, answer) or new_pool")
                if not 1 <= body.bid <= pool - 1:
                    raise HTTPException(
                        422, f"bid {body.bid} out of range [1, {pool - 1}]")
                new_pool = body.bid if body.answer == "yes" else pool - body.bid
            if body.actor == "me":
                session.my_pool = new_pool
            else:
                session.opp_pool = new_pool
            if new_pool > 1:
                session.to_move = "opponent" if body.actor == "me" else "me"
            session.updated = time.time()
            session.history.append({
                "actor": body.actor,
                "bid": body.bid,
                "answer": body.answer,
                "new_pool": new_pool,
                "state_after": {
                    "my_pool": session.my_pool,
                    "opp_pool": session.opp_pool,
                    "to_move": session.to_move,
                    "terminal": session.terminal,
                },
            })
        persist()
        return session.view()

    @app.get("/api/session/{session_id}/whatif")
    def what_if(session_id: str, bid: int = Query(...)) -> dict:
        session = fetch(session_id)
        if session.terminal:
            raise HTTPException(409, "session is terminal; nothing to explore")
        n, m = session.mover_pools()
        if not 1 <= bid <= n - 1:
            raise HTTPException(422, f"bid {bid} out of range [1, {n - 1}]")
        return {
            "session_id": session_id,
            "mover": session.to_move,
            "bid": bid,
            "p": fraction_json(bid_value(n, m, bid)),
        }

    return app
