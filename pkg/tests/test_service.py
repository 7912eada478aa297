"""Advisor REST service: endpoints, status codes, exact advice, snapshots."""

import json
from fractions import Fraction

import pytest
from fastapi.testclient import TestClient

from guesswho.game import bid_value, closed_form_value, optimal_bid
from guesswho.service import SessionStore, SnapshotError, create_app, fraction_json


@pytest.fixture()
def store():
    return SessionStore()


@pytest.fixture()
def client(store):
    return TestClient(create_app(store))


def make_session(client, my_pool=7, opp_pool=4, to_move="me"):
    response = client.post("/api/session", json={
        "my_pool": my_pool, "opp_pool": opp_pool, "to_move": to_move,
    })
    assert response.status_code == 201, response.text
    return response.json()


class TestFractionJson:
    def test_wire_form(self):
        assert fraction_json(Fraction(5, 14)) == {
            "num": 5, "den": 14, "approx": 0.3571428571,
        }
        assert fraction_json(Fraction(1)) == {"num": 1, "den": 1, "approx": 1.0}


class TestHealth:
    def test_health(self, client):
        doc = client.get("/api/health").json()
        assert doc["status"] == "ok"
        assert doc["backend"] in ("pure", "compiled")
        assert doc["sessions"] == 0

    def test_session_count_tracks_the_store(self, client):
        make_session(client)
        make_session(client)
        assert client.get("/api/health").json()["sessions"] == 2


class TestCreate:
    def test_create_returns_full_view_with_advice(self, client):
        doc = make_session(client, 7, 4)
        assert doc["my_pool"] == 7 and doc["opp_pool"] == 4
        assert doc["to_move"] == "me" and not doc["terminal"]
        assert doc["winner"] is None and doc["history"] == []
        advice = doc["advice"]
        assert advice["mover"] == "me"
        assert advice["region"] == "weeds" and advice["level"] == 1
        assert advice["recommended_bid"] == 2
        assert advice["win_prob"] == {"num": 5, "den": 14, "approx": 0.3571428571}
        assert [w["bid"] for w in advice["whatif"]] == [1, 2, 3, 4, 5, 6]

    def test_opponent_to_move_flips_the_perspective(self, client):
        doc = make_session(client, 7, 4, to_move="opponent")
        advice = doc["advice"]
        assert advice["mover"] == "opponent"
        # the curve and bid are the opponent's; my probability is 1 - p*(4, 7)
        assert advice["recommended_bid"] == optimal_bid(4, 7)
        assert advice["win_prob"] == fraction_json(1 - closed_form_value(4, 7))

    def test_whatif_curve_is_exact_and_peaks_at_the_recommendation(self, client):
        advice = make_session(client, 9, 9)["advice"]
        curve = {w["bid"]: Fraction(w["p"]["num"], w["p"]["den"]) for w in advice["whatif"]}
        assert curve == {b: bid_value(9, 9, b) for b in range(1, 9)}
        best = max(curve.values())
        assert curve[advice["recommended_bid"]] == best == closed_form_value(9, 9)

    def test_terminal_create_is_allowed_and_advises_nothing(self, client):
        doc = make_session(client, 1, 5)
        assert doc["terminal"] and doc["winner"] == "me"
        advice = doc["advice"]
        assert advice["region"] == "terminal-win"
        assert advice["recommended_bid"] is None and advice["whatif"] == []
        assert advice["win_prob"] == {"num": 1, "den": 1, "approx": 1.0}

    def test_bad_pools_are_400(self, client):
        for body in ({"my_pool": 0, "opp_pool": 5}, {"my_pool": 5, "opp_pool": -2},
                     {"my_pool": 1, "opp_pool": 1}):
            assert client.post("/api/session", json=body).status_code == 400

    def test_malformed_body_is_422(self, client):
        assert client.post("/api/session", json={"my_pool": 7}).status_code == 422
        assert client.post("/api/session", json={
            "my_pool": 7, "opp_pool": 4, "to_move": "them",
        }).status_code == 422


class TestGet:
    def test_roundtrip(self, client):
        created = make_session(client)
        fetched = client.get(f"/api/session/{created['session_id']}")
        assert fetched.status_code == 200
        assert fetched.json() == created

    def test_unknown_id_is_404(self, client):
        assert client.get("/api/session/deadbeef").status_code == 404


class TestMove:
    def test_scripted_game(self, client):
        sid = make_session(client, 7, 4)["session_id"]

        doc = client.post(f"/api/session/{sid}/move", json={
            "actor": "me", "bid": 2, "answer": "yes",
        }).json()
        assert (doc["my_pool"], doc["opp_pool"], doc["to_move"]) == (2, 4, "opponent")
        assert doc["advice"]["win_prob"] == {"num": 3, "den": 4, "approx": 0.75}
        assert doc["history"][-1]["state_after"] == {
            "my_pool": 2, "opp_pool": 4, "to_move": "opponent", "terminal": False,
        }

        doc = client.post(f"/api/session/{sid}/move", json={
            "actor": "opponent", "new_pool": 1,
        }).json()
        assert doc["terminal"] and doc["winner"] == "opponent"
        assert doc["advice"]["region"] == "terminal-loss"
        assert doc["advice"]["win_prob"] == {"num": 0, "den": 1, "approx": 0.0}

    def test_no_answer_shrinks_to_the_complement(self, client):
        sid = make_session(client, 7, 4)["session_id"]
        doc = client.post(f"/api/session/{sid}/move", json={
            "actor": "me", "bid": 2, "answer": "no",
        }).json()
        assert doc["my_pool"] == 5

    def test_winning_move_keeps_the_winner_on_move(self, client):
        sid = make_session(client, 2, 4)["session_id"]
        doc = client.post(f"/api/session/{sid}/move", json={
            "actor": "me", "bid": 1, "answer": "yes",
        }).json()
        assert doc["terminal"] and doc["winner"] == "me" and doc["to_move"] == "me"

    def test_history_replay_reconstructs_the_state(self, client):
        sid = make_session(client, 9, 9)["session_id"]
        moves = [
            {"actor": "me", "bid": 4, "answer": "no"},       # my pool 5
            {"actor": "opponent", "new_pool": 6},            # opp pool 6
            {"actor": "me", "bid": 2, "answer": "yes"},      # my pool 2
        ]
        for move in moves:
            assert client.post(f"/api/session/{sid}/move", json=move).status_code == 200
        doc = client.get(f"/api/session/{sid}").json()
        pools = {"me": 9, "opponent": 9}
        for entry in doc["history"]:
            pools[entry["actor"]] = entry["new_pool"]
        assert (pools["me"], pools["opponent"]) == (doc["my_pool"], doc["opp_pool"]) == (2, 6)

    def test_out_of_turn_is_409(self, client):
        sid = make_session(client, 7, 4)["session_id"]
        response = client.post(f"/api/session/{sid}/move", json={
            "actor": "opponent", "new_pool": 2,
        })
        assert response.status_code == 409

    def test_terminal_session_refuses_moves(self, client):
        sid = make_session(client, 1, 5)["session_id"]
        response = client.post(f"/api/session/{sid}/move", json={
            "actor": "me", "bid": 1, "answer": "yes",
        })
        assert response.status_code == 409

    def test_move_on_unknown_session_is_404(self, client):
        response = client.post("/api/session/nope/move", json={
            "actor": "me", "bid": 1, "answer": "yes",
        })
        assert response.status_code == 404

    @pytest.mark.parametrize("body", [
        {"actor": "me", "bid": 2, "answer": "yes", "new_pool": 2},  # both forms
        {"actor": "me"},                                            # neither form
        {"actor": "me", "bid": 2},                                  # bid without answer
        {"actor": "me", "answer": "yes"},                           # answer without bid
        {"actor": "me", "bid": 0, "answer": "yes"},                 # bid too small
        {"actor": "me", "bid": 7, "answer": "yes"},                 # bid = pool
        {"actor": "me", "new_pool": 0},                             # pool too small
        {"actor": "me", "new_pool": 7},                             # pool unchanged
    ])
    def test_illegal_transitions_are_422(self, client, body):
        sid = make_session(client, 7, 4)["session_id"]
        assert client.post(f"/api/session/{sid}/move", json=body).status_code == 422


class TestWhatIf:
    def test_single_bid_probe(self, client):
        sid = make_session(client, 7, 4)["session_id"]
        doc = client.get(f"/api/session/{sid}/whatif", params={"bid": 3}).json()
        assert doc == {
            "session_id": sid,
            "mover": "me",
            "bid": 3,
            "p": {"num": 2, "den": 7, "approx": 0.2857142857},
        }

    def test_probe_agrees_with_the_advice_curve(self, client):
        created = make_session(client, 9, 9)
        sid = created["session_id"]
        for point in created["advice"]["whatif"]:
            probe = client.get(f"/api/session/{sid}/whatif",
                               params={"bid": point["bid"]}).json()
            assert probe["p"] == point["p"]

    def test_out_of_range_bid_is_422(self, client):
        sid = make_session(client, 7, 4)["session_id"]
        assert client.get(f"/api/session/{sid}/whatif", params={"bid": 7}).status_code == 422
        assert client.get(f"/api/session/{sid}/whatif", params={"bid": 0}).status_code == 422
        assert client.get(f"/api/session/{sid}/whatif").status_code == 422

    def test_terminal_session_is_409(self, client):
        sid = make_session(client, 5, 1)["session_id"]
        assert client.get(f"/api/session/{sid}/whatif", params={"bid": 1}).status_code == 409


class TestSnapshots:
    def test_mutations_mirror_to_the_snapshot_file(self, tmp_path, store):
        path = tmp_path / "sessions.json"
        client = TestClient(create_app(store, snapshot_path=str(path)))
        sid = make_session(client, 7, 4)["session_id"]
        first = path.read_bytes()
        assert json.loads(first)["sessions"][0]["session_id"] == sid
        client.post(f"/api/session/{sid}/move", json={"actor": "me", "bid": 2, "answer": "yes"})
        second = path.read_bytes()
        assert first != second
        assert json.loads(second)["sessions"][0]["my_pool"] == 2

    def test_restore_roundtrip_is_byte_exact(self, tmp_path, store):
        path = tmp_path / "a.json"
        client = TestClient(create_app(store, snapshot_path=str(path)))
        make_session(client, 7, 4)
        sid = make_session(client, 9, 9, to_move="opponent")["session_id"]
        client.post(f"/api/session/{sid}/move", json={"actor": "opponent", "new_pool": 3})

        fresh = SessionStore()
        assert fresh.restore(str(path)) == 2
        again = tmp_path / "b.json"
        fresh.snapshot(str(again))
        assert again.read_bytes() == path.read_bytes()

        served = TestClient(create_app(fresh))
        doc = served.get(f"/api/session/{sid}").json()
        assert (doc["opp_pool"], doc["to_move"]) == (3, "me")

    def test_corrupt_snapshot_leaves_the_store_untouched(self, tmp_path, store):
        client = TestClient(create_app(store))
        sid = make_session(client)["session_id"]
        bad = tmp_path / "bad.json"

        bad.write_text("not json at all")
        with pytest.raises(SnapshotError):
            store.restore(str(bad))
        bad.write_text('{"wrong": 1}')
        with pytest.raises(SnapshotError):
            store.restore(str(bad))
        bad.write_text(json.dumps({"sessions": [{"session_id": "x"}]}))
        with pytest.raises(SnapshotError):
            store.restore(str(bad))

        assert len(store) == 1 and store.get(sid) is not None

    def test_restore_rejects_bad_records(self, tmp_path):
        record = {
            "session_id": "abc", "my_pool": 1, "opp_pool": 1, "to_move": "me",
            "created": 0.0, "updated": 0.0, "initial": {}, "history": [],
        }
        path = tmp_path / "snap.json"
        path.write_text(json.dumps({"sessions": [record]}))
        with pytest.raises(SnapshotError, match="bad pools"):
            SessionStore().restore(str(path))

    def test_restore_rejects_duplicate_ids(self, tmp_path):
        record = {
            "session_id": "abc", "my_pool": 7, "opp_pool": 4, "to_move": "me",
            "created": 0.0, "updated": 0.0, "initial": {}, "history": [],
        }
        path = tmp_path / "snap.json"
        path.write_text(json.dumps({"sessions": [record, record]}))
        with pytest.raises(SnapshotError, match="duplicate"):
            SessionStore().restore(str(path))

    def test_restore_missing_file(self, tmp_path):
        with pytest.raises(SnapshotError, match="cannot read"):
            SessionStore().restore(str(tmp_path / "absent.json"))


class TestCors:
    def test_configured_origin_is_allowed(self, store):
        client = TestClient(create_app(store, ui_origin="http://localhost:5173"))
        response = client.get("/api/health", headers={"Origin": "http://localhost:5173"})
        assert response.headers.get("access-control-allow-origin") == "http://localhost:5173"

    def test_wildcard_default(self, client):
        response = client.get("/api/health", headers={"Origin": "http://example.test"})
        assert response.headers.get("access-control-allow-origin") == "*"
