import io
from fractions import Fraction as F

import pytest
from fastapi.testclient import TestClient

from legalarg.cli import main as cli_main
from legalarg.service import create_app


@pytest.fixture
def client():
    return TestClient(create_app())


@pytest.fixture
def example1_text(example1_path):
    return example1_path.read_text()


@pytest.fixture
def example2_text(example2_path):
    return example2_path.read_text()


def rat(payload):
    return F(payload["num"], payload["den"])


def arg_map(beliefs):
    return {a["name"]: a for a in beliefs["arguments"]}


def test_validate_endpoint(client, example1_text):
    r = client.post("/cases", json={"case": example1_text})
    assert r.status_code == 200 and r.json()["valid"]
    r = client.post("/cases", json={"case": "case v1\nbroken\n"})
    assert r.status_code == 400 and r.json()["error"] == "parse error"
    assert r.json()["line"] == 2


def test_create_session_initial_beliefs(client, example1_text):
    r = client.post("/sessions", json={"case": example1_text})
    assert r.status_code == 201
    body = r.json()
    assert rat(body["beliefs"]["innocence"]) == 1
    args = arg_map(body["beliefs"])
    assert rat(args["T1"]["lower"]) == 0 and rat(args["T1"]["upper"]) == 1


def test_create_session_rejects_invalid_document(client):
    r = client.post("/sessions", json={"case": "case v1\narg ???\n"})
    assert r.status_code == 400


def test_fresh_robbery_session_payload(client, example2_text):
    r = client.post("/sessions", json={"case": example2_text})
    body = r.json()
    assert rat(body["beliefs"]["innocence"]) == 1
    assert len(body["beliefs"]["arguments"]) == 15


def test_assumption_flow_reproduces_camera_column(client, example1_text):
    sid = client.post("/sessions", json={"case": example1_text}).json()["id"]
    r = client.post(f"/sessions/{sid}/assumptions", json={"text": "p(E1) >= 0.9"})
    assert r.status_code == 200
    beliefs = r.json()["beliefs"]
    assert rat(beliefs["innocence"]) == F(1, 10)
    args = arg_map(beliefs)
    assert rat(args["Einc"]["lower"]) == F(9, 10)
    assert args["E1"]["constrained"] and not args["T1"]["constrained"]
    assert args["E1"]["lower"]["display"] == "0.9"


def test_delete_assumption_restores_beliefs(client, example1_text):
    sid = client.post("/sessions", json={"case": example1_text}).json()["id"]
    ref = client.post(
        f"/sessions/{sid}/assumptions", json={"text": "p(E1) >= 0.9"}
    ).json()["id"]
    r = client.delete(f"/sessions/{sid}/assumptions/{ref}")
    assert r.status_code == 200
    assert rat(r.json()["beliefs"]["innocence"]) == 1
    r = client.get(f"/sessions/{sid}/beliefs")
    assert rat(r.json()["innocence"]) == 1


def test_conflict_flow(client, example1_text):
    sid = client.post("/sessions", json={"case": example1_text}).json()["id"]
    client.post(f"/sessions/{sid}/assumptions", json={"text": "p(T3) >= 0.7"})
    r = client.post(f"/sessions/{sid}/assumptions", json={"text": "p(E1) = 1"})
    assert r.status_code == 409
    conflict = r.json()["conflict"]
    assert conflict["assumptions"]
    r = client.get(f"/sessions/{sid}/beliefs")
    assert r.status_code == 409
    suspects = r.json()["conflict"]["assumptions"]
    r = client.delete(f"/sessions/{sid}/assumptions/{suspects[0]}")
    assert r.status_code == 200 and "beliefs" in r.json()
    assert client.get(f"/sessions/{sid}/beliefs").status_code == 200


def test_verdict_endpoint(client, example1_text):
    sid = client.post("/sessions", json={"case": example1_text}).json()["id"]
    client.post(f"/sessions/{sid}/assumptions", json={"text": "p(T3) >= 0.7"})
    r = client.get(f"/sessions/{sid}/verdict")
    body = r.json()
    assert body["class"] == "innocent-by-exculpatory"
    assert body["narrative"] == (
        "innocent: exculpatory evidence (Eex >= 0.7) via T2 (>= 0.7) via T3 (>= 0.7)"
    )
    r = client.get(f"/sessions/{sid}/verdict", params={"threshold": "0.6"})
    assert r.json()["class"] == "innocent-by-exculpatory"


def test_explanation_endpoint_depths(client, example1_text):
    sid = client.post("/sessions", json={"case": example1_text}).json()["id"]
    client.post(f"/sessions/{sid}/assumptions", json={"text": "p(T3) >= 0.7"})
    r = client.get(
        f"/sessions/{sid}/explanation",
        params={"argument": "Eex", "bound": "lower", "depth": 2},
    )
    body = r.json()
    assert rat(body["value"]) == F(7, 10)
    assert body["reasons"][0]["kind"] == "supporter"
    assert body["reasons"][0]["arguments"] == ["T2"]
    sub = body["reasons"][0]["sub"][0]
    assert sub["reasons"][0]["arguments"] == ["T3"]
    r0 = client.get(
        f"/sessions/{sid}/explanation",
        params={"argument": "Eex", "bound": "lower", "depth": 0},
    )
    assert r0.json()["reasons"] == []
    assert rat(r0.json()["value"]) == F(7, 10)


def test_session_isolation(client, example1_text):
    a = client.post("/sessions", json={"case": example1_text}).json()["id"]
    b = client.post("/sessions", json={"case": example1_text}).json()["id"]
    client.post(f"/sessions/{a}/assumptions", json={"text": "p(E1) >= 0.9"})
    rb = client.get(f"/sessions/{b}/beliefs")
    assert rat(rb.json()["innocence"]) == 1


def test_repeated_reads_identical(client, example1_text):
    sid = client.post("/sessions", json={"case": example1_text}).json()["id"]
    client.post(f"/sessions/{sid}/assumptions", json={"text": "p(T3) >= 0.7"})
    first = client.get(f"/sessions/{sid}/beliefs").json()
    second = client.get(f"/sessions/{sid}/beliefs").json()
    assert first == second


def test_delete_session(client, example1_text):
    sid = client.post("/sessions", json={"case": example1_text}).json()["id"]
    assert client.delete(f"/sessions/{sid}").status_code == 200
    assert client.get(f"/sessions/{sid}/beliefs").status_code == 404


def test_session_log_records_actions(client, example1_text):
    sid = client.post("/sessions", json={"case": example1_text}).json()["id"]
    client.post(f"/sessions/{sid}/assumptions", json={"text": "p(T3) >= 0.7"})
    text = client.get(f"/sessions/{sid}/log").text
    actions = [line.split('"action": "')[1].split('"')[0] for line in text.splitlines()]
    assert actions == ["solve", "assume", "solve"]


def test_api_cli_parity_exact_rationals(client, example1_path, example1_text):
    sid = client.post("/sessions", json={"case": example1_text}).json()["id"]
    r = client.post(f"/sessions/{sid}/assumptions", json={"text": "p(T3) >= 0.7"})
    api_args = arg_map(r.json()["beliefs"])
    out = io.StringIO()
    code = cli_main(
        ["solve", "--case", str(example1_path), "--assume", "p(T3) >= 0.7", "--exact"],
        out=out,
    )
    assert code == 0
    cli_rows = dict(line.split(": ", 1) for line in out.getvalue().splitlines())
    for name, payload in api_args.items():
        lo, hi = rat(payload["lower"]), rat(payload["upper"])
        text = cli_rows[name].replace(" *", "")
        if name == "Innocence":
            assert text == (f"{hi.numerator}" if hi.denominator == 1
                            else f"{hi.numerator}/{hi.denominator}")
        else:
            def fe(x):
                return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
            expected = fe(lo) if lo == hi else f"[{fe(lo)}, {fe(hi)}]"
            assert text == expected
