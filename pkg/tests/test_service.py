"""HTTP service behaviour over an in-process app."""

import json
import stat
from importlib import resources

import jsonschema
import pytest
from fastapi.testclient import TestClient

from aspdesk.service import create_app

QUEENS_FACTS = "q(1,2). q(2,4). q(3,1). q(4,3)."
QUEENS_VIS = """
visgrid(g,4,4,20,20).
visrect(p(X),18,18) :- q(X,Y).
visfillgrid(g,X,Y,p(X)) :- q(X,Y).
"""
ALL_CELLS = " ".join(f"q({x},{y})." for x in range(1, 5) for y in range(1, 5))
MOVE_P2 = {"action": "move", "target": "p(2)", "row": 2, "col": 3}


@pytest.fixture()
def client(tmp_path):
    app = create_app(tmp_path / "ws")
    with TestClient(app) as c:
        yield c


def schema(name):
    text = (resources.files("aspdesk") / "schemas" / f"{name}.json").read_text()
    return json.loads(text)


def body_error(response):
    return response.json()["error"]


# ---------------------------------------------------------------------------
# health, parse

def test_health(client):
    data = client.get("/api/health").json()
    assert data["status"] == "ok"


def test_parse_reports_diagnostics_outline_and_pretty(client):
    r = client.post("/api/parse", json={
        "source": "a(X) :- c(X).\nbroken(", "filename": "m.lp"})
    assert r.status_code == 200
    data = r.json()
    assert data["rule_count"] == 1
    assert [d["code"] for d in data["diagnostics"]] == ["parse-error"]
    assert data["outline"]["label"] == "m.lp"
    assert data["pretty"] == "a(X) :- c(X)."
    jsonschema.validate(
        {"dialect": data["dialect"], "rule_count": data["rule_count"],
         "diagnostics": data["diagnostics"]},
        schema("diagnostics"))
    jsonschema.validate(data["outline"], schema("outline"))


def test_parse_lint_flag_adds_analysis_findings(client):
    plain = client.post("/api/parse", json={"source": "a(X) :- not c(X)."})
    linted = client.post("/api/parse", json={
        "source": "a(X) :- not c(X).", "lint": True})
    assert plain.json()["diagnostics"] == []
    assert [d["code"] for d in linted.json()["diagnostics"]] \
        == ["unsafe-variable"]


def test_malformed_body_gets_the_error_envelope(client):
    r = client.post("/api/parse", json={"source": 7})
    assert r.status_code == 400
    assert body_error(r)["code"] == "bad-request"


# ---------------------------------------------------------------------------
# solve

def test_internal_solve(client):
    r = client.post("/api/solve", json={
        "sources": ["a :- not b. b :- not a."]})
    data = r.json()
    assert data["engine"] == "internal"
    assert data["satisfiable"] is True
    assert [m["atoms"] for m in data["interpretations"]] == [["a"], ["b"]]
    jsonschema.validate(data, schema("interpretations"))


def test_internal_solve_respects_the_limit(client):
    r = client.post("/api/solve", json={
        "sources": ["a :- not b. b :- not a."], "limit": 1})
    assert [m["atoms"] for m in r.json()["interpretations"]] == [["a"]]


def test_unsat_solve_reports_no_models(client):
    data = client.post("/api/solve", json={
        "sources": ["a. :- a."]}).json()
    assert data["satisfiable"] is False
    assert data["interpretations"] == []


def test_solve_rejects_a_broken_program(client):
    r = client.post("/api/solve", json={"sources": ["a :-"]})
    assert r.status_code == 422
    assert body_error(r)["code"] == "format-error"


def test_solve_through_a_registered_tool(client, tmp_path):
    script = tmp_path / "fake-solver"
    script.write_text("#!/bin/sh\ncat > /dev/null\n"
                      "echo 'Answer: 1'\necho 'win(7)'\necho SATISFIABLE\n")
    script.chmod(script.stat().st_mode | stat.S_IEXEC)
    program = tmp_path / "in.lp"
    program.write_text("p(1).\n")

    client.post("/api/tools/tool", json={
        "id": "fake", "executable_path": str(script), "kind": "clasp"})
    client.post("/api/tools/launch", json={
        "id": "go", "tool": "fake", "input_files": [str(program)],
        "output_mode": "parse_interpretations"})

    data = client.post("/api/solve", json={
        "engine": "launch", "launch": "go"}).json()
    assert data["engine"] == "launch:go"
    assert data["satisfiable"] is True
    assert [m["atoms"] for m in data["interpretations"]] == [["win(7)"]]


def test_solve_with_unknown_launch_is_not_found(client):
    r = client.post("/api/solve", json={"engine": "launch", "launch": "nope"})
    assert r.status_code == 404
    assert body_error(r)["code"] == "not-found"


# ---------------------------------------------------------------------------
# interpretation store

def test_interpretation_store_lifecycle(client):
    assert client.get("/api/interpretations").json() == {"labels": []}

    r = client.post("/api/interpretations",
                    json={"label": "one", "facts": "p(1). q."})
    assert r.json() == {"label": "one", "changed": True, "atom_count": 2}

    assert client.get("/api/interpretations").json() == {"labels": ["one"]}
    got = client.get("/api/interpretations/one").json()
    assert got == {"label": "one", "atoms": ["p(1)", "q"]}

    again = client.post("/api/interpretations",
                        json={"label": "one", "facts": "q. p(1)."})
    assert again.json()["changed"] is False  # same content, idempotent

    clash = client.post("/api/interpretations",
                        json={"label": "one", "facts": "p(2)."})
    assert clash.status_code == 409
    assert body_error(clash)["code"] == "conflict"

    forced = client.post("/api/interpretations", json={
        "label": "one", "facts": "p(2).", "overwrite": True})
    assert forced.json()["changed"] is True

    assert client.delete("/api/interpretations/one").json() == {"deleted": "one"}
    assert client.get("/api/interpretations/one").status_code == 404


def test_labels_are_restricted_to_safe_names(client):
    r = client.post("/api/interpretations",
                    json={"label": "../escape", "facts": "p."})
    assert r.status_code == 422
    assert body_error(r)["code"] == "format-error"


def test_inconsistent_facts_are_rejected(client):
    r = client.post("/api/interpretations",
                    json={"label": "x", "facts": "p(1). -p(1)."})
    assert r.status_code == 422
    assert body_error(r)["code"] == "inconsistent-interpretation"


def test_diff_accepts_labels_and_inline_facts(client):
    client.post("/api/interpretations", json={"label": "a", "facts": "p. q."})
    data = client.post("/api/diff", json={
        "left": {"label": "a"}, "right": {"facts": "q. r."}}).json()
    assert data == {"only_left": ["p"], "only_right": ["r"], "common": ["q"]}
    jsonschema.validate(data, schema("diff"))


def test_diff_needs_exactly_one_source_per_side(client):
    r = client.post("/api/diff", json={
        "left": {"label": "a", "facts": "p."}, "right": {"facts": "q."}})
    assert r.status_code == 400


# ---------------------------------------------------------------------------
# scenes

def test_visualize_stores_a_fetchable_scene(client):
    r = client.post("/api/visualize", json={
        "interpretation": {"facts": QUEENS_FACTS}, "program": QUEENS_VIS})
    assert r.status_code == 200
    data = r.json()
    jsonschema.validate(data["scene"], schema("scene"))
    assert len(data["vis_atoms"]) == 9  # grid + 4 markers + 4 fills
    assert len(data["scene"]["elements"]) == 5

    fetched = client.get(f"/api/scene/{data['scene_id']}").json()
    assert fetched == data["scene"]

    svg = client.get(f"/api/scene/{data['scene_id']}/svg")
    assert svg.headers["content-type"].startswith("image/svg+xml")
    assert svg.text.startswith("<?xml")
    assert 'data-id="g"' in svg.text


def test_visualize_is_deterministic_across_calls(client):
    posts = [client.post("/api/visualize", json={
        "interpretation": {"facts": QUEENS_FACTS}, "program": QUEENS_VIS},
    ).json() for _ in range(2)]
    assert posts[0]["scene_id"] == posts[1]["scene_id"]
    assert posts[0]["scene"] == posts[1]["scene"]


def test_generic_visualization(client):
    data = client.post("/api/visualize", json={
        "interpretation": {"facts": "e(1,2). f(1,2)."},
        "generic": True}).json()
    kinds = [e["kind"] for e in data["scene"]["elements"]]
    assert kinds.count("graph-node") == 2
    assert kinds.count("graph-edge") == 2
    jsonschema.validate(data["scene"], schema("scene"))


def test_visualize_applies_edits_before_building(client):
    plain = client.post("/api/visualize", json={
        "interpretation": {"facts": QUEENS_FACTS},
        "program": QUEENS_VIS}).json()
    edited = client.post("/api/visualize", json={
        "interpretation": {"facts": QUEENS_FACTS}, "program": QUEENS_VIS,
        "edits": [MOVE_P2]}).json()
    assert "visfillgrid(g,2,4,p(2))" in plain["vis_atoms"]
    assert "visfillgrid(g,2,3,p(2))" in edited["vis_atoms"]
    marker = next(e for e in edited["scene"]["elements"] if e["id"] == "p(2)")
    assert marker["parent"] == {"id": "g", "row": 2, "col": 3}


def test_visualize_error_paths(client):
    broken = client.post("/api/visualize", json={
        "interpretation": {"facts": "p."}, "program": "visrect("})
    assert broken.status_code == 422
    assert body_error(broken)["code"] == "format-error"

    unsat = client.post("/api/visualize", json={
        "interpretation": {"facts": "p."},
        "program": "visrect(a,5,5). :- visrect(a,5,5)."})
    assert unsat.status_code == 422
    assert body_error(unsat)["code"] == "visualization-unsat"

    missing = client.post("/api/visualize", json={
        "interpretation": {"label": "ghost"}, "generic": True})
    assert missing.status_code == 404


def test_unknown_scene_is_not_found(client):
    assert client.get("/api/scene/s0123456789").status_code == 404
    assert client.get("/api/scene/weird").status_code == 422


# ---------------------------------------------------------------------------
# abduction

def test_abduce_round_trips_a_move(client):
    client.post("/api/interpretations",
                json={"label": "q4", "facts": QUEENS_FACTS})
    r = client.post("/api/abduce", json={
        "interpretation": {"label": "q4"}, "program": QUEENS_VIS,
        "abducibles": ["q/2"], "domains": ALL_CELLS,
        "edits": [MOVE_P2]})
    assert r.status_code == 200
    data = r.json()
    assert data["diff"]["only_left"] == ["q(2,4)"]
    assert data["diff"]["only_right"] == ["q(2,3)"]
    assert data["interpretation"]["atoms"] == [
        "q(1,2)", "q(2,3)", "q(3,1)", "q(4,3)"]

    replay = client.post("/api/visualize", json={
        "interpretation": {"label": "q4"}, "program": QUEENS_VIS,
        "edits": [MOVE_P2]}).json()
    assert data["scene_id"] == replay["scene_id"]


def test_abduce_without_edits_is_an_identity(client):
    data = client.post("/api/abduce", json={
        "interpretation": {"facts": QUEENS_FACTS}, "program": QUEENS_VIS,
        "abducibles": ["q/2"], "domains": ALL_CELLS}).json()
    assert data["diff"]["only_left"] == []
    assert data["diff"]["only_right"] == []


def test_abduce_unsat_and_bad_abducibles(client):
    unsat = client.post("/api/abduce", json={
        "interpretation": {"facts": "q(1,1)."},
        "program": "visrect(p(X),9,9) :- q(X,X).",
        "abducibles": ["q/2"], "domains": "q(1,1).",
        "target_vis": ["visrect(stranger,9,9)"]})
    assert unsat.status_code == 422
    assert body_error(unsat)["code"] == "abduction-unsat"

    bad = client.post("/api/abduce", json={
        "interpretation": {"facts": "q(1,1)."},
        "program": QUEENS_VIS, "abducibles": ["q"]})
    assert bad.status_code == 422
    assert body_error(bad)["code"] == "format-error"


# ---------------------------------------------------------------------------
# tool registry

def test_registry_crud_over_http(client, tmp_path):
    assert client.get("/api/tools").json() == {
        "tools": [], "pipelines": [], "launches": []}

    client.post("/api/tools/tool", json={
        "id": "cat", "executable_path": "/bin/cat"})
    client.post("/api/tools/pipeline", json={
        "id": "twice", "stages": ["cat", "cat"]})
    client.post("/api/tools/launch", json={
        "id": "l1", "tool": "twice", "input_files": ["x.lp"]})

    dump = client.get("/api/tools").json()
    assert [t["id"] for t in dump["tools"]] == ["cat"]
    assert dump["pipelines"][0]["stages"] == ["cat", "cat"]
    assert dump["launches"][0]["output_mode"] == "raw"

    still_used = client.delete("/api/tools/tool/cat")
    assert still_used.status_code == 422
    assert body_error(still_used)["code"] == "registry-integrity"

    client.delete("/api/tools/launch/l1")
    client.delete("/api/tools/pipeline/twice")
    assert client.delete("/api/tools/tool/cat").json() == {"removed": "cat"}
    assert client.delete("/api/tools/tool/cat").status_code == 404


def test_registry_rejects_dangling_references(client):
    r = client.post("/api/tools/launch", json={
        "id": "l", "tool": "ghost", "input_files": ["x"]})
    assert r.status_code == 422
    assert body_error(r)["code"] == "registry-integrity"


# ---------------------------------------------------------------------------
# static assets

def test_placeholder_page_without_a_built_ui(client):
    r = client.get("/")
    assert r.status_code == 200
    assert "aspdesk" in r.text


def test_static_directory_is_served_when_present(tmp_path):
    dist = tmp_path / "dist"
    dist.mkdir()
    (dist / "index.html").write_text("<h1>editor</h1>")
    app = create_app(tmp_path / "ws", static_dir=dist)
    with TestClient(app) as c:
        assert c.get("/").text == "<h1>editor</h1>"
        assert c.get("/api/health").json()["status"] == "ok"
