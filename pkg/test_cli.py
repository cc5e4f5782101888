import json
import os

import pytest

from biliaison.errors import RingMismatchError
from biliaison.session import EXIT_CODES, BiliaisonSession
from cli import main, run
from utils.fixture_store import FixtureStoreManager
from utils.report_store import ReportHistoryManager

ROOT = os.path.dirname(os.path.abspath(__file__))


@pytest.fixture(autouse=True)
def at_repo_root(monkeypatch):
    monkeypatch.chdir(ROOT)


def test_codim_from_fixture_file():
    report = run(["codim", "fixtures/skew_lines.id"])
    assert report.status == "ok"
    assert report.exit_code == 0
    assert report.outputs == {"codimension": 2, "krull_dimension": 2}


def test_inline_ideal_with_ring_flag():
    report = run(["gb", "ideal { x*y; x*z }", "--ring", "x,y,z,w"])
    assert report.status == "ok"
    assert report.outputs["size"] == 2
    assert report.inputs["ring"] == "x,y,z,w"


def test_parse_error_becomes_error_report():
    report = run(["gb", "ideal { x*q }", "--ring", "x,y"])
    assert report.status == "error"
    assert report.exit_code == 2
    assert report.error.startswith("ParseError")


def test_wrong_residual_is_refuted():
    report = run(
        ["verify-link", "--Y", "fixtures/planes_ci.id", "--V1", "fixtures/plane_x.id", "--V2", "fixtures/plane_x.id"]
    )
    assert report.status == "refuted"
    assert report.exit_code == 1
    assert not report.outputs["checks"]["forward"]


def test_link_certificate_round_trip(tmp_path):
    report = run(["verify-link", "--Y", "fixtures/planes_ci.id", "--V1", "fixtures/plane_x.id"])
    assert report.status == "verified"
    cert_file = tmp_path / "link.json"
    cert_file.write_text(json.dumps(report.certificates[0]), encoding="utf-8")
    replayed = run(["verify-link", "--certificate", str(cert_file)])
    assert replayed.status == "verified"


def test_minor_identity_uses_one_based_indices():
    report = run(["lemma42", "matrix { x, y ; z, w }", "--ring", "x,y,z,w", "--indices", "1", "1", "2", "2"])
    assert report.status == "verified"
    result = report.outputs["results"][0]
    assert result["indices"] == [1, 1, 2, 2]
    assert result["sign"] == result["predicted_sign"] == 1


def test_gaeta_run_on_fixture_matrix():
    report = run(["gaeta", "run", "fixtures/twisted_cubic.mat", "--seed", "7", "--invariants"])
    assert report.command == "gaeta run"
    assert report.status == "verified"
    assert report.seed == 7
    assert len(report.certificates) == 1
    assert report.outputs["invariants"][0]["degree"] == 3


def test_example_command():
    report = run(["example", "2.9"])
    assert report.status == "verified"
    assert report.outputs["linear_system_dimension"] == 2


def test_report_is_deterministic_without_timing():
    argv = ["hilbert", "fixtures/skew_lines.id"]
    first, second = run(argv), run(argv)
    assert first.digest == second.digest
    assert first.to_json() == second.to_json()
    assert "timing" not in first.to_dict()
    assert "timing" in run(argv + ["--timing"]).to_dict(include_timing=True)


def test_fixture_listing_and_check():
    listing = run(["fixtures"])
    names = [f["name"] for f in listing.outputs["fixtures"]]
    assert "twisted-cubic" in names and "degree-20-curve" in names
    checked = run(["fixtures", "--check", "--tag", "groebner"])
    assert checked.status == "verified"
    assert checked.outputs["checks"]["skew-lines-codim"]["diffs"] == []


def test_main_prints_json_and_returns_exit_code(capsys):
    code = main(["codim", "fixtures/skew_lines.id", "--format", "json"])
    assert code == 0
    data = json.loads(capsys.readouterr().out)
    assert data["outputs"]["codimension"] == 2
    assert data["command"] == "codim"


def test_main_text_format(capsys):
    code = main(["hull", "ideal { x^2; x*y }", "--ring", "x,y,z,w", "--format", "text"])
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith("command: hull")
    assert "unmixed: false" in out


def test_session_status_and_ring_mismatch():
    session = BiliaisonSession(seed=3, variables="x,y,z")
    assert session.initialize()
    status = session.get_system_status()
    assert status["seed"] == 3
    assert status["components"]["fixture_store"]
    with pytest.raises(RingMismatchError):
        session.set_ring("x,y")


def test_exit_codes():
    assert EXIT_CODES == {"ok": 0, "verified": 0, "refuted": 1, "inconclusive": 2, "error": 2}


def test_report_history_save_and_load(tmp_path):
    history = ReportHistoryManager()
    assert history.get_history_summary() == "No reports yet."
    history.add_report(run(["codim", "fixtures/skew_lines.id"]).to_dict())
    history.add_report(run(["gb", "ideal { x*q }", "--ring", "x,y"]).to_dict())
    summary = history.get_history_summary()
    assert "codim: ok" in summary
    assert summary.endswith("Totals: error=1, ok=1")
    path = tmp_path / "session.json"
    history.save_session(str(path))
    again = ReportHistoryManager()
    again.load_session(str(path))
    assert len(again.report_history) == 2
    assert again.session_stats["error"] == 1


def test_fixture_store_records_and_compares(tmp_path):
    (tmp_path / "line.id").write_text("ring { x, y, z, w }\nideal { x; y }\n", encoding="utf-8")
    fixture = {"name": "line", "tags": ["groebner"], "argv": ["codim", "line.id"], "expected": "line.expected.json"}
    (tmp_path / "index.json").write_text(json.dumps({"fixtures": [fixture]}), encoding="utf-8")
    store = FixtureStoreManager(str(tmp_path))
    assert store.find("line")["expected"] == "line.expected.json"
    assert store.find("missing") is None
    argv = store.resolve_argv(fixture)
    assert argv == ["codim", os.path.join(str(tmp_path), "line.id")]
    actual = run(argv).to_dict()
    store.save_expected(fixture, {"status": actual["status"], "outputs": actual["outputs"]})
    expect = store.load_expected(fixture)
    assert expect["outputs"]["codimension"] == 2
    assert FixtureStoreManager.compare(actual, expect) == []
    assert FixtureStoreManager.compare(actual, {"outputs": {"codimension": 3}}) == ["outputs.codimension: expected 3, got 2"]
