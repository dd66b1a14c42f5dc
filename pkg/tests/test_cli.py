import json

import pytest

from ballq import cli
from ballq.certs import Certificate


def _run(capsys, *argv):
    code = cli.main(["verify", *argv, "--jobs", "1"])
    return code, capsys.readouterr().out


def _strip(doc):
    return [{k: v for k, v in c.items() if k != "seconds"} for c in doc["certificates"]]


def test_index_json(capsys, tmp_path):
    code, out = _run(capsys, "index", "--cache-dir", str(tmp_path))
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "ballq-cert/1"
    idx = [c for c in doc["certificates"] if c["claim"] == "pi_index"][0]
    assert (idx["computed"], idx["expected"], idx["status"]) == (864, 864, "pass")


def test_intersections_table(capsys):
    code, out = _run(capsys, "intersections", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    table = [c for c in doc["certificates"] if c["claim"] == "intersections.E1.E2"][0]["details"]["table"]
    assert table["E1.E2"] == 13


def test_markdown(capsys):
    code, out = _run(capsys, "presentation", "--format", "markdown")
    assert code == 0
    assert out.startswith("# ballq verify presentation")
    assert "| relators.gamma | pass |" in out


def test_unknown_command_exits_2(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["verify", "nonsense"])
    assert e.value.code == 2


def test_failure_exits_1(capsys, monkeypatch):
    monkeypatch.setitem(cli.RUNNERS, "albanese", lambda atlas, opts: [Certificate("x", "g", 1, 2, "fail")])
    code, out = _run(capsys, "albanese")
    assert code == 1
    assert json.loads(out)["summary"]["fail"] == 1


def test_ordering_is_by_claim(capsys):
    _, out = _run(capsys, "mirrors")
    claims = [c["claim"] for c in json.loads(out)["certificates"]]
    assert claims == sorted(claims)


def test_cache_does_not_change_certificates(capsys, tmp_path):
    _, first = _run(capsys, "index", "--cache-dir", str(tmp_path))
    assert list(tmp_path.glob("*.ctab"))
    _, second = _run(capsys, "index", "--cache-dir", str(tmp_path))
    _, uncached = _run(capsys, "index")
    assert _strip(json.loads(first)) == _strip(json.loads(second)) == _strip(json.loads(uncached))


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("BALLQ_SEED", "99")
    assert cli._seed() == 99
    monkeypatch.delenv("BALLQ_SEED")
    assert cli._seed() == cli.DEFAULT_SEED


def test_all_seedless_is_deterministic(capsys, tmp_path):
    code, out = cli.main(["verify", "all", "--seedless", "--jobs", "2", "--cache-dir", str(tmp_path)]), capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    assert doc["summary"]["fail"] == 0
    skipped = {c["claim"] for c in doc["certificates"] if c["status"] == "skipped"}
    assert "membership.random_agreement" in skipped
    code2 = cli.main(["verify", "all", "--seedless", "--jobs", "1", "--cache-dir", str(tmp_path)])
    assert code2 == 0
    assert _strip(json.loads(capsys.readouterr().out)) == _strip(doc)
