import json
import subprocess
import sys

import pytest

from quatsel.cli import fmt_elem, main, parse_conductor, parse_elem, parse_level, run
from quatsel.errors import InputError
from quatsel.selectivity import PROVENANCE

CHEVALLEY = {"field": "10", "delta": "2"}


def result(command, **cfg):
    code, doc = run(command, {k: str(v) for k, v in cfg.items()})
    return code, doc


def test_report_keys():
    code, doc = result("ramify", algebra="-1,-1")
    assert code == 0
    assert set(doc) == {"query", "result", "provenance", "timing_ms"}
    assert doc["result"]["places"] == ["2", "infty_0"]
    assert doc["result"]["eichler"] is False


def test_select_chevalley():
    code, doc = result("select", **CHEVALLEY)
    assert code == 0
    assert doc["result"]["outcome"] == "half"
    assert doc["result"]["admitting"] == ["gamma=0"]
    assert doc["provenance"] == [PROVENANCE["half"]]


def test_select_non_domain_has_citation():
    code, doc = result("select", field=10, delta=9)
    assert code == 0 and doc["result"]["outcome"] == "all"
    assert doc["provenance"] == [PROVENANCE["nondomain"]]


@pytest.mark.parametrize(
    "cfg",
    [CHEVALLEY, {"field": "10", "delta": "-1"}, {"field": "1", "level": "11:1", "delta": "-7"},
     {"field": "-21", "delta": "-1"}, {"field": "10", "delta": "2", "optimal": "true"}],
)
def test_every_verdict_has_one_citation(cfg):
    code, doc = run("select", cfg)
    assert code == 0 and len(doc["provenance"]) == 1


def test_determinism():
    docs = [run("select", dict(CHEVALLEY))[1]["result"] for _ in range(3)]
    texts = {json.dumps(d, sort_keys=True) for d in docs}
    assert len(texts) == 1
    a = run("verify", dict(CHEVALLEY, oracle_bound="8"))[1]["result"]
    b = run("verify", dict(CHEVALLEY, oracle_bound="8"))[1]["result"]
    assert json.dumps(a) == json.dumps(b)


def test_other_commands():
    code, doc = result("embeds", algebra="-1,-1", delta=-1)
    assert code == 0 and doc["result"]["embeds"] is True
    code, doc = result("embeds", algebra="-1,-1", delta=5)
    assert doc["result"]["embeds"] is False
    code, doc = result("genus", field=10)
    assert doc["result"]["rank"] == 1 and doc["result"]["type_number"] == 2
    code, doc = result("classfield", field=10, delta=2)
    assert doc["result"]["contains"] is True and doc["result"]["trace"]


def test_verify_chevalley():
    code, doc = result("verify", oracle_bound=10, **CHEVALLEY)
    rows = {r["order"]: r for r in doc["result"]["rows"]}
    assert not rows["End(O+O)"]["found"] and rows["End(O+a1)"]["found"]
    assert doc["result"]["disagreements"] == []


def test_assumptions_exit_code():
    code, doc = result("select", field=10, delta=2, level="7:2", conductor=7)
    assert code == 2
    assert doc["result"]["error"] == "assumptions_not_met"
    assert doc["result"]["failed"] == ["coprime_disc_level"]


@pytest.mark.parametrize(
    "cfg,key",
    [({"field": "12"}, ""), ({"field": "x"}, "field"), ({"algebra": "1"}, "algebra"), ({"oracle_bound": "q"}, "oracle_bound"),
     ({"algebra": "-1,-1", "ramification": "3,infty_0"}, "ramification")],
)
def test_input_errors_exit_1(cfg, key):
    code, doc = run("ramify", cfg)
    assert code == 1
    assert key in doc["result"]["message"]


def test_config_file_and_diagnostics(tmp_path):
    good = tmp_path / "q.cfg"
    good.write_text("# Chevalley input\nfield = 10\ndelta = 2\n")
    out = tmp_path / "out.json"
    assert main(["select", "--config", str(good), "--json-out", str(out)]) == 0
    assert json.loads(out.read_text())["result"]["outcome"] == "half"
    # command-line flags override the file
    assert main(["select", "--config", str(good), "--delta", "-1", "--json-out", str(out)]) == 0
    assert json.loads(out.read_text())["result"]["outcome"] == "all"
    bad = tmp_path / "bad.cfg"
    bad.write_text("field = 10\ncolour = blue\n")
    assert main(["select", "--config", str(bad), "--json-out", str(out)]) == 1
    bad.write_text("field = 10\njust words\n")
    assert main(["select", "--config", str(bad)]) == 1


def test_config_line_numbers(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("field = 10\n\ncolour = blue\n")
    main(["ramify", "--config", str(bad)])
    doc = json.loads(capsys.readouterr().out)
    assert "config line 3" in doc["result"]["message"]


def test_console_script_exit_codes():
    def code(*args):
        return subprocess.run([sys.executable, "-m", "quatsel.cli", *args], capture_output=True).returncode

    assert code("ramify", "--algebra=-1,-1") == 0
    assert code("select", "--field", "10", "--delta", "2", "--level", "7:2", "--conductor", "7") == 2
    assert code("ramify", "--field", "8") == 1
    assert code("nonsense") == 1


@pytest.mark.parametrize("text", ["3", "3+r", "-1/2+3/2r", "r", "-r", "2r", "-7"])
def test_elem_round_trip(text):
    x = parse_elem(text, 5)
    assert parse_elem(fmt_elem(x), 5) == x


def test_parse_errors():
    with pytest.raises(InputError):
        parse_elem("3+", 10)
    with pytest.raises(InputError):
        parse_level("7:x", 10)
    with pytest.raises(InputError):
        parse_conductor("4.7", 10)


def test_parse_level_and_conductor():
    (D,) = parse_level("3.0:custom(units=1,odd=1,exp=1)", 10)
    assert D.kind == "custom" and D.units and D.odd and D.exponent == 1
    (E,) = parse_level("11:2", 1)
    assert E.kind == "eichler" and E.exponent == 2
    f = parse_conductor("3.0^2*7", 10)
    assert f.norm() == 9 * 49
