import csv
import io
import json

import pytest

from irratio import cli, hankel


def run_json(*argv, env=None):
    code, text = cli.run(list(argv) + ["--format", "json"], env or {})
    assert code == 0, text
    return json.loads(text)


def strip_clock(doc):
    doc = dict(doc)
    doc.pop("wall_clock_seconds")
    return doc


def test_envelope_keys_in_stable_order():
    doc = run_json("sequence", "--family", "log2", "--nmax", "3")
    assert list(doc) == ["command", "parameters", "precision", "results", "provenance",
                         "wall_clock_seconds"]
    assert doc["precision"]["digits"] == 50
    row = doc["results"]["rows"][2]
    assert (row["a"], row["b"]) == ("13", "9")
    assert set(row["r"]) == {"value", "digits"}


def test_json_is_deterministic_apart_from_the_clock():
    a = run_json("hankel", "--family", "log3", "--nmax", "4")
    b = run_json("hankel", "--family", "log3", "--nmax", "4")
    assert strip_clock(a) == strip_clock(b)


def test_rationals_are_p_over_q():
    doc = run_json("sequence", "--family", "pi", "--nmax", "2")
    assert doc["results"]["rows"][1]["u"] == "-2"
    doc = run_json("verify", "--which", "kronecker")
    assert doc["results"]["rows"][0]["dets"][0] == "1"
    assert doc["results"]["rows"][1]["dets"][1] == "-1"


def test_hankel_raises_precision_and_says_so():
    doc = run_json("hankel", "--family", "log3", "--nmax", "12", "--precision", "10")
    assert doc["precision"]["bits"] > cli.digits_to_bits(10)
    assert "policy" in doc["precision"]["note"]
    assert all(not r["R"]["value"].startswith("-") for r in doc["results"]["rows"])


def test_criterion_lines():
    doc = run_json("criterion", "--family", "log3", "--nmax", "4")
    res = doc["results"]
    assert res["prop1"] == "FAIL" and res["prop2"] == "PASS"
    assert res["prop2_line"] == "0.6004 < 1 PASS"
    assert res["epsilon"]["closed"] == "(sqrt(3)-1)^2"


def test_fekete_text_and_csv():
    code, text = cli.run(["fekete", "--nmax", "4", "--precision", "20"], {})
    assert code == 0 and "limit_eps_over_4" in text
    code, text = cli.run(["fekete", "--nmax", "4", "--format", "csv"], {})
    rows = list(csv.DictReader(io.StringIO(text)))
    assert [r["n"] for r in rows] == ["2", "3", "4"]
    assert rows[1]["delta"].startswith("0.6299605249")


@pytest.mark.parametrize("which,extra", [
    ("vandermonde", ["--trials", "20"]),
    ("scaling", ["--trials", "20"]),
    ("kronecker", []),
    ("stutter", ["--k", "3"]),
    ("zetaq", ["--q=-1/2"]),
])
def test_verify_suites_pass(which, extra):
    doc = run_json("verify", "--which", which, *extra)
    assert doc["results"]["status"] == "PASS"


def test_usage_errors_exit_one():
    for argv in (["hankel"], ["hankel", "--family", "nope"], ["verify", "--which", "bogus"],
                 ["fekete", "--eps", "0"], ["verify", "--which", "zetaq", "--q", "2"],
                 ["sequence", "--family", "log2", "--precision", "x"],
                 ["criterion", "--family", "log2", "--format", "csv", "--nmax", "0"], []):
        code, text = cli.run(argv, {})
        assert code == 1, argv
        assert text.startswith("irratio: error")


def test_identity_failure_exits_two(monkeypatch):
    def broken(opts, bits, digits):
        return [{"ok": False}], ["exact"], {}
    monkeypatch.setitem(cli.VERIFY, "kronecker", broken)
    code, text = cli.run(["verify", "--which", "kronecker"], {})
    assert code == 2 and "FAIL" in text


def test_precision_exhaustion_exits_three(monkeypatch):
    def exhausted(*args, **kwargs):
        raise hankel.PrecisionExhausted("lost 300 of 256 bits")
    monkeypatch.setattr(hankel, "hankel_table", exhausted)
    code, text = cli.run(["hankel", "--family", "log2"], {})
    assert code == 3 and "precision exhausted" in text


def test_layering_default_config_env_flag(tmp_path):
    cfg = tmp_path / "irratio.cfg"
    cfg.write_text("# defaults\nprecision = 20\nnmax=2\n")
    doc = run_json("sequence", "--family", "log2", "--config", str(cfg))
    assert doc["precision"]["digits"] == 20 and doc["parameters"]["nmax"] == 2
    env = {"IRRATIO_CONFIG": str(cfg), "IRRATIO_PRECISION": "30"}
    doc = run_json("sequence", "--family", "log2", env=env)
    assert doc["precision"]["digits"] == 30 and doc["parameters"]["nmax"] == 2
    doc = run_json("sequence", "--family", "log2", "--precision", "40", env=env)
    assert doc["precision"]["digits"] == 40


def test_env_can_select_format(tmp_path):
    code, text = cli.run(["fekete", "--nmax", "3"], {"IRRATIO_FORMAT": "json"})
    assert code == 0 and json.loads(text)["command"] == "fekete"


def test_bad_config(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert cli.run(["fekete", "--config", str(cfg)], {})[0] == 1
    cfg.write_text("precision\n")
    assert cli.run(["fekete", "--config", str(cfg)], {})[0] == 1


def test_main_writes_streams(capsys):
    assert cli.main(["verify", "--which", "kronecker"]) == 0
    assert "first_vanishing" in capsys.readouterr().out
    assert cli.main(["hankel"]) == 1
    assert "error" in capsys.readouterr().err
