import csv
import json
import os

import pytest

from photonweyl.cli import main, parse_scenario
from photonweyl.errors import ScenarioError

SCENARIOS = os.path.join(os.path.dirname(__file__), os.pardir, "scenarios")


def scenario(name):
    return os.path.join(SCENARIOS, name)


def test_parse_sections():
    items = parse_scenario(
        "# comment\n[grid]\nk_max = 2.0\n\n[testfn f]\nvariant = random\n")
    assert items[0][0] == "grid"
    assert items[1] == ("testfn", "f", {"variant": "random"})


def test_parse_rejects_orphan_option():
    with pytest.raises(ScenarioError):
        parse_scenario("k_max = 2.0\n")


def test_parse_rejects_duplicate_key():
    with pytest.raises(ScenarioError):
        parse_scenario("[grid]\nk_max = 2.0\nk_max = 3.0\n")


def test_parse_rejects_bad_line():
    with pytest.raises(ScenarioError):
        parse_scenario("[grid]\nthis is not a key value pair\n")


def test_validate_command(capsys):
    assert main(["validate", scenario("ir_finite.cfg")]) == 0
    out = capsys.readouterr().out
    assert out.startswith("ok:")


def test_missing_file_exits_2(capsys):
    assert main(["run", scenario("no_such.cfg")]) == 2
    assert "scenario error" in capsys.readouterr().err


def test_unknown_check_fails(tmp_path, capsys):
    p = tmp_path / "bad.cfg"
    p.write_text("[grid]\nk_max = 2.0\n[task]\nname = t\ncheck = bogus\n")
    assert main(["run", str(p)]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_ir_scenarios_run_clean(capsys):
    assert main(["run", scenario("ir_finite.cfg")]) == 0
    assert main(["run", scenario("ir_divergent.cfg")]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_coulomb_scenario_with_reports(tmp_path, capsys):
    jpath = tmp_path / "report.json"
    cpath = tmp_path / "table.csv"
    rc = main(["run", scenario("coulomb.cfg"),
               "--json", str(jpath), "--csv", str(cpath)])
    assert rc == 0
    report = json.loads(jpath.read_text())
    assert report["schema"] == 1
    assert report["all_pass"] is True
    assert report["grid"]["k_max"] > 0
    names = [t["name"] for t in report["tasks"]]
    assert len(names) == len(set(names))
    with open(cpath) as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == len(report["tasks"])
    assert all(r["pass"] in ("true", "false") for r in rows)


def test_report_command_prints_sorted_json(capsys):
    rc = main(["report", scenario("ir_finite.cfg")])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    keys = list(report)
    assert keys == sorted(keys)
    assert report["schema"] == 1


def test_grid_scale_and_parallel(capsys):
    rc = main(["run", scenario("ir_finite.cfg"),
               "--grid-scale", "0.5", "--parallel", "--seed", "3"])
    assert rc == 0


def test_quantum_scenario(capsys):
    assert main(["run", scenario("quantum_source.cfg")]) == 0


def test_shift_to_zero_scenario(capsys):
    assert main(["run", scenario("shift_to_zero.cfg")]) == 0
