import json
import os
import re
import shlex
from pathlib import Path

import pytest

from braidclass.catalog import group_to_table_json
from braidclass.cli import main, parse_subgroup
from braidclass.errors import IndexOutOfRange, InvalidSubgroup, ParseError

from conftest import G, element, klein_cocycle

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).resolve().parent / "golden"


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def stable(out: str) -> str:
    """JSON output without the timing and cache fields."""
    data = json.loads(out)
    if isinstance(data, dict):
        data.pop("meta", None)
    return json.dumps(data, sort_keys=True, indent=1)


# -- subgroup specs --------------------------------------------------------------------

def test_parse_subgroup_forms():
    S3 = G("S3")
    assert parse_subgroup(S3, "whole").order == 6
    assert parse_subgroup(S3, "trivial").order == 1
    assert parse_subgroup(S3, "order:3").order == 3
    assert parse_subgroup(S3, "index:0").order == 1
    assert parse_subgroup(S3, "gens:3").order == 3
    assert parse_subgroup(S3, "cycles:(1 2 3)").elements == parse_subgroup(S3, "order:3").elements
    assert parse_subgroup(S3, "cycles:(1 2);(1 2 3)").order == 6
    assert parse_subgroup(S3, "0,3,4").order == 3
    assert parse_subgroup(S3, f"0,{element(S3, '(1 2)')}").order == 2


def test_parse_subgroup_errors():
    S3 = G("S3")
    with pytest.raises(InvalidSubgroup):
        parse_subgroup(S3, "order:5")
    with pytest.raises(InvalidSubgroup):
        parse_subgroup(S3, "index:99")
    with pytest.raises(InvalidSubgroup):
        parse_subgroup(S3, "0,1,4")
    with pytest.raises(ParseError):
        parse_subgroup(S3, "order:three")
    with pytest.raises(IndexOutOfRange):
        parse_subgroup(S3, "gens:17")
    with pytest.raises(ParseError):
        parse_subgroup(G("Z2xZ2"), "cycles:(1 2)")


# -- exit codes --------------------------------------------------------------------------

@pytest.mark.parametrize("argv,code", [
    (["classify", "center", "S3"], 0),
    (["classify", "center", "S5"], 3),
    (["chartab", "S4", "--bound", "10"], 3),
    (["goursat", "S4", "S4", "--bound", "10"], 3),
    (["classify", "rep", "NoSuchGroup"], 2),
    (["classify", "gt", "S3", "--subgroup", "order:4"], 2),
    (["classify", "gt", "S3", "--subgroup", "0,1,4"], 2),
    (["classify", "gt", "S3", "--subgroup", "gens:40"], 2),
    (["classify", "gt", "S3", "--subgroup", "whole", "--cocycle", "/nonexistent.json"], 2),
])
def test_exit_codes(argv, code, capsys):
    got, out, err = run(argv, capsys)
    assert got == code
    if code:
        assert out == "" and err.count("\n") == 1 and err.startswith("error:")


def test_usage_error_exits_through_argparse(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["classify"])
    assert exc.value.code == 2


def test_not_a_group_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"table": [[0, 1, 2], [1, 0, 0], [2, 2, 1]]}))
    code, _, err = run(["classify", "rep", str(path)], capsys)
    assert code == 2 and "error:" in err


def test_invalid_cocycle_file(tmp_path, capsys):
    path = tmp_path / "mu.json"
    rows = [["0"] * 4 for _ in range(4)]
    rows[1][2] = "1/3"
    path.write_text(json.dumps({"group": "Z2xZ2", "values": rows}))
    code, _, err = run(["classify", "gt", "Z2xZ2", "--subgroup", "whole",
                        "--cocycle", str(path)], capsys)
    assert code == 2 and "cocycle" in err


def test_cocycle_file_is_used(tmp_path, capsys):
    K = G("Z2xZ2").whole()
    path = tmp_path / "klein.json"
    path.write_text(klein_cocycle(K).to_json("Z2xZ2"))
    code, out, _ = run(["classify", "gt", "Z2xZ2", "--subgroup", "whole",
                        "--cocycle", str(path), "--json"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["count"] == 16 and rep["input"]["cocycle"] is not None
    _, plain, _ = run(["classify", "gt", "Z2xZ2", "--subgroup", "whole", "--json"], capsys)
    assert stable(plain) != stable(out)


# -- outputs -------------------------------------------------------------------------------

def test_center_s3_report(capsys):
    code, out, _ = run(["classify", "center", "S3", "--json"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["count"] == 4
    assert sorted(b.get("label", "") for b in rep["braidings"]) == ["", "", "reverse", "standard"]


def test_gaugings_q8(capsys):
    _, out, _ = run(["gaugings", "Q8", "--json"], capsys)
    rep = json.loads(out)
    assert rep["gaugings"] == 512 and rep["invertibles"] == 8 and rep["grading_group"] == [2, 2, 2]
    _, text, _ = run(["gaugings", "Q8"], capsys)
    assert "gaugings: 512" in text


def test_pointed_s3(capsys):
    _, out, _ = run(["classify", "pointed", "S3", "--json"], capsys)
    rep = json.loads(out)
    assert rep["count"] == 0 and rep["diagnostics"] == ["NonAbelianPointed"]


def test_groups_show_round_trip(tmp_path, capsys):
    code, out, _ = run(["groups", "show", "S4", "--json"], capsys)
    data = json.loads(out)
    assert code == 0 and data["order"] == 24
    path = tmp_path / "s4.json"
    path.write_text(json.dumps({"table": data["table"]}))
    from braidclass.catalog import parse_group
    assert parse_group(str(path)) == G("S4")


def test_groups_list(capsys):
    code, out, _ = run(["groups", "list", "--json"], capsys)
    names = [r["name"] for r in json.loads(out)]
    assert code == 0 and {"S3", "S4", "A5", "Q8", "D8"} <= set(names)


# -- cache ------------------------------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ["classify", "center", "S3"],
    ["classify", "gt", "S4", "--subgroup", "order:4"],
    ["subcats", "D8"],
    ["chartab", "A5"],
    ["gaugings", "Z2xS3"],
    ["goursat", "S3", "Z2"],
])
def test_cached_and_uncached_runs_agree(argv, capsys):
    argv = argv + ["--json"]
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    _, fresh, _ = run(argv + ["--no-cache"], capsys)
    assert json.loads(first)["meta"]["cache"] == "miss"
    assert json.loads(second)["meta"]["cache"] == "hit"
    assert json.loads(fresh)["meta"]["cache"] == "off"
    assert stable(first) == stable(second) == stable(fresh)


def test_cache_shared_by_equal_tables(tmp_path, capsys):
    path = tmp_path / "mystery.json"
    path.write_text(json.dumps({"table": G("S3").mul.tolist(), "label": "mystery"}))
    run(["classify", "center", "S3", "--json"], capsys)
    _, out, _ = run(["classify", "center", str(path), "--json"], capsys)
    rep = json.loads(out)
    assert rep["meta"]["cache"] == "hit" and rep["input"]["group"] == "mystery"
    _, direct, _ = run(["classify", "center", str(path), "--json", "--no-cache"], capsys)
    assert stable(out) == stable(direct)


def test_chartab_cache_keeps_caller_names(tmp_path, capsys):
    path = tmp_path / "s3.json"
    path.write_text(group_to_table_json(G("S3")).replace('"S3"', '"plain"'))
    run(["chartab", "S3", "--json"], capsys)
    _, out, _ = run(["chartab", str(path), "--json"], capsys)
    _, direct, _ = run(["chartab", str(path), "--json", "--no-cache"], capsys)
    assert json.loads(out)["meta"]["cache"] == "hit"
    assert stable(out) == stable(direct)


def test_cache_dir_from_environment(tmp_path, capsys, monkeypatch):
    target = tmp_path / "elsewhere"
    monkeypatch.setenv("BRAIDCLASS_CACHE_DIR", str(target))
    run(["gaugings", "S3", "--json"], capsys)
    assert list(target.rglob("*.json"))


# -- README examples --------------------------------------------------------------------------

def readme_commands():
    text = (ROOT / "README.md").read_text()
    cmds = []
    for block in re.findall(r"```console\n(.*?)```", text, re.S):
        for line in block.splitlines():
            if line.startswith("$ braidclass "):
                cmds.append(shlex.split(line[len("$ braidclass "):]))
    return cmds


def golden_name(argv):
    return re.sub(r"[^A-Za-z0-9]+", "_", " ".join(argv)).strip("_") + ".json"


def test_readme_has_commands():
    assert len(readme_commands()) >= 8


@pytest.mark.parametrize("argv", readme_commands(), ids=lambda a: " ".join(a))
def test_readme_command_matches_golden(argv, capsys):
    code, out, err = run(argv, capsys)
    record = {"argv": argv, "exit": code,
              "stdout": stable(out) if "--json" in argv and code == 0 else out,
              "stderr": err}
    path = GOLDEN / golden_name(argv)
    if os.environ.get("BRAIDCLASS_REGEN_GOLDEN"):
        GOLDEN.mkdir(exist_ok=True)
        path.write_text(json.dumps(record, indent=1, sort_keys=True) + "\n")
    expected = json.loads(path.read_text())
    assert record == expected
