import csv
import io
import json

import pytest
import yaml

from surflink import cli


def run(tmp_path, capsys, sub, cfg=None, *flags):
    argv = [sub]
    if cfg is not None:
        path = tmp_path / "scenario.yaml"
        path.write_text(yaml.safe_dump(cfg))
        argv += ["--config", str(path)]
    code = cli.main(argv + list(flags))
    out, err = capsys.readouterr()
    return code, out, err


def records(out):
    return [json.loads(line) for line in out.splitlines() if line.strip()]


SHEAR = {"map": "shear", "a": [0, 0.5], "b": [3, 0.5], "z": [0.25, 0]}


def test_shear_triple(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, "triple", SHEAR)
    (r,) = records(out)
    assert code == 0
    assert r["value"] == 3 and r["expected"] == 3 and r["pass"] is True
    assert r["provenance"].startswith("PAPER:") and r["schema_version"] == 1


def test_zoo_list_table(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, "zoo-list", None, "--format", "table")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 6
    for name in ("shear", "cosine-flow", "radial-fast", "bump-annuli", "pendulum"):
        assert any(name in ln for ln in lines[1:])


def test_csv_format(tmp_path, capsys):
    code, out, _ = run(tmp_path, capsys, "triple", SHEAR, "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][:3] == ["criterion", "operation", "value"]
    assert rows[1][1] == "triple" and rows[1][2] == "3"


def test_unknown_key_is_config_error(tmp_path, capsys):
    code, _, err = run(tmp_path, capsys, "triple", dict(SHEAR, colour="blue"))
    assert code == 2 and "colour" in err


def test_bad_point_is_config_error(tmp_path, capsys):
    code, _, _ = run(tmp_path, capsys, "triple", dict(SHEAR, z=[0.25]))
    assert code == 2


def test_unknown_map(tmp_path, capsys):
    code, _, _ = run(tmp_path, capsys, "rotnum", {"map": "lorenz", "z": [0, 0]})
    assert code == 2


def test_unknown_subcommand(capsys):
    assert cli.main(["frobnicate"]) == 2
    capsys.readouterr()


def test_numeric_fault_exit(tmp_path, capsys):
    # a point that does not come back within one iterate of the golden rotation
    cfg = {"map": "rigid-rotation", "params": {"alpha": 0.6180339887}, "z": [0.1, 0.0],
           "n_max": 1}
    code, _, err = run(tmp_path, capsys, "rotnum", cfg)
    assert code == 3 and "NoReturn" in err


def test_rotnum_rigid(tmp_path, capsys):
    cfg = {"map": "rigid-rotation", "params": {"alpha": 0.3}, "z": [0.1, 0.0]}
    code, out, _ = run(tmp_path, capsys, "rotnum", cfg)
    assert code == 0 and records(out)[0]["value"] == pytest.approx(0.3, abs=1e-9)


def test_action_stock_measure(tmp_path, capsys):
    cfg = {"map": "bump-annuli", "params": {"k_max": 3}, "measure": {"kind": "stock"},
           "a": [0, 0], "b": None, "window": [[-1, -1], [1, 1]]}
    from surflink.zoo import zoo
    cfg["b"] = [float(v) for v in zoo("bump-annuli", k_max=3).fixed["z2"]]
    code, out, _ = run(tmp_path, capsys, "action", cfg)
    (r,) = records(out)
    assert code == 0 and r["value"] == pytest.approx(-2, abs=1e-9)


def test_out_file_and_json_config(tmp_path, capsys):
    path = tmp_path / "s.json"
    path.write_text(json.dumps(SHEAR))
    out = tmp_path / "rec.jsonl"
    assert cli.main(["triple", "--config", str(path), "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert records(out.read_text())[0]["value"] == 3


def test_reproduce_subset(tmp_path, capsys):
    code, out, err = run(tmp_path, capsys, "reproduce-paper", {"only": [1, 10]}, "--seed", "3")
    recs = records(out)
    assert code == 0
    assert {r["criterion"] for r in recs} == {1, 10, 12}
    assert "PASS" in err
    summary = recs[-1]
    assert summary["operation"] == "reproduce-paper" and len(summary["stream_digest"]) == 64
