"""End-to-end CLI runs through main(), checking text, files, exit codes."""
import hashlib
import json
import os
from fractions import Fraction
from pathlib import Path

import pytest

from ergopt import GridPotential, LocallyConstantPotential, save_potential
from ergopt.cli import main

SAMPLES = Path(__file__).resolve().parent.parent / "samples"
I01 = str(SAMPLES / "i01.json")
I01111 = str(SAMPLES / "i01111.json")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_alpha_anchor(capsys):
    code, out, err = run(capsys, "alpha", I01)
    assert code == 0
    assert err == ""
    assert "alpha = 1/2" in out
    assert "cycle 01" in out


def test_alpha_runs_are_byte_identical(capsys):
    first = run(capsys, "alpha", I01111)
    second = run(capsys, "alpha", I01111)
    assert first == second
    assert first[0] == 0
    assert "alpha = 1/5" in first[1]
    assert "cycle 01111" in first[1]


def test_subaction_anchor(capsys):
    code, out, _ = run(capsys, "subaction", I01)
    assert code == 0
    assert "u 0 = 0" in out
    assert "u 1 = 1/2" in out
    assert "contact words: 01 10" in out


def test_subaction_writes_csv_and_svg(capsys, tmp_path):
    csv = tmp_path / "u.csv"
    svg = tmp_path / "u.svg"
    code, out, _ = run(
        capsys, "subaction", I01, "--csv", str(csv), "--svg", str(svg)
    )
    assert code == 0
    text = csv.read_text(encoding="utf-8")
    assert text.startswith("word,x,value\n")
    assert "\r" not in text
    xs = [float(line.split(",")[1]) for line in text.splitlines()[1:]]
    assert xs == sorted(xs)
    svg_text = svg.read_text(encoding="utf-8")
    assert svg_text.lstrip().startswith("<svg")
    assert "polyline" in svg_text


def test_sweep_config_layering(capsys, tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text('[sweep]\nbetas = "1,2,4,8"\ndepth = 2\n', encoding="utf-8")

    def data_rows(out):
        lines = out.splitlines()
        start = lines.index("beta pressure energy entropy gap") + 1
        rows = []
        for line in lines[start:]:
            if line.startswith("alpha"):
                break
            rows.append(line)
        return rows

    code, out, _ = run(capsys, "sweep", I01, "--config", str(cfg))
    assert code == 0
    assert len(data_rows(out)) == 4
    # explicit flags win over the config file
    code, out, _ = run(
        capsys, "sweep", I01, "--config", str(cfg), "--betas", "1,2"
    )
    assert code == 0
    assert len(data_rows(out)) == 2


def test_unknown_config_key(capsys, tmp_path):
    cfg = tmp_path / "bad.toml"
    cfg.write_text("[sweep]\nwrong = 1\n", encoding="utf-8")
    code, _, err = run(capsys, "sweep", I01, "--config", str(cfg))
    assert code == 2
    assert "unknown config key" in err


def test_missing_input(capsys):
    code, _, err = run(capsys, "alpha", "no-such-file.json")
    assert code == 2
    assert "not found" in err


def test_malformed_input_reports_location(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(
        '{"alphabet": 2, "depth": 1, "terms": [{"word": "2", "coef": 1}]}',
        encoding="utf-8",
    )
    code, _, err = run(capsys, "alpha", str(bad))
    assert code == 2
    assert "terms[0].word" in err


def test_grid_potential_rejected_by_sweep(capsys, tmp_path):
    grid = tmp_path / "g.json"
    save_potential(GridPotential.builtin("sin2", 64), grid)
    code, _, err = run(capsys, "sweep", str(grid))
    assert code == 2
    assert "symbolic" in err


def test_budget_flag_trips(capsys):
    try:
        code, _, err = run(capsys, "alpha", I01111, "--budget", "4")
    finally:
        os.environ.pop("ERGOPT_BUDGET", None)
    assert code == 2
    assert "budget" in err


def test_rotation_anchor_and_infeasible(capsys, tmp_path):
    obs = tmp_path / "i1.json"
    save_potential(LocallyConstantPotential.indicator((1,), 2), obs)
    code, out, _ = run(
        capsys, "rotation", I01, "--observable", str(obs), "--target", "1/2"
    )
    assert code == 0
    assert "beta = 1/2" in out
    assert "cycle 01" in out
    assert "gap 0" in out
    assert "on boundary: no" in out
    code, _, err = run(
        capsys, "rotation", I01, "--observable", str(obs), "--target", "3/2"
    )
    assert code == 4
    assert "unattainable" in err


def test_rotation_requires_observable(capsys):
    code, _, err = run(capsys, "rotation", I01, "--target", "1/2")
    assert code == 2
    assert "observable" in err


def test_plot_all_kinds(capsys, tmp_path):
    grid = tmp_path / "g.json"
    save_potential(GridPotential.builtin("sin2", 256), grid)
    for src in (I01, str(grid)):
        for what in ("potential", "subaction", "residual"):
            out_path = tmp_path / f"{Path(src).stem}-{what}.svg"
            code, _, _ = run(
                capsys, "plot", src, "--what", what, "--out", str(out_path)
            )
            assert code == 0
            assert out_path.read_text(encoding="utf-8").lstrip().startswith("<svg")


def test_manifest_contents(capsys, tmp_path):
    manifest = tmp_path / "m.json"
    csv = tmp_path / "u.csv"
    code, _, _ = run(
        capsys, "subaction", I01, "--csv", str(csv), "--manifest", str(manifest)
    )
    assert code == 0
    doc = json.loads(manifest.read_text(encoding="utf-8"))
    assert doc["tool"] == "ergopt"
    assert doc["command"] == "subaction"
    assert doc["input"]["path"] == I01
    assert doc["input"]["sha256"] == hashlib.sha256(
        Path(I01).read_bytes()
    ).hexdigest()
    assert doc["outputs"] == [str(csv)]
    assert doc["options"]["method"] == "exact"
    assert len(doc["config_hash"]) == 64
    assert doc["started"] <= doc["finished"]
    # same options, same fingerprint
    manifest2 = tmp_path / "m2.json"
    run(capsys, "subaction", I01, "--csv", str(csv), "--manifest", str(manifest2))
    doc2 = json.loads(manifest2.read_text(encoding="utf-8"))
    assert doc2["config_hash"] == doc["config_hash"]


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "ergopt" in capsys.readouterr().out
