import json

from click.testing import CliRunner

from puremaps.cli import main

RUNNER = CliRunner()


def _run(args):
    return RUNNER.invoke(main, args, catch_exceptions=False)


def test_classify_builtin_bloch_exits_one():
    res = _run(["classify", "--map", "dim2-bloch:alpha=0.25", "--samples", "60"])
    assert res.exit_code == 1
    data = json.loads(res.output)
    assert data["verdicts"]["bi_orthogonal"]["status"] == "holds"
    assert data["verdicts"]["locally_tp_preserving"]["status"] == "fails"


def test_classify_generated_canonical_exits_zero(tmp_path):
    fixture = tmp_path / "map.json"
    res = _run(
        [
            "gen",
            "--fixture",
            "canonical-map",
            "--source-dims",
            "2,2",
            "--target-dims",
            "3,2",
            "--kinds",
            "linear,antilinear",
            "--seed",
            "3",
            "--output",
            str(fixture),
        ]
    )
    assert res.exit_code == 0
    res = _run(["classify", "--input", str(fixture), "--samples", "40"])
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert all(v["status"] == "holds" for v in data["verdicts"].values())
    assert data["locally_solid"] == "structurally_true"


def test_classify_is_byte_deterministic(tmp_path):
    out0 = tmp_path / "a.json"
    out1 = tmp_path / "b.json"
    args = ["classify", "--map", "conjugation:dims=2", "--samples", "30", "--seed", "9"]
    assert _run(args + ["--output", str(out0)]).exit_code == 0
    assert _run(args + ["--output", str(out1)]).exit_code == 0
    assert out0.read_bytes() == out1.read_bytes()


def test_classify_writes_figures(tmp_path):
    figs = tmp_path / "figs"
    res = _run(
        [
            "classify",
            "--map",
            "dim2-bloch:alpha=0.25",
            "--samples",
            "30",
            "--figures",
            str(figs),
        ]
    )
    assert res.exit_code == 1
    for name in ("pairs.csv", "tp_scatter.png", "verdict_summary.png"):
        path = figs / name
        assert path.exists() and path.stat().st_size > 0
    header = (figs / "pairs.csv").read_text().splitlines()[0]
    assert "tp_in" in header and "tp_out" in header


def test_reconstruct_conjugation_verified():
    res = _run(["reconstruct", "--map", "conjugation:dims=2+3", "--samples", "40"])
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["status"] == "verified"
    assert data["finite_dim"] is True
    kinds = [f["kind"] for f in data["induced_map"]["fibers"]]
    assert kinds == ["antilinear", "antilinear"]
    assert data["verification"]["status"] == "holds"


def test_reconstruct_bloch_reports_failure():
    res = _run(["reconstruct", "--map", "dim2-bloch:alpha=0.25"])
    assert res.exit_code == 1
    data = json.loads(res.output)
    assert data["status"] == "failed"
    assert data["failure"]["kind"] == "reconstruction"
    assert data["failure"]["reason"] in ("phase_probe_mismatch", "validation_failed")


def test_reconstruct_round_trips_generated_map(tmp_path):
    fixture = tmp_path / "map.json"
    _run(
        [
            "gen",
            "--fixture",
            "canonical-map",
            "--source-dims",
            "2",
            "--target-dims",
            "4",
            "--kinds",
            "antilinear",
            "--seed",
            "5",
            "--output",
            str(fixture),
        ]
    )
    res = _run(["reconstruct", "--input", str(fixture), "--samples", "30"])
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["induced_map"]["fibers"][0]["kind"] == "antilinear"


def test_jordan_split_planted(tmp_path):
    fixture = tmp_path / "iso.json"
    _run(
        [
            "gen",
            "--fixture",
            "jordan-iso",
            "--dims",
            "2,3",
            "--tags",
            "mult,anti",
            "--seed",
            "1",
            "--output",
            str(fixture),
        ]
    )
    res = _run(["jordan-split", "--input", str(fixture), "--samples", "8"])
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["tags"] == ["mult", "anti"]
    assert data["F_blocks"] == [0]
    assert all(v["status"] == "holds" for v in data["verified"].values())


def test_jordan_split_rejects_scaled_table(tmp_path):
    fixture = tmp_path / "iso.json"
    _run(
        [
            "gen",
            "--fixture",
            "jordan-iso",
            "--dims",
            "2",
            "--output",
            str(fixture),
        ]
    )
    data = json.loads(fixture.read_text())
    for img in data["images"]:
        img["blocks"] = [
            [[[2 * re, 2 * im] for re, im in row] for row in blk] for blk in img["blocks"]
        ]
    fixture.write_text(json.dumps(data))
    res = _run(["jordan-split", "--input", str(fixture)])
    assert res.exit_code == 1
    out = json.loads(res.output)
    assert out["error"] == "not_jordan_star_homomorphism"


def test_banach_stone_round_trip(tmp_path):
    nu_file = tmp_path / "nu.json"
    nu_file.write_text(json.dumps({"n": 3, "s": 2, "nu": [2, 0]}))
    res = _run(["banach-stone", "--input", str(nu_file)])
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["injective"] is True
    table_file = tmp_path / "table.json"
    table_file.write_text(json.dumps(data["table"]))
    res = _run(["banach-stone", "--input", str(table_file)])
    assert res.exit_code == 0
    back = json.loads(res.output)
    assert back["point_map"]["nu"] == [2, 0]


def test_banach_stone_rejects_averaging(tmp_path):
    half = {"algebra": [1], "blocks": [[[[0.5, 0.0]]]]}
    table = {"source": [1, 1], "target": [1], "images": [half, half]}
    path = tmp_path / "avg.json"
    path.write_text(json.dumps(table))
    res = _run(["banach-stone", "--input", str(path)])
    assert res.exit_code == 1
    assert json.loads(res.output)["error"] == "not_star_homomorphism"


def test_operational_errors_exit_two(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert _run(["classify", "--input", str(bad)]).exit_code == 2
    assert _run(["classify", "--map", "no-such-map"]).exit_code == 2
    assert _run(["classify"]).exit_code == 2
    assert (
        _run(["classify", "--map", "conjugation:dims=2", "--input", str(bad)]).exit_code
        == 2
    )
    assert _run(["jordan-split"]).exit_code == 2
    assert _run(["banach-stone", "--input", str(tmp_path / "missing.json")]).exit_code == 2
    assert _run(["reconstruct", "--map", "dim2-bloch:alpha=0.9"]).exit_code == 2


def test_gen_is_deterministic(tmp_path):
    out0 = tmp_path / "a.json"
    out1 = tmp_path / "b.json"
    args = [
        "gen",
        "--fixture",
        "canonical-map",
        "--source-dims",
        "2,3",
        "--target-dims",
        "3,3",
        "--seed",
        "7",
    ]
    assert _run(args + ["--output", str(out0)]).exit_code == 0
    assert _run(args + ["--output", str(out1)]).exit_code == 0
    assert out0.read_bytes() == out1.read_bytes()


def test_gen_algebra_fixture():
    res = _run(["gen", "--fixture", "algebra", "--dims", "2,1,3"])
    assert res.exit_code == 0
    assert json.loads(res.output) == {"block_dims": [2, 1, 3]}
