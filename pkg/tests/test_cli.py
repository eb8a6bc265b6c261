import hashlib
import json
import math
import subprocess
import sys

import pytest

from lossyhom import cli
from lossyhom.streams import read_streams


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_preset(capsys):
    code, out, _ = run(["validate", "--preset", "sample-I", "--phase", "measured"], capsys)
    assert code == 0
    assert out.startswith("ok") and "2phi_rt=170 deg" in out


def test_validate_failure(capsys):
    code, out, _ = run(["validate", "--r", "0.8", "--t", "0.8"], capsys)
    assert code == 1
    assert "|r+t| = 1.6 > 1" in out


def test_validate_polar_lossless(capsys):
    argv = ["validate", "--r-abs", "0.7071067811865476", "--phi-r-deg", "90",
            "--t-abs", "0.7071067811865476", "--phi-t-deg", "0", "--format", "json"]
    code, out, _ = run(argv, capsys)
    data = json.loads(out)
    assert code == 0 and data["ok"] and data["lossless"]


def test_validate_spec_json(tmp_path, capsys):
    path = tmp_path / "bs.json"
    path.write_text(json.dumps({"r": [0.5, 0], "t": [0.5, 0], "label": "x"}))
    code, out, _ = run(["validate", "--spec-json", str(path), "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["loss_fraction"] == pytest.approx(0.5)


def test_ambiguous_spec_source(capsys):
    code, _, err = run(["validate", "--preset", "sample-I", "--r", "0.1", "--t", "0.1"], capsys)
    assert code == 1 and "exactly one" in err


def test_hom_dip(tmp_path, capsys):
    out = tmp_path / "scan.csv"
    code, _, err = run(["hom", "--preset", "sample-I", "--phase", "measured",
                        "--max-overlap", "0.62", "-o", str(out)], capsys)
    assert code == 0
    assert "kind=dip" in err and "quantum_flag=True" in err
    contrast = float(err.split("contrast=")[1].split()[0])
    assert contrast == pytest.approx(0.61, abs=0.01)
    assert out.read_text().startswith("delay_fs,coincidence\n")
    manifest = json.loads((tmp_path / "scan.csv.manifest.json").read_text())
    assert manifest["command"] == "hom" and str(out) in manifest["outputs"]


def test_hom_fit_contrast_json(tmp_path, capsys):
    out = tmp_path / "scan.json"
    code, _, err = run(["hom", "--preset", "sample-II", "--fit-contrast", "0.72",
                        "-o", str(out)], capsys)
    data = json.loads(out.read_text())
    assert code == 0 and data["kind"] == "peak"
    assert data["contrast"] == pytest.approx(0.72, abs=1e-12)
    assert 0 <= data["max_overlap"] <= 1


def test_hom_design_peak_and_flat(capsys):
    code, _, err = run(["hom", "--preset", "sample-II", "--phase", "design",
                        "--max-overlap", "1"], capsys)
    assert code == 0 and "kind=peak" in err and "contrast=0.9967" in err
    code, _, err = run(["hom", "--r-abs", "0.5", "--t-abs", "0.5", "--phi-t-deg", "45"], capsys)
    assert code == 0 and "kind=flat" in err


def test_hom_montecarlo(tmp_path, capsys):
    out = tmp_path / "mc.csv"
    argv = ["hom", "--mode", "montecarlo", "--preset", "sample-II", "--duration", "0.5",
            "--delay-points", "3", "--seed", "4", "-o", str(out)]
    code, _, _ = run(argv, capsys)
    assert code == 0
    assert out.read_text().splitlines()[0] == "delay_fs,coincidence,error"


@pytest.mark.parametrize(
    "argv, degrees",
    [
        (["--preset", "sample-I", "--phase", "measured"], 170),
        (["--preset", "sample-II", "--phase", "measured"], 10),
        (["--r", "0.7071067811865476j", "--t", "0.7071067811865476"], 180),
    ],
)
def test_mz(argv, degrees, capsys):
    code, out, err = run(["mz", *argv], capsys)
    assert code == 0
    got = float(err.split("phase_difference=")[1].split()[0])
    assert got == pytest.approx(degrees, abs=1e-6)
    assert out.startswith("phase_rad,intensity_a,intensity_b")


def test_classical_hom(capsys):
    code, _, err = run(["classical-hom", "--r", "0.7071067811865476j",
                        "--t", "0.7071067811865476", "--seed", "2"], capsys)
    vis = float(err.split("visibility=")[1])
    assert code == 0 and vis == pytest.approx(0.5, abs=0.01)


def test_simulate_and_count_ratio(tmp_path, capsys):
    near, far = tmp_path / "near.bin", tmp_path / "far.csv"
    base = ["simulate", "--preset", "sample-II", "--phase", "design", "--duration", "20"]
    assert run([*base, "--delay-um", "0", "--seed", "1", "-o", str(near)], capsys)[0] == 0
    assert run([*base, "--delay-um", "3000", "--seed", "2", "--stream-format", "csv",
                "-o", str(far)], capsys)[0] == 0
    n1 = json.loads(run(["coincidences", str(near)], capsys)[1])["coincidences"]
    n0 = json.loads(run(["coincidences", str(far)], capsys)[1])["coincidences"]
    ratio = n1 / n0
    sigma = ratio * math.sqrt(1 / n1 + 1 / n0)
    assert abs(ratio - 2) <= 3 * sigma
    assert len(read_streams(near)["A"]) > 0


def test_coincidences_empty_and_dark_floor(tmp_path, capsys):
    empty = tmp_path / "e.csv"
    empty.write_text("")
    code, out, _ = run(["coincidences", str(empty)], capsys)
    assert code == 0 and json.loads(out)["coincidences"] == 0
    darks = tmp_path / "d.bin"
    run(["simulate", "--preset", "sample-I", "--pair-rate", "0", "--dark-count-rate", "2e5",
         "--dead-time", "0", "--duration", "2", "-o", str(darks)], capsys)
    assert run(["coincidences", str(darks), "-o", str(tmp_path / "r.json")], capsys)[0] == 0
    rep = json.loads((tmp_path / "r.json").read_text())
    assert abs(rep["coincidences"] - rep["accidental_estimate"]) <= 3 * math.sqrt(
        rep["accidental_estimate"]
    )


def test_coincidences_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("A,5\nA,4\n")
    code, _, err = run(["coincidences", str(bad)], capsys)
    assert code == 1 and "line 2" in err


def test_presets_listing(capsys):
    code, out, _ = run(["presets", "--format", "json"], capsys)
    rows = json.loads(out)
    assert code == 0 and len(rows) == 4
    assert {(r["name"], r["phase"], round(r["two_phi_rt_deg"], 9)) for r in rows} == {
        ("sample-I", "design", 180.0), ("sample-I", "measured", 170.0),
        ("sample-II", "design", 0.0), ("sample-II", "measured", 10.0),
    }


def test_manifest_reproduces_output(tmp_path, capsys):
    first = tmp_path / "a.csv"
    argv = ["hom", "--mode", "montecarlo", "--preset", "sample-I", "--duration", "0.2",
            "--delay-points", "3", "--seed", "9", "-o", str(first)]
    run(argv, capsys)
    manifest = json.loads((tmp_path / "a.csv.manifest.json").read_text())
    replay = [str(tmp_path / "b.csv") if x == str(first) else x for x in manifest["argv"]]
    run(replay, capsys)
    assert (tmp_path / "b.csv").read_bytes() == first.read_bytes()
    digest = manifest["outputs"][str(first)]
    assert hashlib.sha256(first.read_bytes()).hexdigest() == digest


@pytest.mark.parametrize("cmd", list(cli.COMMANDS))
def test_help_and_unknown_flags(cmd, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main([cmd, "--help"])
    assert exc.value.code == 0
    with pytest.raises(SystemExit) as exc:
        cli.main([cmd, "--definitely-not-a-flag"])
    assert exc.value.code == 2


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "lossyhom.cli", "presets"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and "sample-II" in proc.stdout
