import subprocess
import sys

import numpy as np
import pytest

from cavitypat.cli import main
from cavitypat.io import read_boundary, read_volume, write_volume

CFG = """\
[grid]
dim = 2
n_nodes = 65
T = 2
[recon]
iterations = 14
"""


@pytest.fixture
def cfg_path(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(CFG)
    return path


def test_constant_field_pipeline(tmp_path, cfg_path):
    vol, bnd = tmp_path / "one.rcvol", tmp_path / "one.rcbnd"
    write_volume(vol, np.ones((65, 65)))
    assert main(["forward", "--config", str(cfg_path), "--in", str(vol), "--out", str(bnd)]) == 0
    prefix = tmp_path / "rec"
    assert main(["reconstruct", "--config", str(cfg_path), "--in", str(bnd), "--out-prefix", str(prefix)]) == 0
    final = read_volume(f"{prefix}_iter14.rcvol")
    assert np.max(np.abs(final - 1.0)) <= 1e-8


def test_phantom_forward_reconstruct_metrics(tmp_path, cfg_path, capsys):
    vol, bnd, prefix = tmp_path / "f.rcvol", tmp_path / "g.rcbnd", tmp_path / "r"
    args = ["--config", str(cfg_path), "--iterations", "2"]
    assert main(["phantom", *args, "--out", str(vol)]) == 0
    assert main(["forward", *args, "--in", str(vol), "--out", str(bnd)]) == 0
    assert main(["reconstruct", *args, "--in", str(bnd), "--out-prefix", str(prefix), "--truth", str(vol)]) == 0
    out = capsys.readouterr().out
    assert "iterate 2: rel_l2=" in out
    csv = (tmp_path / "r_errors.csv").read_text().splitlines()
    assert len(csv) == 4
    errs = [float(line.split(",")[1]) for line in csv[1:]]
    assert errs[2] < errs[1] < errs[0]

    prof, pgm = tmp_path / "p.csv", tmp_path / "s.pgm"
    est = tmp_path / "r_iter2.rcvol"
    assert main(["metrics", "--truth", str(vol), "--estimate", str(est), "--profile", str(prof), "--slice", str(pgm)]) == 0
    assert prof.read_text().splitlines()[0] == "x,estimate,truth"
    raw = pgm.read_bytes()
    assert raw.startswith(b"P5\n65 65\n255\n") and len(raw) == len(b"P5\n65 65\n255\n") + 65 * 65


def test_metrics_of_truth_is_zero(tmp_path, capsys):
    vol = tmp_path / "f.rcvol"
    assert main(["phantom", "--n-nodes", "33", "--out", str(vol)]) == 0
    assert main(["metrics", "--truth", str(vol), "--estimate", str(vol)]) == 0
    assert "rel_l2=0\n" in capsys.readouterr().out


def test_noise_and_determinism(tmp_path, cfg_path):
    vol = tmp_path / "f.rcvol"
    main(["phantom", "--config", str(cfg_path), "--out", str(vol)])
    outs = []
    for name in ("a", "b"):
        out = tmp_path / f"{name}.rcbnd"
        assert main(["forward", "--config", str(cfg_path), "--in", str(vol), "--out", str(out), "--noise-level", "1", "--seed", "3"]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    clean = tmp_path / "c.rcbnd"
    main(["forward", "--config", str(cfg_path), "--in", str(vol), "--out", str(clean)])
    g, n = read_boundary(clean), read_boundary(tmp_path / "a.rcbnd")
    assert (n - g).norm() / g.norm() == pytest.approx(1.0, abs=1e-12)


def test_six_face_pipeline_writes_all_faces(tmp_path, cfg_path):
    vol, bnd = tmp_path / "f.rcvol", tmp_path / "g.rcbnd"
    main(["phantom", "--config", str(cfg_path), "--out", str(vol)])
    assert main(["forward", "--config", str(cfg_path), "--six-face", "--in", str(vol), "--out", str(bnd)]) == 0
    assert set(read_boundary(bnd).faces) == {"X1_0", "X2_0", "X1_1", "X2_1"}
    prefix = tmp_path / "r"
    assert main(["reconstruct", "--config", str(cfg_path), "--six-face", "--iterations", "1", "--in", str(bnd), "--out-prefix", str(prefix)]) == 0
    assert (tmp_path / "r_iter1.rcvol").exists()


def test_bound_output(capsys):
    assert main(["bound", "--n-nodes", "33", "--trunc", "16"]) == 0
    out = capsys.readouterr().out
    fields = dict(line.split("=", 1) for line in out.splitlines()[1:])
    assert float(fields["measured_norm"]) < 1.0 < float(fields["closed_form_bound"])
    assert float(fields["sufficient_T"]) == pytest.approx(2.579, abs=1e-3)


def test_errors_give_nonzero_exit(tmp_path, cfg_path, capsys):
    assert main(["reconstruct", "--in", str(tmp_path / "missing.rcbnd"), "--out-prefix", str(tmp_path / "x")]) == 1
    bad = tmp_path / "bad.cfg"
    bad.write_text("[grid]\ndim = three\n")
    assert main(["bound", "--config", str(bad)]) == 1
    assert "line 2" in capsys.readouterr().err
    vol = tmp_path / "f.rcvol"
    write_volume(vol, np.zeros((17, 17)))
    assert main(["forward", "--config", str(cfg_path), "--in", str(vol), "--out", str(tmp_path / "g")]) == 1
    assert "n_nodes" in capsys.readouterr().err


def test_console_entry_point(tmp_path):
    vol = tmp_path / "f.rcvol"
    proc = subprocess.run(
        [sys.executable, "-m", "cavitypat.cli", "phantom", "--n-nodes", "9", "--out", str(vol)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert read_volume(vol).shape == (9, 9)
    proc = subprocess.run([sys.executable, "-m", "cavitypat.cli", "bogus"], capture_output=True)
    assert proc.returncode != 0
