import io
import shlex
import subprocess
import sys

import pytest

from spinqst.cli import run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def values(text):
    result = {}
    for line in text.splitlines():
        if " = " in line and not line.startswith("#"):
            k, v = line.split(" = ", 1)
            result[k] = v
    return result


def resolved(text):
    line = next(l for l in text.splitlines() if l.startswith("# resolved: "))
    return shlex.split(line[len("# resolved: "):])


def test_lambda_small():
    code, text = call("lambda", "--pattern", "1,0.5,1")
    assert code == 0
    v = values(text)
    for key in ("lambda_closed", "lambda_spectral", "lambda_rec_centered", "lambda_rec_appendix"):
        assert float(v[key]) == pytest.approx(-0.5, rel=1e-12)


def test_effective_uniform():
    code, text = call("effective", "--uniform", "30", "--a", "0.01")
    assert code == 0
    v = values(text)
    assert v["tau"] == "15707.9632679"
    assert float(v["h_S"]) == pytest.approx(0.0, abs=1e-10)
    assert v["perturbative"] == "True"


def test_resolved_round_trip():
    code, text = call("effective", "--staggered", "10", "--b", "0.7", "--xi", "0.05")
    assert code == 0
    argv = resolved(text)
    code2, text2 = call(*argv)
    assert code2 == 0 and text2 == text


def test_sweep_round_trip_and_config(tmp_path):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text("# small run\nN = 14\nxi_grid = 0.01,0.1\nW_values = 0.5\nsamples = 3\nseed = 5\n")
    code, text = call("sweep-random", "--config", str(cfg))
    assert code == 0
    argv = resolved(text)
    assert "--config" not in argv
    code2, text2 = call(*argv)
    assert code2 == 0 and text2 == text
    body = [l for l in text.splitlines() if not l.startswith("#")]
    assert len(body) == 1 + 2 * (1 + 3)


def test_sweep_output_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        code, _ = call("sweep-staggered", "--N", "10", "--xi-min", "0.01", "--xi-max", "0.1",
                       "--xi-points", "4", "--output", str(path))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_dynamics_csv(tmp_path):
    path = tmp_path / "series.csv"
    code, text = call("dynamics", "--uniform", "6", "--a", "0.1", "--points", "50", "--output", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# N=6, a=0.1, C=")
    assert "delta_lambda=" in lines[0] and "tau=" in lines[0]
    assert lines[1] == "t,abs_f,fidelity,rabi_abs_f"
    assert len(lines) == 52
    assert "max_fidelity" in text


def test_dynamics_stdout():
    code, text = call("dynamics", "--uniform", "4", "--a-s", "0.1", "--a-r", "0.2", "--points", "5")
    assert code == 0
    assert "a_S=0.1, a_R=0.2" in text
    assert text.count("\n") == 1 + 2 + 5


def test_dump_spectrum(tmp_path):
    prefix = tmp_path / "spec"
    code, _ = call("lambda", "--uniform", "4", "--dump-spectrum", str(prefix))
    assert code == 0
    ev = (tmp_path / "spec_eigenvalues.csv").read_text().splitlines()
    vec = (tmp_path / "spec_eigenvectors.csv").read_text().splitlines()
    assert ev[0] == "k,epsilon_k" and len(ev) == 5
    assert vec[0] == "site_0,site_1,site_2,site_3" and len(vec) == 5


def test_equal_time():
    code, text = call("equal-time", "--N", "30", "--b", "0.7", "--xi", "0.02")
    assert code == 0
    v = values(text)
    assert float(v["F_uniform"]) > float(v["F_staggered"])


def test_selftest():
    code, text = call("selftest", "--patterns", "50")
    assert code == 0
    assert "FAIL" not in text


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        ["lambda"],
        ["lambda", "--pattern", "1,x"],
        ["lambda", "--pattern", "1,1"],
        ["lambda", "--pattern", "1,1.5,1"],
        ["lambda", "--pattern", "1,0,1"],
        ["effective", "--uniform", "4"],
        ["effective", "--uniform", "4", "--a", "0.1", "--xi", "0.1"],
        ["sweep-random", "--N", "28", "--samples", "1"],
        ["sweep-staggered", "--xi-grid", "0.1,0.01"],
    ],
)
def test_validation_exit_code(argv, tmp_path):
    target = tmp_path / "out.csv"
    code, _ = call(*argv, *(["--output", str(target)] if argv[0] in ("lambda", "sweep-random", "sweep-staggered") and len(argv) > 1 else []))
    assert code == 1
    assert not target.exists()


def test_io_error_exit_code(tmp_path):
    code, _ = call("lambda", "--uniform", "4", "--output", str(tmp_path / "nope" / "x.csv"))
    assert code == 3
    code, _ = call("lambda", "--pattern-file", str(tmp_path / "missing.csv"))
    assert code == 3


def test_numerical_exit_code():
    code, _ = call("lambda", "--pattern", ",".join(["0.05", "1"] * 300 + ["0.05"]))
    assert code == 2


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "spinqst.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "spinqst" in proc.stdout
