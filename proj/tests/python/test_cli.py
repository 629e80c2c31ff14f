"""End-to-end CLI checks: exit codes, artifact formats, determinism.

Usage: test_cli.py /path/to/slowfast
"""
import json
import os
import subprocess
import sys
import tempfile

CLI = sys.argv[1]


def run(*args, expect=0):
    proc = subprocess.run([CLI, *args], capture_output=True, text=True)
    assert proc.returncode == expect, (
        f"{args}: expected exit {expect}, got {proc.returncode}\n"
        f"stdout: {proc.stdout}\nstderr: {proc.stderr}"
    )
    return proc


def test_p0_json():
    out = json.loads(run("p0", "--system", "symmetric_quadratic", "--x0", "-1").stdout)
    assert abs(out["p0"] - 1.0) < 1e-12
    assert out["leftmost"] is True
    assert out["system"]["name"] == "symmetric_quadratic"

    multi = json.loads(run("p0", "--system", "multi_turning", "--x0", "-1").stdout)
    assert abs(multi["p0"] - (-0.5442904014743228)) < 1e-9


def test_exit_codes():
    run("p0", "--system", "symmetric_quadratic", "--x0", "0.5", expect=2)
    run("p0", "--system", "no_such_system", expect=1)
    run("return", "--system", "example5", "--param", "alpha=5", "--x0", "-1",
        "--z0", "1", "--eps", "1e-2", expect=2)


def test_check():
    out = json.loads(
        run("check", "--system", "multi_turning", "--x0", "-1", "--x-exit", "1").stdout
    )
    assert out["classical"] is False
    assert len(out["sign_changes"]) == 3


def test_return_csv():
    out = run("return", "--system", "example5", "--x0", "-1", "--z0", "1",
              "--eps", "1e-3").stdout.splitlines()
    assert out[0] == "x0,z0,eps,p_eps,steps"
    fields = out[1].split(",")
    assert abs(float(fields[3]) - 1.0) < 1e-6


def test_return_trace():
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "trace.csv")
        run("return", "--system", "example5", "--x0", "-1", "--z0", "1",
            "--eps", "1e-2", "--trace", path)
        with open(path) as f:
            lines = f.read().splitlines()
        assert lines[0] == "t,x,z"
        first = [float(v) for v in lines[1].split(",")]
        last = [float(v) for v in lines[-1].split(",")]
        assert first[1:] == [-1.0, 1.0]
        assert abs(last[1] - 1.0) < 1e-6 and abs(last[2] - 1.0) < 1e-9


def test_sweep_deterministic():
    with tempfile.TemporaryDirectory() as tmp:
        a = os.path.join(tmp, "a.csv")
        b = os.path.join(tmp, "b.csv")
        args = ("sweep", "--system", "example5", "--x0", "-1", "--z0", "1",
                "--ladder", "1e-3:1e-2:4log")
        run(*args, "--out", a)
        run(*args, "--out", b)
        with open(a, "rb") as fa, open(b, "rb") as fb:
            bytes_a, bytes_b = fa.read(), fb.read()
        assert bytes_a == bytes_b, "same config must give byte-identical output"
        header, first = bytes_a.decode().splitlines()[:2]
        assert header == "eps,p_eps,p0,err"
        assert abs(float(first.split(",")[1]) - 1.0) < 1e-6


def test_blowup_singular():
    out = json.loads(
        run("blowup", "--system", "symmetric_quadratic", "--x0", "-1",
            "--E1", "0.1", "--E1", "0.2", "--E1", "0.3").stdout
    )
    x3 = [orbit["x3"] for orbit in out["orbits"]]
    assert len(x3) == 3
    assert max(x3) - min(x3) < 1e-8
    assert all(abs(v - 1.0) < 1e-9 for v in x3)


def test_blowup_pipeline_csv():
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "orbit.csv")
        proc = run("blowup", "--mode", "pipeline", "--system", "example5",
                   "--x0", "-1", "--z0", "1", "--eps", "1e-3", "--out", path)
        summary = json.loads(proc.stdout)
        assert abs(summary["x_exit"] - 1.0) < 1e-6
        with open(path) as f:
            assert f.readline().strip() == "t,x,z,E"


def test_example5_csv():
    out = run("example5", "--x0", "-1", "--alpha", "1e-3",
              "--ladder", "5e-3:1e-2:2").stdout.splitlines()
    assert out[0] == "x0,eps,c_closed,c_fd,rel_err"
    for line in out[1:]:
        assert float(line.split(",")[4]) <= 1e-3


def test_fit_flat_has_no_log():
    out = json.loads(
        run("fit", "--system", "flat_perturbed", "--x0", "-1", "--z0", "0.1").stdout
    )
    assert out["has_log"] is False
    assert len(out["basis"]) == len(out["coeffs"]) == 6


def test_kappa():
    out = json.loads(
        run("kappa", "--system", "linear_case", "--x0", "-1", "--z0", "0.1",
            "--eps", "1e-3").stdout
    )
    assert abs(out["p_direct"] - out["p_kappa"]) < 1e-5
    assert abs(out["p0"] - 1.0) < 1e-12


def test_config_roundtrip():
    with tempfile.TemporaryDirectory() as tmp:
        first = os.path.join(tmp, "resolved.json")
        second = os.path.join(tmp, "resolved2.json")
        run("p0", "--system", "multi_turning", "--x0", "-0.9",
            "--dump-config", first)
        run("p0", "--config", first, "--dump-config", second)
        with open(first, "rb") as fa, open(second, "rb") as fb:
            assert fa.read() == fb.read(), "config round trip must be stable"


def test_config_unknown_key():
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "bad.json")
        with open(path, "w") as f:
            json.dump({"system": {"name": "example5"}, "epsilon": 1e-3}, f)
        run("p0", "--config", path, expect=1)


def main():
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name}: ok")
    print("cli tests passed")


if __name__ == "__main__":
    main()
