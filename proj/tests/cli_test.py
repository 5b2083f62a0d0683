"""End-to-end checks of the veerflow CLI: exit codes, determinism, numbers."""

import json
import math
import os
import subprocess
import sys
import tempfile

BIN = os.environ["VEERFLOW_BIN"]
FIX = os.environ["FIXTURE_DIR"]

GOLDEN = (1 + 5**0.5) / 2
FIG8_STRETCH = (3 + 5**0.5) / 2


def run(*args, **kw):
    return subprocess.run([BIN, *args], capture_output=True, text=True, **kw)


def fixture(name):
    return os.path.join(FIX, name)


def main():
    r = run("validate", fixture("fig8.json"))
    assert r.returncode == 0, r.stderr
    rep = json.loads(r.stdout)
    assert rep["ok"] is True
    assert rep["colors"] == {"0": "red", "1": "blue"}

    r = run("validate", fixture("does_not_exist.json"))
    assert r.returncode == 1, (r.returncode, r.stderr)

    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as f:
        f.write("{broken")
        bad = f.name
    r = run("validate", bad)
    assert r.returncode == 2, (r.returncode, r.stderr)
    os.unlink(bad)

    # byte-stable flow graph output across runs
    r1 = run("flowgraph", fixture("fig8.json"))
    r2 = run("flowgraph", fixture("fig8.json"), "--debug-opposite-side")
    assert r1.returncode == 0 and r2.returncode == 0, (r1.stderr, r2.stderr)
    assert r1.stdout == r2.stdout
    fg = json.loads(r1.stdout)
    assert fg["vertices"] == 2 and len(fg["edges"]) == 6

    r = run("stretch", fixture("fig8.json"), "--xi", fixture("xi_fiber.json"))
    assert r.returncode == 0, r.stderr
    out = json.loads(r.stdout)
    assert abs(out["lambda"] - FIG8_STRETCH) < 1e-7, out
    assert abs(out["log_lambda"] - math.log(FIG8_STRETCH)) < 1e-7

    r = run("stretch", "--graph", fixture("golden_graph.json"), "--mode", "unit")
    assert r.returncode == 0, r.stderr
    assert abs(json.loads(r.stdout)["lambda"] - GOLDEN) < 1e-7

    r = run("stretch", fixture("fig8.json"), "--xi", fixture("eta_zero.json"))
    assert r.returncode == 2, (r.returncode, r.stderr)
    assert "weight-0" in r.stderr

    r = run("entropy", fixture("fig8.json"), "--xi", fixture("xi_fiber.json"), "--scale", "3")
    assert r.returncode == 0, r.stderr

    r = run("entropy", fixture("fig8.json"), "--xi", fixture("xi_fiber.json"),
            "--xi2", fixture("xi_far.json"), "-k", "5")
    assert r.returncode == 0, r.stderr
    rows = [ln for ln in r.stdout.splitlines() if "," in ln and not ln.startswith("t,")]
    assert len(rows) == 5, r.stdout
    assert "pass" in r.stdout

    r = run("entropy", fixture("fig8.json"), "--random", "5", "-k", "7")
    assert r.returncode == 0, r.stderr
    assert "pass" in r.stdout

    r = run("track", fixture("pt_torus_cycle.json"), "--carried", fixture("curve_ones.json"),
            "--transverse", fixture("curve_plain.json"), "--nmax", "30")
    assert r.returncode == 0, r.stderr
    out = json.loads(r.stdout)
    assert abs(out["lambda"] - FIG8_STRETCH) < 1e-9
    assert abs(out["intersection_slope"] - math.log(FIG8_STRETCH)) < 0.01
    assert out["translation"] is False

    print("cli checks passed")


if __name__ == "__main__":
    sys.exit(main())
