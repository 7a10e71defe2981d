"""Smoke tests for the python module and the CLI."""

import json
import math
import os
import subprocess
import sys
import tempfile

import repmix


def approx(a, b, tol=1e-9):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def test_density_and_repulsion():
    approx(repmix.eval_mixture_density([1.0], [[0.0]], [[1.0]], [0.0]),
           1.0 / math.sqrt(2.0 * math.pi), 1e-12)
    approx(repmix.g(1.0, 2, 1.0), math.exp(-1.0), 1e-12)
    approx(repmix.g_inverse(1.0, 2, math.exp(-1.0)), 1.0, 1e-10)
    approx(repmix.distance("full", [0.0], [1.0], [1.0], [1.0]), 2.0, 1e-12)
    approx(repmix.distance("location", [0.0, 0.0], [1.0, 1.0], [3.0, 4.0], [1.0, 1.0]),
           5.0, 1e-12)
    approx(repmix.h("location", "min", 1.0, 1, [[0.0], [2.0]], [[1.0], [1.0]]),
           math.exp(-0.5), 1e-12)
    approx(repmix.sum_extra_weights([0.5, 0.3, 0.1, 0.05, 0.03, 0.02], 2), 0.2, 1e-12)


def test_errors():
    try:
        repmix.g_inverse(1.0, 2, 1.5)
    except repmix.InputError:
        pass
    else:
        raise AssertionError("expected InputError")


def test_generate_and_chain():
    gen = repmix.generate_scenario("IIb", 80, seed=4)
    assert len(gen["values"]) == 80
    assert gen["k0"] == 2
    draws = repmix.run_chain_simple(gen["values"], k=3, tau=0.5, iterations=400,
                                    burn_in=200, thin=4, seed=9)
    assert len(draws) == 50
    for d in draws:
        assert abs(sum(d["weights"]) - 1.0) < 1e-12
    again = repmix.run_chain_simple(gen["values"], k=3, tau=0.5, iterations=400,
                                    burn_in=200, thin=4, seed=9)
    assert draws[0]["weights"] == again[0]["weights"]


def test_calibration():
    res = repmix.calibrate_tau([0.0], [1.0], 2.0, [1.0], "location", k=3, c=1.0,
                               nu=1, combiner="min", seed=3, n_mc=2000)
    assert res["tau_star"] > 0.0
    assert res["rho1"] - res["rho2"] >= res["c"] * max(res["sigma1"], res["sigma2"])


def test_fit_config():
    cfg = {
        "data": {"scenario": "IIb", "n": 60, "seed": 11},
        "k": 3,
        "repulsion": {"case": "location", "combiner": "min", "tau": 0.5, "nu": 1},
        "mcmc": {"iterations": 300, "burn_in": 100, "thin": 4, "seed": 5},
        "k0": 2,
    }
    summary = json.loads(repmix.fit_config(json.dumps(cfg)))
    assert "components" in summary
    assert len(summary["components"]) == 3
    assert "extra_weights" in summary


def test_cli_roundtrip():
    cli = os.environ.get("REPMIX_CLI")
    if not cli:
        print("REPMIX_CLI not set; skipping CLI smoke")
        return
    with tempfile.TemporaryDirectory() as tmp:
        out1 = os.path.join(tmp, "run1")
        out2 = os.path.join(tmp, "run2")
        base = [cli, "fit", "--scenario", "IIb", "--n", "60", "--data-seed", "11",
                "--k", "3", "--case", "location", "--tau", "0.5", "--nu", "1",
                "--iterations", "300", "--burnin", "100", "--thin", "4", "--seed", "5"]
        subprocess.run(base + ["--out", out1], check=True, capture_output=True)
        manifest = os.path.join(out1, "manifest.json")
        subprocess.run([cli, "fit", "--config", manifest, "--out", out2],
                       check=True, capture_output=True)
        with open(os.path.join(out1, "draws.csv"), "rb") as f:
            d1 = f.read()
        with open(os.path.join(out2, "draws.csv"), "rb") as f:
            d2 = f.read()
        assert d1 == d2, "manifest re-run must reproduce draws.csv byte-identically"

        bad = subprocess.run([cli, "fit", "--data", "/nonexistent.csv"],
                             capture_output=True)
        assert bad.returncode == 2
        err = json.loads(bad.stderr.decode())
        assert err["error"]["type"] == "input"

        gen_path = os.path.join(tmp, "iv.csv")
        subprocess.run([cli, "generate", "--scenario", "IV", "--n", "40", "--seed", "2",
                        "--out", gen_path], check=True, capture_output=True)
        with open(gen_path) as f:
            assert f.readline().strip() == "x1,x2,label"
        assert os.path.exists(gen_path + ".meta.json")

        cal = subprocess.run([cli, "calibrate", "--standard-m", "1", "--k", "3",
                              "--case", "location", "--nu", "1", "--c", "1",
                              "--calibration-mc", "3000", "--seed", "4"],
                             check=True, capture_output=True)
        res = json.loads(cal.stdout.decode())
        assert res["tau_star"] > 0.0
        assert res["rho1"] - res["rho2"] >= res["c"] * max(res["sigma1"], res["sigma2"])


def main():
    test_density_and_repulsion()
    test_errors()
    test_generate_and_chain()
    test_calibration()
    test_fit_config()
    test_cli_roundtrip()
    print("python smoke tests passed")


if __name__ == "__main__":
    sys.exit(main())
