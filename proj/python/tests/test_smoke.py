import math

import pytest

import eplab


def test_constants():
    assert eplab.varpi == pytest.approx(0.5 * math.log(5))
    assert eplab.varsigma == pytest.approx(0.5 * math.log(9 / 5))
    assert eplab.kappa_closed_b1(2.5) == pytest.approx(eplab.varpi)


def test_counts():
    assert eplab.count_crossing_paths(1, 2.0, 1.0) == pytest.approx(math.log(2))
    assert eplab.count_interface_returns(4, 1.0) == 0.0
    e = eplab.kappa_estimate(2.5, 1.0, [16, 32, 48])
    assert abs(e["value"] - eplab.varpi) <= e["error_bound"] + 1e-3


def test_phi_at_mu_one():
    e = eplab.phi_estimate(2.0, 1.0, 1.0, [32], 16, seed=3, shifted=False)
    assert abs(e["mean"] - 0.5) <= 3 * e["stderr"]
    assert len(e["values"][0]) == 16


def test_dual_and_gamma():
    u = eplab.u_estimate(2.0, 1.5, 0.5, [16], 8)
    assert math.isfinite(u["value"])
    assert eplab.gamma_star(1.0, [8, 16], 4)["value"] == 0.0
    value, rho, bound = eplab.legendre_forward([0.25, 0.5, 1.0], [1.0, 0.9, 0.5], 0.0)
    assert value == 1.0 and rho == 0.25 and bound >= 0.0


def test_errors():
    with pytest.raises(ValueError):
        eplab.kappa_closed_b1(1.5)


def test_cli_thread_invariance():
    args = ["phi", "--mu-grid", "1,2", "--L", "16", "--samples", "4"]
    one = eplab.run_cli(args + ["--threads", "1"])
    two = eplab.run_cli(args + ["--threads", "2"])
    assert one == two
    header = next(line for line in one.splitlines() if not line.startswith("#"))
    assert header.startswith("mu,")
