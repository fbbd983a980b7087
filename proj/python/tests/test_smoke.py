import cmath

import pytest

import hyperct

MODULAR = {
    "omega_plus": hyperct.format_complex(cmath.exp(-1j * cmath.pi / 6)),
    "omega_minus": hyperct.format_complex(cmath.exp(-1j * cmath.pi / 3)),
    "k": "-0.1,-0.5",
}
REPORT_KEYS = {"identity", "params", "lhs", "rhs", "abs_err", "rel_err", "tol", "passed", "diagnostics", "wall_ms"}


def test_gamma_special_values():
    assert abs(hyperct.gamma(1, 1, 0) - 1) < 1e-12
    wp, wm = 1.0, cmath.exp(-1j * cmath.pi / 6)
    assert abs(hyperct.gamma(wp, wm, 0.5j * wp) - 2**0.5) < 1e-10


def test_complex_literals_round_trip():
    z = complex(0.1, -1 / 3)
    assert hyperct.parse_complex(hyperct.format_complex(z)) == z


def test_chain_report_fields():
    report = hyperct.verify(MODULAR, identity="chain", family="B", rank=2)
    assert set(report) == REPORT_KEYS
    assert report["passed"]
    assert report["rel_err"] <= 1e-8


def test_hyperbolic_colinear_point():
    w = "0.70710678118654757,-0.70710678118654757"
    report = hyperct.verify(identity="hyperbolic", omega_plus=w, omega_minus=w, k="-1,-1")
    assert report["passed"]
    assert report["rel_err"] <= 1e-6


def test_invalid_point_is_reported():
    report = hyperct.verify(identity="hyperbolic", k="1,0")
    assert not report["passed"]
    assert report["diagnostics"]["error"] == "NotInS"
    assert "k ∉ ℂ₋" in report["diagnostics"]["message"]


def test_sweep_keeps_order():
    config = {"defaults": MODULAR, "points": [{"identity": "split", "count": 10}, {"identity": "chain"}]}
    reports = hyperct.sweep(config)
    assert [r["identity"] for r in reports] == ["split", "chain"]
    assert all(r["passed"] for r in reports)
    assert hyperct.sweep({"points": []}) == []


def test_unknown_keys_raise():
    with pytest.raises(hyperct.HyperctError, match="colour"):
        hyperct.verify(identity="qct", colour="red")
