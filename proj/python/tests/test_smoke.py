import math

import pytest

import sthe


def test_example_value():
    spec = sthe.TestFunctionSpec(T=10.0)
    v = sthe.sthe_lhs(spec, 0.0, 1.0, 0.025, sthe.Method.Interval, 1e-11)
    assert abs(v.value - math.sqrt(3) / 2) < 1e-9


def test_three_methods_agree():
    spec = sthe.TestFunctionSpec(T=3.0, profile=sthe.Profile.test())
    y = 1 / 30
    ex = 3 * sthe.expansion_fourier_integral(spec, 1, y, 1e-12).value
    dr = 3 * sthe.direct_horocycle_integral(spec, 0.0, 1.0, y, 1, 1e-12).value
    # independent mpmath value
    ref = complex(0.50184698455943483438, -0.12536703048357133775)
    assert abs(ex - ref) < 1e-10
    assert abs(dr - ref) < 1e-10


def test_limit_and_identity():
    m = sthe.LatticeModel.modular()
    assert abs(sthe.limit_value(m, sthe.Profile.constant()) - 3 / math.pi) < 1e-15
    assert abs(sthe.identity_partial_sum(2) - math.sqrt(3) / 2) < 1e-15
    assert sthe.totient_sieve(10) == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4]


def test_reduction_lands_above_height_one():
    x, y, _ = sthe.reduce_to_cusp(sthe.LatticeModel.modular(), 1, 0.31, 0.002)
    assert 0 <= x < 1
    assert y >= math.sqrt(3) / 2 - 1e-12


def test_errors_become_python_exceptions():
    with pytest.raises(sthe.Error, match="T >= B1"):
        sthe.TestFunctionSpec(T=1.5)
    with pytest.raises(ValueError):
        sthe.LatticeModel.gamma0(6)


def test_run_sweep_records():
    cfg = """
[profile]
id = test
[grid]
pairs = 3:0.0333333333333
[run]
m = 0, 1
methods = expansion, interval
"""
    recs = sthe.run_sweep(cfg, threads=2)
    assert len(recs) == 4
    assert {r["method"] for r in recs} == {"expansion", "interval"}
    by = {(r["m"], r["method"]): r["value"] for r in recs}
    assert abs(by[(1, "expansion")] - by[(1, "interval")]) < 1e-8


def test_envelope_and_rate():
    E = sthe.error_envelope_E(T=10.0, y=1e-5, eta=0.25)
    assert E > 0
    r = sthe.admissible_rate(sthe.RateKind.Qualitative, 100.0, 1e-6)
    assert r > 0
