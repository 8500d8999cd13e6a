import json
import math

import numpy as np
import pytest

import gddist

WORKED = gddist.GDDParams(0.5, 1.0, 8.5, 93.0)


def test_laplace_density_and_cdf():
    p = gddist.GDDParams(1, 1, 1, 1)
    assert gddist.pdf(p, 0.0) == pytest.approx(0.5, abs=1e-15)
    assert gddist.pdf(p, 0.3) == pytest.approx(0.5 * math.exp(-0.3), abs=1e-13)
    assert gddist.cdf(p, 0.0) == pytest.approx(0.5, abs=1e-13)


def test_statistics():
    m = gddist.moments(WORKED)
    assert round(m["mean"], 2) == 0.41
    assert round(m["variance"], 2) == 0.50
    assert round(m["skewness"], 1) == 2.8
    assert round(m["kurtosis"]) == 15
    assert gddist.mode(WORKED) == pytest.approx(-0.062, abs=5e-3)
    lo, hi = gddist.six_sigma_interval(WORKED)
    assert lo == pytest.approx(-3.84, abs=5e-3)
    assert hi == pytest.approx(4.66, abs=5e-3)


def test_arrays_and_methods_agree():
    xs = np.linspace(-3, 4, 37)
    a = gddist.pdf(WORKED, xs)
    b = gddist.pdf(WORKED, xs, method="closed-u")
    c = gddist.pdf(WORKED, xs, method="conv-de")
    assert a.shape == xs.shape
    assert np.max(np.abs(a - b)) < 1e-12
    assert np.max(np.abs(a - c)) < 1e-12
    cover = gddist.cdf(WORKED, 4.0) - gddist.cdf(WORKED, -3.0, method="cdf-integral-de")
    assert cover == pytest.approx(0.996, abs=5e-4)


def test_reference_and_bench(tmp_path, monkeypatch):
    monkeypatch.setenv("GDD_REFERENCE_CACHE", str(tmp_path))
    x, ref = gddist.reference(WORKED, n=50)
    assert x[0] == -3.0 and x[-1] == 4.0
    assert np.max(np.abs(gddist.pdf(WORKED, x) - ref)) < 1e-13
    report = json.loads(gddist.bench(WORKED, n=50, runs=2))
    assert report["max_abs_error"] < 1e-13
    assert report["spec"]["method"] == "cf-de"


def test_errors():
    with pytest.raises(gddist.GDDError, match="InvalidArgument"):
        gddist.GDDParams(-1, 1, 1, 1)
    with pytest.raises(gddist.GDDError):
        gddist.pdf(WORKED, 0.1, method="nope")
    assert math.isinf(gddist.pdf(gddist.GDDParams(0.5, 1, 0.3, 1), 0.0))


def test_mapping_and_reflection():
    p = gddist.mm_gdd_params(24, 3, 4, 12.0, 1.09, 2.97)
    assert (p.alpha1, p.alpha2) == (0.5, 8.5)
    assert p.beta1 == pytest.approx(0.16, abs=0.01)
    r = gddist.reflect(WORKED)
    assert gddist.reflect(r) == WORKED
    assert gddist.pdf(WORKED, -0.5) == pytest.approx(gddist.pdf(r, 0.5), abs=1e-14)
