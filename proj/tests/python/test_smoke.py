import math

import numpy as np
import pytest

import pmiprof


def test_gaussian_mi_closed_form():
    assert pmiprof.gaussian_mi(0.8) == pytest.approx(-0.5 * math.log(1 - 0.64))
    assert pmiprof.gaussian_mi([0.8] * 25) == pytest.approx(12.77, abs=0.01)


def test_make_distribution_and_densities():
    dist = pmiprof.make_distribution(
        {"type": "mvn", "mean": [0, 0], "cov": [[1, 0.8], [0.8, 1]], "split": [1, 1]}
    )
    assert dist.dim_x == 1 and dist.dim_y == 1
    # standard bivariate at the origin
    lp = dist.log_pdf_joint(np.zeros(1), np.zeros(1))
    assert lp == pytest.approx(-math.log(2 * math.pi) - 0.5 * math.log(1 - 0.64))
    assert dist.pmi(np.zeros(1), np.zeros(1)) == pytest.approx(pmiprof.gaussian_mi(0.8))


def test_sampling_is_deterministic():
    dist = pmiprof.load_distribution("task:X")
    x1, y1 = dist.sample(seed=7, n=500)
    x2, y2 = dist.sample(seed=7, n=500)
    assert np.array_equal(x1, x2) and np.array_equal(y1, y2)
    assert x1.shape == (500, 1)


def test_profile_mean_matches_analytic_mi():
    dist = pmiprof.make_distribution(
        {"type": "mvn", "mean": [0, 0], "cov": [[1, 0.8], [0.8, 1]], "split": [1, 1]}
    )
    values = pmiprof.sample_profile(dist, seed=1, n=50000)
    est = pmiprof.mi_mc(values)
    assert est["value"] == pytest.approx(pmiprof.gaussian_mi(0.8), abs=3 * est["stderr"])

    analytic = pmiprof.sample_gaussian_profile([0.8], seed=2, n=50000)
    assert pmiprof.ks_distance(values, analytic) < 0.02


def test_estimators_roundtrip():
    dist = pmiprof.make_distribution(
        {"type": "mvn", "mean": [0, 0], "cov": [[1, 0.8], [0.8, 1]], "split": [1, 1]}
    )
    xs, ys = dist.sample(seed=3, n=4000)
    sx, sy = pmiprof.preprocess(xs, ys)
    truth = pmiprof.gaussian_mi(0.8)
    assert pmiprof.ksg(sx, sy, k=10) == pytest.approx(truth, abs=0.1)
    assert pmiprof.cca_mi(sx, sy) == pytest.approx(truth, abs=0.06)
    assert pmiprof.variational_bound("mc", xs, ys, dist) == pytest.approx(truth, abs=0.05)
    assert pmiprof.variational_bound("infonce", xs, ys, dist) == pytest.approx(truth, abs=0.05)


def test_benchmark_registry():
    names = pmiprof.benchmark_tasks()
    assert len(names) == 28
    assert "Waves" in names and "Galaxy" in names
    info = pmiprof.task_info("Swiss-roll")
    assert not info["supports_density"]
    assert info["exact_mi"] == pytest.approx(pmiprof.gaussian_mi(0.8))


def test_discrete_profile_mean_is_exact_mi():
    pmf = np.array([[0.4, 0.1], [0.1, 0.4]])
    atoms = pmiprof.discrete_profile(pmf)
    mean = sum(loc * w for loc, w in atoms)
    px = pmf.sum(axis=1)
    py = pmf.sum(axis=0)
    brute = sum(
        pmf[i, j] * math.log(pmf[i, j] / (px[i] * py[j])) for i in range(2) for j in range(2)
    )
    assert mean == pytest.approx(brute, abs=1e-12)


def test_bayes_mi_tiny_run():
    dist = pmiprof.make_distribution(
        {"type": "mvn", "mean": [0, 0], "cov": [[1, 0.8], [0.8, 1]], "split": [1, 1]}
    )
    xs, ys = dist.sample(seed=5, n=150)
    post = pmiprof.bayes_mi(xs, ys, k=3, warmup=50, draws=30, mc_per_draw=300, seed=9)
    assert len(post["draws"]) == 30
    assert post["p10"] <= post["mean"] <= post["p90"]


def test_errors_are_python_exceptions():
    with pytest.raises(ValueError):
        pmiprof.make_distribution({"type": "no-such-thing"})
    with pytest.raises(RuntimeError):
        pmiprof.gaussian_mi(1.5)
