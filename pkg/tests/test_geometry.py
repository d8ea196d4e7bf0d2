import numpy as np
import pytest

from jordancr.algebra import RealLine, parse_algebra
from jordancr.geometry import (GeometryError, MetricConfig, congruence, disc_translation, disc_virtual_translation,
                               monotonicity_check, power_inequality_check, pv_dist, pv_displacement_sample,
                               pv_translation_lower_bound, random_spd, tube_metric)


def test_tube_metric_rank_one():
    assert tube_metric(RealLine(), np.array([1j]), np.array([1.0]), np.array([1.0])) == pytest.approx(0.5)
    with pytest.raises(GeometryError):
        MetricConfig(kappa=0)


def test_tube_metric_translation_invariance_and_positivity(model, rng):
    m = 1000
    y = np.stack([np.exp(rng.standard_normal(model.rank)) @ model.random_frame(rng) for _ in range(m)])
    z = rng.standard_normal((m, model.dim)) + 1j * y
    v = rng.standard_normal((m, model.dim))
    a = rng.standard_normal((m, model.dim)) + 1j * rng.standard_normal((m, model.dim))
    h = tube_metric(model, z, a, a)
    assert np.all(h.real > 0) and np.allclose(h.imag, 0, atol=1e-10 * np.abs(h))
    assert np.allclose(tube_metric(model, z + v, a, a), h)


def test_tube_metric_monotonicity(model):
    assert monotonicity_check(model, samples=2000, seed=1)["passed"]


def test_pv_dist_examples(rng):
    p = random_spd(rng, 4)
    assert pv_dist(p, p) == pytest.approx(0, abs=1e-12)
    assert pv_dist(np.eye(3), np.diag([np.e ** 2, 1, 1])) == pytest.approx(2)
    with pytest.raises(GeometryError):
        pv_dist(np.eye(2), np.diag([1.0, -1.0]))


def test_pv_dist_congruence_invariance_and_triangle(rng):
    worst_inv, worst_tri = 0.0, np.inf
    for _ in range(1000):
        p, q, s = random_spd(rng, 3), random_spd(rng, 3), random_spd(rng, 3)
        g = rng.standard_normal((3, 3))
        worst_inv = max(worst_inv, abs(pv_dist(congruence(g, p), congruence(g, q)) - pv_dist(p, q)))
        worst_tri = min(worst_tri, pv_dist(p, q) + pv_dist(q, s) - pv_dist(p, s))
    assert worst_inv <= 1e-9
    assert worst_tri >= -1e-9


def test_pv_lower_bound(rng):
    q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    assert pv_translation_lower_bound(q) == pytest.approx(0, abs=1e-12)
    a, m = 1.7, 5
    bound = pv_translation_lower_bound(a * np.eye(m))
    assert bound == pytest.approx(2 * np.sqrt(m) * np.log(a))
    assert pv_dist(np.eye(m), a ** 2 * np.eye(m)) == pytest.approx(bound, abs=1e-9)
    g = rng.standard_normal((4, 4))
    assert np.min(pv_displacement_sample(g, 1000, 3)) >= pv_translation_lower_bound(g) - 1e-9


def test_disc_translation_examples():
    a = 3.0
    M = np.diag([a, 1 / a])
    assert disc_translation(M) == pytest.approx(np.log(a ** 2))
    th = 0.7
    rot = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    assert disc_translation(rot) == 0
    with pytest.raises(GeometryError):
        disc_virtual_translation(rot, 1j)


def test_disc_virtual_matches_closed_form(rng):
    for _ in range(20):
        M = rng.standard_normal((2, 2))
        if np.linalg.det(M) <= 0:
            M[0] *= -1
        M /= np.sqrt(np.linalg.det(M))
        if abs(np.trace(M)) <= 2.05:
            continue
        xi = np.exp(1j * rng.uniform(0, 2 * np.pi, 100))
        vals = disc_virtual_translation(M, xi)
        assert np.ptp(vals) <= 1e-9
        assert vals[0] == pytest.approx(disc_translation(M), abs=1e-9)


def test_power_inequality(rng):
    M = np.array([[2.0, 1.0], [1.0, 1.0]])
    assert power_inequality_check(M, 1)["margin"] == pytest.approx(0, abs=1e-12)
    assert power_inequality_check(M, 3)["margin"] == pytest.approx(0, abs=1e-12)
    g = rng.standard_normal((3, 3))
    assert power_inequality_check(g, 2, space="pv", samples=1000, seed=4)["passed"]
