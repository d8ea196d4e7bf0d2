import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jordancr.algebra import RealLine, Sym, make_diagonal_hom, apply_hom, parse_algebra, real_power
from jordancr.conformal import apply
from jordancr.domain import boundary_point, cdet, transversal
from jordancr.kernel import (KernelError, aut_kernel, bergman_cross, bergman_kernel, box, classify_quadruple,
                             cross_ratio, cross_ratio_det, cross_ratio_path_a, evaluate_quadruple, k_mag, kernel_transversal,
                             kdet, maslov, normalize_pair, quad_rep)
from jordancr.sampling import sample_extremal_quadruple, sample_transverse_tuple

from conftest import MODEL_NAMES, circle_orientation

R = RealLine()


def pt(*vals):
    return np.array(vals, dtype=complex)


def test_rank_one_operators():
    z, w = pt(0.3 + 0.2j), pt(-0.1 + 0.5j)
    assert np.allclose(box(R, z, w), z * w)
    assert np.allclose(quad_rep(R, z), z ** 2)
    assert np.allclose(aut_kernel(R, z, w), (1 - z * np.conj(w)) ** 2)
    assert k_mag(R, pt(0.5), pt(0.5)) == pytest.approx(0.75)


def test_kernel_normalizations(model):
    zero = np.zeros(model.dim, dtype=complex)
    e = model.unit().astype(complex)
    assert np.allclose(quad_rep(model, e), np.eye(model.dim))
    assert kdet(model, zero, zero) == pytest.approx(1)
    assert k_mag(model, zero, zero) == pytest.approx(1)
    assert abs(kdet(model, e, -e)) > 1e-6


def test_kernel_hermitian(model, rng):
    z = 0.4 * (model.random_element(rng, (20,)) + 1j * model.random_element(rng, (20,)))
    w = 0.4 * (model.random_element(rng, (20,)) + 1j * model.random_element(rng, (20,)))
    assert np.allclose(np.conj(kdet(model, z, w)), kdet(model, w, z))


def test_generic_norm_oracle(model, rng):
    """det K(z, w) = h(z, w)^genus for each simple part."""
    z = 0.4 * (model.random_element(rng, (20,)) + 1j * model.random_element(rng, (20,)))
    w = 0.4 * (model.random_element(rng, (20,)) + 1j * model.random_element(rng, (20,)))
    want = 1.0
    for p, s in zip(model.parts, model.slices):
        want = want * p.generic_norm(z[:, s], w[:, s]) ** p.genus
    assert np.allclose(kdet(model, z, w), want)


def test_k_mag_polydisc_formula(model, rng):
    frame = model.random_frame(rng)
    lam = 0.9 * rng.uniform(-1, 1, (50, model.rank)) * np.exp(1j * rng.uniform(0, 6.3, (50, model.rank)))
    mu = 0.9 * rng.uniform(-1, 1, (50, model.rank)) * np.exp(1j * rng.uniform(0, 6.3, (50, model.rank)))
    z, w = boundary_point(lam, frame), boundary_point(mu, frame)
    want = np.prod(np.abs(1 - lam * np.conj(mu)) ** (1 / model.rank), axis=-1)
    assert np.allclose(k_mag(model, z, w), want, rtol=1e-9)


def test_normalize_pair(model, rng):
    e = model.unit().astype(complex)
    w = normalize_pair(model, -e, e)
    assert np.allclose(apply(model, w, np.stack([-e, e])), np.stack([-e, e]))
    w = normalize_pair(model, e, -e)
    assert np.allclose(apply(model, w, np.stack([e, -e])), np.stack([-e, e]))
    a, c = sample_transverse_tuple(model, rng, 2)
    w = normalize_pair(model, a, c)
    assert np.allclose(apply(model, w, np.stack([a, c])), np.stack([-e, e]), atol=1e-8)
    with pytest.raises(KernelError):
        normalize_pair(model, e, e)


def test_maslov_examples(model):
    e = model.unit().astype(complex)
    assert maslov(model, -e, -1j * e, e) == model.rank
    assert maslov(model, e, -1j * e, -e) == -model.rank
    P = real_power(2)
    assert maslov(P, pt(-1, -1), pt(-1j, 1j), pt(1, 1)) == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_maslov_polydisc_oracle(seed, r):
    P = real_power(r)
    rng = np.random.default_rng(seed)
    th = rng.uniform(0, 2 * np.pi, (3, r))
    a, b, c = np.exp(1j * th)
    if np.min(np.abs(np.array([a - b, b - c, a - c]))) < 1e-3:
        return
    want = int(np.sum(circle_orientation(a, b, c)))
    assert maslov(P, a, b, c) == want


def test_maslov_cocycle_symmetries(model, rng):
    a, b, c = np.moveaxis(sample_transverse_tuple(model, rng, 3, size=100), 1, 0)
    m = maslov(model, a, b, c)
    assert np.array_equal(maslov(model, b, c, a), m)
    assert np.array_equal(maslov(model, b, a, c), -m)
    assert np.all(np.abs(m) <= model.rank) and np.all((m - model.rank) % 2 == 0)


def test_classification_examples(model):
    e = model.unit().astype(complex)
    base = (-e, -1j * e, e)
    assert classify_quadruple(model, *base, 1j * e).label == "Negative"
    assert classify_quadruple(model, *base, np.exp(-1j * np.pi / 4) * e).label == "PositiveOuter"
    assert classify_quadruple(model, *base, np.exp(-3j * np.pi / 4) * e).label == "PositiveInner"
    cls = classify_quadruple(model, *base, 1j * e)
    assert cls.epsilon == -1 and cls.maximal_base
    P = real_power(2)
    d = pt(np.exp(-1j * np.pi / 4), np.exp(1j * np.pi / 4))
    assert classify_quadruple(P, pt(-1, -1), pt(-1j, -1j), pt(1, 1), d).label == "NotExtremal"


def test_cross_ratio_examples():
    quad = (pt(-1), pt(-1j), pt(1), pt(1j))
    assert cross_ratio(R, *quad) == pytest.approx(-1, abs=1e-14)
    assert cross_ratio_det(R, *quad) == pytest.approx(1, abs=1e-14)
    zero = pt(0)
    assert cross_ratio_det(R, zero, zero, zero, zero) == pytest.approx(1)


def test_coincidences(model, rng):
    a, b, c, d = sample_extremal_quadruple(model, rng)
    assert cross_ratio(model, a, b, a, d) == 1.0
    assert cross_ratio(model, a, b, c, b) == 1.0
    assert cross_ratio(model, a, b, c, a) == 0.0
    assert cross_ratio(model, a, b, b, d) == 0.0
    with pytest.raises(KernelError):
        cross_ratio(model, a, a, c, d)
    with pytest.raises(KernelError):
        cross_ratio(model, a, b, c, c)


def test_scalar_functoriality_example():
    S = Sym(2)
    h = make_diagonal_hom(R, S)
    q = sample_extremal_quadruple(R, 4)
    img = apply_hom(h, q)
    assert cross_ratio(S, *img) == pytest.approx(cross_ratio(R, *q), rel=1e-12)


def test_path_a_matches_path_b(model, rng):
    q = sample_extremal_quadruple(model, rng, size=50, permute=True)
    for a, b, c, d in q:
        B = cross_ratio(model, a, b, c, d)
        A = cross_ratio_path_a(model, a, b, c, d)
        assert np.sign(A) == np.sign(B)
        assert abs(A) == pytest.approx(abs(B), rel=1e-8)
        det = cross_ratio_det(model, a, b, c, d)
        if len(model.parts) == 1:
            n = model.dim
            assert abs(det) ** (1 / (2 * n)) == pytest.approx(abs(B), rel=1e-8)


def test_non_extremal_raises():
    P = real_power(2)
    d = pt(np.exp(-1j * np.pi / 4), np.exp(1j * np.pi / 4))
    with pytest.raises(KernelError):
        cross_ratio(P, pt(-1, -1), pt(-1j, -1j), pt(1, 1), d)
    rec = evaluate_quadruple(P, pt(-1, -1), pt(-1j, -1j), pt(1, 1), d)
    assert rec["class"] == "NotExtremal" and rec["B"] is None


def test_bergman_cross_ratio(model, rng):
    z = 0.3 * (model.random_element(rng, (4,)) + 1j * model.random_element(rng, (4,)))
    assert bergman_cross(model, z[0], z[0], z[0], z[0]) == pytest.approx(1)
    # equals the kernel-determinant cross ratio on interior points
    x, y, zz, t = z
    assert bergman_cross(model, x, y, zz, t) == pytest.approx(cross_ratio_det(model, x, y, zz, t), rel=1e-10)


def test_bergman_rank_one_and_product():
    a, b = pt(0.3 + 0.1j), pt(-0.2 + 0.4j)
    zero = pt(0)
    h = lambda z, w: (1 - z * np.conj(w)) ** -2
    want = h(b, zero) * h(a, zero) / (h(b, zero) * h(a, zero))
    assert bergman_cross(R, zero, a, zero, b) == pytest.approx(want[0])
    P = real_power(2)
    pts = [pt(0.1, -0.3), pt(0.2j, 0.5), pt(-0.4, 0.1j), pt(0.3 + 0.3j, -0.2)]
    prod = np.prod([bergman_cross(R, *(p[i:i + 1] for p in pts)) for i in range(2)])
    assert bergman_cross(P, *pts) == pytest.approx(prod)


def non_transverse_pairs(V, rng, m):
    """Pairs sharing one spectral phase on a common frame, hence det(z - w) = 0."""
    out = []
    for _ in range(m):
        F = V.random_frame(rng)
        ph = np.exp(1j * rng.uniform(0, 2 * np.pi, (2, V.rank)))
        ph[1, 0] = ph[0, 0]
        out.append(boundary_point(ph, F))
    return np.array(out)


def test_transversality_equivalence(model, rng):
    good = sample_transverse_tuple(model, rng, 2, size=50)
    bad = non_transverse_pairs(model, rng, 50)
    same = np.stack([good[:, 0], good[:, 0]], axis=1)
    pairs = np.concatenate([good, bad, same])
    t = transversal(model, pairs[:, 0], pairs[:, 1])
    k = kernel_transversal(model, pairs[:, 0], pairs[:, 1])
    assert np.array_equal(t, k)
    assert t.sum() == 50
