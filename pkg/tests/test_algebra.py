import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jordancr.algebra import (AlgebraError, BalancedHom, DirectSum, JordanHom, RealLine, Spin, Sym,
                              apply_hom, balance_residual, complete_frame, from_json, in_cone, inv,
                              is_frame, make_diagonal_hom, parse_algebra, power, quad, real_power,
                              spectral, sqrt_cone)

from conftest import MODEL_NAMES


def test_dimensions():
    assert (Sym(3).rank, Sym(3).dim) == (3, 6)
    assert (Spin(5).rank, Spin(5).dim) == (2, 5)
    V = DirectSum((RealLine(), RealLine(), RealLine()))
    assert (V.rank, V.dim) == (3, 3)
    with pytest.raises(AlgebraError):
        Spin(2)


def test_direct_sum_flattens():
    V = parse_algebra("sum(sum(r,sym2),spin3)")
    assert [p.shorthand() for p in V.parts] == ["r", "sym2", "spin3"]
    assert V.rank == 1 + 2 + 2


@pytest.mark.parametrize("text", ["r", "r^4", "sym5", "spin6", "sum(sym2,r)"])
def test_descriptor_roundtrip(text):
    V = parse_algebra(text)
    assert from_json(V.to_json()).shorthand() == V.shorthand()


@pytest.mark.parametrize("bad", ["", "sym0", "spin2", "sum()", "foo", "r^0"])
def test_descriptor_rejects(bad):
    with pytest.raises(AlgebraError):
        parse_algebra(bad)


def test_small_products():
    assert RealLine().mul(np.array([2.0]), np.array([3.0]))[0] == 6.0
    S = Sym(2)
    E11 = S.from_matrix(np.diag([1.0, 0.0]))
    assert np.allclose(S.mul(E11, E11), E11)
    V = Spin(3)
    x = np.random.default_rng(0).standard_normal(3)
    assert np.allclose(V.mul(V.unit(), x), x)


def test_trace_det_examples():
    V = Spin(3)
    assert V.trace(V.unit()) == pytest.approx(2) and V.det(V.unit()) == pytest.approx(1)
    S = Sym(2)
    d = S.from_matrix(np.diag([2.0, 3.0]))
    assert S.trace(d) == pytest.approx(5) and S.det(d) == pytest.approx(6)
    W = real_power(2)
    x = np.array([2.0, 3.0])
    assert W.trace(x) == pytest.approx(5) and W.det(x) == pytest.approx(6)
    sd = spectral(W, x)
    assert np.prod(sd.eigenvalues) == pytest.approx(6)
    assert np.allclose(sd.recompose(), x)


def test_spectral_examples():
    sd = spectral(RealLine(), np.array([5.0]))
    assert np.allclose(sd.eigenvalues, [5.0]) and np.allclose(sd.frame.idempotents, [[1.0]])
    V = Spin(3)
    sd = spectral(V, np.array([1.0, 1.0, 0.0]))
    assert np.allclose(sd.eigenvalues, [2.0, 0.0])
    assert np.allclose(sd.frame.idempotents, [[0.5, 0.5, 0.0], [0.5, -0.5, 0.0]])
    S = Sym(2)
    sd = spectral(S, S.from_matrix(np.diag([2.0, 3.0])))
    assert np.allclose(sd.eigenvalues, [3.0, 2.0])
    assert np.allclose(S.to_matrix(sd.frame.idempotents[0]), np.diag([0.0, 1.0]))


@pytest.mark.parametrize("name", MODEL_NAMES + ["spin5", "sym4"])
def test_jordan_identity_and_recomposition(name):
    V = parse_algebra(name)
    rng = np.random.default_rng(1)
    x, y = V.random_element(rng, (50,)), V.random_element(rng, (50,))
    xx = V.mul(x, x)
    assert np.allclose(V.mul(x, V.mul(xx, y)), V.mul(xx, V.mul(x, y)), atol=1e-10)
    assert np.allclose(V.mul(x, y), V.mul(y, x))
    vals, frame = V.spectral_arrays(x)
    assert np.allclose(np.einsum("sj,sjn->sn", vals, frame), x, atol=1e-10)
    assert all(is_frame(V, f) for f in frame[:10])
    # the trace form is associative: (xy, z) = (y, xz)
    z = V.random_element(rng, (50,))
    assert np.allclose(V.inner(V.mul(x, y), z), V.inner(y, V.mul(x, z)))


@pytest.mark.parametrize("name", MODEL_NAMES + ["spin5"])
def test_automorphisms_preserve_product(name):
    V = parse_algebra(name)
    rng = np.random.default_rng(2)
    g = V.random_automorphism(rng)
    x, y = V.random_element(rng, (20,)), V.random_element(rng, (20,))
    assert np.allclose(V.mul(x @ g.T, y @ g.T), V.mul(x, y) @ g.T, atol=1e-10)


def test_complete_frame_examples():
    S = Sym(2)
    f = complete_frame(S, [S.unit()])
    assert is_frame(S, f.idempotents)
    assert np.allclose(f.idempotents.sum(axis=0), S.unit())
    given_frame = S.standard_frame()
    assert np.allclose(complete_frame(S, given_frame).idempotents, given_frame)
    S3 = Sym(3)
    p = S3.from_matrix(np.diag([1.0, 1.0, 0.0]))
    q = S3.from_matrix(np.diag([0.0, 0.0, 1.0]))
    f = complete_frame(S3, [p, q]).idempotents
    assert is_frame(S3, f)
    assert np.allclose(f[0] + f[1], p) and np.allclose(f[2], q)
    for c in f[:2]:
        assert np.linalg.matrix_rank(S3.to_matrix(c), tol=1e-8) == 1


def test_homomorphisms():
    h = make_diagonal_hom(RealLine(), real_power(3))
    assert np.allclose(apply_hom(h, np.array([2.0])), [2.0, 2.0, 2.0])
    h = make_diagonal_hom(real_power(2), Sym(2))
    out = apply_hom(h, np.array([2.0, 3.0]))
    assert np.allclose(Sym(2).to_matrix(out), np.diag([2.0, 3.0]))
    assert Sym(2).trace(out) / 2 == pytest.approx(5 / 2)
    bad = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(AlgebraError):
        BalancedHom(real_power(2), real_power(3), bad)
    assert balance_residual(JordanHom(real_power(2), real_power(3), bad)) > 1e-2


def test_cone_ops():
    S = Sym(2)
    e = S.unit()
    assert in_cone(S, e)
    assert np.allclose(sqrt_cone(S, e), e) and np.allclose(inv(S, e), e)
    d = S.from_matrix(np.diag([4.0, 9.0]))
    assert np.allclose(S.to_matrix(sqrt_cone(S, d)), np.diag([2.0, 3.0]))
    assert not in_cone(Spin(3), np.array([1.0, 1.0, 0.0]))
    assert np.allclose(power(S, d, -1), inv(S, d))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(MODEL_NAMES))
def test_quadratic_rep_of_unit_and_inverse(seed, name):
    V = parse_algebra(name)
    rng = np.random.default_rng(seed)
    x = V.random_element(rng)
    assert np.allclose(quad(V, V.unit(), x), x)
    # P(x) x^{-1} = x for invertible x
    vals = V.eigvals(x)
    if np.min(np.abs(vals)) > 1e-3:
        assert np.allclose(quad(V, x, V.inv(x)), x, atol=1e-8 * (1 + np.max(np.abs(vals)) ** 2))
