import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jordancr.algebra import RealLine, Spin, Sym, parse_algebra
from jordancr.domain import (DomainError, boundary_point, cayley, cdet, cinv, in_domain, in_tube,
                             inv_cayley, is_shilov, shilov_spectral, transversal)
from jordancr.sampling import sample_extremal_quadruple, sample_shilov, sample_transverse_tuple
from jordancr.kernel import maslov

from conftest import MODEL_NAMES


def test_complex_scalar_examples():
    assert cinv(RealLine(), np.array([1j]))[0] == pytest.approx(-1j)
    S = Sym(2)
    assert cdet(S, 1j * S.unit()) == pytest.approx(-1)
    assert cdet(Spin(3), np.array([1j, 0, 0])) == pytest.approx(-1)


def test_cayley_examples(model):
    e = model.unit().astype(complex)
    assert np.allclose(cayley(model, -e), 0)
    assert np.allclose(cayley(model, 0 * e), 1j * e)
    assert np.allclose(cayley(RealLine(), np.array([-1j])), [1.0])
    with pytest.raises(DomainError):
        cayley(model, e)


def test_cayley_roundtrip_interior(model, rng):
    w = 0.3 * (model.random_element(rng, (200,)) + 1j * model.random_element(rng, (200,)))
    w = w[in_domain(model, w)]
    assert len(w) > 50
    z = cayley(model, w)
    assert np.all(in_tube(model, z))
    assert np.allclose(inv_cayley(model, z), w, atol=1e-10)


def test_domain_membership(model):
    e = model.unit().astype(complex)
    assert in_domain(model, 0 * e)
    assert not in_domain(model, e)
    assert in_tube(model, 1j * e)


def test_shilov_spectral_examples():
    S = Sym(2)
    bs = shilov_spectral(S, S.unit().astype(complex))
    assert np.allclose(bs.phases, 1)
    bs = shilov_spectral(S, -1j * S.unit())
    assert np.allclose(bs.phases, -1j)
    s = S.from_matrix(np.diag([1.0, 1j]))
    bs = shilov_spectral(S, s)
    assert np.allclose(np.sort_complex(bs.phases), np.sort_complex(np.array([1, 1j])))
    assert np.allclose(bs.recompose(), s)
    with pytest.raises(DomainError):
        shilov_spectral(S, 0.5 * S.unit())


def test_transversal_examples(model):
    e = model.unit().astype(complex)
    assert transversal(model, e, -e)
    assert abs(cdet(model, 2 * e)) == pytest.approx(2.0 ** model.rank)
    assert not transversal(model, e, e)
    S = Sym(2)
    assert not transversal(S, S.unit().astype(complex), S.from_matrix(np.diag([1.0, -1.0])).astype(complex))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(MODEL_NAMES))
def test_samplers(seed, name):
    V = parse_algebra(name)
    assert is_shilov(V, sample_shilov(V, seed))
    z, w = sample_transverse_tuple(V, seed, 2)
    assert transversal(V, z, w)
    a, b, c, d = sample_extremal_quadruple(V, seed, permute=True)
    for tri in [(a, b, c), (a, b, d), (a, c, d), (b, c, d)]:
        assert abs(maslov(V, *tri)) == V.rank


def test_sampler_determinism(model):
    q1 = sample_extremal_quadruple(model, 99, size=5)
    q2 = sample_extremal_quadruple(model, 99, size=5)
    assert np.array_equal(q1, q2)


def test_boundary_point_is_shilov(model, rng):
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, (30, model.rank)))
    frames = np.stack([model.random_frame(rng) for _ in range(30)])
    assert np.all(is_shilov(model, boundary_point(phases, frames)))
