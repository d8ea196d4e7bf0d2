import json

import numpy as np
import pytest

from jordancr.conformal import (ConformalWord, Dilate, FrameAut, Invert, Phase, Rotate, SingularOrbit,
                                Translate, apply, apply_masked, invariance_suite, random_word, validate_gen)
from jordancr.domain import cayley, is_shilov
from jordancr.sampling import sample_extremal_quadruple, sample_shilov, sample_transverse_tuple


def test_generator_examples(model, rng):
    e = model.unit().astype(complex)
    assert np.allclose(apply(model, ConformalWord((Invert(),)), e), -e)
    z = sample_shilov(model, rng)
    assert np.allclose(apply(model, ConformalWord((Phase(np.pi),)), z), -z)
    # Dilate(4e) acts on tube points by P(4e) = 16 I
    ie_ball = np.zeros(model.dim, dtype=complex)  # the ball point 0 is ie in the tube
    img = apply(model, ConformalWord((Dilate(4 * model.unit()),)), ie_ball)
    assert np.allclose(cayley(model, img), 16j * e)


def test_empty_word_and_determinism(model):
    assert len(random_word(model, 3, 0)) == 0
    w1, w2 = random_word(model, 3, 6), random_word(model, 3, 6)
    assert json.dumps(w1.to_json()) == json.dumps(w2.to_json())


def test_word_json_roundtrip(model, rng):
    w = random_word(model, rng, 8)
    w2 = ConformalWord.from_json(json.loads(json.dumps(w.to_json())))
    z = sample_shilov(model, 5, size=20)
    assert np.allclose(apply(model, w, z), apply(model, w2, z))


def test_associativity_and_inverse(model, rng):
    z = sample_shilov(model, rng, size=40)
    for _ in range(5):
        w1, w2 = random_word(model, rng, 3), random_word(model, rng, 3)
        try:
            lhs = apply(model, w1 @ w2, z)
            rhs = apply(model, w1, apply(model, w2, z))
            back = apply(model, w1.inverse(), apply(model, w1, z))
        except SingularOrbit:
            continue
        assert np.allclose(lhs, rhs, atol=1e-8)
        assert np.allclose(back, z, atol=1e-8)


def test_words_preserve_shilov(model, rng):
    z = sample_shilov(model, rng, size=1000)
    for _ in range(10):
        img, ok = apply_masked(model, random_word(model, rng, 4), z)
        assert ok.mean() > 0.9
        assert np.all(is_shilov(model, img[ok], tol=1e-8))


def test_validation_rejects_bad_generators(model):
    with pytest.raises(Exception):
        validate_gen(model, Dilate(-model.unit()))
    with pytest.raises(Exception):
        validate_gen(model, FrameAut(2 * np.eye(model.dim)))
    validate_gen(model, Translate(np.zeros(model.dim)))


def test_invariance_harness(model, rng):
    words = [random_word(model, rng, 4) for _ in range(20)]
    quads = sample_extremal_quadruple(model, rng, size=20, permute=True)
    rep = invariance_suite(model, "cross_ratio", words, quads)
    assert rep["passed"] and rep["max_deviation"] <= 1e-8
    rep = invariance_suite(model, "maslov", words, quads[:, :3], tol=0)
    assert rep["passed"] and rep["max_deviation"] == 0
    pairs = sample_transverse_tuple(model, rng, 2, size=20)
    rep = invariance_suite(model, "transversal", words, pairs, tol=0)
    assert rep["passed"] and rep["max_deviation"] == 0
