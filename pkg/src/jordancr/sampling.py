"""Seeded samplers for Shilov points, transverse tuples and extremal quadruples."""

from __future__ import annotations

import numpy as np

from .algebra import AlgebraError, JordanAlgebra
from .conformal import apply_masked, random_word
from .domain import boundary_point, cdet
from .kernel import classify_codes

KINDS = ("PositiveInner", "PositiveOuter", "Negative")
_ARCS = {"PositiveInner": (-np.pi, -np.pi / 2), "PositiveOuter": (-np.pi / 2, 0.0),
         "Negative": (0.0, np.pi)}


class SamplingError(AlgebraError):
    """Rejection-sampling budget exhausted."""


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_frames(V: JordanAlgebra, rng: np.random.Generator, m: int) -> np.ndarray:
    return np.stack([V.random_frame(rng) for _ in range(m)])


def sample_shilov(V: JordanAlgebra, seed, size: int | None = None):
    """Random frame with independent uniform phases."""
    rng = _rng(seed)
    m = 1 if size is None else size
    pts = boundary_point(np.exp(1j * rng.uniform(0, 2 * np.pi, (m, V.rank))), random_frames(V, rng, m))
    return pts[0] if size is None else pts


def _well_transverse(V, z, w, margin):
    return np.abs(cdet(V, z - w)) > margin * 2.0 ** V.rank


def sample_transverse_tuple(V: JordanAlgebra, seed, k: int, size: int | None = None,
                            margin: float = 1e-3, budget: int = 50):
    """``k`` pairwise transverse Shilov points (``(size, k, n)`` when batched).

    The margin on ``|det(z_i - z_j)|`` is stricter than the transversality
    threshold so the tuples are well conditioned.
    """
    rng = _rng(seed)
    m = 1 if size is None else size
    out = np.empty((m, k, V.dim), dtype=complex)
    todo = np.arange(m)
    for _ in range(budget):
        pts = np.stack([sample_shilov(V, rng, len(todo)) for _ in range(k)], axis=1)
        good = np.ones(len(todo), dtype=bool)
        for i in range(k):
            for j in range(i + 1, k):
                good &= _well_transverse(V, pts[:, i], pts[:, j], margin)
        out[todo[good]] = pts[good]
        todo = todo[~good]
        if todo.size == 0:
            return out[0] if size is None else out
    raise SamplingError(f"transverse sampler: {todo.size} of {m} tuples unresolved after {budget} rounds")


def sample_extremal_quadruple(V: JordanAlgebra, seed, kind: str | None = None,
                              size: int | None = None, word_length: int = 4,
                              permute: bool = False, delta: float = 0.05, budget: int = 20,
                              margin: float = 1e-3):
    """Extremal quadruples, batched as ``(size, 4, n)``.

    Start from ``(-e, -ie, e, d)`` where every phase of ``d`` lies in one arc
    (kept ``delta`` away from its ends): ``(-pi, -pi/2)`` gives a positive
    inner quadruple, ``(-pi/2, 0)`` a positive outer one and ``(0, pi)`` a
    negative one. ``d`` uses a random frame. The configuration is then moved
    by a random conformal word; with ``permute`` the four points are also
    shuffled. Every output is re-checked by the Maslov classification.
    """
    rng = _rng(seed)
    m = 1 if size is None else size
    if kind is not None and kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    e = V.unit().astype(complex)
    out = np.empty((m, 4, V.dim), dtype=complex)
    todo = np.arange(m)
    for _ in range(budget):
        cnt = len(todo)
        ks = [kind or KINDS[i] for i in rng.integers(len(KINDS), size=cnt)]
        lo = np.array([_ARCS[q][0] for q in ks]) + delta
        hi = np.array([_ARCS[q][1] for q in ks]) - delta
        theta = lo[:, None] + (hi - lo)[:, None] * rng.uniform(size=(cnt, V.rank))
        d = boundary_point(np.exp(1j * theta), random_frames(V, rng, cnt))
        quads = np.stack([np.broadcast_to(-e, d.shape), np.broadcast_to(-1j * e, d.shape),
                          np.broadcast_to(e, d.shape), d], axis=1)
        ok = np.ones(cnt, dtype=bool)
        if word_length:
            group = 8
            for g0 in range(0, cnt, group):
                w = random_word(V, rng, word_length)
                img, good = apply_masked(V, w, quads[g0:g0 + group])
                quads[g0:g0 + group] = np.where(good[..., None], img, quads[g0:g0 + group])
                ok[g0:g0 + group] &= np.all(good, axis=-1)
        if permute:
            perms = np.array([rng.permutation(4) for _ in range(cnt)])
            quads = np.take_along_axis(quads, perms[:, :, None], axis=1)
        for i in range(4):
            for j in range(i + 1, 4):
                ok &= _well_transverse(V, quads[:, i], quads[:, j], margin)
        if np.any(ok):
            label, _, _ = classify_codes(V, *(quads[ok, i] for i in range(4)))
            idx = np.flatnonzero(ok)
            ok[idx[label == 3]] = False
        out[todo[ok]] = quads[ok]
        todo = todo[~ok]
        if todo.size == 0:
            return out[0] if size is None else out
    raise SamplingError(f"extremal sampler: {todo.size} of {m} quadruples unresolved after {budget} rounds")
