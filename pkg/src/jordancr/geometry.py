"""Tube metric, the space of positive operators and translation lengths."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvalsh

from .algebra import AlgebraError, JordanAlgebra, in_cone, quad


class GeometryError(AlgebraError):
    """Invalid geometric input (outside the tube, not positive definite, ...)."""


@dataclass(frozen=True)
class MetricConfig:
    kappa: float = 1.0

    def __post_init__(self):
        if not self.kappa > 0:
            raise GeometryError("kappa must be positive")


def tube_metric(V: JordanAlgebra, z, a, b, config: MetricConfig = MetricConfig()):
    """``H_z(a, b) = kappa * (2n/r) * tr(P(2 Im z)^{-1} a . conj(b))``."""
    z = np.asarray(z, dtype=complex)
    y2 = 2 * z.imag
    if not np.all(in_cone(V, y2)):
        raise GeometryError("Im z must lie in the open cone")
    pa = quad(V, V.inv(y2), np.asarray(a, dtype=complex))
    return config.kappa * (2.0 * V.dim / V.rank) * V.trace(V.mul(pa, np.conj(b)))


def monotonicity_gap(V: JordanAlgebra, z, a, config: MetricConfig = MetricConfig()):
    """``H_z(a, a) - H_{i Im z}(i Im a, i Im a)``; nonnegative on the tube."""
    z, a = np.asarray(z, dtype=complex), np.asarray(a, dtype=complex)
    iy, ib = 1j * z.imag, 1j * a.imag
    return (tube_metric(V, z, a, a, config) - tube_metric(V, iy, ib, ib, config)).real


def monotonicity_check(V: JordanAlgebra, samples: int = 10000, seed: int = 0) -> dict:
    """Smallest relative monotonicity gap over random tube points and tangent vectors."""
    rng = np.random.default_rng(seed)
    frames = np.stack([V.random_frame(rng) for _ in range(samples)])
    y = np.einsum("sj,sjn->sn", np.exp(rng.standard_normal((samples, V.rank))), frames)
    z = rng.standard_normal((samples, V.dim)) + 1j * y
    a = rng.standard_normal((samples, V.dim)) + 1j * rng.standard_normal((samples, V.dim))
    gap = monotonicity_gap(V, z, a)
    scale = tube_metric(V, z, a, a).real
    rel = gap / scale
    return {"samples": samples, "min_relative_gap": float(np.min(rel)), "passed": bool(np.min(rel) >= -1e-12)}


# positive operators ---------------------------------------------------------------

def _check_spd(p):
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != p.shape[-2] or not np.allclose(p, np.swapaxes(p, -1, -2), atol=1e-10 * (1 + np.abs(p).max())):
        raise GeometryError("operator is not symmetric")
    if np.min(np.linalg.eigvalsh(p)) <= 0:
        raise GeometryError("operator is not positive definite")
    return p


def pv_dist(p, q) -> float:
    """``|| log(p^{-1/2} q p^{-1/2}) ||_F`` via the generalized eigenvalues of ``(q, p)``."""
    p, q = _check_spd(p), _check_spd(q)
    lam = eigvalsh(q, p)
    return float(np.sqrt(np.sum(np.log(lam) ** 2)))


def congruence(g, p):
    g = np.asarray(g, dtype=float)
    return g @ p @ g.T


def pv_translation_lower_bound(g) -> float:
    """``|log det(g)^2| / sqrt(dim)`` for the congruence action ``p -> g p g^T``."""
    g = np.asarray(g, dtype=float)
    sign, logdet = np.linalg.slogdet(g)
    if sign == 0 or not np.isfinite(logdet):
        raise GeometryError("g is singular")
    return float(abs(2 * logdet) / np.sqrt(g.shape[0]))


def random_spd(rng: np.random.Generator, m: int, spread: float = 1.0):
    q, _ = np.linalg.qr(rng.standard_normal((m, m)))
    return (q * np.exp(spread * rng.standard_normal(m))) @ q.T


def pv_displacement_sample(g, samples: int = 1000, seed: int = 0) -> np.ndarray:
    """``d(p, g p g^T)`` at random basepoints ``p``."""
    rng = np.random.default_rng(seed)
    g = np.asarray(g, dtype=float)
    return np.array([pv_dist(p, congruence(g, p)) for p in (random_spd(rng, g.shape[0]) for _ in range(samples))])


# hyperbolic disc ---------------------------------------------------------------------

_C = np.array([[1.0, -1j], [1.0, 1j]])


def to_disc_matrix(M):
    """SU(1,1) form ``C M C^{-1}`` of ``M`` in SL(2,R), ``C: z -> (z - i)/(z + i)``."""
    return _C @ np.asarray(M, dtype=complex) @ np.linalg.inv(_C)


def _check_sl2(M):
    M = np.asarray(M, dtype=float)
    if M.shape[-2:] != (2, 2) or np.any(np.abs(np.linalg.det(M) - 1) > 1e-8):
        raise GeometryError("expected a real 2x2 matrix with determinant 1")
    return M


def disc_translation(M):
    """``2 log |lambda_max|``; zero for elliptic and parabolic elements."""
    M = _check_sl2(M)
    t = np.abs(np.trace(M, axis1=-2, axis2=-1))
    lam = 0.5 * (t + np.sqrt(np.maximum(t * t - 4, 0.0)))
    return np.where(t > 2, 2 * np.log(lam), 0.0)


def half_plane_to_circle(x):
    """Boundary point ``x`` of the upper half plane (``inf`` allowed) on the unit circle."""
    x = np.asarray(x, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = (x - 1j) / (x + 1j)
    return np.where(np.isinf(x), 1.0 + 0j, out)


def vector_to_circle(v):
    """Projective point ``[v0 : v1]`` of the real line, placed on the unit circle."""
    v = np.asarray(v, dtype=complex)
    return (v[..., 0] - 1j * v[..., 1]) / (v[..., 0] + 1j * v[..., 1])


def mobius_disc(G, w):
    """Action of an SU(1,1) matrix on disc or circle points."""
    G = np.asarray(G)
    return (G[..., 0, 0] * w + G[..., 0, 1]) / (G[..., 1, 0] * w + G[..., 1, 1])


def fixed_points(M):
    """Repelling and attracting fixed points of hyperbolic ``M`` on the unit circle."""
    M = _check_sl2(M)
    vals, vecs = np.linalg.eig(M)
    vals, vecs = vals.real, vecs.real
    order = np.argsort(np.abs(vals), axis=-1)
    rep = np.take_along_axis(vecs, order[..., None, :1], axis=-1)[..., 0]
    att = np.take_along_axis(vecs, order[..., None, 1:], axis=-1)[..., 0]
    return vector_to_circle(rep), vector_to_circle(att)


def classical_cross_ratio(a, b, c, d):
    """``(a - d)(c - b) / ((c - d)(a - b))``."""
    return (a - d) * (c - b) / ((c - d) * (a - b))


def disc_virtual_translation(M, xi):
    """``log [gamma^- : xi : gamma^+ : M xi]`` for a circle point ``xi``."""
    M = _check_sl2(M)
    if np.any(np.abs(np.trace(M, axis1=-2, axis2=-1)) <= 2):
        raise GeometryError("virtual translation length needs a hyperbolic element")
    gm, gp = fixed_points(M)
    xi = np.asarray(xi, dtype=complex)
    if np.any(np.minimum(np.abs(xi - gm), np.abs(xi - gp)) < 1e-12):
        raise GeometryError("xi is a fixed point")
    img = mobius_disc(to_disc_matrix(M), xi)
    return np.log(classical_cross_ratio(gm, xi, gp, img).real)


def power_inequality_check(g, M: int, space: str = "disc", samples: int = 1000, seed: int = 0) -> dict:
    """``tau(g) >= tau(g^M) / M``.

    On the disc both sides are closed forms. On the positive operators the
    pointwise content ``d(p, g^M p) <= M d(p, g p)`` is checked at sampled
    basepoints; the margin is the smallest slack.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    gM = np.linalg.matrix_power(np.asarray(g, dtype=float), M)
    if space == "disc":
        lhs, rhs = float(disc_translation(g)), float(disc_translation(gM)) / M
        margin = lhs - rhs
    elif space == "pv":
        rng = np.random.default_rng(seed)
        margin = np.inf
        for _ in range(samples):
            p = random_spd(rng, gM.shape[0])
            margin = min(margin, M * pv_dist(p, congruence(g, p)) - pv_dist(p, congruence(gM, p)))
        margin = float(margin)
    else:
        raise ValueError("space must be 'disc' or 'pv'")
    return {"passed": bool(margin >= -1e-9), "margin": margin}
