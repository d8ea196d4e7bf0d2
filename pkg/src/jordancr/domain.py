"""Complexified algebra, bounded domain, tube domain and Shilov boundary.

Complex coordinate arrays play the role of elements of the complexification;
``z.real`` and ``z.imag`` are the two real parts. A Shilov point is a complex
array ``z`` with ``z`` invertible and ``z^{-1} = conj(z)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraError, JordanAlgebra, JordanFrame, in_cone
from .tolerance import get_tol


class DomainError(AlgebraError):
    """Singular denominator, invalid boundary point or failed decomposition."""


def cmul(V: JordanAlgebra, z, w):
    return V.mul(z, w)


def cdet(V: JordanAlgebra, z):
    return V.det(np.asarray(z, dtype=complex))


def conj(z):
    return np.conj(z)


def _scale(z):
    return np.maximum(1.0, np.max(np.abs(z), axis=-1))


def _singular(V: JordanAlgebra, z, rel: float = 1e-13):
    return np.abs(cdet(V, z)) <= rel * _scale(z) ** V.rank


def cinv(V: JordanAlgebra, z):
    z = np.asarray(z, dtype=complex)
    if np.any(_singular(V, z)):
        raise DomainError("singular element in cinv")
    return V.inv(z)


def cayley(V: JordanAlgebra, w):
    """``c(w) = i (e + w)(e - w)^{-1}`` from the ball picture to the tube."""
    w = np.asarray(w, dtype=complex)
    e = V.unit()
    if np.any(_singular(V, e - w)):
        raise DomainError("e - w is singular")
    return 1j * V.mul(e + w, V.inv(e - w))


def inv_cayley(V: JordanAlgebra, z):
    """``p(z) = (z - ie)(z + ie)^{-1}``, inverse of :func:`cayley`."""
    z = np.asarray(z, dtype=complex)
    e = V.unit()
    if np.any(_singular(V, z + 1j * e)):
        raise DomainError("z + ie is singular")
    return V.mul(z - 1j * e, V.inv(z + 1j * e))


def in_tube(V: JordanAlgebra, z):
    return in_cone(V, np.asarray(z).imag)


def spectral_norm(V: JordanAlgebra, z):
    """Largest singular value of ``z`` for the spectral norm of the domain."""
    z = np.asarray(z, dtype=complex)
    out = []
    for p, s in zip(V.parts, V.slices):
        zp = z[..., s]
        if p.kind == "RealLine":
            out.append(np.abs(zp[..., 0]))
        elif p.kind == "Sym":
            out.append(np.linalg.norm(p.to_matrix(zp), ord=2, axis=(-2, -1)))
        else:
            t = p.trace(p.mul(zp, np.conj(zp))).real
            d = np.abs(p.det(zp))
            out.append(np.sqrt(0.5 * (t + np.sqrt(np.maximum(t * t - 4 * d * d, 0.0)))))
    return np.max(np.stack(out, axis=-1), axis=-1)


def in_domain(V: JordanAlgebra, z):
    """Open unit ball of the spectral norm (Sym: ``I - Z Z^*`` positive definite)."""
    return spectral_norm(V, z) < 1.0


def shilov_residual(V: JordanAlgebra, z):
    z = np.asarray(z, dtype=complex)
    with np.errstate(all="ignore"):
        res = np.max(np.abs(V.mul(z, np.conj(z)) - V.unit()), axis=-1)
    return np.where(np.isfinite(res), res, np.inf)


def is_shilov(V: JordanAlgebra, z, tol: float | None = None):
    """``z`` invertible with ``z^{-1} = conj(z)``, checked as ``z conj(z) = e``."""
    tol = get_tol() if tol is None else tol
    return shilov_residual(V, z) <= 10 * tol


@dataclass(frozen=True)
class BoundarySpectral:
    frame: JordanFrame
    phases: np.ndarray

    def recompose(self) -> np.ndarray:
        return self.phases @ self.frame.idempotents


def boundary_point(phases, frame):
    """``sum_j lambda_j c_j`` (batched over leading axes)."""
    return np.einsum("...j,...jn->...n", np.asarray(phases, dtype=complex), frame)


def shilov_phases(V: JordanAlgebra, s, check: bool = True):
    """Batched spectral form of Shilov points: ``(phases (..., r), frame (..., r, n))``."""
    s = np.asarray(s, dtype=complex)
    if check and not np.all(is_shilov(V, s)):
        raise DomainError("input is not a Shilov boundary point")
    frame = V.joint_frame(s.real, s.imag)
    phases = V.trace(V.mul(s[..., None, :], frame)) / V.primitive_trace
    if check:
        err = np.max(np.abs(boundary_point(phases, frame) - s))
        if err > 1e-9:
            raise DomainError(f"joint diagonalization failed (residual {err:.2e})")
    return phases, frame


def shilov_spectral(V: JordanAlgebra, s) -> BoundarySpectral:
    phases, frame = shilov_phases(V, s)
    return BoundarySpectral(JordanFrame(frame), phases)


def transversality_margin(V: JordanAlgebra) -> float:
    return 1e-8 * 2.0 ** V.rank


def transversal(V: JordanAlgebra, z, w):
    """``|det(z - w)| > 1e-8 * 2^r``."""
    diff = np.asarray(z, dtype=complex) - np.asarray(w, dtype=complex)
    return np.abs(cdet(V, diff)) > transversality_margin(V)
