"""Automorphy kernel, Maslov index and the generalized cross ratio.

Two independent algorithms compute the cross ratio of an extremal quadruple:

* path B (:func:`cross_ratio`) normalizes ``(a, c)`` to ``(0, inf)`` in the
  tube, rescales the image of ``b`` to ``+-e`` and reads the value off the
  image of ``d`` through a Jordan determinant;
* path A (:func:`cross_ratio_path_a`) takes magnitudes of the operator
  determinants of the automorphy kernel and the sign from the Maslov-index
  classification of the quadruple.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraError, JordanAlgebra, quad
from .conformal import ConformalWord, Rotate, Translate
from .domain import (DomainError, cayley, cdet, shilov_phases, transversal)
from .tolerance import get_tol


class KernelError(AlgebraError):
    """Precondition failure: non-transverse or non-extremal input."""


# operators ---------------------------------------------------------------------

def lop(V: JordanAlgebra, z):
    """Matrix of left multiplication ``L(z)`` (columns are images of basis vectors)."""
    z = np.asarray(z)
    eye = np.eye(V.dim)
    images = V.mul(z[..., None, :], eye)
    return np.swapaxes(images, -1, -2)


def box(V: JordanAlgebra, z, w):
    """``z box w = L(zw) + [L(z), L(w)]``."""
    lz, lw = lop(V, z), lop(V, w)
    return lop(V, V.mul(z, w)) + lz @ lw - lw @ lz


def quad_rep(V: JordanAlgebra, z):
    """``P(z) = 2 L(z)^2 - L(z^2)``."""
    lz = lop(V, z)
    return 2 * lz @ lz - lop(V, V.mul(z, z))


def aut_kernel(V: JordanAlgebra, z, w):
    """``K(z, w) = I - 2 z box conj(w) + P(z) P(conj(w))``."""
    z = np.asarray(z, dtype=complex)
    wb = np.conj(np.asarray(w, dtype=complex))
    return np.eye(V.dim) - 2 * box(V, z, wb) + quad_rep(V, z) @ quad_rep(V, wb)


def kdet_parts(V: JordanAlgebra, z, w) -> list:
    """Operator determinants of the kernel on each simple ideal."""
    z, w = np.asarray(z, dtype=complex), np.asarray(w, dtype=complex)
    return [np.linalg.det(aut_kernel(p, z[..., s], w[..., s])) for p, s in zip(V.parts, V.slices)]


def kdet(V: JordanAlgebra, z, w):
    """Complex determinant of ``K(z, w)`` (product over the block-diagonal ideals)."""
    out = 1.0
    for k in kdet_parts(V, z, w):
        out = out * k
    return out


KERNEL_MARGIN = 1e-6


def kernel_transversal(V: JordanAlgebra, z, w):
    """Transversality read off the kernel: ``prod_i |Det K_i|^{1/genus_i} > 1e-6 * 2^r``.

    On Shilov points ``|Det K_i| = |det(z_i - w_i)|^{genus_i}``, so this is the
    kernel-side counterpart of :func:`~jordancr.domain.transversal`. The
    kernel determinant vanishes to order ``genus`` at a non-transverse pair,
    so after the root its rounding floor is near ``sqrt(eps)``; the margin
    sits above that floor.
    """
    with np.errstate(divide="ignore"):
        logs = sum(np.log(np.abs(k)) / p.genus for p, k in zip(V.parts, kdet_parts(V, z, w)))
    return logs > np.log(KERNEL_MARGIN * 2.0 ** V.rank)


def _rank_weighted(V: JordanAlgebra, mags) -> np.ndarray:
    # (prod_i m_i^{r_i / (2 n_i)})^{1/r} computed in logs
    logs = sum(p.rank / (2.0 * p.dim) * np.log(m) for p, m in zip(V.parts, mags))
    return np.exp(logs / V.rank)


def k_mag(V: JordanAlgebra, z, w):
    """``|k_V(z, w)|``: ``|Det K|^{1/(2n)}`` on simple ideals, rank-weighted over ideals."""
    with np.errstate(divide="ignore"):
        return _rank_weighted(V, [np.abs(k) for k in kdet_parts(V, z, w)])


# normalization -------------------------------------------------------------------

def _unit_root(V: JordanAlgebra, c):
    """``s = sum_j conj(lambda_j)^{1/2} c_j`` so that ``P(s) c = e``."""
    phases, frame = shilov_phases(V, c, check=False)
    return np.einsum("...j,...jn->...n", np.sqrt(np.conj(phases)), frame)


def _tube_masked(V: JordanAlgebra, z):
    """Real tube coordinate of boundary points transverse to ``e``, with a validity mask."""
    e = V.unit()
    d = e - z
    # each spectral factor of e - z must stay above 1e-9
    ok = np.abs(cdet(V, d)) > 1e-9 ** V.rank
    safe = np.where(ok[..., None], d, e)
    t = 1j * V.mul(e + z, V.inv(safe))
    scale = np.maximum(1.0, np.max(np.abs(t), axis=-1))
    ok &= np.max(np.abs(t.imag), axis=-1) <= 1e-6 * scale
    return np.where(ok[..., None], t.real, np.nan), ok


def _tube_real(V: JordanAlgebra, z, what: str):
    t, ok = _tube_masked(V, z)
    if not np.all(ok):
        raise DomainError(f"{what} is not transverse to the normalizing point")
    return t


def _normalized(V: JordanAlgebra, anchor_inf, pts):
    """Tube coordinates of ``pts`` after rotating ``anchor_inf`` to ``e``, plus a joint mask."""
    s = _unit_root(V, anchor_inf)
    out, ok = [], True
    for p in pts:
        t, m = _tube_masked(V, quad(V, s, p))
        out.append(t)
        ok = ok & m
    return out, ok


def normalize_pair(V: JordanAlgebra, a, c) -> ConformalWord:
    """Word mapping ``a -> -e`` and ``c -> e``.

    First the rotation ``P(s)`` with ``s^2 = conj(c)`` spectrally sends ``c`` to
    ``e`` (infinity of the tube); then the image of ``a`` has a real tube
    coordinate ``x_a`` and the translation by ``-x_a`` sends it to ``0``,
    which is ``-e`` in the ball.
    """
    a, c = np.asarray(a, dtype=complex), np.asarray(c, dtype=complex)
    if not transversal(V, a, c):
        raise KernelError("normalize_pair needs transverse points")
    s = _unit_root(V, c)
    xa = _tube_real(V, quad(V, s, a), "a")
    return ConformalWord((Translate(-xa), Rotate(s)))


# Maslov index -----------------------------------------------------------------------

def _signature(V, x):
    vals = V.eigvals(x)
    scale = np.maximum(np.max(np.abs(vals), axis=-1, keepdims=True), 1e-300)
    sing = np.any(np.abs(vals) <= 1e-12 * scale, axis=-1)
    return np.sum(np.sign(vals), axis=-1).astype(int), sing


def _require_transverse(V, *pairs):
    for z, w in pairs:
        if not np.all(transversal(V, z, w)):
            raise KernelError("points are not pairwise transverse")


def maslov(V: JordanAlgebra, z1, z2, z3, check: bool = True):
    """Maslov index of a pairwise transverse triple (batched).

    After rotating ``z3`` to infinity, ``z1`` and ``z2`` have real tube
    coordinates ``x1, x2``; the index is the signature of ``x2 - x1``.
    """
    z1, z2, z3 = (np.asarray(z, dtype=complex) for z in (z1, z2, z3))
    if check:
        _require_transverse(V, (z1, z2), (z2, z3), (z1, z3))
    (x1, x2), ok = _normalized(V, z3, [z1, z2])
    if check and not np.all(ok):
        raise KernelError("points are not pairwise transverse")
    diff = np.where(np.asarray(ok)[..., None], x2 - x1, V.unit())
    sig, sing = _signature(V, diff)
    if check and np.any(sing):
        raise KernelError("degenerate triple")
    sig = np.where(ok & ~sing, sig, 0)
    return sig if np.ndim(sig) else int(sig)


# classification ------------------------------------------------------------------------

LABELS = ("PositiveInner", "PositiveOuter", "Negative", "NotExtremal")


@dataclass(frozen=True)
class QuadClass:
    label: str
    maximal_base: bool
    epsilon: int | None

    def to_json(self):
        return {"label": self.label, "maximal_base": self.maximal_base, "epsilon": self.epsilon}


def maslov_table(V: JordanAlgebra, a, b, c, d) -> dict:
    """The four Maslov indices used for classification."""
    return {"abc": maslov(V, a, b, c, check=False), "adc": maslov(V, a, d, c, check=False),
            "adb": maslov(V, a, d, b, check=False), "bdc": maslov(V, b, d, c, check=False)}


def classify_codes(V: JordanAlgebra, a, b, c, d):
    """Batched classification: ``(label index into LABELS, maximal_base, epsilon)``.

    The base triple ``(a, b, c)`` fixes an orientation ``o = mu(a,b,c)/r``.
    The quadruple is positive when ``mu(a,d,c) = mu(a,b,c)``; it is inner when
    ``d`` lies between ``a`` and ``b`` (``mu(a,d,b) = mu(a,b,c)``) and outer when
    it lies between ``b`` and ``c``. For a maximal base this is the rule
    ``mu(a,d,c) = r``, ``mu(a,d,b) = r``, ``mu(b,d,c) = r``; a minimal base is
    read with the orientation reversed.
    """
    m = maslov_table(V, a, b, c, d)
    r = V.rank
    extremal = np.all([np.abs(v) == r for v in m.values()], axis=0)
    base = np.asarray(m["abc"])
    eps = np.where(np.asarray(m["adc"]) == base, 1, -1)
    inner = np.asarray(m["adb"]) == base
    label = np.where(eps < 0, 2, np.where(inner, 0, 1))
    label = np.where(extremal, label, 3)
    return label, base > 0, np.where(extremal, eps, 0)


def classify_quadruple(V: JordanAlgebra, a, b, c, d) -> QuadClass:
    _require_transverse(V, (a, b), (a, c), (a, d), (b, c), (b, d), (c, d))
    label, maxb, eps = classify_codes(V, a, b, c, d)
    label = int(label)
    return QuadClass(LABELS[label], bool(maxb), None if label == 3 else int(eps))


# cross ratio, path B -----------------------------------------------------------------

def cross_ratio_batch(V: JordanAlgebra, a, b, c, d):
    """Path B on a batch of generic quadruples.

    Returns ``(B, valid)``; ``B`` is NaN where the quadruple is not extremal
    or a required transversality fails.
    """
    a, b, c, d = (np.asarray(z, dtype=complex) for z in (a, b, c, d))
    (ta, tb, td), ok = _normalized(V, c, [a, b, d])
    okc = np.asarray(ok)[..., None]
    y = np.where(okc, tb - ta, V.unit())
    x = np.where(okc, td - ta, 2 * V.unit())
    vals_y, frame_y = V.spectral_arrays(y)
    u = np.einsum("...j,...jn->...n", np.abs(vals_y) ** -0.5, frame_y)
    xp = quad(V, u, x)
    r = V.rank
    sy, sing_y = _signature(V, y)
    sx, sing_x = _signature(V, xp)
    sxy, sing_xy = _signature(V, x - y)
    valid = ok & ~(sing_y | sing_x | sing_xy)
    valid &= (np.abs(sy) == r) & (np.abs(sx) == r) & (np.abs(sxy) == r)
    valid &= np.abs(sy + sxy - sx) == r
    mag = np.abs(V.det(xp)) ** (1.0 / r)
    out = np.sign(sy) * np.sign(sx) * mag
    return np.where(valid, out, np.nan), valid


def _same(z, w):
    return np.max(np.abs(np.asarray(z) - np.asarray(w))) <= 10 * get_tol()


def _coincidence(a, b, c, d):
    if _same(a, b) or _same(c, d):
        raise KernelError("b = a or d = c is outside the domain of the cross ratio")
    if _same(a, c) or _same(b, d):
        return 1.0
    if _same(a, d) or _same(b, c):
        return 0.0
    return None


def cross_ratio(V: JordanAlgebra, a, b, c, d) -> float:
    """Generalized cross ratio of an extremal quadruple (path B).

    Coincidences are short-circuited: ``a = c`` or ``b = d`` gives 1,
    ``d = a`` or ``b = c`` gives 0.
    """
    special = _coincidence(a, b, c, d)
    if special is not None:
        return special
    _require_transverse(V, (a, b), (a, c), (a, d), (b, c), (b, d), (c, d))
    val, valid = cross_ratio_batch(V, a, b, c, d)
    if not valid:
        raise KernelError("quadruple is not extremal")
    return float(val)


# cross ratio, path A -----------------------------------------------------------------

def cross_ratio_det_parts(V: JordanAlgebra, a, b, c, d) -> list:
    num1, num2 = kdet_parts(V, d, a), kdet_parts(V, b, c)
    den1, den2 = kdet_parts(V, d, c), kdet_parts(V, b, a)
    out = []
    for n1, n2, d1, d2 in zip(num1, num2, den1, den2):
        if np.any(np.abs(d1 * d2) == 0):
            raise KernelError("kernel vanishes")
        out.append(n1 * n2 / (d1 * d2))
    return out


def cross_ratio_det(V: JordanAlgebra, a, b, c, d):
    """``kdet(d,a) kdet(b,c) / (kdet(d,c) kdet(b,a))`` as a raw complex number."""
    out = 1.0
    for q in cross_ratio_det_parts(V, a, b, c, d):
        out = out * q
    return out


def path_a_batch(V: JordanAlgebra, a, b, c, d):
    """Path A on a batch: magnitude from kernel determinants, sign from the classification."""
    mags = [np.abs(q) for q in cross_ratio_det_parts(V, a, b, c, d)]
    label, _, eps = classify_codes(V, a, b, c, d)
    val = eps * _rank_weighted(V, mags)
    return np.where(label == 3, np.nan, val), label != 3


def cross_ratio_path_a(V: JordanAlgebra, a, b, c, d) -> float:
    _require_transverse(V, (a, b), (a, c), (a, d), (b, c), (b, d), (c, d))
    val, valid = path_a_batch(V, a, b, c, d)
    if not valid:
        raise KernelError("quadruple is not extremal")
    return float(val)


# Bergman cross ratio -------------------------------------------------------------------

def bergman_kernel(V: JordanAlgebra, z, w):
    """Bergman kernel up to its volume constant: ``prod_i h_i(z, w)^{-genus_i}``."""
    z, w = np.asarray(z, dtype=complex), np.asarray(w, dtype=complex)
    out = 1.0
    for p, s in zip(V.parts, V.slices):
        out = out * p.generic_norm(z[..., s], w[..., s]) ** (-p.genus)
    return out


def bergman_cross(V: JordanAlgebra, x, y, z, t):
    """``K(t,z) K(y,x) / (K(t,x) K(y,z))`` for interior points, via generic norms."""
    return (bergman_kernel(V, t, z) * bergman_kernel(V, y, x)
            / (bergman_kernel(V, t, x) * bergman_kernel(V, y, z)))


def evaluate_quadruple(V: JordanAlgebra, a, b, c, d) -> dict:
    """Report record with both paths, the classification and the Maslov table."""
    special = _coincidence(a, b, c, d)
    if special is not None:
        return {"B": special, "class": "Coincidence", "maslov": {}, "paths": {"A": None, "B": special}}
    cls = classify_quadruple(V, a, b, c, d)
    m = {k: int(v) for k, v in maslov_table(V, a, b, c, d).items()}
    det = complex(cross_ratio_det(V, a, b, c, d))
    if cls.label == "NotExtremal":
        return {"B": None, "class": cls.label, "maslov": m,
                "paths": {"A": [det.real, det.imag], "B": None}}
    b_val = cross_ratio(V, a, b, c, d)
    return {"B": b_val, "class": cls.label, "maximal_base": cls.maximal_base, "maslov": m,
            "paths": {"A": [det.real, det.imag], "A_signed": cross_ratio_path_a(V, a, b, c, d),
                      "B": b_val}}
