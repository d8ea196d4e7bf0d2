"""Euclidean Jordan algebra models.

Elements are numpy arrays of coordinates with the algebra dimension as the
last axis; leading axes are batch axes. Real arrays are elements of V,
complex arrays are elements of the complexification. All products,
traces, determinants and inverses are written without conjugation, so the
same code is the complex-bilinear extension.

Coordinates
-----------
RealLine
    the scalar itself.
Sym(r)
    ``E_ii`` followed by ``(E_ij + E_ji)/sqrt(2)`` for ``i < j``; this basis
    is orthonormal for ``(x|y) = tr(xy)``.
Spin(n)
    natural coordinates ``(x0, xbar)`` with ``e = (1, 0, ..., 0)``. The
    trace form is ``2 * (x0 y0 + <xbar, ybar>)``, so inner products are
    always taken through :meth:`JordanAlgebra.inner`.
DirectSum
    concatenation of the parts.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .tolerance import get_tol


class AlgebraError(ValueError):
    """Malformed descriptor, unsupported construction or failed precondition."""


class JordanAlgebra:
    """Base class; subclasses are immutable value objects."""

    kind: str = ""
    rank: int = 0
    dim: int = 0
    genus: int = 0
    primitive_trace: float = 1.0

    # structure ------------------------------------------------------------
    @property
    def parts(self) -> tuple["JordanAlgebra", ...]:
        return (self,)

    @property
    def slices(self) -> tuple[slice, ...]:
        return (slice(0, self.dim),)

    @property
    def rank_slices(self) -> tuple[slice, ...]:
        return (slice(0, self.rank),)

    def unit(self) -> np.ndarray:
        raise NotImplementedError

    def basis(self) -> np.ndarray:
        return np.eye(self.dim)

    # arithmetic -------------------------------------------------------------
    def mul(self, x, y):
        raise NotImplementedError

    def trace(self, x):
        raise NotImplementedError

    def det(self, x):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def inner(self, x, y):
        return self.trace(self.mul(x, y))

    def square(self, x):
        return self.mul(x, x)

    # spectral theory ---------------------------------------------------------
    def eigvals(self, x) -> np.ndarray:
        return self.spectral_arrays(x)[0]

    def spectral_arrays(self, x) -> tuple[np.ndarray, np.ndarray]:
        """Eigenvalues ``(..., r)`` in descending order and frame ``(..., r, n)``."""
        raise NotImplementedError

    def joint_frame(self, x, y) -> np.ndarray:
        """A Jordan frame diagonalizing two operator-commuting real elements."""
        raise NotImplementedError

    def standard_frame(self) -> np.ndarray:
        raise NotImplementedError

    # random data --------------------------------------------------------------
    def random_frame(self, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def random_automorphism(self, rng: np.random.Generator) -> np.ndarray:
        """Coordinate matrix of a random Jordan algebra automorphism."""
        raise NotImplementedError

    def random_element(self, rng: np.random.Generator, size=()) -> np.ndarray:
        shape = tuple(np.atleast_1d(size)) if size != () else ()
        return rng.standard_normal(shape + (self.dim,))

    # generic norm h(z, w) with Det K(z, w) = h(z, w) ** genus ------------------
    def generic_norm(self, z, w):
        raise NotImplementedError

    # description -------------------------------------------------------------
    def to_json(self) -> dict:
        raise NotImplementedError

    def shorthand(self) -> str:
        raise NotImplementedError

    def describe_basis(self) -> list[str]:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.shorthand()


def _check_dim(V: JordanAlgebra, x) -> None:
    if np.shape(x)[-1:] != (V.dim,):
        raise AlgebraError(f"expected last axis of length {V.dim}, got shape {np.shape(x)}")


def _random_orthogonal(rng: np.random.Generator, m: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((m, m)))
    return q * np.sign(np.diag(r))


@dataclass(frozen=True)
class RealLine(JordanAlgebra):
    kind = "RealLine"
    rank = 1
    dim = 1
    genus = 2

    def unit(self):
        return np.ones(1)

    def mul(self, x, y):
        return np.asarray(x) * np.asarray(y)

    def trace(self, x):
        return np.asarray(x)[..., 0]

    def det(self, x):
        return np.asarray(x)[..., 0]

    def inv(self, x):
        return 1.0 / np.asarray(x)

    def spectral_arrays(self, x):
        x = np.asarray(x, dtype=float)
        frame = np.broadcast_to(np.ones((1, 1)), x.shape[:-1] + (1, 1)).copy()
        return x.copy(), frame

    def joint_frame(self, x, y):
        return np.broadcast_to(np.ones((1, 1)), np.shape(x)[:-1] + (1, 1)).copy()

    def standard_frame(self):
        return np.ones((1, 1))

    def random_frame(self, rng):
        return np.ones((1, 1))

    def random_automorphism(self, rng):
        return np.ones((1, 1))

    def generic_norm(self, z, w):
        return 1.0 - np.asarray(z)[..., 0] * np.conj(np.asarray(w)[..., 0])

    def to_json(self):
        return {"kind": "RealLine", "params": {}}

    def shorthand(self):
        return "r"

    def describe_basis(self):
        return ["1"]


@dataclass(frozen=True)
class Sym(JordanAlgebra):
    """Real symmetric r x r matrices with product (XY + YX)/2."""

    r: int
    kind = "Sym"

    def __post_init__(self):
        if not isinstance(self.r, (int, np.integer)) or self.r < 1:
            raise AlgebraError("Sym(r) needs an integer r >= 1")

    @property
    def rank(self):
        return self.r

    @property
    def dim(self):
        return self.r * (self.r + 1) // 2

    @property
    def genus(self):
        return self.r + 1

    @property
    def _index(self):
        return _sym_index(self.r)

    def to_matrix(self, x):
        x = np.asarray(x)
        i, j, w = self._index
        m = np.zeros(x.shape[:-1] + (self.r, self.r), dtype=np.result_type(x, float))
        m[..., i, j] = x * w
        m[..., j, i] = x * w
        return m

    def from_matrix(self, m):
        m = np.asarray(m)
        m = 0.5 * (m + np.swapaxes(m, -1, -2))
        i, j, w = self._index
        return m[..., i, j] / w

    def unit(self):
        return self.from_matrix(np.eye(self.r))

    def mul(self, x, y):
        X, Y = self.to_matrix(x), self.to_matrix(y)
        return self.from_matrix(X @ Y)

    def trace(self, x):
        return np.asarray(x)[..., : self.r].sum(axis=-1)

    def det(self, x):
        return np.linalg.det(self.to_matrix(x))

    def inv(self, x):
        return self.from_matrix(np.linalg.inv(self.to_matrix(x)))

    def _projectors(self, vecs):
        # vecs (..., r, k): columns are unit vectors; returns (..., k, n)
        v = np.swapaxes(vecs, -1, -2)
        return self.from_matrix(v[..., :, :, None] * v[..., :, None, :])

    def spectral_arrays(self, x):
        vals, vecs = np.linalg.eigh(self.to_matrix(np.asarray(x, dtype=float)))
        return vals[..., ::-1].copy(), self._projectors(vecs[..., :, ::-1])

    def eigvals(self, x):
        return np.linalg.eigvalsh(self.to_matrix(np.asarray(x, dtype=float)))[..., ::-1]

    def joint_frame(self, x, y):
        X, Y = self.to_matrix(x), self.to_matrix(y)
        scale = max(1.0, float(np.max(np.abs(X), initial=0)), float(np.max(np.abs(Y), initial=0)))
        tol = 1e3 * np.finfo(float).eps * scale * self.r
        best = None
        for eps in (0.6180339887498949, 0.2763932022500210, 1.4142135623730951):
            _, vecs = np.linalg.eigh(X + eps * Y)
            off = np.maximum(_offdiag(vecs, X), _offdiag(vecs, Y))
            if best is None:
                best, best_off = vecs, off
            else:
                better = off < best_off
                best = np.where(better[..., None, None], vecs, best)
                best_off = np.minimum(off, best_off)
            if np.all(best_off <= tol):
                break
        bad = np.argwhere(np.atleast_1d(best_off > tol))
        if bad.size:
            best = np.array(best)
            flatX = X.reshape((-1, self.r, self.r))
            flatY = Y.reshape((-1, self.r, self.r))
            flat = best.reshape((-1, self.r, self.r))
            for k in np.flatnonzero(np.ravel(best_off > tol)):
                flat[k] = _cluster_joint(flatX[k], flatY[k], scale)
            best = flat.reshape(best.shape)
        return self._projectors(best)

    def standard_frame(self):
        return np.eye(self.dim)[: self.r]

    def random_frame(self, rng):
        return self._projectors(_random_orthogonal(rng, self.r))

    def random_automorphism(self, rng):
        o = _random_orthogonal(rng, self.r)
        images = self.from_matrix(o @ self.to_matrix(np.eye(self.dim)) @ o.T)
        return images.T

    def generic_norm(self, z, w):
        Z, W = self.to_matrix(z), self.to_matrix(np.conj(w))
        return np.linalg.det(np.eye(self.r) - Z @ W)

    def to_json(self):
        return {"kind": "Sym", "params": {"r": int(self.r)}}

    def shorthand(self):
        return f"sym{self.r}"

    def describe_basis(self):
        r = self.r
        out = [f"E{i + 1}{i + 1}" for i in range(r)]
        out += [f"(E{i + 1}{j + 1}+E{j + 1}{i + 1})/sqrt2" for i in range(r) for j in range(i + 1, r)]
        return out


@lru_cache(maxsize=None)
def _sym_index(r: int):
    rows, cols = list(range(r)), list(range(r))
    for i in range(r):
        for j in range(i + 1, r):
            rows.append(i)
            cols.append(j)
    w = np.ones(len(rows))
    w[r:] = 1.0 / np.sqrt(2.0)
    return np.array(rows), np.array(cols), w


def _offdiag(vecs, A):
    d = np.swapaxes(vecs, -1, -2) @ A @ vecs
    return np.max(np.abs(d - np.eye(d.shape[-1]) * d), axis=(-1, -2))


def _cluster_joint(X, Y, scale):
    """Joint eigenbasis: eigenspaces of X, then diagonalize Y inside each."""
    vals, vecs = np.linalg.eigh(X)
    gap = 1e-7 * scale
    out = []
    start = 0
    for k in range(1, len(vals) + 1):
        if k == len(vals) or vals[k] - vals[k - 1] > gap:
            block = vecs[:, start:k]
            _, u = np.linalg.eigh(block.T @ Y @ block)
            out.append(block @ u)
            start = k
    return np.concatenate(out, axis=1)


@dataclass(frozen=True)
class Spin(JordanAlgebra):
    """Spin factor ``R x R^(n-1)`` with ``(x0 y0 + <x, y>, x0 y + y0 x)``."""

    n: int
    kind = "Spin"
    rank = 2

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 3:
            raise AlgebraError("Spin(n) needs an integer n >= 3")

    @property
    def dim(self):
        return self.n

    @property
    def genus(self):
        return self.n

    def unit(self):
        e = np.zeros(self.n)
        e[0] = 1.0
        return e

    def mul(self, x, y):
        x, y = np.asarray(x), np.asarray(y)
        x0, xv = x[..., :1], x[..., 1:]
        y0, yv = y[..., :1], y[..., 1:]
        head = x0 * y0 + np.sum(xv * yv, axis=-1, keepdims=True)
        return np.concatenate([head, x0 * yv + y0 * xv], axis=-1)

    def trace(self, x):
        return 2.0 * np.asarray(x)[..., 0]

    def det(self, x):
        x = np.asarray(x)
        return x[..., 0] ** 2 - np.sum(x[..., 1:] ** 2, axis=-1)

    def inv(self, x):
        x = np.asarray(x)
        y = np.concatenate([x[..., :1], -x[..., 1:]], axis=-1)
        return y / self.det(x)[..., None]

    def _frame(self, u):
        half = 0.5 * np.ones(u.shape[:-1] + (1,))
        plus = np.concatenate([half, 0.5 * u], axis=-1)
        minus = np.concatenate([half, -0.5 * u], axis=-1)
        return np.stack([plus, minus], axis=-2)

    def _axis(self, v, fallback=None):
        norm = np.linalg.norm(v, axis=-1, keepdims=True)
        first = np.zeros(v.shape[-1])
        first[0] = 1.0
        safe = np.where(norm > 0, norm, 1.0)
        u = np.where(norm > 0, v / safe, first)
        if fallback is not None:
            u = np.where(norm > 0, u, fallback)
        return u, norm[..., 0]

    def spectral_arrays(self, x):
        x = np.asarray(x, dtype=float)
        u, norm = self._axis(x[..., 1:])
        vals = np.stack([x[..., 0] + norm, x[..., 0] - norm], axis=-1)
        return vals, self._frame(u)

    def joint_frame(self, x, y):
        xv, yv = np.asarray(x)[..., 1:], np.asarray(y)[..., 1:]
        nx = np.linalg.norm(xv, axis=-1, keepdims=True)
        ny = np.linalg.norm(yv, axis=-1, keepdims=True)
        v = np.where(nx >= ny, xv, yv)
        u, _ = self._axis(v)
        return self._frame(u)

    def standard_frame(self):
        u = np.zeros(self.n - 1)
        u[0] = 1.0
        return self._frame(u)

    def random_frame(self, rng):
        u = rng.standard_normal(self.n - 1)
        return self._frame(u / np.linalg.norm(u))

    def random_automorphism(self, rng):
        a = np.zeros((self.n, self.n))
        a[0, 0] = 1.0
        a[1:, 1:] = _random_orthogonal(rng, self.n - 1)
        return a

    def generic_norm(self, z, w):
        wb = np.conj(w)
        return 1.0 - self.trace(self.mul(z, wb)) + self.det(z) * self.det(wb)

    def to_json(self):
        return {"kind": "Spin", "params": {"n": int(self.n)}}

    def shorthand(self):
        return f"spin{self.n}"

    def describe_basis(self):
        return ["e"] + [f"v{k}" for k in range(1, self.n)]


@dataclass(frozen=True)
class DirectSum(JordanAlgebra):
    """Direct sum of simple models; nested sums are flattened."""

    summands: tuple = field(default_factory=tuple)
    kind = "DirectSum"

    def __post_init__(self):
        flat = []
        for p in self.summands:
            if isinstance(p, DirectSum):
                flat.extend(p.summands)
            elif isinstance(p, JordanAlgebra):
                flat.append(p)
            else:
                raise AlgebraError(f"not an algebra: {p!r}")
        if not flat:
            raise AlgebraError("DirectSum needs at least one part")
        object.__setattr__(self, "summands", tuple(flat))

    @property
    def parts(self):
        return self.summands

    @property
    def rank(self):
        return sum(p.rank for p in self.summands)

    @property
    def dim(self):
        return sum(p.dim for p in self.summands)

    @property
    def slices(self):
        out, k = [], 0
        for p in self.summands:
            out.append(slice(k, k + p.dim))
            k += p.dim
        return tuple(out)

    @property
    def rank_slices(self):
        out, k = [], 0
        for p in self.summands:
            out.append(slice(k, k + p.rank))
            k += p.rank
        return tuple(out)

    def _split(self, x):
        x = np.asarray(x)
        return [x[..., s] for s in self.slices]

    def unit(self):
        return np.concatenate([p.unit() for p in self.summands])

    def mul(self, x, y):
        xs, ys = self._split(x), self._split(y)
        outs = [p.mul(a, b) for p, a, b in zip(self.summands, xs, ys)]
        return np.concatenate(outs, axis=-1)

    def trace(self, x):
        return sum(p.trace(a) for p, a in zip(self.summands, self._split(x)))

    def det(self, x):
        out = 1.0
        for p, a in zip(self.summands, self._split(x)):
            out = out * p.det(a)
        return out

    def inv(self, x):
        return np.concatenate([p.inv(a) for p, a in zip(self.summands, self._split(x))], axis=-1)

    def _embed_frames(self, frames):
        batch = np.broadcast_shapes(*[f.shape[:-2] for f in frames])
        out = np.zeros(batch + (self.rank, self.dim))
        for f, sr, sd in zip(frames, self.rank_slices, self.slices):
            out[..., sr, sd] = f
        return out

    def spectral_arrays(self, x):
        res = [p.spectral_arrays(a) for p, a in zip(self.summands, self._split(x))]
        vals = np.concatenate([v for v, _ in res], axis=-1)
        frame = self._embed_frames([f for _, f in res])
        order = np.argsort(-vals, axis=-1, kind="stable")
        vals = np.take_along_axis(vals, order, axis=-1)
        frame = np.take_along_axis(frame, order[..., None], axis=-2)
        return vals, frame

    def eigvals(self, x):
        vals = np.concatenate([p.eigvals(a) for p, a in zip(self.summands, self._split(x))], axis=-1)
        return -np.sort(-vals, axis=-1)

    def joint_frame(self, x, y):
        xs, ys = self._split(x), self._split(y)
        return self._embed_frames([p.joint_frame(a, b) for p, a, b in zip(self.summands, xs, ys)])

    def standard_frame(self):
        return self._embed_frames([p.standard_frame() for p in self.summands])

    def random_frame(self, rng):
        return self._embed_frames([p.random_frame(rng) for p in self.summands])

    def random_automorphism(self, rng):
        blocks = [p.random_automorphism(rng) for p in self.summands]
        a = np.zeros((self.dim, self.dim))
        for b, s in zip(blocks, self.slices):
            a[s, s] = b
        # permute isomorphic summands
        perm = list(range(len(self.summands)))
        groups: dict = {}
        for k, p in enumerate(self.summands):
            groups.setdefault(p, []).append(k)
        for idx in groups.values():
            shuffled = list(rng.permutation(idx))
            for src, dst in zip(idx, shuffled):
                perm[src] = dst
        p_mat = np.zeros((self.dim, self.dim))
        for src, dst in enumerate(perm):
            p_mat[self.slices[dst], self.slices[src]] = np.eye(self.summands[src].dim)
        return p_mat @ a

    def generic_norm(self, z, w):
        raise AlgebraError("generic norm is defined per simple summand")

    def to_json(self):
        return {"kind": "DirectSum", "params": {"parts": [p.to_json() for p in self.summands]}}

    def shorthand(self):
        ps = self.summands
        if all(isinstance(p, RealLine) for p in ps):
            return "r" if len(ps) == 1 else f"r^{len(ps)}"
        return "sum(" + ",".join(p.shorthand() for p in ps) + ")"

    def describe_basis(self):
        out = []
        for k, p in enumerate(self.summands):
            out += [f"[{k}]{b}" for b in p.describe_basis()]
        return out


def real_power(k: int) -> JordanAlgebra:
    """The polydisc algebra R^k."""
    if k < 1:
        raise AlgebraError("k must be >= 1")
    return RealLine() if k == 1 else DirectSum(tuple(RealLine() for _ in range(k)))


# descriptors ------------------------------------------------------------------

def from_json(obj) -> JordanAlgebra:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise AlgebraError(f"descriptor must be an object with a 'kind': {obj!r}")
    kind, params = obj["kind"], obj.get("params", {}) or {}
    try:
        if kind == "RealLine":
            return RealLine()
        if kind == "Sym":
            return Sym(int(params["r"]))
        if kind == "Spin":
            return Spin(int(params["n"]))
        if kind == "DirectSum":
            return DirectSum(tuple(from_json(p) for p in params["parts"]))
    except (KeyError, TypeError) as exc:
        raise AlgebraError(f"bad params for {kind}: {params!r}") from exc
    raise AlgebraError(f"unknown algebra kind {kind!r}")


_ATOM = re.compile(r"^(r)(?:\^(\d+))?$|^sym(\d+)$|^spin(\d+)$")


def parse_algebra(text: str) -> JordanAlgebra:
    """Parse a shorthand (``r``, ``r^k``, ``sym<r>``, ``spin<n>``, ``sum(...)``) or JSON."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise AlgebraError(f"invalid JSON descriptor: {exc}") from exc
    low = text.lower().replace(" ", "")
    if low.startswith("sum(") and low.endswith(")"):
        inner = low[4:-1]
        parts, depth, cur = [], 0, ""
        for ch in inner:
            if ch == "," and depth == 0:
                parts.append(cur)
                cur = ""
                continue
            depth += ch == "("
            depth -= ch == ")"
            cur += ch
        parts.append(cur)
        if any(not p for p in parts):
            raise AlgebraError(f"empty summand in {text!r}")
        return DirectSum(tuple(parse_algebra(p) for p in parts))
    m = _ATOM.match(low)
    if not m:
        raise AlgebraError(f"cannot parse algebra {text!r}")
    if m.group(1):
        return real_power(int(m.group(2) or 1))
    if m.group(3):
        return Sym(int(m.group(3)))
    return Spin(int(m.group(4)))


# frames and spectral decompositions ----------------------------------------------

@dataclass(frozen=True)
class JordanFrame:
    idempotents: np.ndarray  # (r, n)


@dataclass(frozen=True)
class SpectralDecomp:
    frame: JordanFrame
    eigenvalues: np.ndarray

    def recompose(self) -> np.ndarray:
        return self.eigenvalues @ self.frame.idempotents


def spectral(V: JordanAlgebra, x) -> SpectralDecomp:
    """Spectral decomposition of a single real element, eigenvalues descending."""
    x = np.asarray(x, dtype=float)
    _check_dim(V, x)
    vals, frame = V.spectral_arrays(x)
    return SpectralDecomp(JordanFrame(frame), vals)


def frame_residual(V: JordanAlgebra, frame) -> float:
    """Largest violation of the frame axioms (idempotent, primitive, orthogonal, sum e)."""
    c = np.asarray(frame)
    res = [np.max(np.abs(V.mul(c, c) - c)),
           np.max(np.abs(V.trace(c) - V.primitive_trace)),
           np.max(np.abs(c.sum(axis=0) - V.unit()))]
    for i in range(len(c)):
        for j in range(i + 1, len(c)):
            res.append(np.max(np.abs(V.mul(c[i], c[j]))))
    return float(max(res))


def is_frame(V: JordanAlgebra, frame, tol: float | None = None) -> bool:
    tol = get_tol() if tol is None else tol
    return len(frame) == V.rank and frame_residual(V, frame) <= tol * 10


def quad(V: JordanAlgebra, x, y):
    """Quadratic representation ``P(x) y = 2 x(xy) - (xx) y``."""
    return 2.0 * V.mul(x, V.mul(x, y)) - V.mul(V.mul(x, x), y)


def spectral_apply(V: JordanAlgebra, x, fn):
    """``sum_j fn(lambda_j) c_j`` over the spectral decomposition of ``x``."""
    vals, frame = V.spectral_arrays(np.asarray(x, dtype=float))
    return np.einsum("...j,...jn->...n", fn(vals), frame)


def complete_frame(V: JordanAlgebra, idems, seed: int = 0) -> JordanFrame:
    """Refine a complete system of orthogonal idempotents into a Jordan frame.

    Non-primitive idempotents are split by diagonalizing a random element of
    their Peirce 1-space; each input block gets its own separated eigenvalue
    band so the refinement can be read off a single spectral decomposition.
    """
    d = np.atleast_2d(np.asarray(idems, dtype=float))
    _check_dim(V, d)
    tol = get_tol() * 10
    if np.max(np.abs(V.mul(d, d) - d)) > tol:
        raise AlgebraError("input is not idempotent")
    if np.max(np.abs(d.sum(axis=0) - V.unit())) > tol:
        raise AlgebraError("idempotents do not sum to the unit")
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            if np.max(np.abs(V.mul(d[i], d[j]))) > tol:
                raise AlgebraError("idempotents are not orthogonal")
    ranks = np.rint(V.trace(d) / V.primitive_trace).astype(int)
    if np.any(ranks < 1):
        raise AlgebraError("zero idempotent in input")
    if ranks.sum() != V.rank:
        raise AlgebraError("ranks of the inputs do not add up")
    rng = np.random.default_rng(seed)
    y = np.zeros(V.dim)
    for k, (dk, rk) in enumerate(zip(d, ranks)):
        if rk > 1:
            v = rng.uniform(-1, 1, V.dim)
            y += quad(V, dk, v) / (1 + np.max(np.abs(v))) + 10.0 * k * dk
        else:
            y += 10.0 * k * dk
    vals, frame = V.spectral_arrays(y)
    out = []
    for k, (dk, rk) in enumerate(zip(d, ranks)):
        if rk == 1:
            out.append(dk)
            continue
        band = np.abs(vals - 10.0 * k) < 5.0
        if band.sum() != rk:
            raise AlgebraError("refinement failed to separate the Peirce blocks")
        out.extend(frame[band])
    return JordanFrame(np.array(out))


# cone operations ------------------------------------------------------------------

def in_cone(V: JordanAlgebra, x) -> bool | np.ndarray:
    """All spectral eigenvalues strictly positive."""
    return np.min(V.eigvals(x), axis=-1) > 0


def sqrt_cone(V: JordanAlgebra, x):
    if not np.all(in_cone(V, x)):
        raise AlgebraError("sqrt_cone needs an element of the open cone")
    return spectral_apply(V, x, np.sqrt)


def power(V: JordanAlgebra, x, k: float):
    vals = V.eigvals(x)
    if float(k) != int(k) and np.any(vals <= 0):
        raise AlgebraError("fractional power needs an element of the open cone")
    if k < 0 and np.any(vals == 0):
        raise AlgebraError("negative power of a singular element")
    return spectral_apply(V, x, lambda lam: lam ** k)


def inv(V: JordanAlgebra, x):
    d = V.det(x)
    scale = np.max(np.abs(x), axis=-1) ** V.rank + 1e-300
    if np.any(np.abs(d) <= get_tol() * 1e-3 * scale):
        raise AlgebraError("singular element")
    return V.inv(x)


def signature(V: JordanAlgebra, x, tol: float | None = None):
    """Sum of signs of the eigenvalues; raises on (numerically) singular input."""
    vals = V.eigvals(np.asarray(x, dtype=float))
    tol = get_tol() if tol is None else tol
    scale = np.max(np.abs(vals), axis=-1, keepdims=True)
    if np.any(np.abs(vals) <= tol * scale):
        raise AlgebraError("element is not invertible")
    return np.sum(np.sign(vals), axis=-1).astype(int)


# homomorphisms ---------------------------------------------------------------------

@dataclass(frozen=True)
class JordanHom:
    """Linear map between algebras given by its coordinate matrix."""

    source: JordanAlgebra
    target: JordanAlgebra
    matrix: np.ndarray

    def apply(self, x):
        return np.asarray(x) @ self.matrix.T


def balance_residual(h: JordanHom, samples: int = 100, seed: int = 0) -> float:
    """Max deviation of ``tr_W(h v)/rk W - tr_V(v)/rk V`` over random ``v``."""
    rng = np.random.default_rng(seed)
    v = h.source.random_element(rng, samples)
    lhs = h.target.trace(h.apply(v)) / h.target.rank
    rhs = h.source.trace(v) / h.source.rank
    return float(np.max(np.abs(lhs - rhs)))


def hom_residual(h: JordanHom, samples: int = 100, seed: int = 0) -> float:
    """Max failure of unit and product preservation on random pairs."""
    rng = np.random.default_rng(seed)
    x = h.source.random_element(rng, samples)
    y = h.source.random_element(rng, samples)
    prod = h.apply(h.source.mul(x, y)) - h.target.mul(h.apply(x), h.apply(y))
    unit = h.apply(h.source.unit()) - h.target.unit()
    return float(max(np.max(np.abs(prod)), np.max(np.abs(unit))))


@dataclass(frozen=True)
class BalancedHom(JordanHom):
    """Unital Jordan homomorphism preserving the normalized trace tr/rank."""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (self.target.dim, self.source.dim):
            raise AlgebraError(f"matrix shape {m.shape} does not match the algebras")
        object.__setattr__(self, "matrix", m)
        tol = get_tol() * 100
        if hom_residual(self) > tol:
            raise AlgebraError("map is not a unital Jordan homomorphism")
        if balance_residual(self) > tol:
            raise AlgebraError("map is not balanced: normalized traces differ")
        if self.target.rank % self.source.rank:
            raise AlgebraError("rank of target not divisible by rank of source")

    @property
    def multiplicity(self) -> int:
        return self.target.rank // self.source.rank


def apply_hom(h: JordanHom, x):
    return h.apply(x)


def _is_polydisc(V: JordanAlgebra) -> bool:
    return all(isinstance(p, RealLine) for p in V.parts)


def make_diagonal_hom(src: JordanAlgebra, tgt: JordanAlgebra, frame=None) -> BalancedHom:
    """Balanced embeddings built from Jordan frames.

    Supported: ``R -> V`` (``lambda -> lambda e``, covering ``R -> R^r`` and
    ``R -> Sym(r)``), ``R^r -> Sym(r)`` as diagonal matrices, and the frame
    embedding ``R^r -> V`` sending the k-th unit vector to ``c_k`` of a given
    (or the standard) Jordan frame of V.
    """
    if tgt.rank % src.rank:
        raise AlgebraError("rank of target not divisible by rank of source")
    if isinstance(src, RealLine):
        return BalancedHom(src, tgt, tgt.unit()[:, None])
    if _is_polydisc(src) and src.rank == tgt.rank:
        c = tgt.standard_frame() if frame is None else np.asarray(
            frame.idempotents if isinstance(frame, JordanFrame) else frame, dtype=float)
        if not is_frame(tgt, c):
            raise AlgebraError("supplied idempotents are not a Jordan frame")
        return BalancedHom(src, tgt, c.T.copy())
    raise AlgebraError(f"unsupported embedding {src} -> {tgt}")
