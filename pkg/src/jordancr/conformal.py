"""Generators of the conformal group and their partial action.

A word is a tuple of generators applied right to left, so
``(w1 @ w2).apply(z) == w1.apply(w2.apply(z))``. Points always enter and
leave in ball coordinates; generators that act on the tube picture trigger
implicit Cayley conversions. The point ``e`` of the ball is the point at
infinity of the tube and is carried through translations and dilations
unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import AlgebraError, JordanAlgebra, in_cone, quad
from .domain import boundary_point, cdet, is_shilov

TUBE_LIMIT = 1e3
"""Largest tube coordinate accepted before an orbit is declared singular."""


class SingularOrbit(AlgebraError):
    """An intermediate point hit the singular set of a generator."""


# generators -----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Translate:
    """Tube translation ``z -> z + b`` by a real element."""

    b: np.ndarray
    mode = "tube"

    def act(self, V, z, inf):
        return z + self.b, inf

    def inverse(self):
        return Translate(-np.asarray(self.b))

    def to_json(self):
        return {"gen": "Translate", "b": np.asarray(self.b).tolist()}


@dataclass(frozen=True, eq=False)
class Dilate:
    """Tube dilation ``z -> P(u) z`` for ``u`` in the open cone."""

    u: np.ndarray
    mode = "tube"

    def act(self, V, z, inf):
        return quad(V, self.u, z), inf

    def inverse(self):
        return _DilateInv(self.u)

    def to_json(self):
        return {"gen": "Dilate", "u": np.asarray(self.u).tolist()}


@dataclass(frozen=True, eq=False)
class _DilateInv(Dilate):
    # P(u)^{-1} = P(u^{-1}); the inverse element is computed lazily per algebra
    def act(self, V, z, inf):
        return quad(V, V.inv(self.u), z), inf

    def inverse(self):
        return Dilate(self.u)

    def to_json(self):
        return {"gen": "DilateInv", "u": np.asarray(self.u).tolist()}


@dataclass(frozen=True, eq=False)
class Invert:
    """Tube inversion ``z -> -z^{-1}``; an involution."""

    mode = "tube"

    def act(self, V, z, inf):
        d = np.abs(cdet(V, z))
        small = np.max(np.abs(z), axis=-1) < 1e-14
        to_inf = ~inf & small
        sing = ~inf & ~small & (d < 1e-12 * np.maximum(1.0, np.max(np.abs(z), axis=-1)) ** V.rank)
        if np.any(sing):
            raise SingularOrbit("inversion of a singular tube point")
        safe = np.where((inf | to_inf)[..., None], V.unit(), z)
        out = -V.inv(safe)
        out = np.where(inf[..., None], 0.0, out)
        return out, to_inf

    def inverse(self):
        return self

    def to_json(self):
        return {"gen": "Invert"}


@dataclass(frozen=True, eq=False)
class Phase:
    """Ball rotation ``z -> exp(i theta) z``."""

    theta: float
    mode = "ball"

    def act(self, V, z, inf):
        return np.exp(1j * self.theta) * z, inf

    def inverse(self):
        return Phase(-self.theta)

    def to_json(self):
        return {"gen": "Phase", "theta": float(self.theta)}


@dataclass(frozen=True, eq=False)
class Rotate:
    """Ball map ``z -> P(s) z`` for a Shilov point ``s``; inverse is ``P(conj s)``."""

    s: np.ndarray
    mode = "ball"

    def act(self, V, z, inf):
        return quad(V, self.s, z), inf

    def inverse(self):
        return Rotate(np.conj(self.s))

    def to_json(self):
        s = np.asarray(self.s)
        return {"gen": "Rotate", "re": s.real.tolist(), "im": s.imag.tolist()}


@dataclass(frozen=True, eq=False)
class FrameAut:
    """Jordan algebra automorphism given by its coordinate matrix."""

    matrix: np.ndarray
    mode = "any"

    def act(self, V, z, inf):
        return z @ np.asarray(self.matrix).T, inf

    def inverse(self):
        return FrameAut(np.asarray(self.matrix).T)

    def to_json(self):
        return {"gen": "FrameAut", "matrix": np.asarray(self.matrix).tolist()}


def gen_from_json(obj):
    kind = obj["gen"]
    if kind == "Translate":
        return Translate(np.array(obj["b"], dtype=float))
    if kind == "Dilate":
        return Dilate(np.array(obj["u"], dtype=float))
    if kind == "DilateInv":
        return _DilateInv(np.array(obj["u"], dtype=float))
    if kind == "Invert":
        return Invert()
    if kind == "Phase":
        return Phase(float(obj["theta"]))
    if kind == "Rotate":
        return Rotate(np.array(obj["re"]) + 1j * np.array(obj["im"]))
    if kind == "FrameAut":
        return FrameAut(np.array(obj["matrix"], dtype=float))
    raise AlgebraError(f"unknown generator {kind!r}")


def validate_gen(V: JordanAlgebra, g) -> None:
    """Check generator parameters against the algebra."""
    if isinstance(g, Dilate) and not in_cone(V, g.u):
        raise AlgebraError("Dilate parameter must lie in the open cone")
    if isinstance(g, FrameAut):
        m = np.asarray(g.matrix)
        if m.shape != (V.dim, V.dim):
            raise AlgebraError("FrameAut matrix has the wrong shape")
        rng = np.random.default_rng(0)
        x, y = V.random_element(rng, 8), V.random_element(rng, 8)
        if np.max(np.abs(V.mul(x, y) @ m.T - V.mul(x @ m.T, y @ m.T))) > 1e-9 * 100:
            raise AlgebraError("FrameAut matrix is not a Jordan automorphism")
        if np.max(np.abs(V.inner(x @ m.T, y @ m.T) - V.inner(x, y))) > 1e-9 * 100:
            raise AlgebraError("FrameAut matrix is not orthogonal")
    if isinstance(g, Rotate) and not is_shilov(V, g.s):
        raise AlgebraError("Rotate parameter must be a Shilov point")


# words -------------------------------------------------------------------------

@dataclass(frozen=True)
class ConformalWord:
    gens: tuple = field(default_factory=tuple)

    def __matmul__(self, other: "ConformalWord") -> "ConformalWord":
        return ConformalWord(tuple(self.gens) + tuple(other.gens))

    def __len__(self):
        return len(self.gens)

    def inverse(self) -> "ConformalWord":
        return ConformalWord(tuple(g.inverse() for g in reversed(self.gens)))

    def to_json(self) -> list:
        return [g.to_json() for g in self.gens]

    @classmethod
    def from_json(cls, obj) -> "ConformalWord":
        return cls(tuple(gen_from_json(o) for o in obj))

    def apply(self, V: JordanAlgebra, z):
        return apply(V, self, z)


def _to_tube(V, z):
    e = V.unit()
    inf = np.max(np.abs(z - e), axis=-1) < 1e-12
    safe = np.where(inf[..., None], 0.0, z)
    d = e - safe
    det = np.abs(cdet(V, d))
    if np.any(det < 1e-14):
        raise SingularOrbit("point has no tube coordinate")
    t = 1j * V.mul(e + safe, V.inv(d))
    if np.any(np.max(np.abs(t), axis=-1)[~inf] > TUBE_LIMIT):
        raise SingularOrbit("tube coordinate too large")
    return np.where(inf[..., None], 0.0, t), inf


def _to_ball(V, t, inf):
    e = V.unit()
    if np.any(np.max(np.abs(t), axis=-1)[~inf] > TUBE_LIMIT):
        raise SingularOrbit("tube coordinate too large")
    safe = np.where(inf[..., None], 0.0, t)
    d = safe + 1j * e
    if np.any(np.abs(cdet(V, d)) < 1e-14):
        raise SingularOrbit("z + ie singular")
    z = V.mul(safe - 1j * e, V.inv(d))
    return np.where(inf[..., None], e, z)


def apply(V: JordanAlgebra, word: ConformalWord, z):
    """Apply ``word`` to ball points (interior or Shilov), batched.

    Raises :class:`SingularOrbit` when an intermediate point lies on (or too
    close to) the singular set of a generator or of a Cayley conversion.
    """
    z = np.array(z, dtype=complex)
    inf = np.zeros(z.shape[:-1], dtype=bool)
    mode = "ball"
    for g in reversed(word.gens):
        if g.mode == "tube" and mode == "ball":
            z, inf = _to_tube(V, z)
            mode = "tube"
        elif g.mode == "ball" and mode == "tube":
            z = _to_ball(V, z, inf)
            inf = np.zeros_like(inf)
            mode = "ball"
        z, inf = g.act(V, z, inf)
    if mode == "tube":
        z = _to_ball(V, z, inf)
    return z


def apply_masked(V: JordanAlgebra, word: ConformalWord, z):
    """Like :func:`apply` on a batch, returning ``(image, ok)`` instead of raising."""
    z = np.asarray(z, dtype=complex)
    flat = z.reshape((-1, z.shape[-1]))
    try:
        return apply(V, word, z), np.ones(z.shape[:-1], dtype=bool)
    except (SingularOrbit, np.linalg.LinAlgError):
        pass
    out = np.full(flat.shape, np.nan, dtype=complex)
    ok = np.zeros(len(flat), dtype=bool)
    for k, p in enumerate(flat):
        try:
            out[k] = apply(V, word, p)
            ok[k] = True
        except (SingularOrbit, np.linalg.LinAlgError):
            pass
    return out.reshape(z.shape), ok.reshape(z.shape[:-1])


# sampling ------------------------------------------------------------------------

GEN_KINDS = ("Translate", "Dilate", "Invert", "Phase", "Rotate", "FrameAut")


def random_cone_element(V: JordanAlgebra, rng: np.random.Generator, spread: float = 0.5):
    """``sum_j exp(spread * N(0,1)) c_j`` on a random Jordan frame."""
    return np.exp(spread * rng.standard_normal(V.rank)) @ V.random_frame(rng)


def random_shilov_point(V: JordanAlgebra, rng: np.random.Generator):
    return boundary_point(np.exp(1j * rng.uniform(0, 2 * np.pi, V.rank)), V.random_frame(rng))


def random_gen(V: JordanAlgebra, rng: np.random.Generator):
    kind = GEN_KINDS[rng.integers(len(GEN_KINDS))]
    if kind == "Translate":
        return Translate(rng.standard_normal(V.dim))
    if kind == "Dilate":
        return Dilate(random_cone_element(V, rng))
    if kind == "Invert":
        return Invert()
    if kind == "Phase":
        return Phase(float(rng.uniform(0, 2 * np.pi)))
    if kind == "Rotate":
        return Rotate(random_shilov_point(V, rng))
    return FrameAut(V.random_automorphism(rng))


def random_word(V: JordanAlgebra, seed, length: int) -> ConformalWord:
    """Random word; generator kinds uniform.

    Translations have standard normal coordinates, dilations are
    ``exp(0.5 N(0,1))`` on a random frame, phases and Shilov phases are
    uniform, frame automorphisms come from Haar-random orthogonal matrices.
    """
    if length < 0:
        raise ValueError("length must be >= 0")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return ConformalWord(tuple(random_gen(V, rng) for _ in range(length)))


# invariance harness ----------------------------------------------------------------

def invariance_suite(V: JordanAlgebra, quantity, words, configs, tol: float = 1e-8,
                     seed: int = 0, retries: int = 3) -> dict:
    """Evaluate ``quantity`` on each config before and after each word.

    ``quantity`` maps a batch of configurations ``(m, k, n)`` to an array of
    ``m`` values; the names ``"maslov"``, ``"cross_ratio"`` and
    ``"transversal"`` select the standard quantities. Configurations whose
    orbit is singular are retried with a random phase pre-composed; those
    that still fail are counted as skipped. Reports the largest absolute
    deviation; integer quantities are compared exactly.
    """
    fn = _named_quantity(V, quantity) if isinstance(quantity, str) else quantity
    configs = np.asarray(configs, dtype=complex)
    base = np.asarray(fn(configs))
    rng = np.random.default_rng(seed)
    max_dev, trials, skipped = 0.0, 0, 0
    for w in words:
        todo = np.ones(len(configs), dtype=bool)
        for attempt in range(retries + 1):
            idx = np.flatnonzero(todo)
            if idx.size == 0:
                break
            word = w if attempt == 0 else w @ ConformalWord((Phase(float(rng.uniform(0, 2 * np.pi))),))
            img, ok = apply_masked(V, word, configs[idx])
            good = np.all(ok, axis=-1)
            if np.any(good):
                after = np.asarray(fn(img[good]))
                dev = np.abs(np.asarray(after, dtype=complex) - base[idx[good]])
                max_dev = max(max_dev, float(np.max(dev)))
                trials += int(good.sum())
            todo[idx[good]] = False
        skipped += int(todo.sum())
    return {"quantity": quantity if isinstance(quantity, str) else getattr(quantity, "__name__", "custom"),
            "trials": trials, "skipped": skipped, "max_deviation": max_dev, "tolerance": tol,
            "passed": bool(max_dev <= tol and trials > 0),
            "claim": "invariance under all sampled words"}


def _named_quantity(V, name):
    from . import kernel
    if name == "maslov":
        return lambda c: kernel.maslov(V, c[:, 0], c[:, 1], c[:, 2])
    if name == "cross_ratio":
        def cr(c):
            b, _ = kernel.cross_ratio_batch(V, c[:, 0], c[:, 1], c[:, 2], c[:, 3])
            return b
        return cr
    if name == "transversal":
        from .domain import transversal
        return lambda c: transversal(V, c[:, 0], c[:, 1]).astype(int)
    raise AlgebraError(f"unknown quantity {name!r}")
