"""Genus-2 surface group, Fuchsian-type representations and their cross ratios.

The representation is the regular-octagon hyperbolization in SL(2,R)
composed with the scalar embedding ``lambda -> lambda e`` into a target
algebra. The limit curve is ``xi -> xi e`` in ball coordinates. Circle
points are unit complex numbers; a matrix in SL(2,R) acts on them through
its SU(1,1) form ``C M C^{-1}`` with ``C: z -> (z - i)/(z + i)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .algebra import AlgebraError, BalancedHom, JordanAlgebra, Sym, make_diagonal_hom, quad, sqrt_cone
from .geometry import MetricConfig, disc_translation, to_disc_matrix, vector_to_circle
from .domain import cayley, inv_cayley
from .kernel import _coincidence, cross_ratio_batch, quad_rep

LETTERS = ("a1", "A1", "b1", "B1", "a2", "A2", "b2", "B2")
"""Generator names; upper case is the inverse."""


class SurfaceError(AlgebraError):
    """Invalid word, non-hyperbolic element or domain violation."""


# the octagon group ---------------------------------------------------------------------

def _su11_translation(dist, angle):
    c, s = np.cosh(dist / 2), np.sinh(dist / 2)
    return np.array([[c, np.exp(1j * angle) * s], [np.exp(-1j * angle) * s, c]])


def _su11_rotation(phi):
    return np.diag([np.exp(1j * phi / 2), np.exp(-1j * phi / 2)])


def _half_turn(dist, angle):
    t = _su11_translation(dist, angle)
    return t @ np.diag([1j, -1j]) @ np.linalg.inv(t)


def octagon_side_pairings() -> dict:
    """SU(1,1) side pairings of the regular octagon with interior angles pi/4.

    The pairing of side ``i`` with side ``j`` is the rotation taking side ``i``
    to side ``j`` followed by the half-turn about the midpoint of side ``j``.
    """
    n = 8
    dist = np.arccosh(np.cos(np.pi / 8) / np.sin(np.pi / n))  # centre to side midpoint

    def pairing(i, j):
        return _half_turn(dist, 2 * np.pi * j / n) @ _su11_rotation(2 * np.pi * (j - i) / n)

    inv = np.linalg.inv
    return {"a1": inv(pairing(0, 2)), "b1": pairing(1, 3), "a2": inv(pairing(4, 6)), "b2": pairing(5, 7)}


def _to_sl2r(G):
    C = np.array([[1.0, -1j], [1.0, 1j]])
    M = np.linalg.inv(C) @ G @ C
    if np.max(np.abs(M.imag)) > 1e-12:
        raise SurfaceError("generator is not real after conjugation")
    return M.real


def commutator(x, y):
    return x @ y @ np.linalg.inv(x) @ np.linalg.inv(y)


@dataclass(frozen=True)
class SurfaceRep:
    generators: tuple  # (a1, b1, a2, b2) in SL(2,R)
    relator_residual: float
    embedding: BalancedHom
    construction: str = "scalar"
    metric: MetricConfig = field(default_factory=MetricConfig)

    @property
    def target(self) -> JordanAlgebra:
        return self.embedding.target

    def letter_matrices(self) -> np.ndarray:
        """Matrices for :data:`LETTERS` in order."""
        out = []
        for g in self.generators:
            out += [g, np.linalg.inv(g)]
        return np.array(out)


def genus2_octagon_rep(target: JordanAlgebra | None = None, metric: MetricConfig | None = None) -> SurfaceRep:
    """Octagon hyperbolization composed with ``lambda -> lambda e`` into ``target`` (default Sym(3))."""
    from .algebra import RealLine
    target = Sym(3) if target is None else target
    su = octagon_side_pairings()
    gens = tuple(_to_sl2r(su[k]) for k in ("a1", "b1", "a2", "b2"))
    rel = commutator(gens[0], gens[1]) @ commutator(gens[2], gens[3])
    residual = float(min(np.max(np.abs(rel - np.eye(2))), np.max(np.abs(rel + np.eye(2)))))
    return SurfaceRep(gens, residual, make_diagonal_hom(RealLine(), target), "scalar",
                      metric or MetricConfig())


# words ----------------------------------------------------------------------------------

def _inverse_letter(k: int) -> int:
    return k ^ 1


@dataclass(frozen=True)
class GroupWord:
    letters: tuple

    @classmethod
    def parse(cls, text: str) -> "GroupWord":
        text = text.replace(" ", "")
        out = []
        while text:
            if text[:2] not in LETTERS:
                raise SurfaceError(f"cannot parse word near {text!r}")
            out.append(LETTERS.index(text[:2]))
            text = text[2:]
        return cls(tuple(out))

    def __str__(self):
        return "".join(LETTERS[k] for k in self.letters) or "1"

    @property
    def l_S(self) -> int:
        return len(self.letters)

    def conj_length(self, max_conj: int = 3) -> int:
        return conj_length(self.letters, max_conj)

    def matrix(self, rep: SurfaceRep) -> np.ndarray:
        mats = rep.letter_matrices()
        out = np.eye(2)
        for k in self.letters:
            out = out @ mats[k]
        return out

    def power(self, m: int) -> "GroupWord":
        return GroupWord(self.letters * m)


def conj_length(letters, max_conj: int = 3) -> int:
    """Shortest free length of ``eta w eta^{-1}`` over conjugators of length <= ``max_conj``.

    For a reduced word ``w = u v u^{-1}`` with ``v`` cyclically reduced, the
    minimum over conjugators of length ``k`` is ``|w| - 2 min(k, |u|)``, so no
    search is needed.
    """
    w = list(letters)
    k = 0
    while len(w) - 2 * k > 1 and k < max_conj and w[k] == _inverse_letter(w[len(w) - 1 - k]):
        k += 1
    return len(w) - 2 * k


def enumerate_reduced(rep: SurfaceRep, max_len: int):
    """All non-empty freely reduced words up to ``max_len`` with their matrices.

    Returns ``(letters, lengths, matrices)`` where ``letters`` is an integer
    array padded with ``-1``.
    """
    mats = rep.letter_matrices()
    words = [np.arange(8)[:, None]]
    prods = [mats.copy()]
    for _ in range(max_len - 1):
        last_w, last_m = words[-1], prods[-1]
        nw, nm = [], []
        for k in range(8):
            keep = last_w[:, -1] != _inverse_letter(k)
            nw.append(np.concatenate([last_w[keep], np.full((keep.sum(), 1), k)], axis=1))
            nm.append(last_m[keep] @ mats[k])
        words.append(np.concatenate(nw))
        prods.append(np.concatenate(nm))
    letters = np.full((sum(len(w) for w in words), max_len), -1)
    row = 0
    for w in words:
        letters[row:row + len(w), : w.shape[1]] = w
        row += len(w)
    lengths = np.concatenate([np.full(len(w), w.shape[1]) for w in words])
    return letters, lengths, np.concatenate(prods)


def word_string(row) -> str:
    return "".join(LETTERS[k] for k in row if k >= 0)


# limit curve and action --------------------------------------------------------------------

def limit_curve(V: JordanAlgebra, xi):
    """``xi -> xi e`` in ball coordinates (batched over circle points)."""
    xi = np.asarray(xi, dtype=complex)
    return xi[..., None] * V.unit()


def scalar_mobius_action(V: JordanAlgebra, M, z, coords: str = "tube"):
    """Action of ``M`` through the scalar embedding.

    Tube coordinates: ``(a z + b e)(c z + d e)^{-1}`` for ``M = [[a, b], [c, d]]``.
    Ball coordinates use the SU(1,1) form of ``M`` in the same formula.
    """
    M = np.asarray(M)
    if coords == "ball":
        M = to_disc_matrix(M) if np.isrealobj(M) else M
    elif coords != "tube":
        raise ValueError("coords must be 'tube' or 'ball'")
    z = np.asarray(z, dtype=complex)
    e = V.unit()
    a, b = M[..., 0, 0, None], M[..., 0, 1, None]
    c, d = M[..., 1, 0, None], M[..., 1, 1, None]
    den = c * z + d * e
    if np.any(np.abs(V.det(den)) < 1e-300):
        raise SurfaceError("singular denominator")
    return V.mul(a * z + b * e, V.inv(den))


# cross ratio of the representation ------------------------------------------------------------

def _b_rho_batch(rep: SurfaceRep, x, y, z, t):
    V = rep.target
    pts = [limit_curve(V, p) for p in (x, y, z, t)]
    return cross_ratio_batch(V, *pts)[0]


def b_rho(rep: SurfaceRep, x, y, z, t):
    """Cross ratio of the representation on circle points.

    Defined for ``x != y`` and ``z != t``; equals 1 when ``x = z`` or ``y = t``
    and 0 when ``t = x`` or ``y = z``. Arrays are evaluated elementwise.
    """
    arrs = np.broadcast_arrays(*(np.asarray(p, dtype=complex) for p in (x, y, z, t)))
    if arrs[0].ndim:
        out = np.array([b_rho(rep, *p) for p in zip(*(a.ravel() for a in arrs))])
        return out.reshape(arrs[0].shape)
    try:
        special = _coincidence(*(np.atleast_1d(a) for a in arrs))
    except AlgebraError as exc:
        raise SurfaceError(str(exc)) from exc
    if special is not None:
        return special
    return float(_b_rho_batch(rep, *arrs))


def make_b(rep: SurfaceRep):
    """``b_rho`` as a vectorized function of circle points, with the coincidence rules."""

    def b(x, y, z, t):
        x, y, z, t = np.broadcast_arrays(*(np.asarray(p, dtype=complex) for p in (x, y, z, t)))
        tol = 1e-12
        one = (np.abs(x - z) < tol) | (np.abs(y - t) < tol)
        zero = (np.abs(t - x) < tol) | (np.abs(y - z) < tol)
        bad = (np.abs(x - y) < tol) | (np.abs(z - t) < tol)
        if np.any(bad & ~one & ~zero):
            raise SurfaceError("x = y or z = t is outside the domain")
        gen = ~(one | zero)
        out = np.where(one, 1.0, 0.0)
        if np.any(gen):
            out[gen] = _b_rho_batch(rep, x[gen], y[gen], z[gen], t[gen])
        return out

    return b


def classical_b(x, y, z, t):
    """Classical cross ratio ``[x:y:z:t]`` of circle points, real part."""
    x, y, z, t = np.broadcast_arrays(*(np.asarray(p, dtype=complex) for p in (x, y, z, t)))
    with np.errstate(divide="ignore", invalid="ignore"):
        val = ((x - t) * (z - y) / ((z - t) * (x - y))).real
    return val


# strict cross ratios ---------------------------------------------------------------------------

def _angles_sorted(rng, m, k, sep=0.05):
    """``m`` sets of ``k`` circle angles, pairwise separated by at least ``sep``."""
    out = np.empty((m, k))
    i = 0
    while i < m:
        th = rng.uniform(0, 2 * np.pi, k)
        s = np.sort(th)
        gaps = np.diff(np.concatenate([s, s[:1] + 2 * np.pi]))
        if gaps.min() > sep:
            out[i] = th
            i += 1
    return out


def positively_oriented(x, y, z):
    """Counterclockwise order of three distinct circle points."""
    ay = np.mod(np.angle(y) - np.angle(x), 2 * np.pi)
    az = np.mod(np.angle(z) - np.angle(x), 2 * np.pi)
    return ay < az


def strict_axiom_suite(b, samples: int = 1000, seed: int = 0, tol: float = 1e-8, grid: int = 200) -> dict:
    """Check the strict cross ratio axioms a1-a5 and monotonicity on random configurations."""
    rng = np.random.default_rng(seed)
    p = np.exp(1j * _angles_sorted(rng, samples, 5))
    x, y, z, t, w = (p[:, k] for k in range(5))
    base = b(x, y, z, t)

    def rel(u, v):
        return float(np.max(np.abs(u - v) / np.maximum(1.0, np.abs(v))))

    res = {
        "a1": rel(b(z, t, x, y), base),
        "a2": rel(b(x, y, z, w) * b(x, w, z, t), base),
        "a3": rel(b(x, y, w, t) * b(w, y, z, t), base),
    }
    # a4: value one exactly on the coincidence set and nowhere else
    ones = np.concatenate([b(x, y, x, t), b(x, y, z, y)])
    res["a4"] = float(np.max(np.abs(ones - 1.0)))
    res["a4_converse_min_gap"] = float(np.min(np.abs(base - 1.0)))
    zeros = np.concatenate([b(x, y, z, x), b(x, y, y, t)])
    res["a5"] = float(np.max(np.abs(zeros)))
    res["a5_converse_min_gap"] = float(np.min(np.abs(base)))
    # monotone homeomorphism t -> b(x, y, z, t) on the circle minus z
    mono_fail, sign_fail = 0, 0
    for k in range(min(samples, 50)):
        xs, ys, zs = x[k], y[k], z[k]
        if not positively_oriented(xs, ys, zs):
            xs, zs = zs, xs
        th0 = np.angle(zs)
        u = np.linspace(0, 2 * np.pi, grid + 2)[1:-1]
        ts = np.exp(1j * (th0 + u))
        far = np.minimum(np.abs(ts - xs), np.abs(ts - ys)) > 1e-6
        ts = ts[far]
        vals = b(np.full(ts.shape, xs), np.full(ts.shape, ys), np.full(ts.shape, zs), ts)
        mono_fail += int(np.sum(np.diff(vals) <= 0))
        ang_t = np.mod(np.angle(ts) - np.angle(zs), 2 * np.pi)
        ang_x = np.mod(np.angle(xs) - np.angle(zs), 2 * np.pi)
        third_arc = ang_t < ang_x
        sign_fail += int(np.sum(vals[third_arc] >= 0)) + int(np.sum(vals[~third_arc] <= 0))
    res["monotone_failures"] = mono_fail
    res["sign_failures"] = sign_fail
    res["passed"] = bool(max(res["a1"], res["a2"], res["a3"], res["a4"], res["a5"]) <= tol
                         and res["a4_converse_min_gap"] > 0 and res["a5_converse_min_gap"] > 0
                         and mono_fail == 0 and sign_fail == 0)
    return res


def flow_psi(b, s: float, x, y, z, xtol: float = 1e-15) -> complex:
    """Point ``t`` on the arc from ``x`` through ``y`` to ``z`` with ``log b(x,y,z,t) = s``."""
    if not positively_oriented(x, y, z):
        raise SurfaceError("(x, y, z) must be positively oriented")
    span = np.mod(np.angle(z) - np.angle(x), 2 * np.pi)

    def point(u):
        return np.exp(1j * (np.angle(x) + u * span))

    def f(u):
        return float(np.log(b(x, y, z, point(u)))) - s

    lo, hi = 0.5, 0.5
    k = 1
    while f(lo) > 0:
        lo = 2.0 ** -k
        k += 1
        if k > 60:
            raise SurfaceError("bisection bracket failure")
    k = 1
    while f(hi) < 0:
        hi = 1 - 2.0 ** -k
        k += 1
        if k > 52:
            raise SurfaceError("bisection bracket failure")
    if f(lo) == 0:
        return complex(point(lo))
    if f(hi) == 0:
        return complex(point(hi))
    u = brentq(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=500)
    return complex(point(u))


def compare_constant(b1, b2, samples: int = 1000, seed: int = 0):
    """Empirical ``(inf, sup)`` of ``|log b1| / |log b2|`` over random configurations."""
    rng = np.random.default_rng(seed)
    p = np.exp(1j * _angles_sorted(rng, samples, 4))
    args = [p[:, k] for k in range(4)]
    ratio = np.abs(np.log(np.abs(b1(*args)))) / np.abs(np.log(np.abs(b2(*args))))
    return float(np.min(ratio)), float(np.max(ratio))


# translation lengths ----------------------------------------------------------------------------

def _normalizing_frames(M):
    """Eigen-data of hyperbolic ``M``: ``(S, lam)`` with ``S^{-1} M S = diag(lam, 1/lam)``, ``|lam| > 1``."""
    M = np.asarray(M, dtype=float)
    tr = np.trace(M, axis1=-2, axis2=-1)
    if np.any(np.abs(tr) <= 2 + 1e-12):
        raise SurfaceError("word is not hyperbolic")
    vals, vecs = np.linalg.eig(M)
    vals, vecs = vals.real, vecs.real
    order = np.argsort(-np.abs(vals), axis=-1)
    vals = np.take_along_axis(vals, order, axis=-1)
    vecs = np.take_along_axis(vecs, order[..., None, :], axis=-1)
    return vecs, vals[..., 0]


def virtual_basepoint(M, t=1.0):
    """Circle point ``xi`` whose normalized coordinate is ``t / |lam|``.

    In coordinates where ``M`` acts by ``x -> lam^2 x`` (fixed points ``0``
    and ``inf``), ``xi`` and ``M xi`` sit symmetrically at ``t/|lam|`` and
    ``t |lam|``, which keeps both away from the fixed points.
    """
    S, lam = _normalizing_frames(M)
    xn = np.asarray(t, dtype=float) / np.abs(lam)
    v = S[..., :, 0] * xn[..., None] + S[..., :, 1]
    return vector_to_circle(v)


def rho_action(rep: SurfaceRep, M, z):
    """``rho(M) z`` in ball coordinates of the target, ``M`` hyperbolic (batched).

    The element is applied through its eigen-factorization
    ``S diag(lam, 1/lam) S^{-1}``, each factor through
    :func:`scalar_mobius_action`. The diagonal factor acts in tube
    coordinates as ``x -> lam^2 x``; in ball coordinates its entries are of
    size ``lam`` and cancel near the repelling fixed point, costing about
    ``lam^2`` ulps.
    """
    V = rep.target
    S, lam = _normalizing_frames(M)
    D = np.zeros(np.shape(lam) + (2, 2))
    D[..., 0, 0] = lam
    D[..., 1, 1] = 1 / lam
    z = scalar_mobius_action(V, np.linalg.inv(S), z, coords="ball")
    z = inv_cayley(V, scalar_mobius_action(V, D, cayley(V, z), coords="tube"))
    return scalar_mobius_action(V, S, z, coords="ball")


def tau_infty_matrices(rep: SurfaceRep, M, xi=None, t=1.0, power: int = 1):
    """Batched ``log b_rho(gamma^-, xi, gamma^+, rho(gamma)^power xi)``.

    ``rho(gamma) xi`` is computed in the target algebra through
    :func:`rho_action`, not on the circle. For ``power > 1`` the action is
    iterated, which avoids forming the badly rounded matrix ``M^power``;
    the default ``xi`` then sits at normalized coordinate ``t / |lam|^power``.
    """
    V = rep.target
    M = np.asarray(M, dtype=float)
    if power < 1:
        raise ValueError("power must be >= 1")
    S, lam = _normalizing_frames(M)
    gp = vector_to_circle(S[..., :, 0])
    gm = vector_to_circle(S[..., :, 1])
    if xi is None:
        xi = virtual_basepoint(M, np.asarray(t) / np.abs(lam) ** (power - 1))
    xi = np.broadcast_to(np.asarray(xi, dtype=complex), gp.shape)
    if np.any(np.minimum(np.abs(xi - gm), np.abs(xi - gp)) < 1e-12):
        raise SurfaceError("xi is a fixed point")
    phi_xi = limit_curve(V, xi)
    moved = phi_xi
    for _ in range(power):
        moved = rho_action(rep, M, moved)
    val, ok = cross_ratio_batch(V, limit_curve(V, gm), phi_xi, limit_curve(V, gp), moved)
    return np.log(val)


def tau_infty(rep: SurfaceRep, w: GroupWord, xi=None, t: float = 1.0, power: int = 1) -> float:
    return float(tau_infty_matrices(rep, w.matrix(rep), xi, t, power))


def normalized_linear_rep(rep: SurfaceRep, M):
    """Linear tube representative ``g2`` of ``rho(gamma)`` after moving its fixed points to ``0, inf``.

    Returns the coordinate matrix of ``z -> rho(S^{-1} M S) z`` on the target,
    which for the scalar embedding is the dilation ``P(u)`` with ``u = |lam| e``.
    """
    V = rep.target
    S, lam = _normalizing_frames(M)
    D = np.zeros(np.shape(lam) + (2, 2))
    D[..., 0, 0] = lam
    D[..., 1, 1] = 1 / lam
    basis = np.eye(V.dim)
    cols = scalar_mobius_action(V, D[..., None, :, :], basis, coords="tube").real
    return np.swapaxes(cols, -1, -2)


def vtl_value(rep: SurfaceRep, g2, levi_order: int = 1):
    """``(1/(M r)) log det_J(u)^2`` with ``u = (g2 e)^{1/2}``, plus the operator-determinant form.

    Returns ``(jordan_form, operator_form)``; the operator form is
    ``(1/(M 2n)) log Det(g2)^2``.
    """
    V = rep.target
    g2 = np.asarray(g2)
    ge = g2 @ V.unit()
    u = sqrt_cone(V, ge)
    jordan = np.log(V.det(u) ** 2) / (levi_order * V.rank)
    _, logdet = np.linalg.slogdet(g2)
    operator = 2 * logdet / (levi_order * 2 * V.dim)
    # g2 must be the dilation P(u)
    if np.max(np.abs(g2 @ np.eye(V.dim) - quad(V, u[..., None, :], np.eye(V.dim)).swapaxes(-1, -2))) > 1e-8 * np.max(np.abs(g2)):
        raise SurfaceError("normalized representative is not a cone dilation")
    return jordan, operator


def pv_lower_bound_batch(g):
    """Batched :func:`pv_translation_lower_bound`."""
    _, logdet = np.linalg.slogdet(g)
    return np.abs(2 * logdet) / np.sqrt(np.shape(g)[-1])


@dataclass
class WellDispReport:
    records: list
    checks: dict
    fit: dict


def welldisp_experiment(rep: SurfaceRep, max_len: int = 6, basepoints: int = 3, seed: int = 0,
                        xi_words: int = 100, xi_count: int = 50, batch: int = 8192,
                        budget: int = 2_000_000) -> WellDispReport:
    """Translation lengths over all reduced words up to ``max_len``.

    Per word: plain and conjugacy-minimized lengths, the disc translation
    length, the virtual translation length through ``b_rho`` (at three
    basepoints, and at the square of the word), the determinant identity of
    the normalized linear representative, and lower and sampled upper bounds
    for its translation length on positive operators.
    """
    V = rep.target
    n_words = 8 * sum(7 ** k for k in range(max_len))
    if n_words > budget:
        raise SurfaceError(f"enumeration budget exceeded: {n_words} words")
    letters, lengths, mats = enumerate_reduced(rep, max_len)
    m = len(mats)
    rng = np.random.default_rng(seed)
    n, r = V.dim, V.rank

    tau_disc = disc_translation(mats)
    taus = np.empty((3, m))
    tau_sq = np.empty(m)
    vtl_j = np.empty(m)
    vtl_op = np.empty(m)
    tau_lower = np.empty(m)
    tau_upper = np.full(m, np.inf)
    # shared basepoints P(y), y in the cone, for the sampled upper bound
    chols = []
    for _ in range(basepoints):
        y = np.exp(0.5 * rng.standard_normal(r)) @ V.random_frame(rng)
        chols.append(np.linalg.cholesky(quad_rep(V, y).real))
    for s0 in range(0, m, batch):
        sl = slice(s0, min(m, s0 + batch))
        Mb = mats[sl]
        for k, t in enumerate((1.0, 0.5, 2.0)):
            taus[k, sl] = tau_infty_matrices(rep, Mb, t=t)
        tau_sq[sl] = tau_infty_matrices(rep, Mb, power=2)
        g2 = normalized_linear_rep(rep, Mb)
        vtl_j[sl], vtl_op[sl] = vtl_value(rep, g2)
        tau_lower[sl] = pv_lower_bound_batch(g2)
        for L in chols:
            # generalized eigenvalues of (g2 p g2^T, p) with p = L L^T
            h = np.linalg.solve(L, g2 @ L)
            lam = np.linalg.eigvalsh(h @ np.swapaxes(h, -1, -2))
            tau_upper[sl] = np.minimum(tau_upper[sl], np.sqrt(np.sum(np.log(lam) ** 2, axis=-1)))

    tau = taus[0]
    l_conj = np.array([conj_length([k for k in row if k >= 0]) for row in letters])
    # xi-independence on a subset with many basepoints
    sub = rng.choice(m, size=min(xi_words, m), replace=False)
    spreads = []
    for i in sub:
        M = mats[i]
        ts = np.geomspace(0.05, 20.0, xi_count)
        vals = tau_infty_matrices(rep, np.broadcast_to(M, (xi_count, 2, 2)), t=ts)
        spreads.append(np.max(vals) - np.min(vals))
    spread_all = float(np.max(np.max(taus, axis=0) - np.min(taus, axis=0)))

    const = r / np.sqrt(n)
    checks = {
        "n_words": int(m),
        "tau_infty_min": float(np.min(tau)),
        "tau_infty_positive": bool(np.all(tau > 0)),
        "xi_spread_three_points": spread_all,
        "xi_spread_subset": float(max(spreads)),
        "power_residual": float(np.max(np.abs(tau_sq - 2 * tau))),
        # double-precision circle points near the fixed points of gamma^2
        # limit the accuracy to about eps * exp(tau)
        "power_precision_floor": float(np.finfo(float).eps * np.exp(np.max(tau))),
        "disc_residual": float(np.max(np.abs(tau - tau_disc))),
        "vtl_jordan_residual": float(np.max(np.abs(vtl_j - tau))),
        "vtl_operator_residual": float(np.max(np.abs(vtl_op - tau))),
        "crtransl_constant": float(const),
        "crtransl_violations": int(np.sum(tau_lower < const * tau - 1e-9)),
        "lower_upper_violations": int(np.sum(tau_upper < tau_lower - 1e-8 * np.maximum(1, tau_lower))),
        "relator_residual": rep.relator_residual,
    }
    fit = {}
    for name, ls in (("plain", lengths.astype(float)), ("conj", l_conj.astype(float))):
        for which, tv in (("tau_infty", tau), ("tau_lower", tau_lower)):
            A_ls, B_ls = np.polyfit(ls, tv, 1)
            B_cover = float(np.max(A_ls * ls - tv))
            fit[f"{name}/{which}"] = {"A": float(A_ls), "B_lsq": float(-B_ls), "B_cover": B_cover,
                                      "violations": int(np.sum(tv < A_ls * ls - B_cover - 1e-12))}
    records = [{"word": word_string(letters[i]), "l_S": int(lengths[i]), "l_conj": int(l_conj[i]),
                "tau_disc": float(tau_disc[i]), "tau_infty": float(tau[i]),
                "tau_lower": float(tau_lower[i]), "tau_upper": float(tau_upper[i]),
                "tau_vtl": float(vtl_j[i])} for i in range(m)]
    return WellDispReport(records, checks, fit)
