"""Self-checking property suites over sampled configurations.

Every suite returns a JSON-ready dict with one entry per checked identity
(``max_residual``, ``tolerance``, ``passed``) plus trial and skip counts.
"""

from __future__ import annotations

import numpy as np

from .algebra import DirectSum, JordanAlgebra, JordanHom, RealLine, apply_hom, make_diagonal_hom, real_power
from .conformal import apply_masked, invariance_suite, random_word
from .domain import inv_cayley
from .kernel import LABELS, classify_codes, cross_ratio, cross_ratio_batch, maslov, path_a_batch
from .sampling import KINDS, random_frames, sample_extremal_quadruple, sample_transverse_tuple

SKIP_LIMIT = 0.1


def _rel(u, v):
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    return np.abs(u - v) / np.maximum(1.0, np.maximum(np.abs(u), np.abs(v)))


def _entry(res, tol, trials=None):
    res = np.asarray(res, dtype=float)
    out = {"max_residual": float(np.max(res)) if res.size else 0.0, "tolerance": tol}
    out["passed"] = bool(res.size > 0 and np.all(np.isfinite(res)) and out["max_residual"] <= tol)
    if trials is not None:
        out["trials"] = int(trials)
    return out


def _finish(report: dict, n: int) -> dict:
    checks = report["checks"]
    skipped = report.get("skipped", 0)
    report["skip_fraction"] = skipped / max(1, n)
    report["passed"] = bool(all(c["passed"] for c in checks.values()) and report["skip_fraction"] <= SKIP_LIMIT)
    return report


# samplers ----------------------------------------------------------------------------

def sample_chain(V: JordanAlgebra, seed, k: int = 5, size: int = 1, word_length: int = 4,
                 spread: float = 0.5, permute: bool = True):
    """``k`` Shilov points any four of which form an extremal quadruple.

    Real tube points ``x_1 < x_2 < ... < x_k`` (each increment lies in the
    cone) are mapped to the ball, moved by a random conformal word and
    optionally shuffled. Returns ``(points (size, k, n), ok)``; ``ok`` is
    False where the word met a singular orbit.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    r = V.rank
    steps = np.exp(spread * rng.standard_normal((size, k, r)))
    frames = random_frames(V, rng, size * k).reshape(size, k, r, V.dim)
    inc = np.einsum("skj,skjn->skn", steps, frames)
    x = np.cumsum(inc, axis=1) - 0.5 * inc.sum(axis=1, keepdims=True)
    pts = inv_cayley(V, x.astype(complex))
    ok = np.ones((size, k), dtype=bool)
    if word_length:
        for g0 in range(0, size, 8):
            w = random_word(V, rng, word_length)
            img, good = apply_masked(V, w, pts[g0:g0 + 8])
            pts[g0:g0 + 8] = np.where(good[..., None], img, pts[g0:g0 + 8])
            ok[g0:g0 + 8] &= good
    if permute:
        perms = np.array([rng.permutation(k) for _ in range(size)])
        pts = np.take_along_axis(pts, perms[:, :, None], axis=1)
    return pts, np.all(ok, axis=-1)


# suites ------------------------------------------------------------------------------

def cocycle_suite(V: JordanAlgebra, n: int = 1000, seed: int = 0, tol: float = 1e-8) -> dict:
    """Symmetry and cocycle identities of the cross ratio on 5-point chains.

    b1: ``B(a,b,c,d) = B(c,d,a,b)``; b2: ``B(a,b,c,d) = B(a,b,c,e) B(a,e,c,d)``;
    b3: ``B(a,b,c,d) = B(a,b,e,d) B(e,b,c,d)``; swap: ``B(a,b,c,d) = B(b,a,d,c)``.
    """
    pts, ok = sample_chain(V, seed, k=5, size=n)
    a, b, c, d, e = (pts[ok, i] for i in range(5))

    def B(p, q, s, t):
        return cross_ratio_batch(V, p, q, s, t)[0]

    base = B(a, b, c, d)
    checks = {
        "b1": _entry(_rel(base, B(c, d, a, b)), tol),
        "b2": _entry(_rel(base, B(a, b, c, e) * B(a, e, c, d)), tol),
        "b3": _entry(_rel(base, B(a, b, e, d) * B(e, b, c, d)), tol),
        "swap": _entry(_rel(base, B(b, a, d, c)), tol),
    }
    return _finish({"suite": "cocycle", "algebra": V.shorthand(), "n": n, "trials": int(ok.sum()),
                    "skipped": int((~ok).sum()), "checks": checks}, n)


def invariance_report(V: JordanAlgebra, n: int = 1000, seed: int = 0, tol: float = 1e-8,
                      word_length: int = 4, configs: int = 16) -> dict:
    """Cross ratio and Maslov index before and after ``n`` random words.

    ``n`` words act on a shared pool of ``configs`` extremal quadruples.
    """
    rng = np.random.default_rng(seed)
    quads = sample_extremal_quadruple(V, rng, size=configs, permute=True)
    words = [random_word(V, rng, word_length) for _ in range(n)]
    cr = invariance_suite(V, "cross_ratio", words, quads, tol=tol, seed=seed)
    ms = invariance_suite(V, "maslov", words, quads[:, :3], tol=0.0, seed=seed)
    checks = {"cross_ratio": {"max_residual": cr["max_deviation"], "tolerance": tol, "passed": cr["passed"]},
              "maslov": {"max_residual": ms["max_deviation"], "tolerance": 0.0, "passed": ms["passed"]}}
    total = cr["trials"] + cr["skipped"]
    report = {"suite": "invariance", "algebra": V.shorthand(), "n": n, "trials": cr["trials"] + ms["trials"],
              "skipped": cr["skipped"] + ms["skipped"], "checks": checks}
    return _finish(report, 2 * total)


def unbalanced_example() -> JordanHom:
    """``(l1, l2) -> (l1, l1, l2)`` from R^2 to R^3: a Jordan map that is not balanced."""
    return JordanHom(real_power(2), real_power(3), np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))


def functorial_suite(V: JordanAlgebra, n: int = 1000, seed: int = 0, tol: float = 1e-9) -> dict:
    """Cross ratio preserved under balanced embeddings into ``V``, broken by an unbalanced one.

    Embeddings: the scalar map ``R -> V`` and the frame map ``R^r -> V``
    for a random Jordan frame. The unbalanced control is
    :func:`unbalanced_example`, whose largest deviation must reach ``1e-2``.
    """
    rng = np.random.default_rng(seed)
    checks = {}
    sources = [("scalar", RealLine(), None)]
    if V.rank > 1 or not isinstance(V, RealLine):
        sources.append(("frame", real_power(V.rank), V.random_frame(rng)))
    for name, src, frame in sources:
        h = make_diagonal_hom(src, V, frame)
        q = sample_extremal_quadruple(src, rng, size=n, permute=True)
        b_src, ok_src = cross_ratio_batch(src, *(q[:, i] for i in range(4)))
        img = apply_hom(h, q)
        b_tgt, ok_tgt = cross_ratio_batch(V, *(img[:, i] for i in range(4)))
        res = np.where(ok_src & ok_tgt, np.abs(b_src - b_tgt), np.inf)
        checks[f"{name}:{src.shorthand()}->{V.shorthand()}"] = _entry(res, tol, n)
    h = unbalanced_example()
    q = sample_extremal_quadruple(h.source, rng, size=min(n, 200), permute=True)
    b_src, _ = cross_ratio_batch(h.source, *(q[:, i] for i in range(4)))
    img = apply_hom(h, q)
    b_tgt, _ = cross_ratio_batch(h.target, *(img[:, i] for i in range(4)))
    dev = float(np.nanmax(np.abs(b_src - b_tgt)))
    checks["unbalanced_detected"] = {"max_residual": dev, "tolerance": 1e-2, "passed": bool(dev >= 1e-2)}
    return _finish({"suite": "functorial", "algebra": V.shorthand(), "n": n, "trials": n * len(sources),
                    "skipped": 0, "checks": checks}, n)


def _coincidence_checks(V, rng):
    """Coincidence patterns must return exactly 1 or 0."""
    q = sample_extremal_quadruple(V, rng, size=20)
    bad = 0
    for a, b, c, d in q:
        for pattern, want in (((a, b, a, d), 1.0), ((a, b, c, b), 1.0), ((a, b, c, a), 0.0), ((a, b, b, d), 0.0)):
            bad += cross_ratio(V, *pattern) != want
    return int(bad)


def range_suite(V: JordanAlgebra, n: int = 1000, seed: int = 0) -> dict:
    """Sign and range of the cross ratio per extremal class, plus coincidence values.

    PositiveInner lands in ``(0, 1)``, PositiveOuter in ``(1, inf)`` and
    Negative in ``(-inf, 0)``; path A must agree with path B in sign.
    """
    rng = np.random.default_rng(seed)
    checks = {}
    for kind in KINDS:
        q = sample_extremal_quadruple(V, rng, kind=kind, size=n, permute=True)
        pts = [q[:, i] for i in range(4)]
        b, valid = cross_ratio_batch(V, *pts)
        label, _, _ = classify_codes(V, *pts)
        a_val, _ = path_a_batch(V, *pts)
        names = np.array(LABELS)[label]
        inner = (b > 0) & (b < 1)
        outer = b > 1
        neg = b < 0
        want = {"PositiveInner": inner, "PositiveOuter": outer, "Negative": neg}
        good = valid & np.array([want[nm][i] if nm in want else False for i, nm in enumerate(names)])
        sign_ok = np.sign(a_val) == np.sign(b)
        checks[kind] = {"max_residual": int(np.sum(~good)), "tolerance": 0,
                        "passed": bool(np.all(good)), "trials": n,
                        "classes": {nm: int(np.sum(names == nm)) for nm in LABELS}}
        checks[f"{kind}:sign_agreement"] = {"max_residual": int(np.sum(~sign_ok)), "tolerance": 0,
                                            "passed": bool(np.all(sign_ok))}
    bad = _coincidence_checks(V, rng)
    checks["coincidence"] = {"max_residual": bad, "tolerance": 0, "passed": bad == 0}
    return _finish({"suite": "range", "algebra": V.shorthand(), "n": n, "trials": 3 * n,
                    "skipped": 0, "checks": checks}, n)


def product_suite(V: DirectSum, n: int = 1000, seed: int = 0, tol: float = 1e-8) -> dict:
    """``B^(r1+...+rk) = prod B_i^(r_i)`` on a direct sum, relative residual."""
    if not isinstance(V, DirectSum):
        raise TypeError("product law needs a direct sum")
    q = sample_extremal_quadruple(V, seed, size=n, permute=True)
    b, ok = cross_ratio_batch(V, *(q[:, i] for i in range(4)))
    rhs = np.ones(n)
    for p, s in zip(V.parts, V.slices):
        bi, oki = cross_ratio_batch(p, *(q[:, i, s] for i in range(4)))
        rhs = rhs * bi ** p.rank
        ok &= oki
    lhs = b ** V.rank
    res = np.where(ok, np.abs(lhs - rhs) / np.maximum(np.abs(lhs), np.abs(rhs)), np.inf)
    return _finish({"suite": "product", "algebra": V.shorthand(), "n": n, "trials": n, "skipped": 0,
                    "checks": {"product_law": _entry(res, tol, n)}}, n)


def maslov_suite(V: JordanAlgebra, n: int = 1000, seed: int = 0) -> dict:
    """Value at the standard triple, and parity and range on random transverse triples."""
    e = V.unit().astype(complex)
    std = maslov(V, -e, -1j * e, e)
    pts = sample_transverse_tuple(V, seed, 3, size=n)
    m = maslov(V, pts[:, 0], pts[:, 1], pts[:, 2], check=False)
    r = V.rank
    bad = int(np.sum((np.abs(m) > r) | ((m - r) % 2 != 0)))
    checks = {"standard_triple": {"max_residual": abs(std - r), "tolerance": 0, "passed": std == r},
              "parity_range": {"max_residual": bad, "tolerance": 0, "passed": bad == 0, "trials": n}}
    return _finish({"suite": "maslov", "algebra": V.shorthand(), "n": n, "trials": n, "skipped": 0,
                    "checks": checks}, n)


SUITES = {"cocycle": cocycle_suite, "invariance": invariance_report, "functorial": functorial_suite,
          "range": range_suite}
