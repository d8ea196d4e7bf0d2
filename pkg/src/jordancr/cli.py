"""Command-line front end.

Exit codes: 0 all checks passed, 1 some check failed, 2 parse error,
3 precondition failure, 4 numerical failure (including more than 10%
skipped trials).
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
import tempfile

import click
import numpy as np

from . import __version__
from .algebra import AlgebraError, DirectSum, JordanAlgebra, parse_algebra
from .conformal import SingularOrbit
from .domain import DomainError, cdet, transversal
from .kernel import KernelError, evaluate_quadruple, maslov
from .sampling import SamplingError
from .suites import SKIP_LIMIT, SUITES, product_suite

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_PRECONDITION, EXIT_NUMERICAL = 0, 1, 2, 3, 4


class ParseFailure(click.ClickException):
    exit_code = EXIT_PARSE


# serialization ------------------------------------------------------------------------

def _fmt(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    return format(x, ".17g")


def dumps(obj) -> str:
    """JSON text with every float written to 17 significant digits."""
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return dumps([obj.real, obj.imag])
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the target directory and rename it into place."""
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _flatten(rec: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in rec.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, (float, np.floating)):
            out[key] = _fmt(float(v))
        elif isinstance(v, (list, tuple, np.ndarray)):
            out[key] = dumps(v)
        else:
            out[key] = v
    return out


def to_csv(records: list) -> str:
    rows = [_flatten(r) for r in records]
    fields = list(dict.fromkeys(k for row in rows for k in row))
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def emit(report: dict, out: str | None, fmt: str, records: list | None = None) -> None:
    """Print or write ``report``; ``records`` (if given) go one per line as JSONL or CSV rows."""
    if fmt == "csv":
        text = to_csv(records if records is not None else [report])
    elif records is not None:
        text = "\n".join([dumps(report)] + [dumps(r) for r in records]) + "\n"
    else:
        text = dumps(report) + "\n"
    if out:
        write_atomic(out, text)
        if fmt == "json" and records is not None:
            base, _ = os.path.splitext(out)
            write_atomic(base + ".csv", to_csv(records))
    else:
        click.echo(text, nl=False)


# input parsing ------------------------------------------------------------------------

def load_algebra(text: str) -> JordanAlgebra:
    try:
        return parse_algebra(text)
    except (AlgebraError, ValueError, json.JSONDecodeError) as exc:
        raise ParseFailure(f"bad algebra descriptor {text!r}: {exc}") from exc


def _scalar(tok) -> complex:
    if isinstance(tok, list) and len(tok) == 2 and all(isinstance(t, (int, float)) for t in tok):
        return complex(tok[0], tok[1])
    if isinstance(tok, (int, float)):
        return complex(tok)
    if isinstance(tok, str):
        return complex(tok.replace(" ", "").replace("i", "j"))
    raise ValueError(f"cannot read {tok!r} as a complex number")


def _point(V: JordanAlgebra, tok) -> np.ndarray:
    e = V.unit().astype(complex)
    if isinstance(tok, str) and tok.strip().endswith("e"):
        coeff = tok.strip()[:-1].rstrip("*")
        coeff = {"": "1", "-": "-1", "+": "1", "i": "1j", "-i": "-1j"}.get(coeff, coeff)
        return _scalar(coeff) * e
    if isinstance(tok, list) and len(tok) == V.dim:
        return np.array([_scalar(t) for t in tok])
    if V.dim == 1:
        return np.array([_scalar(tok)])
    raise ValueError(f"point {tok!r} does not have {V.dim} coordinates")


def load_points(V: JordanAlgebra, text: str, k: int) -> list:
    """Points as JSON: a list of ``k`` entries, each a coordinate list.

    Coordinates are numbers, ``[re, im]`` pairs or strings such as ``"-1j"``;
    a whole point may be written ``"e"``, ``"-ie"`` or ``"0.5e"`` (a multiple
    of the unit). In rank-one models a point may be a bare scalar.
    """
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    try:
        raw = json.loads(text)
        if not isinstance(raw, list) or len(raw) != k:
            raise ValueError(f"expected a list of {k} points")
        return [_point(V, t) for t in raw]
    except (ValueError, TypeError) as exc:
        raise ParseFailure(f"bad points: {exc}") from exc


def run_guarded(fn):
    """Map library exceptions onto the exit-code contract."""
    try:
        return fn()
    except click.ClickException:
        raise
    except (SingularOrbit, SamplingError, np.linalg.LinAlgError, FloatingPointError) as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)
    except (KernelError, DomainError, AlgebraError) as exc:
        click.echo(f"precondition failure: {exc}", err=True)
        sys.exit(EXIT_PRECONDITION)


def _header(command: str, **config) -> dict:
    return {"schema": SCHEMA, "version": __version__, "command": command, "config": config}


# commands ---------------------------------------------------------------------------------

algebra_opt = click.option("--algebra", "algebra", default="r", show_default=True,
                           help="Shorthand (r, r^k, symN, spinN, sum(...)) or JSON descriptor.")
seed_opt = click.option("--seed", type=click.IntRange(0, 2 ** 64 - 1), required=True, help="RNG seed (u64).")
n_opt = click.option("--n", "n", type=click.IntRange(min=1), default=1000, show_default=True, help="Suite size.")
out_opt = click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file.")
fmt_opt = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
tol_opt = click.option("--tol", type=float, default=None, help="Override the check tolerance.")


@click.group()
@click.version_option(__version__)
def main():
    """Cross ratios on tube-type bounded symmetric domains."""


@main.group()
def algebra():
    """Algebra descriptors."""


def _kind(V: JordanAlgebra) -> str:
    if isinstance(V, DirectSum):
        return "DirectSum"
    return type(V).__name__


@algebra.command("info")
@algebra_opt
@out_opt
@fmt_opt
def algebra_info(algebra, out, fmt):
    """Rank, dimension, basis and model kind."""
    V = load_algebra(algebra)
    rec = _header("algebra info", algebra=algebra)
    rec.update({"kind": _kind(V), "shorthand": V.shorthand(), "rank": V.rank, "dim": V.dim,
                "descriptor": V.to_json(), "basis": V.describe_basis()})
    emit(rec, out, fmt)


@main.command("crossratio")
@algebra_opt
@click.option("--points", required=True, help="JSON list of four points (or @file).")
@out_opt
@fmt_opt
def crossratio_cmd(algebra, points, out, fmt):
    """Cross ratio of a quadruple by both paths, with its classification."""
    V = load_algebra(algebra)
    pts = load_points(V, points, 4)
    rec = _header("crossratio", algebra=algebra)
    rec.update(run_guarded(lambda: evaluate_quadruple(V, *pts)))
    if rec["B"] is not None:
        click.echo(f"B = {_fmt(float(rec['B']))}  ({rec['class']})", err=True)
    emit(rec, out, fmt)


@main.command("maslov")
@algebra_opt
@click.option("--points", required=True, help="JSON list of three points (or @file).")
@out_opt
@fmt_opt
def maslov_cmd(algebra, points, out, fmt):
    """Maslov index of a pairwise transverse triple."""
    V = load_algebra(algebra)
    pts = load_points(V, points, 3)
    rec = _header("maslov", algebra=algebra)
    rec["maslov"] = int(run_guarded(lambda: maslov(V, *pts)))
    rec["rank"] = V.rank
    emit(rec, out, fmt)


@main.command("transversal")
@algebra_opt
@click.option("--points", required=True, help="JSON list of two points (or @file).")
@out_opt
@fmt_opt
def transversal_cmd(algebra, points, out, fmt):
    """Whether two Shilov points are transverse."""
    V = load_algebra(algebra)
    z, w = load_points(V, points, 2)
    rec = _header("transversal", algebra=algebra)
    rec["transversal"] = bool(transversal(V, z, w))
    rec["abs_det"] = float(abs(cdet(V, z - w)))
    emit(rec, out, fmt)


@main.command("suite")
@click.argument("name", type=click.Choice(sorted(SUITES) + ["product"]))
@algebra_opt
@seed_opt
@n_opt
@tol_opt
@out_opt
@fmt_opt
def suite_cmd(name, algebra, seed, n, tol, out, fmt):
    """Run a self-checking property suite; exit 0 iff every check passes."""
    V = load_algebra(algebra)
    kwargs = {} if tol is None else {"tol": tol}
    if name == "range" and kwargs:
        raise ParseFailure("the range suite has no tolerance")
    if name == "product":
        if not isinstance(V, DirectSum):
            raise ParseFailure("the product suite needs a direct sum algebra")
        fn = product_suite
    else:
        fn = SUITES[name]
    report = run_guarded(lambda: fn(V, n=n, seed=seed, **kwargs))
    rec = _header(f"suite {name}", algebra=algebra, seed=seed, n=n, tol=tol)
    rec.update(report)
    rows = [{"check": k, **v} for k, v in report["checks"].items()]
    emit(rec, out, fmt, records=rows if fmt == "csv" else None)
    for k, v in report["checks"].items():
        click.echo(f"{'PASS' if v['passed'] else 'FAIL'} {k}: {_fmt(float(v['max_residual']))}", err=True)
    if report.get("skip_fraction", 0) > SKIP_LIMIT:
        sys.exit(EXIT_NUMERICAL)
    sys.exit(EXIT_OK if report["passed"] else EXIT_FAIL)


@main.group()
def fuchsian():
    """Surface-group experiments."""


@fuchsian.command("run")
@click.option("--target", default="sym3", show_default=True, help="Target algebra of the scalar embedding.")
@click.option("--maxlen", type=click.IntRange(1, 8), default=6, show_default=True)
@click.option("--seed", type=click.IntRange(0, 2 ** 64 - 1), default=0, show_default=True)
@out_opt
@fmt_opt
def fuchsian_run(target, maxlen, seed, out, fmt):
    """Translation lengths over all reduced words; one record per word."""
    from .surface import genus2_octagon_rep, welldisp_experiment
    V = load_algebra(target)

    def go():
        rep = genus2_octagon_rep(V)
        return welldisp_experiment(rep, max_len=maxlen, seed=seed)

    res = run_guarded(go)
    checks = res.checks
    passed = {
        "tau_infty_positive": checks["tau_infty_positive"],
        "xi_independence": checks["xi_spread_subset"] <= 1e-9 and checks["xi_spread_three_points"] <= 1e-9,
        "power_law": checks["power_residual"] <= 1e-9,
        "vtl_identity": checks["vtl_jordan_residual"] <= 1e-8,
        "crtransl": checks["crtransl_violations"] == 0,
        "affine_fit": all(f["A"] > 0 and f["violations"] == 0 for f in res.fit.values()),
    }
    head = _header("fuchsian run", target=target, maxlen=maxlen, seed=seed)
    head.update({"checks": checks, "fit": res.fit, "passed": passed, "all_passed": all(passed.values())})
    emit(head, out, fmt, records=res.records)
    for k, v in passed.items():
        click.echo(f"{'PASS' if v else 'FAIL'} {k}", err=True)
    sys.exit(EXIT_OK if all(passed.values()) else EXIT_FAIL)


if __name__ == "__main__":
    main()
