"""Global relative tolerance used by the algebraic predicates."""

from contextlib import contextmanager

_state = {"rel": 1e-9}


def get_tol() -> float:
    return _state["rel"]


def set_tol(value: float) -> None:
    if not value > 0:
        raise ValueError("tolerance must be positive")
    _state["rel"] = float(value)


@contextmanager
def tolerance(value: float):
    """Temporarily override the global relative tolerance."""
    old = _state["rel"]
    set_tol(value)
    try:
        yield
    finally:
        _state["rel"] = old
