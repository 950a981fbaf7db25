"""Canonical ordering and JSON-shape helpers for heterogeneous hashable values.

States, parameters and instants are arbitrary hashables (ints, strings, nested
tuples).  Everything user-visible is sorted with :func:`skey` so that output is
stable across runs.
"""

from __future__ import annotations

from typing import Any, Iterable


def skey(x: Any):
    """Total sort key over None/bool/int/float/str/tuple/frozenset values."""
    if x is None:
        return (0,)
    if isinstance(x, bool):
        return (1, int(x))
    if isinstance(x, (int, float)):
        return (2, x)
    if isinstance(x, str):
        return (3, x)
    if isinstance(x, (tuple, list)):
        return (4, tuple(skey(e) for e in x))
    if isinstance(x, (frozenset, set)):
        return (5, tuple(sorted(skey(e) for e in x)))
    return (9, repr(x))


def ssorted(xs: Iterable[Any]) -> list:
    return sorted(xs, key=skey)


def freeze(x: Any) -> Any:
    """Turn decoded JSON (lists) into hashable tuples, recursively."""
    if isinstance(x, list):
        return tuple(freeze(e) for e in x)
    return x


def thaw(x: Any) -> Any:
    """Inverse of :func:`freeze` for output; sets become sorted lists."""
    if isinstance(x, tuple):
        return [thaw(e) for e in x]
    if isinstance(x, (frozenset, set)):
        return [thaw(e) for e in ssorted(x)]
    return x
