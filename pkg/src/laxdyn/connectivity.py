"""Connectivity structures generated by non-splittability of multiple relations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable

from ._order import skey, ssorted
from .errors import IndexTooLarge
from .interaction import InteractionRequest, InteractiveFamily, coherent_part
from .multirel import MultipleRelation
from .report import Report, Violation

MAX_INDEX = 12
DISCRETE = "discrete integral"
INDISCRETE = "indiscrete"
BORROMEAN = "integral borromean"
OTHER = "other"


@dataclass(frozen=True)
class ConnectivitySpace:
    """A carrier with its family of connected subsets."""

    carrier: tuple
    connected: frozenset

    def __contains__(self, subset) -> bool:
        return frozenset(subset) in self.connected

    def sorted_sets(self) -> list:
        """Connected subsets by size, then canonically."""
        return sorted((ssorted(k) for k in self.connected), key=lambda k: (len(k), [skey(x) for x in k]))

    def issubset(self, other: "ConnectivitySpace") -> bool:
        return self.connected <= other.connected

    def check_axiom(self) -> Report:
        """Unions of connected sets sharing a point are connected.

        Checking pairs per point suffices: if the sets through ``x`` are closed
        under binary unions, every union of a subfamily through ``x`` is one of them.
        """

        def gen():
            carrier = set(self.carrier)
            for k in self.connected:
                if not k <= carrier:
                    yield Violation("carrier", (ssorted(k),), "subset leaves the carrier")
            if self.carrier and frozenset() not in self.connected:
                yield Violation("empty-set", (), "the empty set must be connected")
            for x in self.carrier:
                through = [k for k in self.connected if x in k]
                for a in through:
                    for b in through:
                        if a | b not in self.connected:
                            yield Violation("union", (x, ssorted(a), ssorted(b)))
                            return

        return Report.collect(gen(), first_only=True)

    def classify(self) -> str:
        I = frozenset(self.carrier)
        base = {frozenset()} | {frozenset([x]) for x in I}
        if self.connected == base:
            return DISCRETE
        if len(self.connected) == 2 ** len(I):
            return INDISCRETE
        if len(I) >= 3 and self.connected == base | {I}:
            return BORROMEAN
        return OTHER


def discrete_integral(carrier: Iterable[Hashable]) -> ConnectivitySpace:
    c = tuple(ssorted(carrier))
    return ConnectivitySpace(c, frozenset({frozenset()} | {frozenset([x]) for x in c}))


def _as_relation(R) -> MultipleRelation:
    if isinstance(R, InteractionRequest):
        return R.relation
    return R


def connectivity_of(R, max_index: int = MAX_INDEX) -> ConnectivitySpace:
    """Subsets ``K`` of the index for which ``R|K`` admits no splitting.

    ``K`` splits at ``K1 ⊔ K2`` (both non-empty) when ``R|K = R|K1 ⊗ R|K2``;
    since ``⊆`` always holds, comparing sizes decides it.
    """
    R = _as_relation(R)
    idx = R.index
    n = len(idx)
    if n > max_index:
        raise IndexTooLarge(f"index of size {n} exceeds {max_index}")
    size = [0] * (1 << n)
    for mask in range(1 << n):
        pos = [k for k in range(n) if mask >> k & 1]
        size[mask] = len({tuple(x[p] for p in pos) for x in R.graph})
    connected = []
    for mask in range(1 << n):
        low = mask & -mask
        rest = mask ^ low
        split = False
        # K1 always holds the lowest element; K2 ranges over non-empty subsets of the rest
        sub = rest
        while sub:
            k1 = mask ^ sub
            if size[mask] == size[k1] * size[sub]:
                split = True
                break
            sub = (sub - 1) & rest
        if not split:
            connected.append(frozenset(idx[k] for k in range(n) if mask >> k & 1))
    return ConnectivitySpace(idx, frozenset(connected))


def project(R: InteractionRequest) -> MultipleRelation:
    """Underline: keep only the outgoing realizations of each tuple."""
    r = R.relation
    return MultipleRelation(
        {i: r.incoming[i] for i in r.index}, {tuple(p[0] for p in x) for x in r.graph}, check=False
    )


@dataclass(frozen=True)
class FourStructures:
    """``request`` is K_R, ``plain`` K_Ř, ``projected`` K of the projection of R,
    ``manifest`` K of the projection of Ř."""

    request: ConnectivitySpace
    plain: ConnectivitySpace
    projected: ConnectivitySpace
    manifest: ConnectivitySpace

    def as_dict(self) -> dict:
        return {
            "request": self.request,
            "plain": self.plain,
            "projected": self.projected,
            "manifest": self.manifest,
        }


def four_structures_of(Q: InteractionRequest, max_index: int = MAX_INDEX) -> FourStructures:
    Qc = coherent_part(Q)
    return FourStructures(
        request=connectivity_of(Q, max_index),
        plain=connectivity_of(Qc, max_index),
        projected=connectivity_of(project(Q), max_index),
        manifest=connectivity_of(project(Qc), max_index),
    )


def four_structures(F: InteractiveFamily, max_index: int = MAX_INDEX) -> FourStructures:
    return four_structures_of(F.request, max_index)
