"""Transitions ``U ⇝ V``: binary relations read as maps ``U -> P(V)``."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping

from ._order import skey, ssorted
from .errors import DomainMismatch

DETERMINISTIC = "deterministic"
HYPER_DETERMINISTIC = "hyper_deterministic"
GENERAL = "general"

_RANK = {DETERMINISTIC: 0, HYPER_DETERMINISTIC: 1, GENERAL: 2}


def weakest(kinds: Iterable[str]) -> str:
    """The least specific of several classifications (deterministic if empty)."""
    return max(kinds, key=_RANK.__getitem__, default=DETERMINISTIC)


@dataclass(frozen=True)
class Transition:
    """A relation from ``dom`` to ``cod``; ``graph`` is a frozenset of ``(u, v)`` pairs."""

    dom: frozenset
    cod: frozenset
    graph: frozenset
    _img: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "dom", frozenset(self.dom))
        object.__setattr__(self, "cod", frozenset(self.cod))
        object.__setattr__(self, "graph", frozenset(self.graph))
        img = {}
        for u, v in self.graph:
            if u not in self.dom:
                raise DomainMismatch(f"{u!r} is not in the domain")
            if v not in self.cod:
                raise DomainMismatch(f"{v!r} is not in the codomain")
            img.setdefault(u, set()).add(v)
        object.__setattr__(self, "_img", {u: frozenset(vs) for u, vs in img.items()})

    def __call__(self, u) -> frozenset:
        return self._img.get(u, frozenset())

    image = __call__

    @property
    def defined(self) -> frozenset:
        """``Def``: the points with a non-empty image."""
        return frozenset(self._img)

    @property
    def converse(self) -> "Transition":
        return Transition(self.cod, self.dom, {(v, u) for u, v in self.graph})

    def issubset(self, other: "Transition") -> bool:
        return self.graph <= other.graph

    def union(self, other: "Transition") -> "Transition":
        _same_sides(self, other)
        return Transition(self.dom, self.cod, self.graph | other.graph)

    def pairs(self) -> list:
        return ssorted(self.graph)

    def __repr__(self):
        return f"Transition({self.pairs()!r})"

    @classmethod
    def identity(cls, U) -> "Transition":
        return cls(U, U, {(u, u) for u in U})

    @classmethod
    def empty(cls, U, V) -> "Transition":
        return cls(U, V, ())

    @classmethod
    def full(cls, U, V) -> "Transition":
        return cls(U, V, {(u, v) for u in U for v in V})

    @classmethod
    def from_map(cls, U, V, f: Mapping) -> "Transition":
        """From a partial map; values may be single elements or sets of elements."""
        g = set()
        for u, out in f.items():
            if isinstance(out, (set, frozenset)):
                g.update((u, v) for v in out)
            else:
                g.add((u, out))
        return cls(U, V, g)


def _same_sides(phi: Transition, psi: Transition):
    if phi.dom != psi.dom or phi.cod != psi.cod:
        raise DomainMismatch("transitions do not share domain and codomain")


def compose(phi: Transition, psi: Transition) -> Transition:
    """``ψ ⊙ φ``: first φ, then ψ, taking the union of images."""
    if phi.cod != psi.dom:
        raise DomainMismatch("codomain of the first transition differs from domain of the second")
    g = set()
    for u, v in phi.graph:
        for w in psi(v):
            g.add((u, w))
    return Transition(phi.dom, psi.cod, g)


def constraint_leq(phi: Transition, psi: Transition) -> bool:
    """``φ ≤ ψ`` iff φ(u) ⊇ ψ(u) everywhere, i.e. ψ constrains more."""
    _same_sides(phi, psi)
    return psi.graph <= phi.graph


def classify(phi: Transition) -> str:
    sizes = [len(phi(u)) for u in phi.dom]
    if any(n > 1 for n in sizes):
        return GENERAL
    if all(n == 1 for n in sizes):
        return DETERMINISTIC
    return HYPER_DETERMINISTIC


class TransitionFamily:
    """An ``L``-indexed family of transitions sharing domain and codomain."""

    def __init__(self, members: Mapping[Hashable, Transition]):
        self.members = dict(members)
        sides = {(t.dom, t.cod) for t in self.members.values()}
        if len(sides) > 1:
            raise DomainMismatch("family members must share domain and codomain")

    @property
    def params(self) -> list:
        return ssorted(self.members)

    def __getitem__(self, lam) -> Transition:
        return self.members[lam]

    def __eq__(self, other):
        return isinstance(other, TransitionFamily) and self.members == other.members

    __hash__ = None

    def union(self) -> Transition | None:
        """Pointwise union over all parameter values."""
        out = None
        for lam in sorted(self.members, key=skey):
            t = self.members[lam]
            out = t if out is None else out.union(t)
        return out
