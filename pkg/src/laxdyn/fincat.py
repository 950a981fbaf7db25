"""Finite categories given by explicit composition tables, and functors between them.

Composition is written in diagrammatic order: ``compose(f, g)`` is "f then g"
and requires ``cod(f) == dom(g)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Hashable, Mapping, Sequence

from ._order import skey
from .errors import BadUnit, NonAssociative, NotComposable
from .report import Report, Violation

TERMINAL_OBJECT = "•"
TERMINAL_ARROW = "0"


@dataclass(frozen=True)
class Arrow:
    name: Hashable
    dom: Hashable
    cod: Hashable


class FinCategory:
    """A finite category.

    ``objects`` and ``arrows`` keep their given order, which is the
    enumeration order used everywhere downstream.  ``table`` maps composable
    pairs ``(f, g)`` to the name of ``g ∘ f``.
    """

    def __init__(
        self,
        objects: Sequence[Hashable],
        arrows: Sequence[Arrow],
        identity: Mapping[Hashable, Hashable],
        table: Mapping[tuple, Hashable],
    ):
        self.objects = tuple(objects)
        self.arrows = tuple(arrows)
        self.identity = dict(identity)
        self.table = dict(table)
        self._by_name = {a.name: a for a in self.arrows}
        if len(self._by_name) != len(self.arrows):
            raise ValueError("duplicate arrow names")
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("duplicate objects")

    def __eq__(self, other):
        if not isinstance(other, FinCategory):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.arrows == other.arrows
            and self.identity == other.identity
            and self.table == other.table
        )

    __hash__ = None

    def __repr__(self):
        return f"FinCategory({len(self.objects)} objects, {len(self.arrows)} arrows)"

    def arrow(self, name) -> Arrow:
        return self._by_name[name]

    def dom(self, name):
        return self._by_name[name].dom

    def cod(self, name):
        return self._by_name[name].cod

    def id(self, obj):
        return self.identity[obj]

    def is_identity(self, name) -> bool:
        a = self._by_name[name]
        return a.dom == a.cod and self.identity.get(a.dom) == name

    def composable(self, f, g) -> bool:
        return self.cod(f) == self.dom(g)

    def compose(self, f, g):
        """The composite "f then g" (``g ∘ f``)."""
        try:
            return self.table[(f, g)]
        except KeyError:
            raise NotComposable(f"({f!r}, {g!r}) is not a composable pair") from None

    def composable_pairs(self):
        for f in self.arrows:
            for g in self.arrows:
                if f.cod == g.dom:
                    yield f.name, g.name

    def hom(self, src, dst) -> list:
        return [a.name for a in self.arrows if a.dom == src and a.cod == dst]


def _violations(c: FinCategory):
    names = [a.name for a in c.arrows]
    objs = set(c.objects)
    for a in c.arrows:
        if a.dom not in objs or a.cod not in objs:
            yield Violation("typing", (a.name,), "dom/cod is not an object")
    for x in c.objects:
        i = c.identity.get(x)
        if i is None or i not in c._by_name:
            yield Violation("identity", (x,), "missing identity arrow")
            continue
        if c.dom(i) != x or c.cod(i) != x:
            yield Violation("identity", (x, i), "identity is not an endo-arrow of its object")
    for (f, g), h in c.table.items():
        if f not in c._by_name or g not in c._by_name or h not in c._by_name:
            yield Violation("composition-defined", (f, g), "table refers to an unknown arrow")
        elif not c.composable(f, g):
            yield Violation("composition-defined", (f, g), "defined on a non-composable pair")
        elif c.dom(h) != c.dom(f) or c.cod(h) != c.cod(g):
            yield Violation("composition-typing", (f, g, h))
    for f in names:
        for g in names:
            if c.composable(f, g) and (f, g) not in c.table:
                yield Violation("composition-defined", (f, g), "composable pair has no composite")
    for f in names:
        d, k = c.dom(f), c.cod(f)
        if c.table.get((c.identity.get(d), f)) != f:
            yield Violation("left-identity", (f,))
        if c.table.get((f, c.identity.get(k))) != f:
            yield Violation("right-identity", (f,))
    for f, g, h in itertools.product(names, repeat=3):
        if c.composable(f, g) and c.composable(g, h):
            fg, gh = c.table.get((f, g)), c.table.get((g, h))
            if fg is None or gh is None:
                continue
            if c.table.get((fg, h)) != c.table.get((f, gh)):
                yield Violation("associativity", (f, g, h))


def validate_category(c: FinCategory) -> Report:
    """Exhaustively check identity, typing and associativity laws; report the first failure."""
    return Report.collect(_violations(c), first_only=True)


def terminal_category() -> FinCategory:
    o, z = TERMINAL_OBJECT, TERMINAL_ARROW
    return FinCategory([o], [Arrow(z, o, o)], {o: z}, {(z, z): z})


def one_step_category() -> FinCategory:
    """``T0 --d--> T1`` with its two identities."""
    arrows = [Arrow("Id_T0", "T0", "T0"), Arrow("Id_T1", "T1", "T1"), Arrow("d", "T0", "T1")]
    table = {
        ("Id_T0", "Id_T0"): "Id_T0",
        ("Id_T1", "Id_T1"): "Id_T1",
        ("Id_T0", "d"): "d",
        ("d", "Id_T1"): "d",
    }
    return FinCategory(["T0", "T1"], arrows, {"T0": "Id_T0", "T1": "Id_T1"}, table)


def discrete_category(objects: Sequence[Hashable]) -> FinCategory:
    arrows = [Arrow(f"Id_{x}", x, x) for x in objects]
    return FinCategory(
        objects,
        arrows,
        {x: f"Id_{x}" for x in objects},
        {(f"Id_{x}", f"Id_{x}"): f"Id_{x}" for x in objects},
    )


def chain_category(n: int) -> FinCategory:
    """The poset ``0 < 1 < ... < n-1`` as a category; arrows are named ``"i<=j"``."""
    objs = [f"T{k}" for k in range(n)]
    arrows, identity, table = [], {}, {}
    for i in range(n):
        for j in range(i, n):
            name = f"Id_T{i}" if i == j else f"{i}<={j}"
            arrows.append(Arrow(name, objs[i], objs[j]))
            if i == j:
                identity[objs[i]] = name

    def nm(i, j):
        return f"Id_T{i}" if i == j else f"{i}<={j}"

    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                table[(nm(i, j), nm(j, k))] = nm(i, k)
    return FinCategory(objs, arrows, identity, table)


def finite_monoid_category(table: Any, unit: Hashable, elements: Sequence[Hashable] | None = None) -> FinCategory:
    """One-object category from a monoid multiplication table.

    ``table`` is either a mapping ``(a, b) -> a*b`` or a square nested sequence
    indexed by ``range(n)``.  Composition "a then b" is ``a*b``.
    """
    if isinstance(table, Mapping):
        if elements is None:
            elements = sorted({a for a, _ in table} | {b for _, b in table}, key=skey)
        mul = dict(table)
    else:
        rows = [list(r) for r in table]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("monoid table must be square")
        elements = list(range(n)) if elements is None else list(elements)
        mul = {(elements[i], elements[j]): rows[i][j] for i in range(n) for j in range(n)}
    elements = list(elements)
    es = set(elements)
    for a in elements:
        for b in elements:
            if (a, b) not in mul or mul[(a, b)] not in es:
                raise ValueError(f"table is not closed at ({a!r}, {b!r})")
    if unit not in es:
        raise BadUnit(f"unit {unit!r} is not an element")
    for a in elements:
        if mul[(unit, a)] != a or mul[(a, unit)] != a:
            raise BadUnit(f"{unit!r} is not a two-sided unit (fails at {a!r})")
    for a, b, c in itertools.product(elements, repeat=3):
        if mul[(mul[(a, b)], c)] != mul[(a, mul[(b, c)])]:
            raise NonAssociative(f"({a!r}{b!r}){c!r} != {a!r}({b!r}{c!r})")
    o = TERMINAL_OBJECT
    return FinCategory([o], [Arrow(e, o, o) for e in elements], {o: unit}, mul)


@dataclass(frozen=True)
class FinFunctor:
    """A functor between finite categories, given by object and arrow maps."""

    source: FinCategory
    target: FinCategory
    objects: Mapping
    arrows: Mapping

    def __call__(self, arrow):
        return self.arrows[arrow]

    def on_object(self, obj):
        return self.objects[obj]


def identity_functor(c: FinCategory) -> FinFunctor:
    return FinFunctor(c, c, {x: x for x in c.objects}, {a.name: a.name for a in c.arrows})


def constant_functor(c: FinCategory, target: FinCategory, obj) -> FinFunctor:
    """Send everything to ``obj`` and its identity."""
    i = target.id(obj)
    return FinFunctor(c, target, {x: obj for x in c.objects}, {a.name: i for a in c.arrows})


def validate_functor(F: FinFunctor) -> Report:
    def gen():
        S, T = F.source, F.target
        for x in S.objects:
            if x not in F.objects or F.objects[x] not in T.objects:
                yield Violation("functor-objects", (x,), "object not mapped into target")
                return
        for a in S.arrows:
            b = F.arrows.get(a.name)
            if b is None or b not in T._by_name:
                yield Violation("functor-arrows", (a.name,), "arrow not mapped into target")
                return
            if T.dom(b) != F.objects[a.dom] or T.cod(b) != F.objects[a.cod]:
                yield Violation("functor-typing", (a.name, b))
        for x in S.objects:
            if F.arrows[S.id(x)] != T.id(F.objects[x]):
                yield Violation("functor-identity", (x,))
        for f, g in S.composable_pairs():
            ff, gg = F.arrows[f], F.arrows[g]
            if T.cod(ff) != T.dom(gg):
                continue
            if F.arrows[S.compose(f, g)] != T.compose(ff, gg):
                yield Violation("functor-composition", (f, g))

    return Report.collect(gen(), first_only=True)
