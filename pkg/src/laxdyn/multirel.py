"""Multiple relations and multiple binary relations, gluing and conversions.

Tuples are stored positionally, following ``index`` (the context keys in
canonical order).  Restriction and gluing always go through index names, so the
positional layout never leaks into the semantics.
"""

from __future__ import annotations

import itertools
from typing import Hashable, Iterable, Mapping

from ._order import skey, ssorted
from .errors import BadIndex, ContextMismatch, DomainMismatch, UntaggedIndex
from .transition import Transition


def _index(keys) -> tuple:
    return tuple(sorted(keys, key=skey))


class MultipleRelation:
    """An ``I``-multiple relation: a context ``i -> E_i`` and a graph inside ``Π E_i``."""

    def __init__(self, context: Mapping[Hashable, Iterable], graph: Iterable[tuple] = (), check: bool = True):
        self.index = _index(context)
        self.context = {i: frozenset(context[i]) for i in self.index}
        self.graph = frozenset(tuple(x) for x in graph)
        if check:
            n = len(self.index)
            for x in self.graph:
                if len(x) != n:
                    raise BadIndex(f"tuple {x!r} does not have {n} components")
                for i, v in zip(self.index, x):
                    if v not in self.context[i]:
                        raise DomainMismatch(f"{v!r} is not in the context of {i!r}")

    def _new(self, context, graph):
        return MultipleRelation(context, graph, check=False)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._key() == other._key()

    def _key(self):
        return (self.index, self.context, self.graph)

    __hash__ = None

    def __len__(self):
        return len(self.graph)

    def __contains__(self, x):
        return tuple(x) in self.graph

    def __repr__(self):
        return f"{type(self).__name__}(index={self.index!r}, |graph|={len(self.graph)})"

    def rows(self) -> list:
        """The graph as index-keyed dicts, in canonical order."""
        return [dict(zip(self.index, x)) for x in ssorted(self.graph)]

    def positions(self, K) -> list:
        pos = {i: k for k, i in enumerate(self.index)}
        try:
            return [pos[i] for i in _index(K)]
        except KeyError as e:
            raise BadIndex(f"{e.args[0]!r} is not an index") from None


class MultipleBinaryRelation(MultipleRelation):
    """An ``I``-multiple binary relation; components are pairs ``(w_i, m_i)``.

    The product context is ``E_i = W_i × M_i``; it is not materialized.
    """

    def __init__(self, incoming: Mapping, outgoing: Mapping, graph: Iterable[tuple] = (), check: bool = True):
        if set(incoming) != set(outgoing):
            raise BadIndex("incoming and outgoing contexts have different indices")
        self.index = _index(incoming)
        self.incoming = {i: frozenset(incoming[i]) for i in self.index}
        self.outgoing = {i: frozenset(outgoing[i]) for i in self.index}
        self.graph = frozenset(tuple(x) for x in graph)
        if check:
            n = len(self.index)
            for x in self.graph:
                if len(x) != n:
                    raise BadIndex(f"tuple {x!r} does not have {n} components")
                for i, p in zip(self.index, x):
                    if len(p) != 2 or p[0] not in self.incoming[i] or p[1] not in self.outgoing[i]:
                        raise DomainMismatch(f"{p!r} is not in the context of {i!r}")

    @property
    def context(self) -> dict:
        return {i: _Pairs(self.incoming[i], self.outgoing[i]) for i in self.index}

    def _new(self, context, graph):
        return MultipleBinaryRelation(
            {i: c.left for i, c in context.items()}, {i: c.right for i, c in context.items()}, graph, check=False
        )

    def _key(self):
        return (self.index, self.incoming, self.outgoing, self.graph)

    def incoming_part(self, x) -> tuple:
        return tuple(p[0] for p in x)

    def outgoing_part(self, x) -> tuple:
        return tuple(p[1] for p in x)


class _Pairs:
    """Lazy cartesian product ``W × M`` used as a context."""

    __slots__ = ("left", "right")

    def __init__(self, left, right):
        self.left, self.right = frozenset(left), frozenset(right)

    def __contains__(self, p):
        return isinstance(p, tuple) and len(p) == 2 and p[0] in self.left and p[1] in self.right

    def __iter__(self):
        return iter(itertools.product(ssorted(self.left), ssorted(self.right)))

    def __len__(self):
        return len(self.left) * len(self.right)

    def __eq__(self, other):
        if isinstance(other, _Pairs):
            return self.left == other.left and self.right == other.right
        if isinstance(other, (set, frozenset)):
            return frozenset(self) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.left, self.right))


def _sub_context(R: MultipleRelation, K) -> dict:
    return {i: R.context[i] for i in _index(K)}


def restrict(R: MultipleRelation, K) -> MultipleRelation:
    """``R|K``: project every tuple onto the indices in ``K``."""
    K = set(K)
    if not K <= set(R.index):
        raise BadIndex(f"{ssorted(K - set(R.index))!r} not in the index")
    pos = R.positions(K)
    return R._new(_sub_context(R, K), {tuple(x[p] for p in pos) for x in R.graph})


def glue(R1: MultipleRelation, R2: MultipleRelation) -> MultipleRelation:
    """``R1 ⊗ R2`` on the union of both indices.

    A tuple belongs to the result iff its restrictions belong to ``R1`` and ``R2``.
    """
    if type(R1) is not type(R2):
        raise ContextMismatch("cannot glue relations of different kinds")
    shared = set(R1.index) & set(R2.index)
    for i in shared:
        if R1.context[i] != R2.context[i]:
            raise ContextMismatch(f"contexts differ at {i!r}")
    ctx = dict(R1.context)
    ctx.update(R2.context)
    index = _index(ctx)
    sh = _index(shared)
    p1 = R1.positions(sh)
    p2 = R2.positions(sh)
    buckets = {}
    for y in R2.graph:
        buckets.setdefault(tuple(y[p] for p in p2), []).append(y)
    pos1 = {i: k for k, i in enumerate(R1.index)}
    pos2 = {i: k for k, i in enumerate(R2.index)}
    layout = [(0, pos1[i]) if i in pos1 else (1, pos2[i]) for i in index]
    graph = set()
    for x in R1.graph:
        for y in buckets.get(tuple(x[p] for p in p1), ()):
            xy = (x, y)
            graph.add(tuple(xy[s][k] for s, k in layout))
    return R1._new(ctx, graph)


def intersection(R1: MultipleRelation, R2: MultipleRelation) -> MultipleRelation:
    if R1.index != R2.index:
        raise ContextMismatch("intersection needs the same index")
    return glue(R1, R2)


def zero(context: Mapping) -> MultipleRelation:
    """``0_J``: the empty graph."""
    return MultipleRelation(context, ())


def one(context: Mapping) -> MultipleRelation:
    """``1_J``: the full product (on the empty index, the single empty tuple)."""
    idx = _index(context)
    return MultipleRelation(context, itertools.product(*(ssorted(context[i]) for i in idx)), check=False)


def zero_binary(incoming: Mapping, outgoing: Mapping) -> MultipleBinaryRelation:
    return MultipleBinaryRelation(incoming, outgoing, ())


def one_binary(incoming: Mapping, outgoing: Mapping) -> MultipleBinaryRelation:
    idx = _index(incoming)
    comps = [list(itertools.product(ssorted(incoming[i]), ssorted(outgoing[i]))) for i in idx]
    return MultipleBinaryRelation(incoming, outgoing, itertools.product(*comps), check=False)


def mr(Q: MultipleBinaryRelation) -> MultipleRelation:
    """The same graph seen as a multiple relation over ``W_i × M_i``."""
    ctx = {i: frozenset(Q.context[i]) for i in Q.index}
    return MultipleRelation(ctx, Q.graph, check=False)


def incoming_product(Q: MultipleBinaryRelation) -> list:
    return list(itertools.product(*(ssorted(Q.incoming[i]) for i in Q.index)))


def outgoing_product(Q: MultipleBinaryRelation) -> list:
    return list(itertools.product(*(ssorted(Q.outgoing[i]) for i in Q.index)))


def br(Q: MultipleBinaryRelation) -> Transition:
    """The binary relation ``Π W_i ⇝ Π M_i`` with the same graph."""
    g = {(Q.incoming_part(x), Q.outgoing_part(x)) for x in Q.graph}
    return Transition(incoming_product(Q), outgoing_product(Q), g)


def br_defined(Q: MultipleBinaryRelation) -> frozenset:
    """``Def`` of ``br(Q)``, computed without materializing the products."""
    return frozenset(Q.incoming_part(x) for x in Q.graph)


def br_image(Q: MultipleBinaryRelation) -> frozenset:
    """``Im`` of ``br(Q)``."""
    return frozenset(Q.outgoing_part(x) for x in Q.graph)


def br_preimage(Q: MultipleBinaryRelation) -> dict:
    """Map each outgoing tuple to the sorted list of incoming tuples related to it."""
    out = {}
    for x in Q.graph:
        out.setdefault(Q.outgoing_part(x), set()).add(Q.incoming_part(x))
    return {m: ssorted(ws) for m, ws in out.items()}


def mr2(Q: MultipleBinaryRelation) -> MultipleRelation:
    """Re-index over ``I × {0, 1}``: ``(i, 0)`` carries ``W_i`` and ``(i, 1)`` carries ``M_i``."""
    ctx = {}
    for i in Q.index:
        ctx[(i, 0)] = Q.incoming[i]
        ctx[(i, 1)] = Q.outgoing[i]
    # canonical order of (i, 0), (i, 1) interleaves exactly like the pairs
    return MultipleRelation(ctx, (tuple(v for p in x for v in p) for x in Q.graph), check=False)


def mbr(R: MultipleRelation) -> MultipleBinaryRelation:
    """Inverse of :func:`mr2`; the index must be ``I × {0, 1}``."""
    base = []
    for j in R.index:
        if not (isinstance(j, tuple) and len(j) == 2 and j[1] in (0, 1) and not isinstance(j[1], bool)):
            raise UntaggedIndex(f"{j!r} is not of the form (i, 0) or (i, 1)")
        base.append(j[0])
    I = _index(set(base))
    if set(R.index) != {(i, k) for i in I for k in (0, 1)}:
        raise UntaggedIndex("index is not a full I × {0, 1}")
    incoming = {i: R.context[(i, 0)] for i in I}
    outgoing = {i: R.context[(i, 1)] for i in I}
    pos = {j: k for k, j in enumerate(R.index)}
    graph = {tuple((x[pos[(i, 0)]], x[pos[(i, 1)]]) for i in I) for x in R.graph}
    return MultipleBinaryRelation(incoming, outgoing, graph, check=False)
