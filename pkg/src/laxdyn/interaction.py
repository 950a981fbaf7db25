"""Interaction requests over families of open dynamics, synchronizations,
intimacies and interactive families."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Mapping

from ._order import skey, ssorted
from .dynamics import OpenDynamic, anteriority, validate_open_dynamic
from .errors import (
    ContextMismatch,
    FamilyMismatch,
    IntimacyNotCoveringM,
    InvalidDynamic,
    InvalidSynchronization,
    NotAdmissible,
    NotCoherent,
    SearchBudgetExceeded,
)
from .fincat import FinFunctor, validate_functor
from .multirel import MultipleBinaryRelation, br_defined, br_image, br_preimage
from .realization import EMPTY, enumerate_realizations
from .report import Report, Violation

PREDICATE_CAP = 10**7
INCREASING = "increasing"
DECREASING = "decreasing"


class DynamicsFamily:
    """An indexed family of open dynamics with their realization data.

    ``L[i]`` is the parameter set of member ``i``, ``Zl[i][λ]`` the outgoing
    parts of its realizations with parameter ``λ``, ``Z[i]`` their union and
    ``Zstar[i]`` the non-empty ones.  ``members`` is None for families built
    directly from realization data with :meth:`from_realizations`.
    """

    def __init__(self, members: Mapping[Hashable, OpenDynamic], cap: int | None = None, check: bool = True):
        self.index = tuple(sorted(members, key=skey))
        self.members = {i: members[i] for i in self.index}
        self.L, self.Zl, self.Z, self.Zstar = {}, {}, {}, {}
        for i in self.index:
            A = self.members[i]
            if check:
                rep = validate_open_dynamic(A)
                if not rep.ok:
                    raise InvalidDynamic(f"member {i!r} is invalid: {rep}", rep)
            rs = enumerate_realizations(A, cap=cap)
            self._store(i, A.params, {lam: rs.by_param[lam] for lam in A.params})

    def _store(self, i, params, by_param):
        self.L[i] = tuple(params)
        self.Zl[i] = {lam: frozenset(by_param.get(lam, ())) | {EMPTY} for lam in params}
        allz = frozenset().union(*self.Zl[i].values()) if params else frozenset()
        self.Z[i] = tuple(ssorted(allz))
        self.Zstar[i] = tuple(s for s in self.Z[i] if s != EMPTY)

    @classmethod
    def from_realizations(cls, params: Mapping, realizations: Mapping) -> "DynamicsFamily":
        """A family given only by ``L_i`` and ``Z_{i,λ}``; the empty outgoing part is always added."""
        fam = cls.__new__(cls)
        fam.index = tuple(sorted(params, key=skey))
        fam.members = None
        fam.L, fam.Zl, fam.Z, fam.Zstar = {}, {}, {}, {}
        for i in fam.index:
            fam._store(i, params[i], {lam: frozenset(realizations.get(i, {}).get(lam, ())) for lam in params[i]})
        return fam

    def __eq__(self, other):
        if not isinstance(other, DynamicsFamily):
            return NotImplemented
        return self.index == other.index and self.L == other.L and self.Zl == other.Zl and self.members == other.members

    __hash__ = None

    def __repr__(self):
        return f"DynamicsFamily(index={self.index!r})"

    def coherent(self, i, sigma, lam) -> bool:
        return sigma in self.Zl[i].get(lam, ())

    def empty_request(self) -> "InteractionRequest":
        return request(self, ())


@dataclass(frozen=True)
class InteractionRequest:
    """A multiple binary relation from outgoing realizations to parameter values.

    Graph tuples are positional in ``family.index`` order; each component is a
    pair ``(σ_i, λ_i)``.
    """

    family: DynamicsFamily = field(compare=False, repr=False)
    relation: MultipleBinaryRelation

    @property
    def graph(self) -> frozenset:
        return self.relation.graph

    @property
    def index(self) -> tuple:
        return self.relation.index

    def __len__(self):
        return len(self.relation.graph)

    def sigmas(self, x) -> tuple:
        return tuple(p[0] for p in x)

    def lams(self, x) -> tuple:
        return tuple(p[1] for p in x)

    def __repr__(self):
        return f"InteractionRequest(|graph|={len(self)})"


def _relation(family: DynamicsFamily, graph) -> MultipleBinaryRelation:
    return MultipleBinaryRelation(
        {i: family.Z[i] for i in family.index}, {i: family.L[i] for i in family.index}, graph
    )


def request(family: DynamicsFamily, graph: Iterable) -> InteractionRequest:
    """Request with an explicit graph of tuples ``((σ_i, λ_i))_i``."""
    return InteractionRequest(family, _relation(family, (tuple(tuple(p) for p in x) for x in graph)))


def _grid(family: DynamicsFamily, comps: Mapping, cap: int) -> Iterable:
    size = 1
    for i in family.index:
        size *= len(comps[i])
    if size > cap:
        raise SearchBudgetExceeded(f"request grid has {size} points, more than {cap}")
    return itertools.product(*(comps[i] for i in family.index))


def request_from_predicate(
    family: DynamicsFamily, pred: Callable[[tuple, tuple], bool], cap: int = PREDICATE_CAP
) -> InteractionRequest:
    """Keep the grid points of ``Π (Z_i × L_i)`` where ``pred(sigmas, lams)`` holds."""
    comps = {i: [(s, l) for s in family.Z[i] for l in family.L[i]] for i in family.index}
    graph = []
    for x in _grid(family, comps, cap):
        if pred(tuple(p[0] for p in x), tuple(p[1] for p in x)):
            graph.append(x)
    return InteractionRequest(family, _relation_nocheck(family, graph))


def _relation_nocheck(family, graph):
    return MultipleBinaryRelation(
        {i: family.Z[i] for i in family.index}, {i: family.L[i] for i in family.index}, graph, check=False
    )


def omega(family: DynamicsFamily, cap: int = PREDICATE_CAP) -> InteractionRequest:
    """The greatest coherent request: every ``σ_i`` realizes its own ``λ_i``."""
    comps = {i: [(s, l) for l in family.L[i] for s in ssorted(family.Zl[i][l])] for i in family.index}
    return InteractionRequest(family, _relation_nocheck(family, _grid(family, comps, cap)))


def full_request(family: DynamicsFamily, cap: int = PREDICATE_CAP) -> InteractionRequest:
    comps = {i: [(s, l) for s in family.Z[i] for l in family.L[i]] for i in family.index}
    return InteractionRequest(family, _relation_nocheck(family, _grid(family, comps, cap)))


def _check_context(Q: InteractionRequest, family: DynamicsFamily | None = None):
    fam = family or Q.family
    ref = _relation_nocheck(fam, ())
    r = Q.relation
    if r.index != ref.index or r.incoming != ref.incoming or r.outgoing != ref.outgoing:
        raise ContextMismatch("request does not live in the context of the family")


def is_coherent_tuple(family: DynamicsFamily, x) -> bool:
    return all(family.coherent(i, s, l) for i, (s, l) in zip(family.index, x))


def coherent_part(Q: InteractionRequest) -> InteractionRequest:
    """``Q̌ = Q ∩ Ω``."""
    _check_context(Q)
    fam = Q.family
    return InteractionRequest(fam, _relation_nocheck(fam, (x for x in Q.graph if is_coherent_tuple(fam, x))))


def is_coherent(Q: InteractionRequest) -> bool:
    return all(is_coherent_tuple(Q.family, x) for x in Q.graph)


def _is_functional(Q: InteractionRequest) -> bool:
    seen = {}
    for x in Q.graph:
        s, l = Q.sigmas(x), Q.lams(x)
        if seen.setdefault(s, l) != l:
            return False
    return True


def _is_strongly_functional(Q: InteractionRequest) -> bool:
    n = len(Q.index)
    for k in range(n):
        seen = {}
        for x in Q.graph:
            others = tuple(x[j][0] for j in range(n) if j != k)
            if seen.setdefault(others, x[k][1]) != x[k][1]:
                return False
    return True


def _covers(defined: frozenset, comps: list) -> bool:
    return all(s in defined for s in itertools.product(*comps))


def classify_request(Q: InteractionRequest) -> dict:
    """The four request predicates: normal, admissible, functional, strongly functional."""
    _check_context(Q)
    fam = Q.family
    defined = br_defined(Q.relation)
    return {
        "normal": _covers(defined, [fam.Zstar[i] for i in fam.index]),
        "admissible": any(is_coherent_tuple(fam, x) for x in Q.graph),
        "functional": _is_functional(Q),
        "strongly_functional": _is_strongly_functional(Q),
    }


def undecided_parts(family: DynamicsFamily) -> dict:
    """Per member, the non-empty outgoing parts realizing *every* parameter value.

    Incoherent tuples can never be built on these, so a relation is normal
    exactly when its domain already contains their whole product.
    """
    out = {}
    for i in family.index:
        common = None
        for l in family.L[i]:
            common = family.Zl[i][l] if common is None else common & family.Zl[i][l]
        common = frozenset(family.Z[i]) if common is None else common
        out[i] = tuple(s for s in family.Zstar[i] if s in common)
    return out


def normal_completion(R: InteractionRequest, cap: int = PREDICATE_CAP) -> InteractionRequest:
    """The laxest request whose coherent part is ``R``: ``R`` plus every incoherent tuple."""
    fam = R.family
    comps = {i: [(s, l) for s in fam.Z[i] for l in fam.L[i]] for i in fam.index}
    extra = (x for x in _grid(fam, comps, cap) if not is_coherent_tuple(fam, x))
    return InteractionRequest(fam, _relation_nocheck(fam, set(R.graph) | set(extra)))


def classify_relation(R: InteractionRequest, witness: InteractionRequest | None = None) -> dict:
    """Predicates of a coherent request: normal, efficient, functional, strongly functional.

    Normality holds when the optional ``witness`` is a normal request with
    coherent part ``R``, or else when the laxest completion of ``R`` is normal.
    """
    _check_context(R)
    if not is_coherent(R):
        raise NotCoherent("an interaction relation must be coherent")
    fam = R.family
    defined = br_defined(R.relation)
    normal = None
    if witness is not None:
        _check_context(witness, fam)
        if classify_request(witness)["normal"] and coherent_part(witness).graph == R.graph:
            normal = True
    if normal is None:
        u = undecided_parts(fam)
        normal = _covers(defined, [u[i] for i in fam.index])
    return {
        "normal": normal,
        "efficient": not _covers(defined, [fam.Z[i] for i in fam.index]),
        "functional": _is_functional(R),
        "strongly_functional": _is_strongly_functional(R),
    }


# ---------------------------------------------------------------------------
# builtin requests


def borromean_request(family: DynamicsFamily) -> InteractionRequest:
    """Some member's parameter sends 0 to 1 (parameters are value tuples ``(λ(0), λ(1))``)."""
    return request_from_predicate(family, lambda sig, lams: any(l[0] == 1 for l in lams))


def diagonal_request(family: DynamicsFamily) -> InteractionRequest:
    """Coherent tuples whose outgoing parts all coincide."""
    om = omega(family)
    g = [x for x in om.graph if len({p[0] for p in x}) <= 1]
    return InteractionRequest(family, _relation_nocheck(family, g))


BUILTIN_REQUESTS = {
    "borromean": borromean_request,
    "diagonal": diagonal_request,
    "omega": omega,
    "full": full_request,
}


# ---------------------------------------------------------------------------
# synchronizations


@dataclass(frozen=True)
class Synchronization:
    """Conductor ``i0`` and, per member, an object map ``Δ_i`` and an instant map ``δ_i``.

    ``objects[i]`` maps conductor-engine objects to objects of member ``i``;
    ``instants[i]`` maps conductor instants to instants of member ``i``.
    ``arrows[i]``, when given, is the arrow part of ``Δ_i``; otherwise rigidity
    is decided by searching for one.
    """

    conductor: Hashable
    objects: Mapping
    instants: Mapping
    monotonicity: Mapping
    arrows: Mapping | None = None


def identity_sync(family: DynamicsFamily, conductor=None) -> Synchronization:
    """All members share the conductor's engine and clock; every map is the identity."""
    i0 = family.index[0] if conductor is None else conductor
    A0 = family.members[i0]
    objs = {x: x for x in A0.engine.objects}
    inst = {t: t for t in A0.clock.all_states}
    arrows = {a.name: a.name for a in A0.engine.arrows}
    return Synchronization(
        i0,
        {i: dict(objs) for i in family.index},
        {i: dict(inst) for i in family.index},
        {i: INCREASING for i in family.index},
        {i: dict(arrows) for i in family.index},
    )


def constant_sync(family: DynamicsFamily, conductor, targets: Mapping) -> Synchronization:
    """Identity on the conductor; member ``i`` is pinned to ``targets[i] = (object, instant)``."""
    A0 = family.members[conductor]
    objects, instants, mono = {}, {}, {}
    for i in family.index:
        if i == conductor:
            objects[i] = {x: x for x in A0.engine.objects}
            instants[i] = {t: t for t in A0.clock.all_states}
        else:
            x, t = targets[i]
            objects[i] = {y: x for y in A0.engine.objects}
            instants[i] = {s: t for s in A0.clock.all_states}
        mono[i] = INCREASING
    return Synchronization(conductor, objects, instants, mono)


def _functor_extensions(E, D, objmap: Mapping, ok_arrow: Callable[[str, str], bool], limit: int = 10**5):
    """Yield arrow maps extending ``objmap`` to a functor ``E -> D`` that pass ``ok_arrow``."""
    cands = []
    for a in E.arrows:
        if E.is_identity(a.name):
            c = [D.id(objmap[a.dom])]
        else:
            c = [b for b in D.hom(objmap[a.dom], objmap[a.cod])]
        c = [b for b in c if ok_arrow(a.name, b)]
        if not c:
            return
        cands.append((a.name, c))
    count = 0
    for choice in itertools.product(*(c for _, c in cands)):
        count += 1
        if count > limit:
            raise SearchBudgetExceeded("too many candidate arrow maps")
        amap = {name: b for (name, _), b in zip(cands, choice)}
        F = FinFunctor(E, D, dict(objmap), amap)
        if validate_functor(F).ok:
            yield amap


def _rigid(A0: OpenDynamic, Ai: OpenDynamic, objmap, instmap, arrows=None):
    E, D = A0.engine, Ai.engine

    def ok(d, b):
        for t in A0.clock.states[E.dom(d)]:
            t2 = A0.clock.at(d, t)
            if instmap.get(t2) != Ai.clock.at(b, instmap.get(t)):
                return False
        return True

    if arrows is not None:
        F = FinFunctor(E, D, dict(objmap), dict(arrows))
        if not validate_functor(F).ok:
            return None
        return dict(arrows) if all(ok(d, b) for d, b in arrows.items()) else None
    return next(_functor_extensions(E, D, objmap, ok), None)


def check_synchronization(s: Synchronization, family: DynamicsFamily) -> Report:
    """Compatibility and declared monotonicity of every ``δ_i``.

    ``info["rigid"]`` maps each member to whether ``(Δ_i, δ_i)`` is a clock
    dynamorphism; ``info["arrows"]`` gives the arrow map found for rigid ones.
    """
    if family.members is None:
        raise InvalidSynchronization("synchronizations need a family with dynamics")
    if s.conductor not in family.members:
        return Report((Violation("conductor", (s.conductor,), "not a member"),))
    A0 = family.members[s.conductor]
    E = A0.engine
    pre0 = anteriority(A0.clock)
    out, rigid, found = [], {}, {}
    for i in family.index:
        Ai = family.members[i]
        om, im = s.objects.get(i), s.instants.get(i)
        if om is None or im is None:
            out.append(Violation("sync-maps", (i,), "missing object or instant map"))
            continue
        if set(om) != set(E.objects) or any(om[x] not in Ai.engine.objects for x in E.objects):
            out.append(Violation("sync-maps", (i,), "object map is not total into the member's engine"))
            continue
        if i == s.conductor:
            if any(om[x] != x for x in E.objects) or any(im.get(t) != t for t in A0.clock.all_states):
                out.append(Violation("conductor", (i,), "the conductor's maps must be identities"))
        bad = None
        for x in E.objects:
            for t in ssorted(A0.clock.states[x]):
                if im.get(t) not in Ai.clock.states[om[x]]:
                    bad = (x, t, im.get(t))
                    break
            if bad:
                break
        if bad:
            out.append(Violation("compatibility", (i,) + bad, "instant lands outside the image object"))
            continue
        mono = s.monotonicity.get(i, INCREASING)
        if mono not in (INCREASING, DECREASING):
            out.append(Violation("monotonicity", (i, mono), "unknown tag"))
            continue
        prei = anteriority(Ai.clock)
        for a, b in ssorted(pre0):
            pair = (im[a], im[b]) if mono == INCREASING else (im[b], im[a])
            if pair not in prei:
                out.append(Violation("monotonicity", (i, a, b), f"not {mono}"))
                break
        arrows = None if s.arrows is None else s.arrows.get(i)
        amap = _rigid(A0, Ai, om, im, arrows)
        rigid[i] = amap is not None
        if amap is not None:
            found[i] = amap
    return Report(tuple(out), {"rigid": rigid, "arrows": found})


# ---------------------------------------------------------------------------
# intimacies

RESPONSIBLE_MARK = "≍"


@dataclass(frozen=True)
class Intimacy:
    """An equivalence on parameter tuples, presented by a key function.

    Kinds: ``equality``; ``total``; ``key`` with ``data = (i, position)``
    (the class of a tuple is ``λ_i[position]``); ``blocks`` with an explicit
    list of blocks; ``coordinates`` with ``data = {i: N_i}`` (two tuples are
    equivalent iff each coordinate agrees or both lie in ``N_i``);
    ``function`` with a Python callable (not serializable).
    """

    kind: str
    data: Any = None

    def key(self, index: tuple, lams: tuple):
        if self.kind == "equality":
            return lams
        if self.kind == "total":
            return "*"
        if self.kind == "key":
            i, pos = self.data
            return lams[index.index(i)][pos]
        if self.kind == "blocks":
            for n, b in enumerate(self.data):
                if lams in b:
                    return n
            raise IntimacyNotCoveringM(f"{lams!r} is in no block")
        if self.kind == "coordinates":
            return tuple(RESPONSIBLE_MARK if l in self.data.get(i, ()) else l for i, l in zip(index, lams))
        if self.kind == "function":
            return self.data(lams)
        raise ValueError(f"unknown intimacy kind {self.kind!r}")

    def partition(self, index: tuple, carrier: Iterable) -> dict:
        """Blocks of the restriction to ``carrier``, keyed by class label."""
        out = {}
        for lams in carrier:
            out.setdefault(self.key(index, lams), set()).add(lams)
        return {k: frozenset(v) for k, v in out.items()}


def equality_intimacy() -> Intimacy:
    return Intimacy("equality")


def total_intimacy() -> Intimacy:
    return Intimacy("total")


def key_projection(i, pos) -> Intimacy:
    return Intimacy("key", (i, pos))


def blocks_intimacy(blocks: Iterable[Iterable]) -> Intimacy:
    return Intimacy("blocks", tuple(frozenset(tuple(x) for x in b) for b in blocks))


def coordinates_intimacy(N: Mapping) -> Intimacy:
    return Intimacy("coordinates", {i: frozenset(v) for i, v in N.items()})


# ---------------------------------------------------------------------------
# interactive families


class InteractiveFamily:
    """A family, an admissible request, a synchronization and an intimacy."""

    def __init__(self, family: DynamicsFamily, request: InteractionRequest, sync: Synchronization, intimacy: Intimacy):
        _check_context(request, family)
        self.family = family
        self.request = InteractionRequest(family, request.relation)
        self.sync = sync
        self.intimacy = intimacy
        self.coherent = coherent_part(self.request)
        if not self.coherent.graph:
            raise NotAdmissible("the request has no coherent tuple")
        rep = check_synchronization(sync, family)
        if not rep.ok:
            raise InvalidSynchronization(f"invalid synchronization: {rep}", rep)
        self.sync_report = rep

    @property
    def index(self) -> tuple:
        return self.family.index

    @property
    def M(self) -> tuple:
        """``Im br(Ř)`` in canonical order."""
        return tuple(ssorted(br_image(self.coherent.relation)))

    def preimage(self) -> dict:
        """``μ -> σ-tuples`` of ``br(Ř)⁻¹(μ)``."""
        return br_preimage(self.coherent.relation)

    def __repr__(self):
        return f"InteractiveFamily(index={self.index!r}, |Q|={len(self.request)})"


def strongly_equivalent(F1: InteractiveFamily, F2: InteractiveFamily) -> bool:
    """Same coherent part, and intimacies that agree on ``M``."""
    if F1.family != F2.family or F1.sync != F2.sync:
        raise FamilyMismatch("strong equivalence compares families with the same dynamics and synchronization")
    if F1.coherent.graph != F2.coherent.graph:
        return False
    M = F1.M
    p1 = {frozenset(b) for b in F1.intimacy.partition(F1.index, M).values()}
    p2 = {frozenset(b) for b in F2.intimacy.partition(F2.index, M).values()}
    return p1 == p2
