"""Control systems ``(F, q)`` built from finite functorial hyper-deterministic open
dynamics, and the solutions induced by realizations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from ._order import skey, ssorted
from .dynamics import OpenDynamic, classify_dynamic, is_functorial
from .errors import NotARealization, NotFunctorial, NotHyperDeterministic
from .fincat import Arrow, FinCategory, FinFunctor, validate_functor
from .realization import Realization, is_realization
from .report import Report, Violation
from .transition import GENERAL


@dataclass(frozen=True)
class ControlSystem:
    """``q: G -> H`` and a functor ``F`` from ``G`` to partial functions.

    ``F_obj[g]`` is the finite set ``F(g)``; ``F_arrow[γ]`` is a dict giving the
    partial function ``F(dom γ) ⇀ F(cod γ)``.
    """

    H: FinCategory
    G: FinCategory
    q: FinFunctor
    F_obj: Mapping
    F_arrow: Mapping

    def p(self, e):
        """The object ``g`` with ``e ∈ F(g)``, or None."""
        for g, items in self.F_obj.items():
            if e in items:
                return g
        return None


@dataclass(frozen=True)
class ControlSolution:
    """A solution on the full subcategory of ``H`` spanned by ``objects``."""

    objects: frozenset
    phi: Mapping
    psi: Mapping


def _instant_category(A: OpenDynamic) -> FinCategory:
    E, h = A.engine, A.clock
    objs, arrows, identity, table = [], [], {}, {}
    for x in E.objects:
        for t in ssorted(h.states[x]):
            objs.append(t)
            identity[t] = (t, E.id(x), t)
    for a in E.arrows:
        for t in ssorted(h.states[a.dom]):
            t2 = h.at(a.name, t)
            arrows.append(Arrow((t, a.name, t2), t, t2))
    for f in arrows:
        for g in arrows:
            if f.cod == g.dom:
                d = E.compose(f.name[1], g.name[1])
                table[(f.name, g.name)] = (f.dom, d, g.cod)
    return FinCategory(objs, arrows, identity, table)


def to_control_system(A: OpenDynamic) -> ControlSystem:
    """``GS(A)``: instants and durations ``H``, their parameterized copies ``G = L × H``,
    the projection ``q`` and the state functor ``F``."""
    if not is_functorial(A):
        raise NotFunctorial("the dynamic is lax but not strict")
    if classify_dynamic(A) == GENERAL:
        raise NotHyperDeterministic("some transition has an image with two or more states")
    H = _instant_category(A)
    params = list(A.params)
    gobjs = [(l, t) for l in params for t in H.objects]
    garrows = [Arrow((l,) + a.name, (l, a.dom), (l, a.cod)) for l in params for a in H.arrows]
    gid = {(l, t): (l,) + H.id(t) for l in params for t in H.objects}
    gtable = {}
    for (f, g), fg in H.table.items():
        for l in params:
            gtable[((l,) + f, (l,) + g)] = (l,) + fg
    G = FinCategory(gobjs, garrows, gid, gtable)
    q = FinFunctor(G, H, {g: g[1] for g in gobjs}, {a.name: a.name[1:] for a in garrows})
    F_obj = {(l, t): frozenset((l, a) for a in A.fiber(t)) for l, t in gobjs}
    F_arrow = {}
    for a in garrows:
        l, t1, d, t2 = a.name
        step = A.alpha(d, l)
        f = {}
        for s in A.fiber(t1):
            img = step(s)
            if img:
                f[(l, s)] = (l, next(iter(img)))
        F_arrow[a.name] = f
    return ControlSystem(H, G, q, F_obj, F_arrow)


def validate_control_system(cs: ControlSystem) -> Report:
    """``q`` is a functor, ``F`` respects identities and composition, the ``F(g)`` are disjoint."""

    def gen():
        r = validate_functor(cs.q)
        if not r.ok:
            yield Violation("q-functor", r.first.witness, str(r.first))
        seen = {}
        for g in cs.G.objects:
            for e in cs.F_obj.get(g, ()):
                if e in seen:
                    yield Violation("disjunctive", (seen[e], g, e))
                seen[e] = g
        for g in cs.G.objects:
            f = cs.F_arrow[cs.G.id(g)]
            if f != {e: e for e in cs.F_obj[g]}:
                yield Violation("F-identity", (g,))
        for a in cs.G.arrows:
            for e, e2 in cs.F_arrow[a.name].items():
                if e not in cs.F_obj[a.dom] or e2 not in cs.F_obj[a.cod]:
                    yield Violation("F-typing", (a.name, e))
        for f, g in cs.G.composable_pairs():
            ff, gg = cs.F_arrow[f], cs.F_arrow[g]
            both = {e: gg[m] for e, m in ff.items() if m in gg}
            if both != cs.F_arrow[cs.G.compose(f, g)]:
                yield Violation("F-composition", (f, g))

    return Report.collect(gen(), first_only=True)


def realization_to_solution(A: OpenDynamic, r: Realization, cs: ControlSystem | None = None) -> ControlSolution:
    """``φ(t) = (λ, σ(t))`` and ``ψ(t1, d, t2) = (λ, t1, d, t2)`` on ``Def σ``."""
    if not is_realization(A, r):
        raise NotARealization(f"{r!r} is not a realization")
    cs = cs or to_control_system(A)
    S = r.defined
    phi = {t: (r.lam, s) for t, s in r.sigma}
    psi = {a.name: (r.lam,) + a.name for a in cs.H.arrows if a.dom in S and a.cod in S}
    return ControlSolution(frozenset(S), phi, psi)


def verify_solution(cs: ControlSystem, sol: ControlSolution) -> Report:
    """Check the projection identities, functoriality of ``ψ`` and ``ψ(h)·φ(t1) = φ(t2)``."""

    def gen():
        H, G = cs.H, cs.G
        S = sol.objects
        if not S <= set(H.objects):
            yield Violation("subcategory", (ssorted(S - set(H.objects)),), "not instants")
            return
        arrows = [a for a in H.arrows if a.dom in S and a.cod in S]
        if set(sol.phi) != set(S):
            yield Violation("phi-domain", (), "φ must be defined exactly on the objects")
            return
        if set(sol.psi) != {a.name for a in arrows}:
            yield Violation("psi-domain", (), "ψ must be defined exactly on the arrows")
            return
        for t in ssorted(S):
            g = cs.p(sol.phi[t])
            if g is None or cs.q.on_object(g) != t:
                yield Violation("projection-objects", (t,), "q∘p∘φ is not the identity")
        for a in arrows:
            g = sol.psi[a.name]
            if g not in G._by_name or cs.q(g) != a.name:
                yield Violation("projection-arrows", (a.name,), "q∘ψ is not the identity")
        for t in ssorted(S):
            if sol.psi.get(H.id(t)) not in {G.id(g) for g in G.objects}:
                yield Violation("psi-functor", (H.id(t),), "identity not sent to an identity")
        for a in arrows:
            for b in arrows:
                if a.cod == b.dom:
                    fa, fb = sol.psi[a.name], sol.psi[b.name]
                    if fa not in G._by_name or fb not in G._by_name or not G.composable(fa, fb):
                        yield Violation("psi-functor", (a.name, b.name), "images are not composable")
                    elif G.compose(fa, fb) != sol.psi[H.compose(a.name, b.name)]:
                        yield Violation("psi-functor", (a.name, b.name), "composition not preserved")
        for a in sorted(arrows, key=lambda a: skey(a.name)):
            f = cs.F_arrow.get(sol.psi[a.name], {})
            if f.get(sol.phi[a.dom]) != sol.phi[a.cod]:
                yield Violation("action", (a.name,), "ψ(h)·φ(t1) differs from φ(t2)")

    return Report.collect(gen(), first_only=True)


def is_closed(cs: ControlSystem, objects) -> bool:
    """Every arrow of ``H`` ending in ``objects`` also starts there."""
    S = set(objects)
    return all(a.dom in S for a in cs.H.arrows if a.cod in S)
