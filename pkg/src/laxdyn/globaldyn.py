"""Global dynamics generated by interactive families, and isomorphism search."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from ._order import skey, ssorted
from .dynamics import CLOCK_PARAM, Clock, MultiDynamic, OpenDynamic, parametric_quotient, validate_open_dynamic
from .errors import BadJ, IntimacyNotCoveringM, InvalidDynamic, SearchBudgetExceeded
from .interaction import (
    InteractionRequest,
    InteractiveFamily,
    Intimacy,
    coordinates_intimacy,
    total_intimacy,
)
from .transition import Transition

OPAQUE_LABEL = "*"
ISO_CAP = 10**5


def global_states(F: InteractiveFamily) -> dict:
    """Per conductor object ``S``: tuples ``(a_i)`` with ``a_i`` of type ``Δ_i S`` and dates
    matching the conductor's through ``δ_i``."""
    fam, s = F.family, F.sync
    i0 = s.conductor
    A0 = fam.members[i0]
    out = {}
    for x in A0.engine.objects:
        rows = []
        for a0 in ssorted(A0.states[x]):
            t = A0.rho[a0]
            choices = []
            for i in fam.index:
                if i == i0:
                    choices.append([a0])
                    continue
                Ai = fam.members[i]
                ti = s.instants[i][t]
                typ = Ai.states[s.objects[i][x]]
                choices.append([a for a in Ai.fiber(ti) if a in typ])
            rows.extend(itertools.product(*choices))
        out[x] = frozenset(rows)
    return out


def stability_construct(F: InteractiveFamily) -> MultiDynamic:
    """The ``M``-dynamic of global states, with ``M`` the image of the coherent part.

    ``b`` is a ``(d, μ)``-successor of ``a`` when some tuple of outgoing parts
    related to ``μ`` passes through every ``a_i`` and ``b_i`` while the
    conductor's date moves along ``d``.
    """
    fam, s = F.family, F.sync
    i0 = s.conductor
    A0 = fam.members[i0]
    E = A0.engine
    states = global_states(F)
    pre = F.preimage()
    M = F.M
    index = fam.index
    maps = [s.instants[i] for i in index]
    action = {}
    for arr in E.arrows:
        src, dst = states[arr.dom], states[arr.cod]
        inst = ssorted(A0.clock.states[arr.dom])
        for mu in M:
            g = set()
            for sigmas in pre.get(mu, ()):
                sig = [dict(x) for x in sigmas]
                for t in inst:
                    t2 = A0.clock.at(arr.name, t)
                    a = tuple(sig[k].get(maps[k][t]) for k in range(len(index)))
                    b = tuple(sig[k].get(maps[k][t2]) for k in range(len(index)))
                    if a in src and b in dst:
                        g.add((a, b))
            action[(arr.name, mu)] = Transition(src, dst, g)
    return MultiDynamic(E, M, states, action)


def transparent(F: InteractiveFamily) -> OpenDynamic:
    """The stability construction with the conductor's clock and ``τ(a) = ρ_{i0}(a_{i0})``."""
    beta = stability_construct(F)
    i0 = F.sync.conductor
    A0 = F.family.members[i0]
    k = F.index.index(i0)
    tau = {a: A0.rho[a[k]] for S in beta.states.values() for a in S}
    G = OpenDynamic(beta, A0.clock, tau)
    rep = validate_open_dynamic(G)
    if not rep.ok:
        raise InvalidDynamic(f"global dynamic fails validation: {rep}", rep)
    return G


def _quotient(F: InteractiveFamily, G: OpenDynamic, intimacy: Intimacy) -> OpenDynamic:
    try:
        blocks = intimacy.partition(F.index, G.params)
    except (KeyError, IndexError, TypeError) as e:
        raise IntimacyNotCoveringM(f"intimacy is not defined on M: {e}") from None
    return parametric_quotient(G, blocks)


def demanded(F: InteractiveFamily, intimacy: Intimacy | None = None) -> OpenDynamic:
    """Quotient of the transparent dynamic by the intimacy restricted to ``M``."""
    return _quotient(F, transparent(F), intimacy or F.intimacy)


def responsible_sets(Q: InteractionRequest) -> dict:
    """``N_i``: values of ``λ_i`` that every tuple agreeing on the other outgoing parts repeats."""
    idx = Q.index
    out = {}
    for k, i in enumerate(idx):
        groups = {}
        for x in Q.graph:
            others = tuple(x[j][0] for j in range(len(idx)) if j != k)
            groups.setdefault(others, set()).add(x[k][1])
        N = set(Q.relation.outgoing[i])
        for lams in groups.values():
            if len(lams) > 1:
                N -= lams
        out[i] = frozenset(N)
    return out


def responsible_intimacy(Q: InteractionRequest) -> Intimacy:
    return coordinates_intimacy(responsible_sets(Q))


def responsible(F: InteractiveFamily) -> OpenDynamic:
    return demanded(F, responsible_intimacy(F.request))


def j_intimacy(F: InteractiveFamily, J: Iterable) -> Intimacy:
    J = set(J)
    if not J <= set(F.index):
        raise BadJ(f"{ssorted(J - set(F.index))!r} not in the index")
    return coordinates_intimacy({i: (() if i in J else F.family.L[i]) for i in F.index})


def j_global(F: InteractiveFamily, J: Iterable) -> OpenDynamic:
    return demanded(F, j_intimacy(F, J))


def opaque(F: InteractiveFamily) -> OpenDynamic:
    """Everything in ``M`` merged into the single parameter value ``"*"``."""
    return demanded(F, total_intimacy())


def is_refinement(fine: OpenDynamic, coarse: OpenDynamic) -> bool:
    """Whether every action of ``coarse`` is a union of actions of ``fine`` (block refinement).

    Both dynamics must share engine and states; parameters of the quotients
    built here are class labels, so this checks the induced union relation.
    """
    if fine.engine != coarse.engine or fine.states != coarse.states:
        return False
    for mu in coarse.params:
        for arr in coarse.engine.arrows:
            target = coarse.alpha(arr.name, mu).graph
            parts = [fine.alpha(arr.name, l).graph for l in fine.params if fine.alpha(arr.name, l).graph <= target]
            if frozenset().union(*parts) != target:
                return False
    return True


# ---------------------------------------------------------------------------
# isomorphism


@dataclass(frozen=True)
class IsoResult:
    found: bool
    witness: dict = field(default_factory=dict)
    reason: str = ""

    def __bool__(self):
        return self.found


def _structure(G: OpenDynamic):
    """Vertices (with initial colors) and labelled hyperedges of an open dynamic."""
    verts = {}
    for l in G.params:
        verts[("p", l)] = ("param",)
    for x in G.engine.objects:
        for a in G.states[x]:
            verts[("s", a)] = ("state", skey(x))
        for t in G.clock.states[x]:
            verts[("t", t)] = ("instant", skey(x))
    edges = set()
    for arr in G.engine.arrows:
        name = skey(arr.name)
        for l in G.params:
            for u, v in G.alpha(arr.name, l).graph:
                edges.add((("act", name), (("p", l), ("s", u), ("s", v))))
        for u, v in G.clock.action[(arr.name, CLOCK_PARAM)].graph:
            edges.add((("clock", name), (("t", u), ("t", v))))
    for a, t in G.rho.items():
        edges.add((("rho",), (("s", a), ("t", t))))
    return verts, edges


def _refine(colors: dict, incid: dict) -> dict:
    while True:
        sigs = {}
        for v, c in colors.items():
            sig = []
            for label, pos, verts in incid[v]:
                sig.append((label, pos, tuple(colors[w] for w in verts)))
            sig.sort()
            sigs[v] = (c, tuple(sig))
        table = {s: n for n, s in enumerate(sorted(set(sigs.values())))}
        new = {v: table[sigs[v]] for v in colors}
        if len(set(new.values())) == len(set(colors.values())):
            return new
        colors = new


def iso_check(G1: OpenDynamic, G2: OpenDynamic, cap: int = ISO_CAP) -> IsoResult:
    """Search bijections of parameters, states and instants commuting with actions,
    clocks and datations.  Engines must be equal; their objects stay fixed."""
    if G1.engine != G2.engine:
        return IsoResult(False, reason="different engines")
    if len(G1.params) != len(G2.params):
        return IsoResult(False, reason="different numbers of parameter values")
    for x in G1.engine.objects:
        if len(G1.states[x]) != len(G2.states[x]):
            return IsoResult(False, reason=f"different numbers of states of type {x!r}")
        if len(G1.clock.states[x]) != len(G2.clock.states[x]):
            return IsoResult(False, reason=f"different numbers of instants of type {x!r}")
    v1, e1 = _structure(G1)
    v2, e2 = _structure(G2)
    if len(e1) != len(e2):
        return IsoResult(False, reason="different numbers of transitions")
    # vertices of the disjoint union are tagged 0 / 1
    incid = {}
    for side, (vs, es) in enumerate(((v1, e1), (v2, e2))):
        for v in vs:
            incid[(side, v)] = []
        for label, verts in es:
            tagged = tuple((side, w) for w in verts)
            for pos, w in enumerate(tagged):
                others = tagged[:pos] + tagged[pos + 1 :]
                incid[w].append((label, pos, others))
    init = {}
    for side, vs in enumerate((v1, v2)):
        for v, c in vs.items():
            init[(side, v)] = c
    table = {c: n for n, c in enumerate(sorted(set(init.values())))}
    colors = {v: table[c] for v, c in init.items()}
    order1 = sorted(v1, key=skey)
    counter = [0]
    target = set(e2)

    def balanced(cols):
        count = {}
        for (side, _), c in cols.items():
            count.setdefault(c, [0, 0])[side] += 1
        return all(a == b for a, b in count.values()), count

    def search(cols):
        counter[0] += 1
        if counter[0] > cap:
            raise SearchBudgetExceeded(f"isomorphism search exceeded {cap} nodes")
        cols = _refine(cols, incid)
        ok, count = balanced(cols)
        if not ok:
            return None
        pending = [v for v in order1 if count[cols[(0, v)]][0] > 1]
        if not pending:
            by_color = {c: v for (side, v), c in cols.items() if side == 1}
            m = {v: by_color[cols[(0, v)]] for v in order1}
            if {(label, tuple(m[w] for w in verts)) for label, verts in e1} == target:
                return m
            return None
        x = min(pending, key=lambda v: (count[cols[(0, v)]][0], skey(v)))
        cx = cols[(0, x)]
        cands = sorted((v for (side, v), c in cols.items() if side == 1 and c == cx), key=lambda v: (v != x, skey(v)))
        fresh = max(cols.values()) + 1
        for y in cands:
            nc = dict(cols)
            nc[(0, x)] = fresh
            nc[(1, y)] = fresh
            m = search(nc)
            if m is not None:
                return m
        return None

    m = search(colors)
    if m is None:
        return IsoResult(False, reason="no structure-preserving bijection")
    w = {"params": {}, "states": {}, "instants": {}}
    names = {"p": "params", "s": "states", "t": "instants"}
    for (kind, a), (_, b) in m.items():
        w[names[kind]][a] = b
    return IsoResult(True, w, "")


def apply_iso(G: OpenDynamic, witness: dict) -> OpenDynamic:
    """Relabel ``G`` along an isomorphism witness."""
    p, s, t = witness["params"], witness["states"], witness["instants"]
    E = G.engine
    states = {x: {s[a] for a in G.states[x]} for x in E.objects}
    action = {}
    for (arr, l), tr in G.alpha.action.items():
        action[(arr, p[l])] = Transition({s[u] for u in tr.dom}, {s[v] for v in tr.cod}, {(s[u], s[v]) for u, v in tr.graph})
    alpha = MultiDynamic(E, [p[l] for l in G.params], states, action)
    inst = {x: {t[u] for u in G.clock.states[x]} for x in E.objects}
    cact = {}
    for k, tr in G.clock.action.items():
        cact[k] = Transition({t[u] for u in tr.dom}, {t[v] for v in tr.cod}, {(t[u], t[v]) for u, v in tr.graph})
    clock = Clock(E, inst, cact)
    return OpenDynamic(alpha, clock, {s[a]: t[b] for a, b in G.rho.items()})
