"""JSON encoding of categories, dynamics, realizations, requests and families.

Maps whose keys are not plain strings (objects, states, parameter values) are
written as lists of ``[key, value]`` pairs; JSON arrays decode to tuples.
Readers also accept plain JSON objects for these maps.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from ._order import freeze, skey, ssorted, thaw
from .dynamics import CLOCK_PARAM, Clock, MultiDynamic, OpenDynamic
from .errors import LaxDynError
from .fincat import Arrow, FinCategory
from .interaction import (
    BUILTIN_REQUESTS,
    DynamicsFamily,
    InteractionRequest,
    InteractiveFamily,
    Intimacy,
    Synchronization,
    identity_sync,
    request,
)
from .realization import Realization, RealizationSet
from .transition import Transition


class ParseError(LaxDynError, ValueError):
    pass


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=1) + "\n"


def _pairs(m: Mapping) -> list:
    return [[thaw(k), thaw(v)] for k, v in sorted(m.items(), key=lambda kv: skey(kv[0]))]


def _key(k):
    """Decode a JSON object key: digit strings become ints."""
    if isinstance(k, str) and k.lstrip("-").isdigit():
        return int(k)
    return k


def _read_map(x) -> dict:
    if isinstance(x, Mapping):
        return {_key(k): freeze(v) for k, v in x.items()}
    if isinstance(x, list):
        try:
            return {freeze(k): freeze(v) for k, v in x}
        except (TypeError, ValueError):
            raise ParseError("expected a list of [key, value] pairs") from None
    raise ParseError("expected a mapping")


def _need(doc, key):
    try:
        return doc[key]
    except (KeyError, TypeError):
        raise ParseError(f"missing field {key!r}") from None


# ---------------------------------------------------------------------------


def category_to_json(c: FinCategory) -> dict:
    return {
        "objects": [thaw(x) for x in c.objects],
        "arrows": [{"id": thaw(a.name), "dom": thaw(a.dom), "cod": thaw(a.cod)} for a in c.arrows],
        "identity": _pairs(c.identity),
        "compose": [[thaw(f), thaw(g), thaw(h)] for (f, g), h in sorted(c.table.items(), key=lambda kv: skey(kv[0]))],
    }


def category_from_json(doc) -> FinCategory:
    objs = [freeze(x) for x in _need(doc, "objects")]
    arrows = [Arrow(freeze(a["id"]), freeze(a["dom"]), freeze(a["cod"])) for a in _need(doc, "arrows")]
    identity = _read_map(_need(doc, "identity"))
    table = {(freeze(f), freeze(g)): freeze(h) for f, g, h in _need(doc, "compose")}
    return FinCategory(objs, arrows, identity, table)


def transition_to_json(t: Transition) -> dict:
    return {"dom": [thaw(x) for x in ssorted(t.dom)], "cod": [thaw(x) for x in ssorted(t.cod)], "pairs": [thaw(p) for p in t.pairs()]}


def transition_from_json(doc) -> Transition:
    return Transition(
        [freeze(x) for x in _need(doc, "dom")],
        [freeze(x) for x in _need(doc, "cod")],
        [tuple(freeze(p)) for p in _need(doc, "pairs")],
    )


def _multi_to_json(a: MultiDynamic) -> dict:
    return {
        "params": [thaw(l) for l in a.params],
        "states": [[thaw(x), [thaw(s) for s in ssorted(a.states[x])]] for x in a.engine.objects],
        "action": [
            [thaw(arr.name), thaw(l), [thaw(p) for p in a.action[(arr.name, l)].pairs()]]
            for arr in a.engine.arrows
            for l in a.params
            if a.action[(arr.name, l)].graph
        ],
    }


def _read_states(x, engine) -> dict:
    m = _read_map(x)
    return {k: frozenset(v) for k, v in m.items()}


def _read_action(x, states, engine) -> dict:
    out = {}
    for item in x:
        arr, lam, pairs = freeze(item[0]), freeze(item[1]), item[2]
        a = engine.arrow(arr)
        out[(arr, lam)] = Transition(states.get(a.dom, ()), states.get(a.cod, ()), [tuple(freeze(p)) for p in pairs])
    return out


def dynamic_to_json(A: OpenDynamic) -> dict:
    doc = {"engine": category_to_json(A.engine)}
    doc.update(_multi_to_json(A.alpha))
    doc["clock"] = {
        "states": [[thaw(x), [thaw(s) for s in ssorted(A.clock.states[x])]] for x in A.engine.objects],
        "action": [
            [thaw(arr.name), [thaw(p) for p in A.clock.action[(arr.name, CLOCK_PARAM)].pairs()]]
            for arr in A.engine.arrows
        ],
    }
    doc["rho"] = _pairs(A.rho)
    return doc


def dynamic_from_json(doc) -> OpenDynamic:
    try:
        E = category_from_json(_need(doc, "engine"))
        states = _read_states(_need(doc, "states"), E)
        alpha = MultiDynamic(E, [freeze(l) for l in _need(doc, "params")], states, _read_action(doc.get("action", []), states, E))
        cdoc = _need(doc, "clock")
        inst = _read_states(_need(cdoc, "states"), E)
        cact = {}
        for arr, pairs in _need(cdoc, "action"):
            a = E.arrow(freeze(arr))
            cact[(a.name, CLOCK_PARAM)] = Transition(inst.get(a.dom, ()), inst.get(a.cod, ()), [tuple(freeze(p)) for p in pairs])
        clock = Clock(E, inst, cact)
        return OpenDynamic(alpha, clock, _read_map(_need(doc, "rho")))
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError, IndexError, AttributeError) as e:
        raise ParseError(f"malformed dynamic: {e}") from None


def realization_to_json(r: Realization) -> dict:
    return {"lambda": thaw(r.lam), "sigma": [thaw(p) for p in r.sigma]}


def realization_from_json(doc) -> Realization:
    return Realization(freeze(_need(doc, "lambda")), tuple(tuple(freeze(p)) for p in _need(doc, "sigma")))


def realization_set_to_json(rs: RealizationSet) -> dict:
    return {
        "realizations": [realization_to_json(r) for r in rs.all],
        "outgoing": [thaw(s) for s in rs.outgoing],
        "counts": {"realizations": len(rs.all), "outgoing": len(rs.outgoing), "nonempty": len(rs.nonempty)},
    }


def request_to_json(Q: InteractionRequest) -> dict:
    return {
        "index": [thaw(i) for i in Q.index],
        "graph": [thaw(x) for x in ssorted(Q.graph)],
    }


def _sync_to_json(s: Synchronization, fam: DynamicsFamily) -> dict:
    if s == identity_sync(fam, s.conductor):
        return {"conductor": thaw(s.conductor), "mode": "identity"}
    doc = {
        "conductor": thaw(s.conductor),
        "objects": [[thaw(i), _pairs(s.objects[i])] for i in fam.index],
        "instants": [[thaw(i), _pairs(s.instants[i])] for i in fam.index],
        "monotonicity": [[thaw(i), s.monotonicity[i]] for i in fam.index],
    }
    if s.arrows is not None:
        doc["arrows"] = [[thaw(i), _pairs(s.arrows[i])] for i in fam.index if i in s.arrows]
    return doc


def _sync_from_json(doc, fam: DynamicsFamily) -> Synchronization:
    i0 = freeze(_need(doc, "conductor"))
    if isinstance(i0, str) and i0.isdigit():
        i0 = int(i0)
    if doc.get("mode") == "identity":
        return identity_sync(fam, i0)
    objs = {k: _read_map(v) for k, v in _read_map(_need(doc, "objects")).items()}
    inst = {k: _read_map(v) for k, v in _read_map(_need(doc, "instants")).items()}
    mono = _read_map(doc.get("monotonicity", {}))
    arrows = None
    if "arrows" in doc:
        arrows = {k: _read_map(v) for k, v in _read_map(doc["arrows"]).items()}
    return Synchronization(i0, objs, inst, {i: mono.get(i, "increasing") for i in fam.index}, arrows)


def intimacy_to_json(m: Intimacy) -> dict:
    if m.kind in ("equality", "total"):
        return {"mode": m.kind}
    if m.kind == "key":
        return {"mode": "key", "index": thaw(m.data[0]), "position": m.data[1]}
    if m.kind == "blocks":
        return {"mode": "blocks", "blocks": [[thaw(x) for x in ssorted(b)] for b in m.data]}
    if m.kind == "coordinates":
        return {"mode": "coordinates", "sets": [[thaw(i), [thaw(x) for x in ssorted(v)]] for i, v in sorted(m.data.items(), key=lambda kv: skey(kv[0]))]}
    raise ParseError(f"intimacy of kind {m.kind!r} cannot be serialized")


def intimacy_from_json(doc) -> Intimacy:
    mode = _need(doc, "mode")
    if mode in ("equality", "total"):
        return Intimacy(mode)
    if mode == "key":
        return Intimacy("key", (freeze(_need(doc, "index")), _need(doc, "position")))
    if mode == "blocks":
        return Intimacy("blocks", tuple(frozenset(freeze(x) for x in b) for b in _need(doc, "blocks")))
    if mode == "coordinates":
        return Intimacy("coordinates", {k: frozenset(v) for k, v in _read_map(_need(doc, "sets")).items()})
    raise ParseError(f"unknown intimacy mode {mode!r}")


def family_to_json(F: InteractiveFamily, member_names: Mapping | None = None) -> dict:
    """``member_names`` optionally maps members to ``examples:<name>`` references."""
    fam = F.family
    names = member_names or {}
    members = [[thaw(i), names[i] if i in names else dynamic_to_json(fam.members[i])] for i in fam.index]
    req = None
    for name, build in BUILTIN_REQUESTS.items():
        try:
            if build(fam).graph == F.request.graph:
                req = {"mode": "builtin", "name": name}
                break
        except LaxDynError:
            continue
    if req is None:
        req = {"mode": "extensional", "graph": request_to_json(F.request)["graph"]}
    return {
        "members": members,
        "request": req,
        "sync": _sync_to_json(F.sync, fam),
        "intimacy": intimacy_to_json(F.intimacy),
    }


def family_from_json(doc, resolve=None) -> InteractiveFamily:
    """``resolve(ref)`` turns ``examples:<name>`` member references into dynamics."""
    try:
        raw = _need(doc, "members")
        items = raw.items() if isinstance(raw, Mapping) else raw
        members = {}
        for k, v in items:
            k = _key(k) if isinstance(k, str) else freeze(k)
            if isinstance(v, str):
                if resolve is None:
                    raise ParseError(f"cannot resolve member reference {v!r}")
                members[k] = resolve(v)
            else:
                members[k] = dynamic_from_json(v)
        fam = DynamicsFamily(members)
        rdoc = _need(doc, "request")
        mode = _need(rdoc, "mode")
        if mode == "builtin":
            name = _need(rdoc, "name")
            if name not in BUILTIN_REQUESTS:
                raise ParseError(f"unknown builtin request {name!r}")
            Q = BUILTIN_REQUESTS[name](fam)
        elif mode == "extensional":
            Q = request(fam, [freeze(x) for x in _need(rdoc, "graph")])
        else:
            raise ParseError(f"unknown request mode {mode!r}")
        sync = _sync_from_json(_need(doc, "sync"), fam)
        intimacy = intimacy_from_json(doc.get("intimacy", {"mode": "equality"}))
        return InteractiveFamily(fam, Q, sync, intimacy)
    except (ParseError, LaxDynError):
        raise
    except (KeyError, TypeError, ValueError, IndexError, AttributeError) as e:
        raise ParseError(f"malformed family: {e}") from None


def control_system_to_json(cs) -> dict:
    return {
        "H": category_to_json(cs.H),
        "G": category_to_json(cs.G),
        "q": {"objects": _pairs(cs.q.objects), "arrows": _pairs(cs.q.arrows)},
        "F": {
            "objects": [[thaw(g), [thaw(e) for e in ssorted(cs.F_obj[g])]] for g in cs.G.objects],
            "arrows": [[thaw(a.name), _pairs(cs.F_arrow[a.name])] for a in cs.G.arrows],
        },
    }
