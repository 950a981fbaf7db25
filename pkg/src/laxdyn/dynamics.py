"""Multi-dynamics (lax functors from an engine into L-indexed transitions), clocks,
open dynamics, dynamorphism checks and parametric quotients."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Mapping

from ._order import skey, ssorted
from .errors import BadPartition, DomainMismatch, InvalidDynamic
from .fincat import FinCategory, FinFunctor, identity_functor, validate_functor
from .report import Report, Violation
from .transition import DETERMINISTIC, Transition, classify, compose, weakest

CLOCK_PARAM = "*"


class MultiDynamic:
    """Data of an ``L``-dynamic on a finite engine.

    ``states`` maps each engine object to its state set and ``action`` maps
    ``(arrow, λ)`` to a :class:`Transition`.  Missing action entries stand for
    empty transitions.  Nothing is validated here; see
    :func:`validate_multidynamic`.
    """

    def __init__(
        self,
        engine: FinCategory,
        params: Iterable[Hashable],
        states: Mapping[Hashable, Iterable[Hashable]],
        action: Mapping[tuple, Transition] | None = None,
    ):
        self.engine = engine
        self.params = tuple(params)
        if len(set(self.params)) != len(self.params):
            raise InvalidDynamic("duplicate parameter values")
        self.states = {x: frozenset(states.get(x, ())) for x in engine.objects}
        unknown = set(states) - set(engine.objects)
        if unknown:
            raise InvalidDynamic(f"states given for unknown objects {ssorted(unknown)!r}")
        action = dict(action or {})
        bad = [k for k in action if k[0] not in engine._by_name or k[1] not in set(self.params)]
        if bad:
            raise InvalidDynamic(f"action entry for unknown arrow or parameter: {bad[0]!r}")
        full = {}
        for a in engine.arrows:
            for lam in self.params:
                t = action.get((a.name, lam))
                full[(a.name, lam)] = t if t is not None else Transition.empty(self.states[a.dom], self.states[a.cod])
        self.action = full

    @classmethod
    def from_rule(cls, engine, params, states, rule: Callable[[Any, Any, Any], Iterable]) -> "MultiDynamic":
        """Build the action from ``rule(arrow, λ, state) -> successors``."""
        states = {x: frozenset(states.get(x, ())) for x in engine.objects}
        action = {}
        for a in engine.arrows:
            for lam in params:
                g = {(u, v) for u in states[a.dom] for v in rule(a.name, lam, u)}
                action[(a.name, lam)] = Transition(states[a.dom], states[a.cod], g)
        return cls(engine, params, states, action)

    def __call__(self, arrow, lam) -> Transition:
        return self.action[(arrow, lam)]

    @property
    def all_states(self) -> frozenset:
        """``st(α)``."""
        return frozenset().union(*self.states.values())

    def state_type(self) -> dict:
        """Map each state to its object (ambiguous states keep the first object)."""
        out = {}
        for x in self.engine.objects:
            for s in self.states[x]:
                out.setdefault(s, x)
        return out

    def __eq__(self, other):
        if not isinstance(other, MultiDynamic):
            return NotImplemented
        return (
            self.engine == other.engine
            and set(self.params) == set(other.params)
            and self.states == other.states
            and self.action == other.action
        )

    __hash__ = None

    def __repr__(self):
        n = sum(len(s) for s in self.states.values())
        return f"{type(self).__name__}({len(self.params)} params, {n} states)"


class Clock(MultiDynamic):
    """A mono-dynamic meant to be deterministic; its states are instants."""

    def __init__(self, engine, states, action):
        super().__init__(engine, (CLOCK_PARAM,), states, action)

    @classmethod
    def from_map(cls, engine: FinCategory, instants: Mapping, step: Callable[[Any, Any], Any]) -> "Clock":
        """``step(arrow, instant)`` gives the unique successor instant."""
        states = {x: frozenset(instants.get(x, ())) for x in engine.objects}
        action = {}
        for a in engine.arrows:
            g = {(t, step(a.name, t)) for t in states[a.dom]}
            action[(a.name, CLOCK_PARAM)] = Transition(states[a.dom], states[a.cod], g)
        return cls(engine, states, action)

    def at(self, arrow, t):
        """``d^h(t)``, or None when undefined."""
        img = self.action[(arrow, CLOCK_PARAM)](t)
        return next(iter(img)) if len(img) == 1 else None


def _default_instant(engine: FinCategory, x):
    if isinstance(x, str) and re.fullmatch(r"T\d+", x):
        return "t" + x[1:]
    return engine.objects.index(x)


def essential_clock(engine: FinCategory, naming: Mapping | Callable | None = None) -> Clock:
    """One instant per object; every arrow sends the instant of its domain to that of its codomain.

    Objects named ``T<k>`` get instants ``t<k>``; other objects get their position.
    """
    if naming is None:
        name = lambda x: _default_instant(engine, x)  # noqa: E731
    elif callable(naming):
        name = naming
    else:
        name = naming.__getitem__
    inst = {x: name(x) for x in engine.objects}
    return Clock.from_map(engine, {x: {inst[x]} for x in engine.objects}, lambda a, t: inst[engine.cod(a)])


def existential_clock(engine: FinCategory) -> Clock:
    """Instants of ``S`` are the arrows into ``S``; durations act by post-composition."""
    instants = {x: {a.name for a in engine.arrows if a.cod == x} for x in engine.objects}
    return Clock.from_map(engine, instants, lambda d, f: engine.compose(f, d))


class OpenDynamic:
    """An open dynamic: a multi-dynamic, a clock on the same engine and a datation ``rho``."""

    def __init__(self, alpha: MultiDynamic, clock: Clock, rho: Mapping):
        self.alpha = alpha
        self.clock = clock
        self.rho = dict(rho)

    @property
    def engine(self) -> FinCategory:
        return self.alpha.engine

    @property
    def params(self) -> tuple:
        return self.alpha.params

    @property
    def states(self) -> dict:
        return self.alpha.states

    @property
    def instants(self) -> dict:
        return self.clock.states

    def fiber(self, t) -> list:
        """``ρ⁻¹(t)`` in canonical order."""
        return ssorted(a for a, s in self.rho.items() if s == t)

    def __eq__(self, other):
        if not isinstance(other, OpenDynamic):
            return NotImplemented
        return self.alpha == other.alpha and self.clock == other.clock and self.rho == other.rho

    __hash__ = None

    def __repr__(self):
        return f"OpenDynamic({self.alpha!r})"


# ---------------------------------------------------------------------------
# validation


def _multidynamic_violations(a: MultiDynamic, flags: dict):
    C = a.engine
    seen = {}
    for x in C.objects:
        for s in a.states[x]:
            if s in seen:
                yield Violation("disjunctivity", (seen[s], x, s), "state belongs to two objects")
            seen[s] = x
    for (name, lam), t in a.action.items():
        arr = C.arrow(name)
        if t.dom != a.states[arr.dom] or t.cod != a.states[arr.cod]:
            yield Violation("typing", (name, lam), "transition does not go between the right state sets")
    for x in C.objects:
        i = C.id(x)
        for lam in a.params:
            t = a.action[(i, lam)]
            for u, v in ssorted(t.graph):
                if u != v:
                    yield Violation("lax-identity", (i, lam, u), f"{u!r} is sent to {v!r}")
            if len(t.graph) != len(a.states[x]):
                flags["strict"] = False
    for f, g in C.composable_pairs():
        fg = C.compose(f, g)
        for lam in a.params:
            lhs = a.action[(fg, lam)]
            rhs = compose(a.action[(f, lam)], a.action[(g, lam)])
            extra = lhs.graph - rhs.graph
            if extra:
                u, v = min(extra, key=skey)
                yield Violation("lax-composition", (f, g, lam, u), f"{v!r} not reachable through the composite")
            elif lhs.graph != rhs.graph:
                flags["strict"] = False


def validate_multidynamic(a: MultiDynamic) -> Report:
    """Check disjunctivity, lax identity and lax composition.

    ``info`` carries ``strict``, ``classification`` and ``offside`` (state ->
    frozenset of offside parameter values, only states offside somewhere).
    """
    flags = {"strict": True}
    rep = Report.collect(_multidynamic_violations(a, flags), first_only=True)
    info = {
        "strict": flags["strict"] and rep.ok,
        "classification": weakest(classify(t) for t in a.action.values()),
        "offside": _offside(a),
    }
    return Report(rep.violations, info)


def _offside(a: MultiDynamic) -> dict:
    out = {}
    for x in a.engine.objects:
        i = a.engine.id(x)
        for lam in a.params:
            t = a.action[(i, lam)]
            for s in a.states[x]:
                if not t(s):
                    out.setdefault(s, set()).add(lam)
    return {s: frozenset(ls) for s, ls in out.items()}


def validate_clock(h: MultiDynamic) -> Report:
    rep = validate_multidynamic(h)
    if not rep.ok:
        return rep
    if len(h.params) != 1:
        return Report((Violation("clock", (), "a clock has exactly one parameter value"),), rep.info)
    for k, t in h.action.items():
        if classify(t) != DETERMINISTIC:
            return Report((Violation("clock", k, "clock transitions must be deterministic"),), rep.info)
    return rep


def _open_violations(A: OpenDynamic):
    rep = validate_multidynamic(A.alpha)
    if not rep.ok:
        yield rep.first
        return
    crep = validate_clock(A.clock)
    if not crep.ok:
        yield Violation("clock", crep.first.witness, str(crep.first))
        return
    if A.clock.engine != A.alpha.engine:
        yield Violation("clock", (), "clock and dynamic use different engines")
        return
    C = A.engine
    for x in C.objects:
        for s in ssorted(A.states[x]):
            if s not in A.rho:
                yield Violation("datation-total", (s,), "state has no date")
            elif A.rho[s] not in A.clock.states[x]:
                yield Violation("datation-typing", (s, A.rho[s]), f"date is not an instant of {x!r}")
    extra = set(A.rho) - A.alpha.all_states
    if extra:
        yield Violation("datation-total", (min(extra, key=skey),), "date given for an unknown state")
    for arr in C.arrows:
        for lam in A.params:
            t = A.alpha(arr.name, lam)
            for u, v in ssorted(t.graph):
                if u in A.rho and A.rho.get(v) != A.clock.at(arr.name, A.rho[u]):
                    yield Violation("datation-naturality", (arr.name, lam, u, v))


def validate_open_dynamic(A: OpenDynamic) -> Report:
    info = validate_multidynamic(A.alpha).info
    return Report(Report.collect(_open_violations(A), first_only=True).violations, info)


def _require(report: Report, what="dynamic"):
    if not report.ok:
        raise InvalidDynamic(f"invalid {what}: {report}", report)


def _multi(a) -> MultiDynamic:
    return a.alpha if isinstance(a, OpenDynamic) else a


def is_functorial(a) -> bool:
    rep = validate_multidynamic(_multi(a))
    _require(rep)
    return rep.info["strict"]


def classify_dynamic(a) -> str:
    rep = validate_multidynamic(_multi(a))
    _require(rep)
    return rep.info["classification"]


def offside_states(A) -> dict:
    """Map every state to the frozenset of parameter values it is offside for."""
    a = _multi(A)
    off = _offside(a)
    return {s: off.get(s, frozenset()) for s in ssorted(a.all_states)}


def globally_offside(A) -> frozenset:
    a = _multi(A)
    every = frozenset(a.params)
    return frozenset(s for s, ls in offside_states(a).items() if ls == every)


def anteriority(h: Clock) -> frozenset:
    """The preorder ``{(s, t) : e^h(s) = t for some arrow e}``."""
    out = set()
    for (name, _), t in h.action.items():
        out |= t.graph
    return frozenset(out)


# ---------------------------------------------------------------------------
# dynamorphisms


def _as_transition(x, dom, cod) -> Transition:
    if isinstance(x, Transition):
        return Transition(dom | x.dom, cod | x.cod, x.graph)
    if isinstance(x, Mapping):
        if x and all(isinstance(v, Transition) for v in x.values()):
            g = set().union(*(t.graph for t in x.values()))
            return Transition(dom | {u for u, _ in g}, cod | {v for _, v in g}, g)
        g = {(u, v) for u, v in x.items()}
        return Transition(dom | set(x), cod | set(x.values()), g)
    raise TypeError("expected a Transition or a mapping")


def _restrict(t: Transition, dom: frozenset, cod: frozenset) -> tuple[Transition, set]:
    """Restrict to ``dom``; return it together with the pairs that leave ``cod``."""
    g = {(u, v) for u, v in t.graph if u in dom}
    bad = {(u, v) for u, v in g if v not in cod}
    return Transition(dom, cod, g - bad), bad


@dataclass(frozen=True)
class DynamorphismWitness:
    """Candidate dynamorphism ``(θ, Δ, δ)`` from ``source`` to ``target``.

    ``delta`` is one transition ``st(source) ⇝ st(target)`` (or a per-object
    mapping of transitions, or a plain map of states).  ``Delta`` defaults to
    the identity functor when both engines coincide.
    """

    source: MultiDynamic
    target: MultiDynamic
    theta: Mapping
    delta: Any
    Delta: FinFunctor | None = None
    info: dict = field(default_factory=dict, compare=False)

    def functor(self) -> FinFunctor:
        if self.Delta is not None:
            return self.Delta
        if self.source.engine != self.target.engine:
            raise DomainMismatch("a functor between the engines is required")
        return identity_functor(self.source.engine)


def _dynamorphism_violations(src: MultiDynamic, dst: MultiDynamic, theta, D: FinFunctor, delta, law: str):
    if D.source != src.engine or D.target != dst.engine:
        yield Violation(law, (), "functor does not go between the two engines")
        return
    frep = validate_functor(D)
    if not frep.ok:
        yield Violation(law, frep.first.witness, str(frep.first))
        return
    for lam in src.params:
        if theta.get(lam) not in set(dst.params):
            yield Violation(law, (lam,), "parameter map is not total into the target parameters")
            return
    dt = _as_transition(delta, src.all_states, dst.all_states)
    parts = {}
    for x in src.engine.objects:
        part, bad = _restrict(dt, src.states[x], dst.states[D.on_object(x)])
        if bad:
            u, v = min(bad, key=skey)
            yield Violation(law, (x, u, v), "component leaves the state set of the image object")
        parts[x] = part
    for arr in src.engine.arrows:
        S, T = arr.dom, arr.cod
        Dd = D(arr.name)
        for lam in src.params:
            lhs = compose(src(arr.name, lam), parts[T])
            rhs = compose(parts[S], dst(Dd, theta[lam]))
            extra = lhs.graph - rhs.graph
            if extra:
                u, v = min(extra, key=skey)
                yield Violation(law, (lam, arr.name, u, v), "lax naturality inclusion fails")


def check_dynamorphism(w: DynamorphismWitness) -> Report:
    """``δ_T ⊙ d^α_λ ⊆ (Δd)^β_θ(λ) ⊙ δ_S`` for every arrow and parameter."""
    try:
        D = w.functor()
    except DomainMismatch as e:
        return Report((Violation("dynamorphism", (), str(e)),))
    return Report.collect(
        _dynamorphism_violations(w.source, w.target, w.theta, D, w.delta, "dynamorphism"), first_only=True
    )


def check_open_dynamorphism(
    src: OpenDynamic,
    dst: OpenDynamic,
    theta: Mapping,
    Delta: FinFunctor | None,
    delta,
    epsilon,
) -> Report:
    """Check the three conditions of an open dynamorphism; report the first failure of each."""
    if Delta is None:
        if src.engine != dst.engine:
            return Report((Violation("multi-dynamorphism", (), "a functor between the engines is required"),))
        Delta = identity_functor(src.engine)
    out = []
    v = next(_dynamorphism_violations(src.alpha, dst.alpha, theta, Delta, delta, "multi-dynamorphism"), None)
    if v:
        out.append(v)
    unit = {CLOCK_PARAM: CLOCK_PARAM}
    v = next(_dynamorphism_violations(src.clock, dst.clock, unit, Delta, epsilon, "clock-dynamorphism"), None)
    if v:
        out.append(v)
    dt = _as_transition(delta, src.alpha.all_states, dst.alpha.all_states)
    et = _as_transition(epsilon, src.clock.all_states, dst.clock.all_states)
    rho = Transition(src.alpha.all_states, src.clock.all_states, {(a, t) for a, t in src.rho.items() if t in src.clock.all_states})
    tau = Transition(dst.alpha.all_states, dst.clock.all_states, {(a, t) for a, t in dst.rho.items() if t in dst.clock.all_states})
    for x in src.engine.objects:
        states = src.states[x]
        lhs = {(u, w) for u, v in dt.graph if u in states for w in tau(v)}
        rhs = {(u, w) for u in states for t in rho(u) for w in et(t)}
        extra = lhs - rhs
        if extra:
            u, w = min(extra, key=skey)
            out.append(Violation("synchronization", (x, u, w), "datations do not commute with the maps"))
            break
    return Report(tuple(out))


# ---------------------------------------------------------------------------
# parametric quotients


def _blocks(params, partition) -> dict:
    if isinstance(partition, Mapping):
        blocks = {k: frozenset(v) for k, v in partition.items()}
    else:
        blocks = {}
        for b in partition:
            fb = frozenset(b)
            if fb in blocks:
                raise BadPartition("repeated block")
            blocks[fb] = fb
    seen = set()
    for k, b in blocks.items():
        if not b:
            raise BadPartition(f"empty block {k!r}")
        if seen & b:
            raise BadPartition("blocks overlap")
        seen |= b
    if seen != set(params):
        raise BadPartition("blocks do not cover the parameter set exactly")
    return blocks


def quotient_multidynamic(a: MultiDynamic, partition) -> MultiDynamic:
    blocks = _blocks(a.params, partition)
    labels = sorted(blocks, key=skey)
    action = {}
    for arr in a.engine.arrows:
        for mu in labels:
            g = set()
            for lam in blocks[mu]:
                g |= a.action[(arr.name, lam)].graph
            action[(arr.name, mu)] = Transition(a.states[arr.dom], a.states[arr.cod], g)
    return MultiDynamic(a.engine, labels, a.states, action)


def parametric_quotient(A: OpenDynamic, partition) -> OpenDynamic:
    """Merge parameter values block by block: ``β_μ = ⋃_{λ∈μ} α_λ``.

    ``partition`` is a mapping ``label -> block`` or an iterable of blocks (then
    each block, as a frozenset, is its own label).  The result is re-validated.
    """
    out = OpenDynamic(quotient_multidynamic(A.alpha, partition), A.clock, A.rho)
    _require(validate_open_dynamic(out), "quotient")
    return out
