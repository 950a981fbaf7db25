"""Realizations of finite open dynamics and passing-through."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

from ._order import skey, ssorted
from .dynamics import OpenDynamic, anteriority
from .errors import SearchBudgetExceeded, UnknownState

DEFAULT_CAP = 10**6


def default_cap() -> int:
    env = os.environ.get("LAXDYN_CAP")
    if env:
        try:
            cap = int(env)
        except ValueError:
            cap = 0
        if cap > 0:
            return cap
    return DEFAULT_CAP


def make_sigma(pairs: Mapping | Iterable) -> tuple:
    """Canonical form of a partial map ``instant -> state``: a sorted tuple of pairs."""
    items = pairs.items() if isinstance(pairs, Mapping) else pairs
    d = dict(items)
    return tuple(sorted(d.items(), key=lambda p: skey(p[0])))


EMPTY = ()


@dataclass(frozen=True)
class Realization:
    """A parameter value ``lam`` with an outgoing part ``sigma`` (canonical pair tuple)."""

    lam: Hashable
    sigma: tuple = EMPTY

    def __post_init__(self):
        object.__setattr__(self, "sigma", make_sigma(self.sigma))

    @property
    def defined(self) -> frozenset:
        return frozenset(t for t, _ in self.sigma)

    def get(self, t):
        for u, s in self.sigma:
            if u == t:
                return s
        return None

    def as_dict(self) -> dict:
        return dict(self.sigma)


@dataclass(frozen=True)
class RealizationSet:
    """``all`` lists every realization; ``outgoing`` the distinct outgoing parts."""

    all: tuple
    by_param: dict
    outgoing: tuple
    nonempty: tuple

    def __len__(self):
        return len(self.all)

    def pairs(self) -> frozenset:
        return frozenset((r.lam, r.sigma) for r in self.all)


def _violation(A: OpenDynamic, lam, sigma: dict):
    """Return a short reason if ``(lam, sigma)`` is not a realization, else None."""
    clock = A.clock
    for t, s in sigma.items():
        if A.rho.get(s, _MISSING) != t:
            return f"state {s!r} is not dated {t!r}"
    for x in A.engine.objects:
        for t in clock.states[x]:
            if t in sigma and sigma[t] not in A.states[x]:
                return f"state at {t!r} is not of type {x!r}"
    for arr in A.engine.arrows:
        step = A.alpha(arr.name, lam)
        for t in clock.states[arr.dom]:
            t2 = clock.at(arr.name, t)
            if t2 is None or t2 not in sigma:
                continue
            if t not in sigma:
                return f"defined at {t2!r} but not at its antecedent {t!r}"
            if sigma[t2] not in step(sigma[t]):
                return f"{arr.name!r} does not lead from {sigma[t]!r} to {sigma[t2]!r}"
    return None


_MISSING = object()


def is_realization(A: OpenDynamic, r: Realization) -> bool:
    if r.lam not in set(A.params):
        return False
    return _violation(A, r.lam, r.as_dict()) is None


def _instant_order(A: OpenDynamic) -> list:
    pre = anteriority(A.clock)
    count = {t: 0 for t in A.clock.all_states}
    for s, t in pre:
        if s != t:
            count[t] += 1
    return sorted(count, key=lambda t: (count[t], skey(t)))


def _search(A: OpenDynamic, lam, cap: int, counter: list) -> list:
    order = _instant_order(A)
    pos = {t: i for i, t in enumerate(order)}
    typ = {}
    for x in A.engine.objects:
        for t in A.clock.states[x]:
            typ.setdefault(t, []).append(x)
    cands = []
    for t in order:
        ok = [s for s in A.fiber(t) if all(s in A.states[x] for x in typ.get(t, ()))]
        cands.append([None] + ok)
    # constraints (t, t2, step) checked once both ends are assigned
    checks = [[] for _ in order]
    for arr in A.engine.arrows:
        step = A.alpha(arr.name, lam)
        for t in A.clock.states[arr.dom]:
            t2 = A.clock.at(arr.name, t)
            if t2 is None:
                continue
            checks[max(pos[t], pos[t2])].append((pos[t], pos[t2], step))
    out = []
    assign = [None] * len(order)

    def rec(i):
        counter[0] += 1
        if counter[0] > cap:
            raise SearchBudgetExceeded(f"realization search exceeded {cap} nodes")
        if i == len(order):
            out.append(tuple((order[k], assign[k]) for k in range(len(order)) if assign[k] is not None))
            return
        for c in cands[i]:
            assign[i] = c
            good = True
            for a, b, step in checks[i]:
                sb = assign[b]
                if sb is None:
                    continue
                sa = assign[a]
                if sa is None or sb not in step(sa):
                    good = False
                    break
            if good:
                rec(i + 1)
        assign[i] = None

    rec(0)
    return out


def _brute(A: OpenDynamic, lam, cap: int, counter: list) -> list:
    instants = ssorted(A.clock.all_states)
    choices = [None] + ssorted(A.alpha.all_states)
    out = []
    for combo in itertools.product(choices, repeat=len(instants)):
        counter[0] += 1
        if counter[0] > cap:
            raise SearchBudgetExceeded(f"brute-force enumeration exceeded {cap} candidates")
        sigma = {t: s for t, s in zip(instants, combo) if s is not None}
        if _violation(A, lam, sigma) is None:
            out.append(tuple(sigma.items()))
    return out


def enumerate_realizations(A: OpenDynamic, cap: int | None = None, method: str = "search") -> RealizationSet:
    """All realizations of ``A``, ordered by parameter then by outgoing part.

    ``method="brute"`` filters every partial map instead of searching; it is
    the reference used to test the pruned search.
    """
    cap = default_cap() if cap is None else cap
    run = {"search": _search, "brute": _brute}[method]
    counter = [0]
    everything, by_param = [], {}
    for lam in A.params:
        sigmas = sorted({make_sigma(s) for s in run(A, lam, cap, counter)}, key=skey)
        by_param[lam] = tuple(sigmas)
        everything.extend(Realization(lam, s) for s in sigmas)
    outgoing = tuple(ssorted({r.sigma for r in everything}))
    return RealizationSet(
        all=tuple(everything),
        by_param=by_param,
        outgoing=outgoing,
        nonempty=tuple(s for s in outgoing if s),
    )


def passes_through(A: OpenDynamic, r: Realization, a) -> bool:
    """True iff ``σ(ρ(a)) = a``."""
    if a not in A.rho:
        raise UnknownState(a)
    return r.get(A.rho[a]) == a and A.rho[a] in r.defined


def is_efficient(A: OpenDynamic, realizations: RealizationSet | None = None) -> bool:
    rs = realizations if realizations is not None else enumerate_realizations(A)
    return bool(rs.nonempty)


def is_anteriority_closed(A: OpenDynamic, r: Realization) -> bool:
    """If ``t`` is in ``Def σ`` then so is every instant anterior to it."""
    d = r.defined
    return all(s in d for s, t in anteriority(A.clock) if t in d)
