"""Built-in example dynamics and families."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any

from .dynamics import MultiDynamic, OpenDynamic, essential_clock
from .errors import UnknownFixture
from .fincat import one_step_category, terminal_category
from .interaction import DynamicsFamily, InteractiveFamily, borromean_request, identity_sync, key_projection

STAR = "*"


def _intemporal(params, identity_rule) -> OpenDynamic:
    E = terminal_category()
    h = essential_clock(E)
    alpha = MultiDynamic.from_rule(E, params, {"•": {0, 1}}, lambda a, lam, s: identity_rule(lam, s))
    return OpenDynamic(alpha, h, {0: 0, 1: 0})


def phi() -> OpenDynamic:
    """Two states, one instant, a single parameter value, identity behaviour."""
    return _intemporal([STAR], lambda lam, s: {s})


def gamma() -> OpenDynamic:
    """Like :func:`phi` but parameter ``b`` leaves state 0 with no successor."""
    return _intemporal(["a", "b"], lambda lam, s: {s} if lam == "a" or s == 1 else set())


def _one_step(values) -> OpenDynamic:
    E = one_step_category()
    h = essential_clock(E)
    states = {"T0": {("t0", 0), ("t0", 1)}, "T1": {("t1", 0), ("t1", 1)}}
    params = list(itertools.product(values, repeat=2))

    def rule(arrow, lam, state):
        t, s = state
        if arrow != "d":
            return {state}
        nxt = lam[s]
        return set() if nxt == STAR else {("t1", nxt)}

    alpha = MultiDynamic.from_rule(E, params, states, rule)
    rho = {a: a[0] for S in states.values() for a in S}
    return OpenDynamic(alpha, h, rho)


def upsilon() -> OpenDynamic:
    """One step ``t0 -> t1`` on states ``{0, 1}``; parameter ``λ = (λ(0), λ(1))`` is the step map."""
    return _one_step((0, 1))


def upsilon_star() -> OpenDynamic:
    """As :func:`upsilon`, with an extra value ``"*"`` meaning "no successor"."""
    return _one_step((STAR, 0, 1))


def borromean_family() -> InteractiveFamily:
    """Three one-step cells; some member must send 0 to 1; social mode given by member 1's ``λ(0)``."""
    fam = DynamicsFamily({1: upsilon(), 2: upsilon(), 3: upsilon()})
    return InteractiveFamily(fam, borromean_request(fam), identity_sync(fam, 1), key_projection(1, 0))


def _u_successors(mu, a, b, c):
    out = set()
    for a2, b2, c2 in itertools.product((0, 1), repeat=3):
        if mu == 0 and a == 0 and (b, c) != (0, 0) and a2 != 0:
            continue
        if mu == 0 and (a, b, c) == (0, 0, 0) and not (a2 == 0 and (b2 == 1 or c2 == 1)):
            continue
        if mu == 0 and (a, b, c) == (1, 0, 0) and not (b2 == 1 or c2 == 1):
            continue
        if mu == 1 and a == 0 and a2 != 1:
            continue
        out.add(("t1", a2, b2, c2))
    return out


def u_global() -> OpenDynamic:
    """Two parameter values, states ``(t_k, a, b, c)`` and the four conditional successor rules."""
    E = one_step_category()
    h = essential_clock(E)
    states = {f"T{k}": {(f"t{k}",) + x for x in itertools.product((0, 1), repeat=3)} for k in (0, 1)}

    def rule(arrow, mu, state):
        if arrow != "d":
            return {state}
        return _u_successors(mu, *state[1:])

    alpha = MultiDynamic.from_rule(E, [0, 1], states, rule)
    rho = {a: a[0] for S in states.values() for a in S}
    return OpenDynamic(alpha, h, rho)


@dataclass(frozen=True)
class Fixture:
    name: str
    payload: Any
    description: str


_FIXTURES = {
    "phi": (phi, "deterministic intemporal mono-dynamic on {0, 1}"),
    "upsilon": (upsilon, "one-step deterministic cell, parameters are maps {0,1} -> {0,1}"),
    "upsilon_star": (upsilon_star, "one-step hyper-deterministic cell with an exit value"),
    "gamma": (gamma, "hyper-deterministic intemporal lax dynamic with parameters a, b"),
    "borromean_family": (borromean_family, "three one-step cells under a borromean request"),
    "u_global": (u_global, "hand-coded global dynamic expected from the borromean family"),
}

NAMES = tuple(_FIXTURES)


def fixture(name: str) -> Fixture:
    try:
        build, desc = _FIXTURES[name]
    except KeyError:
        raise UnknownFixture(f"unknown fixture {name!r}; choose from {', '.join(NAMES)}") from None
    return Fixture(name, build(), desc)
