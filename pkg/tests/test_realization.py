import itertools
import random

import pytest

from laxdyn import fixtures as fx
from laxdyn.dynamics import MultiDynamic, OpenDynamic, essential_clock
from laxdyn.errors import SearchBudgetExceeded, UnknownState
from laxdyn.fincat import one_step_category, terminal_category
from laxdyn.realization import (
    EMPTY,
    Realization,
    enumerate_realizations,
    is_anteriority_closed,
    is_efficient,
    is_realization,
    make_sigma,
    passes_through,
)
from laxdyn.transition import Transition

from randgen import random_dynamic


def oracle_upsilon_realizations():
    """Independent count: λ ranges over maps {0,1}->{0,1}, σ over partial sections."""
    out = set()
    for lam in itertools.product((0, 1), repeat=2):
        choices0 = [None, 0, 1]
        choices1 = [None, 0, 1]
        for s0, s1 in itertools.product(choices0, choices1):
            if s1 is not None and (s0 is None or lam[s0] != s1):
                continue
            sigma = {}
            if s0 is not None:
                sigma["t0"] = ("t0", s0)
            if s1 is not None:
                sigma["t1"] = ("t1", s1)
            out.add((lam, make_sigma(sigma)))
    return out


def test_phi():
    rs = enumerate_realizations(fx.phi())
    assert len(rs.outgoing) == 3
    assert set(rs.nonempty) == {make_sigma({0: 0}), make_sigma({0: 1})}


def test_upsilon():
    rs = enumerate_realizations(fx.upsilon())
    assert len(rs) == 20
    assert rs.pairs() == oracle_upsilon_realizations()
    assert len(rs.outgoing) == 7
    sizes = sorted(len(s) for s in rs.outgoing)
    assert sizes == [0, 1, 1, 2, 2, 2, 2]


def test_upsilon_star_same_outgoing():
    assert set(enumerate_realizations(fx.upsilon_star()).outgoing) == set(enumerate_realizations(fx.upsilon()).outgoing)


def test_gamma_exact():
    rs = enumerate_realizations(fx.gamma())
    expected = {
        ("a", EMPTY),
        ("a", make_sigma({0: 0})),
        ("a", make_sigma({0: 1})),
        ("b", EMPTY),
        ("b", make_sigma({0: 1})),
    }
    assert rs.pairs() == expected


@pytest.mark.parametrize("name", ["phi", "upsilon", "upsilon_star", "gamma", "u_global"])
def test_search_matches_brute_force(name):
    A = fx.fixture(name).payload
    assert enumerate_realizations(A).pairs() == enumerate_realizations(A, method="brute").pairs()


def test_search_matches_brute_force_random():
    rng = random.Random(3)
    for _ in range(80):
        E = rng.choice([terminal_category(), one_step_category()])
        A = random_dynamic(rng, E, max_fiber=2)
        assert enumerate_realizations(A).pairs() == enumerate_realizations(A, method="brute").pairs()


def test_empty_realization_always_present_and_closed():
    rng = random.Random(5)
    for A in [fx.phi(), fx.upsilon(), fx.gamma()] + [random_dynamic(rng) for _ in range(30)]:
        rs = enumerate_realizations(A)
        for lam in A.params:
            assert EMPTY in rs.by_param[lam]
        for r in rs.all:
            assert is_realization(A, r)
            assert is_anteriority_closed(A, r)


def test_passes_through():
    U = fx.upsilon()
    r = Realization((1, 0), {"t0": ("t0", 1), "t1": ("t1", 0)})
    assert is_realization(U, r)
    assert passes_through(U, r, ("t0", 1))
    assert not passes_through(U, r, ("t0", 0))
    assert not passes_through(U, Realization((0, 0)), ("t0", 0))
    with pytest.raises(UnknownState):
        passes_through(U, r, ("t9", 0))


def test_efficiency():
    assert is_efficient(fx.phi())
    assert is_efficient(fx.upsilon())
    E = terminal_category()
    S = {0, 1}
    dead = MultiDynamic(E, ["p"], {"•": S}, {("0", "p"): Transition(S, S, set())})
    A = OpenDynamic(dead, essential_clock(E), {0: 0, 1: 0})
    assert not is_efficient(A)


def test_budget():
    with pytest.raises(SearchBudgetExceeded):
        enumerate_realizations(fx.u_global(), cap=5)


def test_budget_env(monkeypatch):
    monkeypatch.setenv("LAXDYN_CAP", "3")
    with pytest.raises(SearchBudgetExceeded):
        enumerate_realizations(fx.upsilon())
