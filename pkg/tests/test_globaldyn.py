import itertools
import random

import pytest

from laxdyn import fixtures as fx
from laxdyn.dynamics import validate_multidynamic, validate_open_dynamic
from laxdyn.errors import BadJ, IntimacyNotCoveringM, SearchBudgetExceeded
from laxdyn.globaldyn import (
    apply_iso,
    demanded,
    global_states,
    is_refinement,
    iso_check,
    j_global,
    opaque,
    responsible,
    responsible_sets,
    stability_construct,
    transparent,
)
from laxdyn.interaction import (
    DynamicsFamily,
    InteractiveFamily,
    blocks_intimacy,
    classify_request,
    equality_intimacy,
    identity_sync,
    omega,
    request,
    total_intimacy,
)
from laxdyn.realization import enumerate_realizations

import laws
from randgen import random_admissible_request, random_family


@pytest.fixture(scope="module")
def borromean():
    return fx.borromean_family()


@pytest.fixture(scope="module")
def borromean_demanded(borromean):
    return demanded(borromean)


def singleton_oracle(A):
    """Global dynamic of ``({A}, Ω, identity)`` evaluated pair by pair from the realizations."""
    rs = enumerate_realizations(A, method="brute")
    h = A.clock
    states = {x: {(a,) for a in A.states[x]} for x in A.engine.objects}
    action = {}
    for arr in A.engine.arrows:
        for lam in A.params:
            sigmas = [dict(s) for s in rs.by_param[lam]]
            g = set()
            for a in A.states[arr.dom]:
                for b in A.states[arr.cod]:
                    if A.rho[b] != h.at(arr.name, A.rho[a]):
                        continue
                    if any(s.get(A.rho[a]) == a and s.get(A.rho[b]) == b for s in sigmas):
                        g.add(((a,), (b,)))
            action[(arr.name, (lam,))] = g
    return states, action


def test_borromean_global(borromean, borromean_demanded):
    G = transparent(borromean)
    assert len(borromean.M) == 56
    assert validate_open_dynamic(G).ok
    assert {x: len(s) for x, s in G.states.items()} == {"T0": 8, "T1": 8}
    D = borromean_demanded
    assert sorted(D.params) == [0, 1]
    assert validate_open_dynamic(D).ok


def test_borromean_iso_to_u(borromean_demanded):
    U = fx.u_global()
    r = iso_check(borromean_demanded, U)
    assert r.found
    assert r.witness["params"] == {0: 0, 1: 1}
    assert apply_iso(borromean_demanded, r.witness) == U


def test_borromean_spot_transitions(borromean_demanded):
    D = borromean_demanded
    for a in D.states["T0"]:
        first = a[0][1]
        succ1 = D.alpha("d", 1)(a)
        if first == 0:
            assert succ1 and all(b[0][1] == 1 for b in succ1)
        if tuple(x[1] for x in a) == (1, 0, 0):
            assert all(b[1][1] == 1 or b[2][1] == 1 for b in D.alpha("d", 0)(a))


def test_singleton_family_matches_oracle():
    for A in (fx.upsilon(), fx.upsilon_star(), fx.phi(), fx.gamma()):
        fam = DynamicsFamily({1: A})
        F = InteractiveFamily(fam, omega(fam), identity_sync(fam), equality_intimacy())
        G = transparent(F)
        states, action = singleton_oracle(A)
        assert {x: set(s) for x, s in G.states.items()} == states
        assert {k: set(t.graph) for k, t in G.alpha.action.items()} == action


def test_singleton_upsilon_steps_are_upsilon():
    U = fx.upsilon()
    fam = DynamicsFamily({1: U})
    G = transparent(InteractiveFamily(fam, omega(fam), identity_sync(fam), equality_intimacy()))
    for lam in U.params:
        for s in (0, 1):
            assert G.alpha("d", (lam,))((("t0", s),)) == {(("t1", lam[s]),)}


def test_quotient_tower(borromean):
    T = transparent(borromean)
    D = demanded(borromean)
    O = opaque(borromean)
    assert O.params == ("*",)
    assert is_refinement(T, D) and is_refinement(D, O) and is_refinement(T, O)
    assert demanded(borromean, equality_intimacy()) == T
    assert demanded(borromean, total_intimacy()) == O


def test_j_global(borromean):
    T = transparent(borromean)
    assert j_global(borromean, [1, 2, 3]).alpha.action == T.alpha.action
    empty = j_global(borromean, [])
    assert len(empty.params) == 1
    assert iso_check(empty, opaque(borromean)).found
    assert len(j_global(borromean, [1]).params) == 4
    with pytest.raises(BadJ):
        j_global(borromean, [4])


def test_intimacy_must_cover_M(borromean):
    with pytest.raises(IntimacyNotCoveringM):
        demanded(borromean, blocks_intimacy([[borromean.M[0]]]))


def responsible_oracle(Q):
    """The defining universal condition, checked over all pairs of tuples."""
    idx = Q.index
    out = {}
    for k, i in enumerate(idx):
        N = set()
        for l in Q.relation.outgoing[i]:
            ok = True
            for p, q in itertools.product(Q.graph, repeat=2):
                if p[k][1] == l and all(p[j][0] == q[j][0] for j in range(len(idx)) if j != k):
                    if q[k][1] != l:
                        ok = False
                        break
            if ok:
                N.add(l)
        out[i] = frozenset(N)
    return out


def test_responsible_sets_match_definition():
    rng = random.Random(8)
    for _ in range(60):
        fam, _ = random_family(rng, max_members=2)
        Q = random_admissible_request(rng, fam, max_tuples=40)
        assert responsible_sets(Q) == responsible_oracle(Q)


def test_single_tuple_request_identifies_everything():
    fam = DynamicsFamily({1: fx.upsilon(), 2: fx.upsilon()})
    x = next(iter(sorted(omega(fam).graph, key=repr)))
    Q = request(fam, [x])
    assert responsible_sets(Q) == {i: frozenset(fam.L[i]) for i in fam.index}


def strongly_functional_request(rng, fam):
    """Coherent tuples where each λ_i is a function of the other members' outgoing parts."""
    om = list(omega(fam).graph)
    rng.shuffle(om)
    choice = {}
    graph = []
    for x in om:
        keys = [(k, tuple(p[0] for j, p in enumerate(x) if j != k)) for k in range(len(x))]
        if all(choice.get(key, x[key[0]][1]) == x[key[0]][1] for key in keys):
            for key in keys:
                choice[key] = x[key[0]][1]
            graph.append(x)
    return request(fam, graph)


def test_strongly_functional_responsible_is_opaque():
    rng = random.Random(12)
    checked = 0
    for _ in range(40):
        fam, sync = random_family(rng)
        Q = strongly_functional_request(rng, fam)
        assert classify_request(Q)["strongly_functional"]
        F = InteractiveFamily(fam, Q, sync, equality_intimacy())
        assert iso_check(responsible(F), opaque(F)).found
        checked += 1
    assert checked == 40


def test_stability_random():
    c = laws.stability_violations(60, seed=21)
    assert laws.failures(c) == {}


def test_global_state_typing(borromean):
    states = global_states(borromean)
    for x, S in states.items():
        for a in S:
            assert all(ai[0] == a[0][0] for ai in a)
    assert validate_multidynamic(stability_construct(borromean)).ok


def test_iso_check_basics(borromean_demanded):
    U = fx.u_global()
    r = iso_check(U, U)
    assert r.found and all(k == v for part in r.witness.values() for k, v in part.items())
    r = iso_check(fx.upsilon(), fx.u_global())
    assert not r.found and "number" in r.reason
    with pytest.raises(SearchBudgetExceeded):
        iso_check(borromean_demanded, U, cap=1)


def test_iso_check_detects_non_isomorphic():
    G = fx.gamma()
    P = fx.phi()
    assert not iso_check(G, P).found
    U, Us = fx.upsilon(), fx.upsilon_star()
    assert not iso_check(U, Us).found
