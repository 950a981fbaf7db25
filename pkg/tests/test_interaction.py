import itertools

import pytest

from laxdyn import fixtures as fx
from laxdyn.errors import FamilyMismatch, InvalidSynchronization, NotAdmissible, NotCoherent
from laxdyn.interaction import (
    DECREASING,
    DynamicsFamily,
    InteractiveFamily,
    Synchronization,
    blocks_intimacy,
    borromean_request,
    check_synchronization,
    classify_relation,
    classify_request,
    coherent_part,
    diagonal_request,
    equality_intimacy,
    full_request,
    identity_sync,
    is_coherent,
    key_projection,
    omega,
    request,
    strongly_equivalent,
    total_intimacy,
)
from laxdyn.multirel import glue, restrict
from laxdyn.realization import enumerate_realizations

from randgen import reversal_sync


def test_omega_sizes():
    assert len(omega(DynamicsFamily({1: fx.upsilon()}))) == 20
    assert len(omega(DynamicsFamily({1: fx.phi()}))) == 3
    assert len(omega(DynamicsFamily({1: fx.phi(), 2: fx.phi()}))) == 9


def test_omega_matches_realizations():
    U = fx.upsilon()
    om = omega(DynamicsFamily({1: U}))
    assert {x[0] for x in om.graph} == {(r.sigma, r.lam) for r in enumerate_realizations(U).all}


def test_omega_is_product_of_components():
    fam = DynamicsFamily({1: fx.phi(), 2: fx.gamma(), 3: fx.phi()})
    om = omega(fam).relation
    parts = [restrict(om, [i]) for i in fam.index]
    g = parts[0]
    for p in parts[1:]:
        g = glue(g, p)
    assert g == om


def test_coherent_part():
    fam = DynamicsFamily({1: fx.gamma(), 2: fx.phi()})
    om = omega(fam)
    assert coherent_part(om).graph == om.graph
    assert coherent_part(full_request(fam)).graph == om.graph
    Q = full_request(fam)
    Qc = coherent_part(Q)
    assert Qc.graph <= Q.graph and coherent_part(Qc).graph == Qc.graph
    assert is_coherent(om) and not is_coherent(Q)


def test_borromean_coherent_part_by_filter():
    F = fx.borromean_family()
    om = omega(F.family)
    expected = {x for x in om.graph if any(p[1][0] == 1 for p in x)}
    assert F.coherent.graph == expected
    assert len(F.request) == 19208
    assert len(F.coherent) == 7000


def test_classify_borromean():
    F = fx.borromean_family()
    assert classify_request(F.request) == {
        "normal": True,
        "admissible": True,
        "functional": False,
        "strongly_functional": False,
    }
    cr = classify_relation(F.coherent)
    assert cr["normal"] and cr["efficient"]
    assert classify_relation(F.coherent, witness=F.request)["normal"]


def test_non_functionality_witness_by_brute_force():
    Q = fx.borromean_family().request
    seen = {}
    found = False
    for x in Q.graph:
        sig, lam = Q.sigmas(x), Q.lams(x)
        if sig in seen and seen[sig] != lam:
            found = True
            break
        seen[sig] = lam
    assert found


def test_omega_classification():
    fam = DynamicsFamily({1: fx.upsilon(), 2: fx.phi()})
    c = classify_request(omega(fam))
    assert c["normal"] and c["admissible"] and not c["functional"]
    cr = classify_relation(omega(fam))
    assert cr["normal"] and not cr["efficient"]


def test_diagonal_relation():
    fam = DynamicsFamily({1: fx.phi(), 2: fx.phi()})
    D = diagonal_request(fam)
    assert classify_request(D)["functional"]
    assert not classify_request(D)["normal"]
    cr = classify_relation(D)
    assert (cr["normal"], cr["efficient"], cr["functional"]) == (False, True, True)


def test_classify_relation_rejects_incoherent():
    fam = DynamicsFamily({1: fx.gamma()})
    with pytest.raises(NotCoherent):
        classify_relation(full_request(fam))


def test_relation_normality_matches_definition_by_exhaustion():
    """For tiny families, decide normality of every coherent relation by trying every preimage request."""
    fam = DynamicsFamily({1: fx.gamma()})
    comps = [(s, l) for s in fam.Z[1] for l in fam.L[1]]
    grid = [(c,) for c in comps]
    om = sorted(omega(fam).graph, key=repr)
    incoherent = [x for x in grid if x not in set(om)]
    for r in range(len(om) + 1):
        for Rg in itertools.combinations(om, r):
            R = request(fam, Rg)
            expected = False
            for k in range(len(incoherent) + 1):
                for extra in itertools.combinations(incoherent, k):
                    if classify_request(request(fam, set(Rg) | set(extra)))["normal"]:
                        expected = True
                        break
                if expected:
                    break
            assert classify_relation(R)["normal"] == expected


def test_sync_identity_rigid():
    F = fx.borromean_family()
    rep = check_synchronization(F.sync, F.family)
    assert rep.ok and all(rep.info["rigid"].values())


def test_sync_reversal_flexible():
    fam = DynamicsFamily({1: fx.upsilon(), 2: fx.upsilon()})
    rep = check_synchronization(reversal_sync(fam, 1, [2]), fam)
    assert rep.ok
    assert rep.info["rigid"] == {1: True, 2: False}


def test_sync_violations():
    fam = DynamicsFamily({1: fx.upsilon(), 2: fx.upsilon()})
    s = identity_sync(fam, 1)
    bad = Synchronization(1, s.objects, {1: s.instants[1], 2: {"t0": "t1", "t1": "t1"}}, s.monotonicity)
    assert check_synchronization(bad, fam).first.law == "compatibility"
    wrong_tag = Synchronization(1, s.objects, s.instants, {1: "increasing", 2: DECREASING})
    assert check_synchronization(wrong_tag, fam).first.law == "monotonicity"
    with pytest.raises(InvalidSynchronization):
        InteractiveFamily(fam, omega(fam), bad, equality_intimacy())


def test_not_admissible():
    fam = DynamicsFamily({1: fx.gamma()})
    om = omega(fam).graph
    incoherent = [x for x in full_request(fam).graph if x not in om]
    with pytest.raises(NotAdmissible):
        InteractiveFamily(fam, request(fam, incoherent), identity_sync(fam), equality_intimacy())


def test_strong_equivalence():
    F = fx.borromean_family()
    assert strongly_equivalent(F, F)
    fam = F.family
    om = omega(fam).graph
    extra = {x for x in full_request(fam).graph if x not in om}
    bigger = request(fam, set(F.request.graph) | set(itertools.islice(iter(sorted(extra, key=repr)), 50)))
    F2 = InteractiveFamily(fam, bigger, F.sync, F.intimacy)
    assert strongly_equivalent(F, F2)
    F3 = InteractiveFamily(fam, F.request, F.sync, key_projection(2, 0))
    assert not strongly_equivalent(F, F3)
    other = DynamicsFamily({1: fx.upsilon(), 2: fx.upsilon()})
    F4 = InteractiveFamily(other, omega(other), identity_sync(other, 1), total_intimacy())
    with pytest.raises(FamilyMismatch):
        strongly_equivalent(F, F4)


def test_intimacy_partitions():
    idx = (1, 2)
    carrier = [(0, 0), (0, 1), (1, 0)]
    assert len(equality_intimacy().partition(idx, carrier)) == 3
    assert len(total_intimacy().partition(idx, carrier)) == 1
    assert len(key_projection(1, 0).partition(idx, [((0, 1), "x"), ((1, 1), "y")])) == 2
    b = blocks_intimacy([[(0, 0), (0, 1)], [(1, 0)]])
    assert sorted(len(v) for v in b.partition(idx, carrier).values()) == [1, 2]


def test_borromean_builtin_matches_predicate():
    fam = DynamicsFamily({1: fx.upsilon(), 2: fx.upsilon(), 3: fx.upsilon()})
    Q = borromean_request(fam)
    grid = full_request(fam)
    assert Q.graph == {x for x in grid.graph if any(p[1][0] == 1 for p in x)}
