"""Law suites shared by the unit tests and the acceptance suite.

Each checker returns a dict ``law -> number of violations`` (and, where useful,
the first counterexample under ``law + ":example"``).
"""

from __future__ import annotations

import itertools
import random
from collections import Counter

from laxdyn.connectivity import DISCRETE, four_structures_of
from laxdyn.dynamics import parametric_quotient, validate_multidynamic
from laxdyn.globaldyn import stability_construct
from laxdyn.interaction import InteractiveFamily, equality_intimacy, classify_request
from laxdyn.multirel import (
    MultipleBinaryRelation,
    MultipleRelation,
    br,
    glue,
    intersection,
    mbr,
    mr,
    mr2,
    one,
    restrict,
    zero,
)

from randgen import (
    random_abstract_family,
    random_admissible_request,
    random_dynamic,
    random_family,
    random_partition,
    random_request,
)

E2 = (0, 1)


def _subsets(xs):
    xs = list(xs)
    for r in range(len(xs) + 1):
        yield from itertools.combinations(xs, r)


def all_relations(index, values=E2):
    """Every multiple relation on ``index`` with each context equal to ``values``."""
    ctx = {i: values for i in index}
    grid = list(itertools.product(values, repeat=len(index)))
    for g in _subsets(grid):
        yield MultipleRelation(ctx, g)


def all_binary_relations(index, incoming=("w",), outgoing=E2):
    inc = {i: incoming for i in index}
    out = {i: outgoing for i in index}
    comps = [(w, m) for w in incoming for m in outgoing]
    grid = list(itertools.product(comps, repeat=len(index)))
    for g in _subsets(grid):
        yield MultipleBinaryRelation(inc, out, g)


def _count(c: Counter, law: str, ok: bool, example=None):
    c[law] += 0 if ok else 1
    if not ok and law + ":example" not in c:
        c[law + ":example"] = example


def relation_algebra_violations() -> Counter:
    """Monoid, annihilation, intersection and conversion laws, exhaustively on small contexts."""
    c = Counter()
    unit = one({})
    # the small pool: every relation on every index set of size <= 2 inside {1, 2, 3}
    pool = [R for J in _subsets((1, 2, 3)) if len(J) <= 2 for R in all_relations(J)]
    triple = list(all_relations((1, 2, 3)))
    c["0_empty != 1_empty"] += 0 if zero({}) != one({}) else 1
    for R in pool + triple:
        _count(c, "neutral", glue(R, unit) == R and glue(unit, R) == R, R)
        Z = zero(R.context)
        _count(c, "annihilating", glue(R, Z) == Z, R)
        _count(c, "restrict-all", restrict(R, R.index) == R, R)
    for R1, R2 in itertools.product(pool, repeat=2):
        _count(c, "commutative", glue(R1, R2) == glue(R2, R1), (R1, R2))
        _count(c, "annihilating-wide", glue(R1, zero({i: E2 for i in R2.index})).graph == frozenset(), (R1, R2))
        if R1.index == R2.index:
            _count(c, "same-arity-intersection", glue(R1, R2) == intersection(R1, R2), (R1, R2))
    # associativity: three relations on overlapping pairs of indices
    pairs = {J: list(all_relations(J)) for J in ((1, 2), (2, 3), (1, 3))}
    for R1, R2, R3 in itertools.product(pairs[(1, 2)], pairs[(2, 3)], pairs[(1, 3)]):
        _count(c, "associative", glue(glue(R1, R2), R3) == glue(R1, glue(R2, R3)), (R1, R2, R3))
    # conversions on multiple binary relations
    bpool = {J: list(all_binary_relations(J)) for J in ((1,), (2,), (1, 2), (2, 3))}
    for J, rels in bpool.items():
        for Q in rels:
            B = br(Q)
            _count(c, "def-is-image-of-converse", B.defined == frozenset(u for v in B.cod for u in B.converse(v)), Q)
            _count(c, "mbr-mr2", mbr(mr2(Q)) == Q, Q)
            R2 = mr2(Q)
            _count(c, "mr2-mbr", mr2(mbr(R2)) == R2, Q)
    for Q1, Q2 in itertools.product(bpool[(1, 2)], bpool[(2, 3)]):
        _count(c, "mr-glue", mr(glue(Q1, Q2)) == glue(mr(Q1), mr(Q2)), (Q1, Q2))
    for J in ((1,), (1, 2)):
        nonempty = [Q for Q in bpool[J] if Q.graph]
        _count(c, "mr-injective", len({frozenset(mr(Q).graph) for Q in nonempty}) == len(nonempty))
        _count(c, "br-injective", len({br(Q).graph for Q in nonempty}) == len(nonempty))
    return c


def prop21_violations(n: int, seed: int) -> Counter:
    """The inclusion chain between the four structures, and discreteness for normal requests."""
    rng = random.Random(seed)
    c = Counter()
    c["instances"] = n
    for _ in range(n):
        fam = random_abstract_family(rng, max_index=4, max_size=3)
        Q, mode = random_request(rng, fam)
        fs = four_structures_of(Q)
        _count(c, "manifest<=plain", fs.manifest.issubset(fs.plain), (mode, Q))
        _count(c, "plain<=request", fs.plain.issubset(fs.request), (mode, Q))
        _count(c, "projected<=request", fs.projected.issubset(fs.request), (mode, Q))
        if classify_request(Q)["normal"]:
            c["normal instances"] += 1
            _count(c, "normal=>projected discrete", fs.projected.classify() == DISCRETE, (mode, Q))
    return c


def stability_violations(n: int, seed: int) -> Counter:
    rng = random.Random(seed)
    c = Counter()
    c["instances"] = n
    for _ in range(n):
        fam, sync = random_family(rng)
        Q = random_admissible_request(rng, fam)
        F = InteractiveFamily(fam, Q, sync, equality_intimacy())
        rep = validate_multidynamic(stability_construct(F))
        _count(c, "stability", rep.ok, (F, rep))
    return c


def quotient_violations(n: int, seed: int) -> Counter:
    rng = random.Random(seed)
    c = Counter()
    c["instances"] = n
    for _ in range(n):
        A = random_dynamic(rng)
        part = random_partition(rng, A.params)
        rep = validate_multidynamic(parametric_quotient(A, part).alpha)
        _count(c, "quotient", rep.ok, (A, part, rep))
    return c


def failures(c: Counter) -> dict:
    return {k: v for k, v in c.items() if not k.endswith(":example") and k not in ("instances", "normal instances") and v}
