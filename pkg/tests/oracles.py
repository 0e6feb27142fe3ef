"""Independent brute-force oracles and small fixtures shared by the tests.

Nothing here calls the package's search kernels: every answer comes from
plain enumeration over the definitions.
"""

from itertools import combinations, product

from listcsp.core import Constraint, CspInstance


def equality() -> CspInstance:
    return CspInstance(((1, 2), (1, 2)), (Constraint(0, 1, frozenset({(1, 1), (2, 2)})),))


def triangle() -> CspInstance:
    neq = frozenset({(0, 1), (1, 0)})
    return CspInstance(((0, 1),) * 3, tuple(Constraint(u, v, neq) for u, v in [(0, 1), (1, 2), (0, 2)]))


def holds(inst: CspInstance, values) -> bool:
    return all((values[c.u], values[c.v]) in c.pairs for c in inst.constraints)


def brute_solutions(inst: CspInstance) -> list[tuple]:
    """All satisfying total assignments as value tuples, in lexicographic order."""
    return [vals for vals in product(*inst.domains) if holds(inst, vals)]


def subsets_upto(values, r):
    for k in range(1, min(r, len(values)) + 1):
        yield from combinations(values, k)


def brute_list_witnesses(inst: CspInstance, r: int):
    """Every multi-assignment (tuple of value tuples) with lists of size <= r that list-satisfies."""
    choices = [list(subsets_upto(d, r)) for d in inst.domains]
    for lists in product(*choices):
        if all(any((a, b) in c.pairs for a in lists[c.u] for b in lists[c.v]) for c in inst.constraints):
            yield lists


def brute_list_sat(inst: CspInstance, r: int) -> bool:
    return next(brute_list_witnesses(inst, r), None) is not None


def closed_under_rectangles(pairs) -> bool:
    """(a,b), (a,b'), (a',b) in R implies (a',b') in R, over all quadruples."""
    pairs = set(pairs)
    lefts = {a for a, _ in pairs}
    rights = {b for _, b in pairs}
    for a, a2 in product(lefts, repeat=2):
        for b, b2 in product(rights, repeat=2):
            if (a, b) in pairs and (a, b2) in pairs and (a2, b) in pairs and (a2, b2) not in pairs:
                return False
    return True


def brute_min_cover_size(universe, sets: dict, limit: int):
    """Smallest number of named sets covering ``universe``, or None above ``limit``."""
    uni = set(universe)
    names = list(sets)
    for k in range(0, limit + 1):
        for combo in combinations(names, k):
            got = set()
            for n in combo:
                got |= sets[n]
            if got == uni:
                return k
    return None


def local_solutions(inst: CspInstance, subset) -> list[tuple]:
    """Value tuples on ``subset`` (sorted) satisfying every constraint inside it."""
    s = sorted(subset)
    pos = {x: i for i, x in enumerate(s)}
    inner = [c for c in inst.constraints if c.u in pos and c.v in pos]
    out = []
    for vals in product(*(inst.domains[x] for x in s)):
        if all((vals[pos[c.u]], vals[pos[c.v]]) in c.pairs for c in inner):
            out.append(vals)
    return out


def two_solution_instance(rng, n: int, d: int = 3, density: float = 0.7, tightness: float = 0.6):
    """Random instance with two planted total solutions (value tuples) that differ somewhere."""
    s1 = tuple(rng.randrange(d) for _ in range(n))
    s2 = list(s1)
    for x in rng.sample(range(n), rng.randint(1, n)):
        s2[x] = rng.randrange(d)
    if tuple(s2) == s1:
        s2[0] = (s1[0] + 1) % d
    s2 = tuple(s2)
    cons = []
    for u, v in combinations(range(n), 2):
        if rng.random() < density:
            pairs = {(a, b) for a in range(d) for b in range(d) if rng.random() >= tightness}
            pairs |= {(s1[u], s1[v]), (s2[u], s2[v])}
            cons.append(Constraint(u, v, frozenset(pairs)))
    return CspInstance(tuple(tuple(range(d)) for _ in range(n)), tuple(cons)), s1, s2
