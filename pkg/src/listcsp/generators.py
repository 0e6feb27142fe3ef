"""Seeded random instance generators (fixtures, tests, ``listcsp gen``)."""

from __future__ import annotations

import random
from itertools import combinations

from .core import Assignment, Constraint, CspInstance
from .errors import InvalidInput


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _edges(rng: random.Random, n: int, density: float) -> list[tuple[int, int]]:
    edges = [e for e in combinations(range(n), 2) if rng.random() < density]
    if not edges and n >= 2:
        edges = [tuple(sorted(rng.sample(range(n), 2)))]
    return edges


def random_instance(
    seed,
    n: int,
    d: int,
    density: float = 0.6,
    tightness: float = 0.5,
) -> CspInstance:
    """Random instance on ``n`` variables with domains ``0..d-1``.

    Each variable pair is constrained with probability ``density``; each
    value pair is allowed with probability ``1 - tightness``.
    """
    if n < 1 or d < 1:
        raise InvalidInput("n and d must be positive")
    rng = _rng(seed)
    cons = []
    for u, v in _edges(rng, n, density):
        pairs = {(a, b) for a in range(d) for b in range(d) if rng.random() >= tightness}
        cons.append(Constraint(u, v, frozenset(pairs)))
    return CspInstance(tuple(tuple(range(d)) for _ in range(n)), tuple(cons))


def planted_instance(seed, n: int, d: int, density: float = 0.6, tightness: float = 0.5):
    """A satisfiable random instance together with the planted solution."""
    rng = _rng(seed)
    inst = random_instance(rng, n, d, density, tightness)
    sol = Assignment.total(rng.randrange(d) for _ in range(n))
    cons = tuple(Constraint(c.u, c.v, c.pairs | {(sol[c.u], sol[c.v])}) for c in inst.constraints)
    return CspInstance(inst.domains, cons), sol


def random_rectangular_relation(rng: random.Random, left, right, components: int | None = None,
                                force=None) -> frozenset:
    """Relation ``{(a, b) : pi(a) == sigma(b)}`` for random maps into a few labels.

    Values mapped to the label ``None`` are unrelated. ``force=(a, b)`` makes
    that pair related.
    """
    left, right = list(left), list(right)
    c = components or rng.randint(1, max(1, min(len(left), len(right))))
    labels = list(range(c)) + [None]
    pi = {a: rng.choice(labels) for a in left}
    sigma = {b: rng.choice(labels) for b in right}
    if force is not None:
        a, b = force
        if pi[a] is None:
            pi[a] = rng.randrange(c)
        sigma[b] = pi[a]
    return frozenset((a, b) for a in left for b in right if pi[a] is not None and pi[a] == sigma[b])


def random_rectangular_instance(seed, n: int, d: int, density: float = 0.7,
                                satisfiable: bool | None = None, all_constrained: bool = False):
    """Random instance whose relations are all rectangular.

    ``satisfiable=True`` plants a solution; ``False`` retries until the
    instance is unsatisfiable (checked by the exact solver); ``None`` leaves
    it to chance. ``all_constrained`` makes every variable touch a constraint.
    Returns the instance (and the planted solution when ``satisfiable``).
    """
    from .solver import solve

    rng = _rng(seed)
    for _ in range(10_000):
        edges = _edges(rng, n, density)
        if all_constrained and {x for e in edges for x in e} != set(range(n)):
            continue
        sol = [rng.randrange(d) for _ in range(n)]
        cons = []
        for u, v in edges:
            force = (sol[u], sol[v]) if satisfiable else None
            cons.append(Constraint(u, v, random_rectangular_relation(rng, range(d), range(d), force=force)))
        inst = CspInstance(tuple(tuple(range(d)) for _ in range(n)), tuple(cons))
        if satisfiable:
            return inst, Assignment.total(sol)
        if satisfiable is None or solve(inst) is None:
            return inst
    raise InvalidInput("could not generate an instance with the requested properties")


def random_partite_graph(seed, k: int, part_size: int, p: float = 0.5, planted_clique: bool = False):
    """Random k-partite graph; returns ``(edges, parts)`` with vertices ``0..k*part_size-1``."""
    if k < 2 or part_size < 1:
        raise InvalidInput("need k >= 2 parts of positive size")
    rng = _rng(seed)
    parts = [list(range(i * part_size, (i + 1) * part_size)) for i in range(k)]
    edges = set()
    for i, j in combinations(range(k), 2):
        for x in parts[i]:
            for y in parts[j]:
                if rng.random() < p:
                    edges.add((x, y))
    if planted_clique:
        pick = [rng.choice(part) for part in parts]
        edges |= set(combinations(pick, 2))
    return sorted(edges), parts
