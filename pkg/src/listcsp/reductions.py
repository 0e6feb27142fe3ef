"""Gadget reductions: clique to CSP, partition systems, rectangular CSP to exact cover."""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from itertools import product as cartesian

from .config import resolve_cap
from .core import ClosureWitness, Constraint, CspInstance, MultiAssignment, rectangular_decompose
from .errors import InvalidInput, NotRectangular, SizeCapExceeded


@dataclass(frozen=True)
class PartitionSystem:
    """Universe ``[kappa]^rho`` with sets ``P[x, y] = {z : z_x == y}`` (1-based labels)."""

    kappa: int
    rho: int
    universe: tuple
    sets: Mapping

    def row(self, x: int) -> list[tuple[int, int]]:
        return [(x, y) for y in range(1, self.kappa + 1)]

    def covers(self, chosen: Iterable[tuple[int, int]]) -> bool:
        got = set()
        for key in chosen:
            got |= self.sets[key]
        return len(got) == len(self.universe)

    def has_full_row(self, chosen: Iterable[tuple[int, int]]) -> bool:
        chosen = set(chosen)
        return any(set(self.row(x)) <= chosen for x in range(1, self.rho + 1))


def partition_system(kappa: int, rho: int, cap: int | None = None) -> PartitionSystem:
    if kappa < 1 or rho < 1:
        raise InvalidInput("kappa and rho must be positive")
    cap = resolve_cap(cap)
    if kappa**rho > cap:
        raise SizeCapExceeded(f"partition system of size {kappa}^{rho} exceeds the cap {cap}")
    universe = tuple(cartesian(range(1, kappa + 1), repeat=rho))
    sets = {
        (x, y): frozenset(z for z in universe if z[x - 1] == y)
        for x in range(1, rho + 1)
        for y in range(1, kappa + 1)
    }
    return PartitionSystem(kappa, rho, universe, sets)


@dataclass(frozen=True)
class SetCoverInstance:
    universe: tuple
    sets: Mapping   # name -> frozenset of universe elements
    k: int

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(self.universe))
        object.__setattr__(self, "sets", {name: frozenset(s) for name, s in self.sets.items()})

    def validate(self) -> list[str]:
        problems = []
        uni = set(self.universe)
        if len(uni) != len(self.universe):
            problems.append("universe has duplicate elements")
        for name, s in self.sets.items():
            if not s <= uni:
                problems.append(f"set {name}: elements outside the universe")
        return problems

    def union(self, names: Iterable[str]) -> set:
        got = set()
        for n in names:
            got |= self.sets[n]
        return got

    def covers(self, names: Iterable[str]) -> bool:
        return self.union(names) == set(self.universe)

    def is_exact(self, names: Iterable[str]) -> bool:
        names = list(names)
        return self.covers(names) and sum(len(self.sets[n]) for n in names) == len(self.universe)


def clique_to_csp(edges: Iterable[tuple[int, int]], parts: Iterable[Iterable[int]]) -> CspInstance:
    """Variable i ranges over part i; the constraint between parts is their edge set."""
    parts = [tuple(sorted(set(p))) for p in parts]
    if not parts or any(not p for p in parts):
        raise InvalidInput("parts must be nonempty")
    owner = {}
    for i, p in enumerate(parts):
        for vtx in p:
            if vtx in owner:
                raise InvalidInput(f"vertex {vtx} lies in parts {owner[vtx]} and {i}")
            owner[vtx] = i
    adj: dict[tuple[int, int], set] = {}
    for x, y in edges:
        if x not in owner or y not in owner:
            raise InvalidInput(f"edge ({x},{y}) touches a vertex outside the parts")
        px, py = owner[x], owner[y]
        if px == py:
            raise InvalidInput(f"edge ({x},{y}) lies inside part {px}; parts must be independent")
        if px > py:
            x, y, px, py = y, x, py, px
        adj.setdefault((px, py), set()).add((x, y))
    cons = [
        Constraint(i, j, frozenset(adj.get((i, j), ())))
        for i in range(len(parts))
        for j in range(i + 1, len(parts))
    ]
    return CspInstance(tuple(parts), tuple(cons))


def set_name(x: int, v: int) -> str:
    return f"S[{x},{v}]"


_NAME = re.compile(r"^S\[(\d+),(\d+)\]$")


def parse_set_name(name: str) -> tuple[int, int]:
    m = _NAME.match(name)
    if not m:
        raise InvalidInput(f"set name {name!r} is not of the form S[x,v]")
    return int(m.group(1)), int(m.group(2))


def backmap_from_names(sc: SetCoverInstance) -> dict[str, tuple[int, int]]:
    return {name: parse_set_name(name) for name in sc.sets}


def csp_to_exactcover(inst: CspInstance, cap: int | None = None):
    """Reduce a CSP with rectangular relations to a set cover instance with k = |X|.

    Constraint i contributes a (2, |C_i|) partition system whose elements are
    tagged ``(i, z)``. The piece ``P[pi(a), 1]`` joins ``S[u, a]`` and
    ``P[sigma(b), 2]`` joins ``S[v, b]`` for each ``(a, b)`` in the relation.
    Returns ``(SetCoverInstance, backmap)`` with backmap ``name -> (x, v)``.
    """
    cap = resolve_cap(cap)
    pieces: dict[str, set] = {set_name(x, v): set() for x in inst.variables for v in inst.domains[x]}
    universe = []
    for i, c in enumerate(inst.constraints):
        if c.u == c.v:
            raise InvalidInput(f"constraint {i} is a self-loop; normalize first")
        if not c.pairs:
            # an empty relation is matched by a system nobody can touch
            universe.append((i, ()))
            continue
        dec = rectangular_decompose(c.pairs)
        if isinstance(dec, ClosureWitness):
            raise NotRectangular(i, dec)
        system = partition_system(2, dec.component_count, cap)
        universe.extend((i, z) for z in system.universe)
        for a, b in c.pairs:
            pieces[set_name(c.u, a)] |= {(i, z) for z in system.sets[(dec.left_map[a] + 1, 1)]}
            pieces[set_name(c.v, b)] |= {(i, z) for z in system.sets[(dec.right_map[b] + 1, 2)]}
    backmap = {set_name(x, v): (x, v) for x in inst.variables for v in inst.domains[x]}
    return SetCoverInstance(tuple(universe), pieces, inst.var_count), backmap


def cover_to_lists(cover: Iterable[str], backmap: Mapping[str, tuple[int, int]], sc: SetCoverInstance | None = None,
                   var_count: int | None = None) -> MultiAssignment:
    """Variable x gets every value v with ``S[x, v]`` in the cover.

    When ``sc`` is given the cover is checked first. Variables are taken
    from ``var_count`` (or ``sc.k``); a variable without any chosen set
    makes the cover invalid.
    """
    cover = list(cover)
    if sc is not None and not sc.covers(cover):
        missing = set(sc.universe) - sc.union(cover)
        raise InvalidInput(f"not a cover: {len(missing)} elements uncovered, e.g. {min(missing)!r}")
    n = var_count if var_count is not None else (sc.k if sc is not None else None)
    lists: dict[int, set] = {} if n is None else {x: set() for x in range(n)}
    for name in cover:
        if name not in backmap:
            raise InvalidInput(f"unknown set {name!r}")
        x, v = backmap[name]
        lists.setdefault(x, set()).add(v)
    empty = [x for x, vs in lists.items() if not vs]
    if empty:
        raise InvalidInput(f"cover selects no set for variables {empty}")
    return MultiAssignment(lists)
