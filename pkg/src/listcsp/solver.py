"""Exact desk-scale oracles: satisfiability, list satisfiability, minimum set cover."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import kernels
from .core import Assignment, CspInstance, MultiAssignment
from .errors import InvalidInput, Uncoverable

DEFAULT_BUDGET = 10**6


def _encode(inst: CspInstance, fold_self_loops: bool = True):
    """Translate an instance into kernel form (value indices and bitmasks)."""
    index = [{val: i for i, val in enumerate(dom)} for dom in inst.domains]
    init = [(1 << len(dom)) - 1 for dom in inst.domains]
    cons = []
    for c in inst.constraints:
        if not (0 <= c.u < inst.var_count and 0 <= c.v < inst.var_count):
            raise InvalidInput(f"constraint ({c.u},{c.v}) names an unknown variable")
        fwd = [0] * len(inst.domains[c.u])
        bwd = [0] * len(inst.domains[c.v])
        for a, b in c.pairs:
            ia, ib = index[c.u].get(a), index[c.v].get(b)
            if ia is None or ib is None:
                continue
            fwd[ia] |= 1 << ib
            bwd[ib] |= 1 << ia
        if c.u == c.v and fold_self_loops:
            init[c.u] &= sum(1 << i for i in range(len(fwd)) if fwd[i] >> i & 1)
        else:
            cons.append((c.u, c.v, fwd, bwd))
    return init, cons


def _decode(inst: CspInstance, idx: list[int]) -> Assignment:
    return Assignment.total(inst.domains[x][i] for x, i in enumerate(idx))


def solve(inst: CspInstance) -> Assignment | None:
    """First satisfying assignment in lexicographic order, or None if unsatisfiable."""
    init, cons = _encode(inst)
    found = kernels.solve_first(init, cons, inst.alphabet_size)
    return None if found is None else _decode(inst, found)


def all_solutions(inst: CspInstance, limit: int | None = None) -> list[Assignment]:
    init, cons = _encode(inst)
    limit = 2**62 if limit is None else limit
    return [_decode(inst, s) for s in kernels.solve_all(init, cons, limit, inst.alphabet_size)]


def count_solutions(inst: CspInstance) -> int:
    return len(all_solutions(inst))


@dataclass(frozen=True)
class ListSearch:
    """Outcome of :func:`brute_list_solve`.

    ``status`` is ``"witness"``, ``"none"`` (search space exhausted) or
    ``"budget"`` (inconclusive).
    """

    status: str
    witness: MultiAssignment | None
    nodes: int

    @property
    def found(self) -> bool:
        return self.status == "witness"


def _candidate_masks(size: int, r: int) -> list[int]:
    # nonempty index subsets of size <= r, largest first, then lexicographically
    out = []
    for k in range(min(r, size), 0, -1):
        for combo in combinations(range(size), k):
            out.append(sum(1 << i for i in combo))
    return out


def brute_list_solve(inst: CspInstance, r: int, budget: int = DEFAULT_BUDGET) -> ListSearch:
    """Exhaustive search for a multi-assignment with lists of size at most ``r``.

    Each constraint is checked as soon as both endpoints have a list. The
    budget counts candidate lists tried (search-tree nodes).
    """
    if r < 1:
        raise InvalidInput("r must be at least 1")
    _, cons = _encode(inst, fold_self_loops=False)
    candidates = [_candidate_masks(len(dom), r) for dom in inst.domains]
    status, masks, nodes = kernels.list_search(
        inst.var_count, cons, candidates, budget, inst.alphabet_size
    )
    if status == kernels.BUDGET:
        return ListSearch("budget", None, nodes)
    if status == kernels.EXHAUSTED:
        return ListSearch("none", None, nodes)
    lists = {
        x: [inst.domains[x][i] for i in range(len(inst.domains[x])) if masks[x] >> i & 1]
        for x in inst.variables
    }
    return ListSearch("witness", MultiAssignment(lists), nodes)


@dataclass(frozen=True)
class MinCover:
    size: int
    cover: tuple
    exact: bool


def brute_min_cover(sc, limit: int) -> MinCover | None:
    """Exact minimum cover of ``sc`` using at most ``limit`` sets.

    Returns None when every cover needs more than ``limit`` sets. ``exact``
    tells whether some minimum cover is a partition of the universe.
    """
    if limit < 0:
        raise InvalidInput("limit must be nonnegative")
    bit = {e: i for i, e in enumerate(sc.universe)}
    names = list(sc.sets)
    masks = [sum(1 << bit[e] for e in sc.sets[n]) for n in names]
    full = (1 << len(bit)) - 1
    union = 0
    for m in masks:
        union |= m
    if union != full:
        raise Uncoverable("the sets together do not cover the universe")
    chosen = kernels.min_cover(masks, full, limit)
    if chosen is None:
        return None
    exact = kernels.exact_cover_exists(masks, full, len(chosen))
    return MinCover(len(chosen), tuple(names[i] for i in chosen), exact)
