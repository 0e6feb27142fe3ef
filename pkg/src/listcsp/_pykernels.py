"""Pure-Python search kernels.

Same contract as the compiled ``_ckernels`` module. Domains, lists and set
contents are bitmasks held in Python ints, so there is no width limit.

Constraint tuples are ``(u, v, fwd, bwd)`` where ``fwd[a]`` is the mask of
values of ``v`` compatible with value index ``a`` of ``u`` and ``bwd[b]`` the
mask of values of ``u`` compatible with value index ``b`` of ``v``.
"""

FOUND, EXHAUSTED, BUDGET = 0, 1, 2


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _incidence(n, cons):
    inc = [[] for _ in range(n)]
    for u, v, fwd, bwd in cons:
        if u < v:
            inc[u].append((v, fwd))
        elif v < u:
            inc[v].append((u, bwd))
    return inc


def solve_all(init, cons, limit):
    """Solutions in lexicographic order (ascending variables, then values), at most ``limit``.

    Backtracking with forward checking: assigning a variable prunes the
    domains of later neighbours, and an emptied domain backtracks at once.
    Self-loop constraints must already be folded into ``init``.
    """
    n = len(init)
    inc = _incidence(n, cons)
    out = []
    values = [0] * n

    def rec(i, dom):
        if i == n:
            out.append(list(values))
            return len(out) >= limit
        for a in _bits(dom[i]):
            new = list(dom)
            for j, tab in inc[i]:
                new[j] &= tab[a]
                if not new[j]:
                    break
            else:
                values[i] = a
                if rec(i + 1, new):
                    return True
        return False

    if limit > 0:
        rec(0, list(init))
    return out


def solve_first(init, cons):
    found = solve_all(init, cons, 1)
    return found[0] if found else None


def list_search(n, cons, candidates, budget):
    """Search list masks per variable, in the order given by ``candidates``.

    Returns ``(status, masks, nodes)``; ``nodes`` counts candidate lists tried.
    A constraint is checked as soon as its later endpoint receives a list.
    """
    checks = [[] for _ in range(n)]
    for u, v, fwd, _ in cons:
        checks[max(u, v)].append((u, v, fwd))
    chosen = [0] * n
    nodes = 0

    def ok(i):
        for u, v, fwd in checks[i]:
            reach = 0
            for a in _bits(chosen[u]):
                reach |= fwd[a]
            if not reach & chosen[v]:
                return False
        return True

    def rec(i):
        nonlocal nodes
        if i == n:
            return FOUND
        for mask in candidates[i]:
            nodes += 1
            if nodes > budget:
                return BUDGET
            chosen[i] = mask
            if ok(i):
                res = rec(i + 1)
                if res != EXHAUSTED:
                    return res
        return EXHAUSTED

    status = rec(0)
    return status, (list(chosen) if status == FOUND else None), nodes


def _containing(masks, full):
    by_elem = {}
    for e in _bits(full):
        bit = 1 << e
        by_elem[e] = [s for s, m in enumerate(masks) if m & bit]
    return by_elem


def min_cover(masks, full, limit):
    """Indices of a minimum cover of ``full`` with at most ``limit`` sets, else None.

    Iterative deepening; each level branches on the sets containing the
    lowest uncovered element, which every cover must include.
    """
    by_elem = _containing(masks, full)
    chosen = []

    def rec(covered, left):
        if covered == full:
            return True
        if left == 0:
            return False
        rest = full & ~covered
        e = (rest & -rest).bit_length() - 1
        for s in by_elem[e]:
            chosen.append(s)
            if rec(covered | masks[s], left - 1):
                return True
            chosen.pop()
        return False

    for size in range(limit + 1):
        if rec(0, size):
            return sorted(chosen)
    return None


def exact_cover_exists(masks, full, size):
    """True iff some pairwise disjoint family of at most ``size`` sets covers ``full``."""
    by_elem = _containing(masks, full)

    def rec(covered, left):
        if covered == full:
            return True
        if left == 0:
            return False
        rest = full & ~covered
        e = (rest & -rest).bit_length() - 1
        for s in by_elem[e]:
            if not masks[s] & covered and rec(covered | masks[s], left - 1):
                return True
        return False

    return rec(0, size)
