# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels (64-bit masks).

Mirrors ``_pykernels`` exactly; callers must keep every domain and the set
cover universe within 64 entries.
"""

from libc.stdlib cimport malloc, free

ctypedef unsigned long long u64

cdef extern from *:
    int __builtin_ctzll(unsigned long long)

FOUND, EXHAUSTED, BUDGET = 0, 1, 2


cdef struct Solver:
    int n
    u64* doms          # (n + 1) * n stack of domains
    int* inc_start
    int* inc_j
    int* inc_off
    u64* tabs
    int* values
    long limit
    long found


cdef bint _solve_rec(Solver* s, int i, list out):
    cdef int n = s.n
    cdef u64* dom = s.doms + i * n
    cdef u64* new = s.doms + (i + 1) * n
    cdef u64 m, low, nj
    cdef int a, e, j, k
    cdef bint dead
    if i == n:
        out.append([s.values[k] for k in range(n)])
        s.found += 1
        return s.found >= s.limit
    m = dom[i]
    while m:
        low = m & (~m + 1)
        a = __builtin_ctzll(m)
        m ^= low
        for k in range(n):
            new[k] = dom[k]
        dead = False
        for e in range(s.inc_start[i], s.inc_start[i + 1]):
            j = s.inc_j[e]
            nj = new[j] & s.tabs[s.inc_off[e] + a]
            new[j] = nj
            if nj == 0:
                dead = True
                break
        if not dead:
            s.values[i] = a
            if _solve_rec(s, i + 1, out):
                return True
    return False


def solve_all(init, cons, long limit):
    cdef int n = len(init)
    cdef Solver s
    cdef int total_tab = 0, total_inc = 0, i, e, pos
    out = []
    if limit <= 0:
        return out
    for u, v, fwd, bwd in cons:
        if u != v:
            total_inc += 1
            total_tab += len(fwd) if u < v else len(bwd)
    s.n = n
    s.limit = limit
    s.found = 0
    s.doms = <u64*>malloc(sizeof(u64) * (n + 1) * max(n, 1))
    s.inc_start = <int*>malloc(sizeof(int) * (n + 1))
    s.inc_j = <int*>malloc(sizeof(int) * max(total_inc, 1))
    s.inc_off = <int*>malloc(sizeof(int) * max(total_inc, 1))
    s.tabs = <u64*>malloc(sizeof(u64) * max(total_tab, 1))
    s.values = <int*>malloc(sizeof(int) * max(n, 1))
    try:
        for i in range(n):
            s.doms[i] = init[i]
        per_var = [[] for _ in range(n)]
        for u, v, fwd, bwd in cons:
            if u < v:
                per_var[u].append((v, fwd))
            elif v < u:
                per_var[v].append((u, bwd))
        e = 0
        pos = 0
        for i in range(n):
            s.inc_start[i] = e
            for j, tab in per_var[i]:
                s.inc_j[e] = j
                s.inc_off[e] = pos
                for mask in tab:
                    s.tabs[pos] = mask
                    pos += 1
                e += 1
        s.inc_start[n] = e
        _solve_rec(&s, 0, out)
    finally:
        free(s.doms)
        free(s.inc_start)
        free(s.inc_j)
        free(s.inc_off)
        free(s.tabs)
        free(s.values)
    return out


def solve_first(init, cons):
    found = solve_all(init, cons, 1)
    return found[0] if found else None


cdef struct Lister:
    int n
    int* chk_start
    int* chk_u
    int* chk_v
    int* chk_off
    u64* tabs
    int* cand_start
    u64* cands
    u64* chosen
    long long nodes
    long long budget


cdef inline bint _list_ok(Lister* s, int i):
    cdef int e
    cdef u64 reach, m
    for e in range(s.chk_start[i], s.chk_start[i + 1]):
        reach = 0
        m = s.chosen[s.chk_u[e]]
        while m:
            reach |= s.tabs[s.chk_off[e] + __builtin_ctzll(m)]
            m &= m - 1
        if (reach & s.chosen[s.chk_v[e]]) == 0:
            return False
    return True


cdef int _list_rec(Lister* s, int i):
    cdef int c, res
    if i == s.n:
        return 0
    for c in range(s.cand_start[i], s.cand_start[i + 1]):
        s.nodes += 1
        if s.nodes > s.budget:
            return 2
        s.chosen[i] = s.cands[c]
        if _list_ok(s, i):
            res = _list_rec(s, i + 1)
            if res != 1:
                return res
    return 1


def list_search(int n, cons, candidates, long long budget):
    cdef Lister s
    cdef int ncons = len(cons), total_tab = 0, total_cand = 0, i, e, pos
    for u, v, fwd, bwd in cons:
        total_tab += len(fwd)
    for cl in candidates:
        total_cand += len(cl)
    s.n = n
    s.nodes = 0
    s.budget = budget
    s.chk_start = <int*>malloc(sizeof(int) * (n + 1))
    s.chk_u = <int*>malloc(sizeof(int) * max(ncons, 1))
    s.chk_v = <int*>malloc(sizeof(int) * max(ncons, 1))
    s.chk_off = <int*>malloc(sizeof(int) * max(ncons, 1))
    s.tabs = <u64*>malloc(sizeof(u64) * max(total_tab, 1))
    s.cand_start = <int*>malloc(sizeof(int) * (n + 1))
    s.cands = <u64*>malloc(sizeof(u64) * max(total_cand, 1))
    s.chosen = <u64*>malloc(sizeof(u64) * max(n, 1))
    try:
        per_var = [[] for _ in range(n)]
        for u, v, fwd, bwd in cons:
            per_var[max(u, v)].append((u, v, fwd))
        e = 0
        pos = 0
        for i in range(n):
            s.chk_start[i] = e
            for u, v, fwd in per_var[i]:
                s.chk_u[e] = u
                s.chk_v[e] = v
                s.chk_off[e] = pos
                for mask in fwd:
                    s.tabs[pos] = mask
                    pos += 1
                e += 1
        s.chk_start[n] = e
        pos = 0
        for i in range(n):
            s.cand_start[i] = pos
            for mask in candidates[i]:
                s.cands[pos] = mask
                pos += 1
        s.cand_start[n] = pos
        status = _list_rec(&s, 0)
        chosen = [s.chosen[i] for i in range(n)] if status == 0 else None
        return status, chosen, s.nodes
    finally:
        free(s.chk_start)
        free(s.chk_u)
        free(s.chk_v)
        free(s.chk_off)
        free(s.tabs)
        free(s.cand_start)
        free(s.cands)
        free(s.chosen)


cdef struct Coverer:
    u64 full
    u64* masks
    int* elem_start     # 65 entries
    int* elem_sets
    int* chosen
    int depth
    bint exact


cdef bint _cover_rec(Coverer* s, u64 covered, int left):
    cdef u64 rest
    cdef int e, k, st
    if covered == s.full:
        return True
    if left == 0:
        return False
    rest = s.full & ~covered
    e = __builtin_ctzll(rest)
    for k in range(s.elem_start[e], s.elem_start[e + 1]):
        st = s.elem_sets[k]
        if s.exact and (s.masks[st] & covered):
            continue
        s.chosen[s.depth] = st
        s.depth += 1
        if _cover_rec(s, covered | s.masks[st], left - 1):
            return True
        s.depth -= 1
    return False


cdef void _cover_setup(Coverer* s, masks, u64 full):
    cdef int m = len(masks), e, k, pos = 0
    s.full = full
    s.masks = <u64*>malloc(sizeof(u64) * max(m, 1))
    s.elem_start = <int*>malloc(sizeof(int) * 65)
    s.elem_sets = <int*>malloc(sizeof(int) * max(m * 64, 1))
    s.chosen = <int*>malloc(sizeof(int) * max(m + 1, 1))
    s.depth = 0
    for k in range(m):
        s.masks[k] = masks[k]
    for e in range(64):
        s.elem_start[e] = pos
        if (full >> e) & 1:
            for k in range(m):
                if (s.masks[k] >> e) & 1:
                    s.elem_sets[pos] = k
                    pos += 1
    s.elem_start[64] = pos


cdef void _cover_free(Coverer* s):
    free(s.masks)
    free(s.elem_start)
    free(s.elem_sets)
    free(s.chosen)


def min_cover(masks, u64 full, int limit):
    cdef Coverer s
    cdef int size, k
    _cover_setup(&s, masks, full)
    s.exact = False
    try:
        for size in range(limit + 1):
            s.depth = 0
            if _cover_rec(&s, 0, size):
                return sorted([s.chosen[k] for k in range(s.depth)])
        return None
    finally:
        _cover_free(&s)


def exact_cover_exists(masks, u64 full, int size):
    cdef Coverer s
    _cover_setup(&s, masks, full)
    s.exact = True
    try:
        return bool(_cover_rec(&s, 0, size))
    finally:
        _cover_free(&s)
