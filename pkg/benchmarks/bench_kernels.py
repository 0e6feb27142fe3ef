"""Time the compiled kernels against the pure-Python fallback.

Both backends run the same seeded workloads; results are checked to agree
before timings are reported.

    python benchmarks/bench_kernels.py [--repeat 3] [--seed 0]
"""

import argparse
import random
import time

from listcsp import _pykernels
from listcsp.generators import planted_instance, random_rectangular_instance
from listcsp.reductions import csp_to_exactcover
from listcsp.solver import _candidate_masks, _encode

try:
    from listcsp import _ckernels
except ImportError:
    _ckernels = None


def workloads(seed):
    rng = random.Random(seed)
    solve = [_encode(planted_instance(rng, 20, 8, 0.3, 0.6)[0]) for _ in range(20)]

    lists = []
    for _ in range(20):
        inst, _ = planted_instance(rng, 7, 4, 0.8, 0.7)
        _, cons = _encode(inst, fold_self_loops=False)
        cands = [_candidate_masks(len(d), 2) for d in inst.domains]
        lists.append((inst.var_count, cons, cands))

    covers = []
    while len(covers) < 20:
        inst = random_rectangular_instance(rng, 6, 3, 0.8)
        sc, _ = csp_to_exactcover(inst)
        bit = {e: i for i, e in enumerate(sc.universe)}
        if len(bit) > 64:
            continue
        masks = [sum(1 << bit[e] for e in s) for s in sc.sets.values()]
        full = (1 << len(bit)) - 1
        union = 0
        for m in masks:
            union |= m
        if union == full:
            covers.append((masks, full, 2 * sc.k))
    return {"solve_all": solve, "list_search": lists, "min_cover": covers}


def run(mod, name, items):
    if name == "solve_all":
        return [mod.solve_all(init, cons, 10**6) for init, cons in items]
    if name == "list_search":
        return [mod.list_search(n, cons, cands, 10**6)[:2] for n, cons, cands in items]
    return [mod.min_cover(masks, full, limit) for masks, full, limit in items]


def timed(mod, name, items, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        start = time.perf_counter()
        out = run(mod, name, items)
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if _ckernels is None:
        print("compiled kernels unavailable; timing the pure-Python backend only")
    print(f"{'kernel':<12} {'python (s)':>11} {'compiled (s)':>13} {'speedup':>8}")
    for name, items in workloads(args.seed).items():
        t_py, r_py = timed(_pykernels, name, items, args.repeat)
        if _ckernels is None:
            print(f"{name:<12} {t_py:>11.4f} {'-':>13} {'-':>8}")
            continue
        t_c, r_c = timed(_ckernels, name, items, args.repeat)
        if r_c != r_py:
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<12} {t_py:>11.4f} {t_c:>13.4f} {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
