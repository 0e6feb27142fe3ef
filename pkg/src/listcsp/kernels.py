"""Backend selection for the search kernels.

The compiled extension is used when it imported successfully and every
mask fits in 64 bits; otherwise calls go to the pure-Python kernels. Set
``LISTCSP_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels as py

FOUND, EXHAUSTED, BUDGET = py.FOUND, py.EXHAUSTED, py.BUDGET

compiled = None
if not os.environ.get("LISTCSP_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

BACKEND = "cython" if compiled is not None else "python"
WIDTH = 64


def _pick(fits: bool):
    return compiled if (compiled is not None and fits) else py


def solve_all(init, cons, limit, width):
    return _pick(width <= WIDTH).solve_all(init, cons, limit)


def solve_first(init, cons, width):
    return _pick(width <= WIDTH).solve_first(init, cons)


def list_search(n, cons, candidates, budget, width):
    return _pick(width <= WIDTH).list_search(n, cons, candidates, budget)


def min_cover(masks, full, limit):
    return _pick(full.bit_length() <= WIDTH).min_cover(masks, full, limit)


def exact_cover_exists(masks, full, size):
    return _pick(full.bit_length() <= WIDTH).exact_cover_exists(masks, full, size)
