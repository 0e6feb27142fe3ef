"""Direct product constructions and the average-list counterexample family.

Product variables are sorted tuples of base variables. Their domains hold the
partial assignments that satisfy every base constraint inside the subset.
Constraints between product variables are the consistency predicate
"restrictions to the intersection agree"; they are materialized as explicit
pair sets only on request and under a size cap.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from .config import resolve_cap
from .core import (
    Assignment,
    Constraint,
    CspInstance,
    ListReport,
    MultiAssignment,
    evaluate,
    restrict,
)
from .errors import InvalidInput, SizeCapExceeded, TriviallyUnsatisfiable
from .solver import all_solutions


def partial_satisfying_assignments(inst: CspInstance, subset) -> list[Assignment]:
    """All assignments on ``subset`` satisfying the constraints induced by it.

    Ordered lexicographically by (sorted variable, domain value).
    """
    s = tuple(sorted(set(subset)))
    if not s:
        raise InvalidInput("subset must be nonempty")
    if s[0] < 0 or s[-1] >= inst.var_count:
        raise InvalidInput(f"subset {s} is not within the instance's variables")
    pos = {x: i for i, x in enumerate(s)}
    sub = CspInstance(
        tuple(inst.domains[x] for x in s),
        tuple(Constraint(pos[c.u], pos[c.v], c.pairs) for c in inst.induced(s)),
    )
    return [Assignment(s, a.values) for a in all_solutions(sub)]


def consistent(sa: Assignment, sb: Assignment) -> bool:
    return sa.agrees_with(sb)


@dataclass(frozen=True)
class ProductInstance:
    base: CspInstance
    shape: tuple          # ("uniform", t) or ("bipartite", a, b)
    left: tuple           # t-subsets, or a-subsets for bipartite shape
    right: tuple          # empty for uniform shape
    domains: Mapping
    cap: int

    @property
    def variables(self) -> tuple:
        return self.left + self.right

    @property
    def bipartite(self) -> bool:
        return self.shape[0] == "bipartite"

    def domain(self, subset) -> tuple:
        return self.domains[tuple(subset)]

    @property
    def trivially_unsatisfiable(self) -> bool:
        return any(not d for d in self.domains.values())

    @property
    def alphabet_size(self) -> int:
        return max((len(d) for d in self.domains.values()), default=0)

    def constraint_pairs(self, include_vacuous: bool = False) -> Iterator[tuple]:
        """Pairs of product variables joined by a consistency constraint.

        Pairs with disjoint subsets are vacuous and skipped unless requested.
        """
        if self.bipartite:
            pairs = ((s, t) for s in self.left for t in self.right)
        else:
            pairs = combinations(self.left, 2)
        for s, t in pairs:
            if include_vacuous or set(s) & set(t):
                yield s, t

    def constraint_count(self) -> int:
        if self.bipartite:
            return len(self.left) * len(self.right)
        return comb(len(self.left), 2)

    def materialize(self, s, t) -> frozenset | None:
        """Explicit relation between ``s`` and ``t`` as domain index pairs, or None above the cap."""
        ds, dt = self.domain(s), self.domain(t)
        if len(ds) * len(dt) > self.cap:
            return None
        return frozenset(
            (i, j) for i, a in enumerate(ds) for j, b in enumerate(dt) if a.agrees_with(b)
        )

    def to_csp(self, include_vacuous: bool = False) -> tuple[CspInstance, tuple]:
        """Explicit instance over domain indices, plus the product variable order."""
        order = self.variables
        pos = {s: i for i, s in enumerate(order)}
        for s in order:
            if not self.domain(s):
                raise TriviallyUnsatisfiable(pos[s])
        cons = []
        for s, t in self.constraint_pairs(include_vacuous):
            rel = self.materialize(s, t)
            if rel is None:
                raise SizeCapExceeded(f"constraint {s}-{t} exceeds the cap of {self.cap} pairs")
            cons.append(Constraint(pos[s], pos[t], rel))
        domains = tuple(tuple(range(len(self.domain(s)))) for s in order)
        return CspInstance(domains, tuple(cons)), order

    def check_lists(self, m: MultiAssignment) -> None:
        keys = set(m.keys())
        expected = set(self.variables)
        if keys != expected:
            missing = sorted(expected - keys)[:3]
            extra = sorted(keys - expected)[:3]
            raise InvalidInput(f"lists do not match product variables (missing {missing}, extra {extra})")
        for s in self.variables:
            dom = set(self.domain(s))
            for a in m[s]:
                if a not in dom:
                    raise InvalidInput(f"{a!r} is not a partial satisfying assignment of {s}")

    def evaluate_list(self, m: MultiAssignment) -> ListReport:
        """List satisfaction of every (non-vacuous) consistency constraint."""
        self.check_lists(m)
        ok = all(_lists_consistent(m[s], m[t], s, t) for s, t in self.constraint_pairs())
        return ListReport(ok, m.max_size, m.avg_size)


def _lists_consistent(ls, lt, s, t) -> bool:
    common = sorted(set(s) & set(t))
    left = {restrict(a, common) for a in ls}
    return any(restrict(b, common) in left for b in lt)


def _domains(inst: CspInstance, subsets, jobs: int) -> dict:
    if jobs > 1 and len(subsets) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            found = list(pool.map(partial_satisfying_assignments, [inst] * len(subsets), subsets))
    else:
        found = [partial_satisfying_assignments(inst, s) for s in subsets]
    return {s: tuple(d) for s, d in zip(subsets, found)}


def direct_product(inst: CspInstance, t: int, cap: int | None = None, jobs: int = 1) -> ProductInstance:
    if not 1 <= t <= inst.var_count:
        raise InvalidInput(f"t must lie in [1, {inst.var_count}], got {t}")
    subsets = tuple(combinations(range(inst.var_count), t))
    return ProductInstance(inst, ("uniform", t), subsets, (), _domains(inst, subsets, jobs), resolve_cap(cap))


def bipartite_product(
    inst: CspInstance, a: int, b: int, cap: int | None = None, jobs: int = 1
) -> ProductInstance:
    if not 1 <= a < b <= inst.var_count:
        raise InvalidInput(f"need 1 <= a < b <= {inst.var_count}, got a={a}, b={b}")
    left = tuple(combinations(range(inst.var_count), a))
    right = tuple(combinations(range(inst.var_count), b))
    return ProductInstance(
        inst, ("bipartite", a, b), left, right, _domains(inst, left + right, jobs), resolve_cap(cap)
    )


def lift(a: Assignment, p: ProductInstance) -> MultiAssignment:
    """Singleton lists holding the restriction of ``a`` to every product variable."""
    if not evaluate(p.base, a):
        raise InvalidInput("assignment does not satisfy the base instance")
    return MultiAssignment({s: (restrict(a, s),) for s in p.variables})


def lex_superset(subset, size: int, n: int) -> tuple:
    """Lexicographically smallest ``size``-subset of ``range(n)`` containing ``subset``."""
    s = set(subset)
    if size < len(s):
        raise InvalidInput(f"no superset of size {size} for {tuple(sorted(s))}")
    extra = [x for x in range(n) if x not in s][: size - len(s)]
    if len(s) + len(extra) != size:
        raise InvalidInput(f"no superset of size {size} for {tuple(sorted(s))} in {n} variables")
    return tuple(sorted(s | set(extra)))


def restrict_product_lists(m: MultiAssignment, a: int, b: int):
    """Lists on a- and b-subsets obtained by restricting lists of t-subsets.

    Each small subset reads the lists of its lexicographically smallest
    t-superset. Returns ``(u, v)``.
    """
    keys = list(m.keys())
    if not keys:
        raise InvalidInput("empty multi-assignment")
    t = len(keys[0])
    if any(len(k) != t for k in keys):
        raise InvalidInput("keys of a product multi-assignment must share one size")
    if a > t or b > t or a < 1 or b < 1:
        raise InvalidInput(f"subset sizes a={a}, b={b} must lie in [1, t={t}]")
    n = len(set().union(*map(set, keys)))
    if set(keys) != set(combinations(range(n), t)):
        raise InvalidInput("multi-assignment must cover every t-subset of the variables")

    def side(size):
        return MultiAssignment({
            s: {restrict(x, s) for x in m[lex_superset(s, t, n)]}
            for s in combinations(range(n), size)
        })

    return side(a), side(b)


def example1_instance(n: int) -> CspInstance:
    """Unsatisfiable instance whose direct products are nearly 1-average-list satisfiable.

    Variable 0 is the special variable with domain ``{2..n}``; every other
    variable has domain ``{1}``. In 1-indexed terms variable ``i - 1`` is the
    i-th variable, and the constraint with it forbids value ``i`` on variable 0.
    """
    if n < 3:
        raise InvalidInput("n must be at least 3")
    domains = [tuple(range(2, n + 1))] + [(1,)] * (n - 1)
    cons = []
    for i in range(2, n + 1):
        cons.append(Constraint(0, i - 1, frozenset((j, 1) for j in range(2, n + 1) if j != i)))
    note = "0-indexed; variable 0 is the special variable, variable i-1 carries label i"
    return CspInstance(tuple(domains), tuple(cons), note)


def example1_lists(n: int, t: int) -> MultiAssignment:
    """List assignment of the t-wise product of :func:`example1_instance`.

    Subsets avoiding variable 0 get the all-ones assignment. A subset with
    variable 0 gets one assignment ``0 -> j`` (rest ones) for each label
    ``j`` in ``2..2t`` whose variable ``j - 1`` lies outside the subset.
    """
    if t < 1 or n < 2 * t:
        raise InvalidInput(f"need n >= 2t, got n={n}, t={t}")
    if n < 3:
        raise InvalidInput("n must be at least 3")
    lists = {}
    for s in combinations(range(n), t):
        if 0 not in s:
            lists[s] = [Assignment(s, (1,) * t)]
        else:
            lists[s] = [
                Assignment(s, (j,) + (1,) * (t - 1))
                for j in range(2, 2 * t + 1)
                if j - 1 not in s
            ]
    return MultiAssignment(lists)


def example1_avg_bound(n: int, t: int) -> Fraction:
    """The upper bound ``1 + 2t^2/n`` on the mean list size."""
    return 1 + Fraction(2 * t * t, n)
