"""Binary CSP data model: instances, assignments, multi-assignments.

Variables are the indices ``0..k-1``. Each variable has an explicit finite
domain of small nonnegative integers. Constraints are ordered pairs of
variables together with an explicit relation (a set of value pairs).
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, NamedTuple

from .errors import InvalidInput, TriviallyUnsatisfiable


@dataclass(frozen=True)
class Constraint:
    u: int
    v: int
    pairs: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.pairs, frozenset):
            object.__setattr__(self, "pairs", frozenset(tuple(p) for p in self.pairs))

    def holds(self, a: int, b: int) -> bool:
        return (a, b) in self.pairs


@dataclass(frozen=True)
class CspInstance:
    domains: tuple
    constraints: tuple = ()
    comment: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "domains", tuple(tuple(d) for d in self.domains))
        cons = []
        for c in self.constraints:
            if not isinstance(c, Constraint):
                u, v, pairs = c
                c = Constraint(u, v, pairs)
            cons.append(c)
        object.__setattr__(self, "constraints", tuple(cons))

    @classmethod
    def build(cls, domains: Iterable[Iterable[int]], constraints=(), comment=None) -> CspInstance:
        """Build an instance with sorted, duplicate-free domains."""
        return cls(tuple(tuple(sorted(set(d))) for d in domains), tuple(constraints), comment)

    @property
    def var_count(self) -> int:
        return len(self.domains)

    @property
    def variables(self) -> range:
        return range(len(self.domains))

    @property
    def alphabet_size(self) -> int:
        return max((len(d) for d in self.domains), default=0)

    @property
    def domain_sizes(self) -> tuple[int, ...]:
        return tuple(len(d) for d in self.domains)

    def induced(self, subset: Iterable[int]) -> list[Constraint]:
        """Constraints whose two endpoints both lie in ``subset``."""
        s = set(subset)
        return [c for c in self.constraints if c.u in s and c.v in s]

    def neighbours(self) -> dict[int, set[int]]:
        """Unordered adjacency between variables."""
        adj: dict[int, set[int]] = {x: set() for x in self.variables}
        for c in self.constraints:
            if c.u != c.v:
                adj[c.u].add(c.v)
                adj[c.v].add(c.u)
        return adj


@dataclass(frozen=True, order=True)
class Assignment:
    """Values for a set of variables, kept sorted by variable index."""

    vars: tuple
    values: tuple

    def __post_init__(self):
        if len(self.vars) != len(self.values):
            raise InvalidInput("variables and values differ in length")
        if list(self.vars) != sorted(set(self.vars)):
            order = sorted(range(len(self.vars)), key=lambda i: self.vars[i])
            vs = tuple(self.vars[i] for i in order)
            if len(set(vs)) != len(vs):
                raise InvalidInput("duplicate variable in assignment")
            object.__setattr__(self, "values", tuple(self.values[i] for i in order))
            object.__setattr__(self, "vars", vs)
        else:
            object.__setattr__(self, "vars", tuple(self.vars))
            object.__setattr__(self, "values", tuple(self.values))

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int]) -> Assignment:
        items = sorted(mapping.items())
        return cls(tuple(k for k, _ in items), tuple(v for _, v in items))

    @classmethod
    def total(cls, values: Iterable[int]) -> Assignment:
        vals = tuple(values)
        return cls(tuple(range(len(vals))), vals)

    def __getitem__(self, x: int) -> int:
        for var, val in zip(self.vars, self.values):
            if var == x:
                return val
        raise KeyError(x)

    def __len__(self) -> int:
        return len(self.vars)

    def __contains__(self, x) -> bool:
        return x in self.vars

    def items(self):
        return zip(self.vars, self.values)

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.vars, self.values))

    def restrict(self, subset: Iterable[int]) -> Assignment:
        return restrict(self, subset)

    def agrees_with(self, other: Assignment) -> bool:
        """True iff both assign the same values on their common variables."""
        mine = self.as_dict()
        return all(mine.get(x, y) == y for x, y in other.items())

    def __repr__(self) -> str:
        body = ", ".join(f"x{x}={v}" for x, v in self.items())
        return f"Assignment({body})"


def restrict(a: Assignment, subset: Iterable[int]) -> Assignment:
    s = sorted(set(subset))
    values = a.as_dict()
    missing = [x for x in s if x not in values]
    if missing:
        raise InvalidInput(f"cannot restrict to variables {missing} outside the assignment")
    return Assignment(tuple(s), tuple(values[x] for x in s))


class MultiAssignment(Mapping):
    """Map from keys (variables or variable subsets) to nonempty value sets.

    Values are plain ints for base instances and :class:`Assignment` objects
    for product instances.
    """

    __slots__ = ("_lists",)

    def __init__(self, lists: Mapping[Any, Iterable[Any]]):
        out = {}
        for key, values in lists.items():
            fs = frozenset(values)
            if not fs:
                raise InvalidInput(f"empty list for {key!r}")
            out[key] = fs
        self._lists = out

    @classmethod
    def singletons(cls, a: Assignment) -> MultiAssignment:
        return cls({x: (v,) for x, v in a.items()})

    def __getitem__(self, key) -> frozenset:
        return self._lists[key]

    def __iter__(self) -> Iterator:
        return iter(sorted(self._lists))

    def __len__(self) -> int:
        return len(self._lists)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiAssignment):
            return self._lists == other._lists
        return NotImplemented

    __hash__ = None

    def sorted_list(self, key) -> list:
        return sorted(self._lists[key])

    @property
    def max_size(self) -> int:
        return max((len(v) for v in self._lists.values()), default=0)

    @property
    def avg_size(self) -> Fraction:
        if not self._lists:
            return Fraction(0)
        return Fraction(sum(len(v) for v in self._lists.values()), len(self._lists))

    def __repr__(self) -> str:
        body = ", ".join(f"{k!r}: {sorted(self._lists[k])!r}" for k in self)
        return f"MultiAssignment({{{body}}})"


class ListReport(NamedTuple):
    list_satisfied: bool
    max_size: int
    avg_size: Fraction


@dataclass(frozen=True)
class RectangularDecomposition:
    component_count: int
    left_map: Mapping[int, int]
    right_map: Mapping[int, int]

    def related(self, a: int, b: int) -> bool:
        pa = self.left_map.get(a)
        return pa is not None and pa == self.right_map.get(b)


class ClosureWitness(NamedTuple):
    """(a, a', b, b') with (a,b), (a,b'), (a',b) in R and (a',b') not in R."""

    a: int
    a2: int
    b: int
    b2: int


def validate_instance(inst: CspInstance) -> list[str]:
    """Return the list of invariant violations; empty means the instance is valid."""
    problems = []
    k = inst.var_count
    if k < 1:
        problems.append("instance has no variables")
    for i, dom in enumerate(inst.domains):
        if not dom:
            problems.append(f"domain {i}: empty domain")
        if len(set(dom)) != len(dom):
            problems.append(f"domain {i}: duplicate value")
        if any((not isinstance(x, int)) or x < 0 for x in dom):
            problems.append(f"domain {i}: values must be nonnegative integers")
    domsets = [set(d) for d in inst.domains]
    for j, c in enumerate(inst.constraints):
        if not (0 <= c.u < k and 0 <= c.v < k):
            problems.append(f"constraint {j}: variable index out of range ({c.u},{c.v})")
            continue
        if c.u == c.v:
            problems.append(f"constraint {j}: self-loop constraint on variable {c.u}")
        for a, b in sorted(c.pairs):
            if a not in domsets[c.u] or b not in domsets[c.v]:
                problems.append(f"constraint {j}: value out of domain: pair ({a},{b})")
    return problems


def _check_total(inst: CspInstance, a: Assignment) -> None:
    if a.vars != tuple(inst.variables):
        raise InvalidInput(f"assignment must be total over {inst.var_count} variables, got {a.vars}")
    for x, val in a.items():
        if val not in inst.domains[x]:
            raise InvalidInput(f"value {val} not in domain of variable {x}")


def evaluate(inst: CspInstance, a: Assignment) -> bool:
    _check_total(inst, a)
    vals = a.values
    return all((vals[c.u], vals[c.v]) in c.pairs for c in inst.constraints)


def satisfies_induced(inst: CspInstance, a: Assignment) -> bool:
    """True iff the partial assignment satisfies every constraint inside its variables."""
    vals = a.as_dict()
    for c in inst.constraints:
        if c.u in vals and c.v in vals and (vals[c.u], vals[c.v]) not in c.pairs:
            return False
    return True


def list_constraint_ok(c: Constraint, left: Iterable[int], right: Iterable[int]) -> bool:
    right = set(right)
    return any((a, b) in c.pairs for a in left for b in right)


def evaluate_list(inst: CspInstance, m: MultiAssignment) -> ListReport:
    keys = set(m.keys())
    missing = [x for x in inst.variables if x not in keys]
    if missing:
        raise InvalidInput(f"multi-assignment misses variables {missing}")
    extra = keys - set(inst.variables)
    if extra:
        raise InvalidInput(f"multi-assignment has unknown keys {sorted(extra)}")
    for x in inst.variables:
        bad = m[x] - set(inst.domains[x])
        if bad:
            raise InvalidInput(f"values {sorted(bad)} not in domain of variable {x}")
    ok = all(list_constraint_ok(c, m[c.u], m[c.v]) for c in inst.constraints)
    return ListReport(ok, m.max_size, m.avg_size)


def rectangular_decompose(
    pairs: Iterable[tuple[int, int]],
    left_domain: Iterable[int] | None = None,
    right_domain: Iterable[int] | None = None,
) -> RectangularDecomposition | ClosureWitness:
    """Decompose a relation as ``pi(a) == sigma(b)`` or return a closure violation.

    Components of the bipartite value graph are numbered by their smallest
    left value. Values of the optional domains that occur in no pair get a
    fresh component of their own, so the maps become total.
    """
    rel = frozenset(tuple(p) for p in pairs)
    if not rel:
        raise InvalidInput("empty relation has no rectangular decomposition")
    fwd: dict[int, set[int]] = {}
    bwd: dict[int, set[int]] = {}
    for a, b in rel:
        fwd.setdefault(a, set()).add(b)
        bwd.setdefault(b, set()).add(a)

    # connected components by alternating BFS from the smallest unseen left value
    left_map: dict[int, int] = {}
    right_map: dict[int, int] = {}
    components = []
    for start in sorted(fwd):
        if start in left_map:
            continue
        idx = len(components)
        lefts, rights = {start}, set()
        frontier = [start]
        left_map[start] = idx
        while frontier:
            nxt = []
            for a in frontier:
                for b in fwd[a]:
                    if b in right_map:
                        continue
                    right_map[b] = idx
                    rights.add(b)
                    for a2 in bwd[b]:
                        if a2 not in left_map:
                            left_map[a2] = idx
                            lefts.add(a2)
                            nxt.append(a2)
            frontier = nxt
        components.append((lefts, rights))

    for lefts, rights in components:
        if any(len(fwd[a]) != len(rights) for a in lefts):
            return _closure_witness(lefts, fwd)

    count = len(components)
    for a in sorted(set(left_domain or ())):
        if a not in left_map:
            left_map[a] = count
            count += 1
    for b in sorted(set(right_domain or ())):
        if b not in right_map:
            right_map[b] = count
            count += 1
    return RectangularDecomposition(count, left_map, right_map)


def _closure_witness(lefts: set[int], fwd: dict[int, set[int]]) -> ClosureWitness:
    # lexicographically first (a, a', b, b') inside a non-complete component
    order = sorted(lefts)
    for a in order:
        for a2 in order:
            if a2 == a:
                continue
            common = fwd[a] & fwd[a2]
            only_a = fwd[a] - fwd[a2]
            if common and only_a:
                return ClosureWitness(a, a2, min(common), min(only_a))
    raise AssertionError("non-complete component without a closure violation")


def normalize(inst: CspInstance) -> CspInstance:
    """Fold self-loop constraints into domains and merge duplicate ordered pairs.

    Raises :class:`TriviallyUnsatisfiable` when a domain becomes empty.
    """
    domains = [list(d) for d in inst.domains]
    changed = False
    for c in inst.constraints:
        if c.u == c.v:
            changed = True
            domains[c.u] = [a for a in domains[c.u] if (a, a) in c.pairs]
    for x, d in enumerate(domains):
        if not d:
            raise TriviallyUnsatisfiable(x)

    merged: dict[tuple[int, int], frozenset] = {}
    for c in inst.constraints:
        if c.u == c.v:
            continue
        key = (c.u, c.v)
        if key in merged:
            changed = True
            merged[key] = merged[key] & c.pairs
        else:
            merged[key] = c.pairs
    if not changed:
        return inst

    domsets = [set(d) for d in domains]
    cons = tuple(
        Constraint(u, v, frozenset((a, b) for a, b in rel if a in domsets[u] and b in domsets[v]))
        for (u, v), rel in merged.items()
    )
    return CspInstance(tuple(tuple(d) for d in domains), cons, inst.comment)
