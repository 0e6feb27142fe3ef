"""Extraction of a global satisfying assignment from list assignments of products.

A :class:`BipartiteListAssignment` gives a list ``u(S)`` for every a-subset
and ``v(T)`` for every b-subset of the base variables. The decoders below
peel lists down level by level until single values are forced, following
constructive induction on the list sizes:

* :func:`forced_assignment` finds, for a small set ``A``, a value ``f_A`` that
  survives inside ``v(T)`` for supersets of every b'-subset;
* :func:`decode_unit` handles singleton right lists (containment premise
  ``v(T)|S in u(S)``) by induction on the left list size ``r``;
* :func:`decode` handles right lists of size ``q`` (premise: every pair of
  lists agrees somewhere on ``S & T``) by induction on ``q``;
* :func:`decode_theorem` runs the whole pipeline from a list assignment of
  the t-wise direct product.

Any returned assignment has been checked against the base instance. When a
step cannot proceed the outcome carries a certificate that can be rechecked
against the oracles. The theoretical parameters are huge, so ``override=True``
accepts any subset sizes and downgrades violated inequalities to warnings.
"""

from __future__ import annotations

import random
import warnings
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .core import Assignment, CspInstance, MultiAssignment, evaluate, restrict, satisfies_induced
from .errors import InvalidInput, ParameterError
from .product import lex_superset, partial_satisfying_assignments, restrict_product_lists

PREMISE_SAMPLES = 200
EXHAUSTIVE_LIMIT = 10**6


class ParameterWarning(UserWarning):
    pass


def _mask(subset) -> int:
    m = 0
    for x in subset:
        m |= 1 << x
    return m


def _supersets(base, size: int, n: int):
    """All ``size``-subsets of ``range(n)`` containing ``base``, in lexicographic order."""
    base = set(base)
    rest = [x for x in range(n) if x not in base]
    need = size - len(base)
    if need < 0:
        return []
    return sorted(tuple(sorted(base | set(extra))) for extra in combinations(rest, need))


def _bump(subset, n: int) -> tuple:
    """Add the smallest variable missing from ``subset``."""
    s = set(subset)
    for x in range(n):
        if x not in s:
            return tuple(sorted(s | {x}))
    raise InvalidInput(f"{tuple(subset)} already holds every variable")


class BipartiteListAssignment:
    """Left lists on a-subsets and right lists on b-subsets of a base instance.

    ``u`` and ``v`` are mappings or callables from sorted subset tuples to
    iterables of :class:`Assignment`. Lists are fetched on demand, cached,
    and (unless ``check=False``) validated: nonempty, within the declared
    bound, and made of partial satisfying assignments of the subset.
    """

    def __init__(self, base: CspInstance, a: int, b: int, u, v, r: int, q: int, check: bool = True):
        if r < 1 or q < 1:
            raise InvalidInput("list bounds r and q must be positive")
        self.base = base
        self.n = base.var_count
        self.a, self.b, self.r, self.q = a, b, r, q
        self._src = {"u": u, "v": v}
        self._cache: dict = {"u": {}, "v": {}}
        self.check = check

    @classmethod
    def from_solutions(cls, base, a, b, left: Iterable[Assignment], right: Iterable[Assignment]):
        """Lists made of restrictions of known total assignments."""
        left, right = list(left), list(right)

        def u(s):
            return {restrict(x, s) for x in left}

        def v(t):
            return {restrict(x, t) for x in right}

        return cls(base, a, b, u, v, max(1, len(left)), max(1, len(right)))

    @classmethod
    def from_product_lists(cls, base: CspInstance, m: MultiAssignment, a: int, b: int):
        u, v = restrict_product_lists(m, a, b)
        return cls(base, a, b, dict(u.items()), dict(v.items()), max(m.max_size, 1), max(m.max_size, 1))

    def left_sets(self):
        return combinations(range(self.n), self.a)

    def right_sets(self):
        return combinations(range(self.n), self.b)

    def u(self, s) -> frozenset:
        return self._get("u", tuple(s))

    def v(self, t) -> frozenset:
        return self._get("v", tuple(t))

    def _get(self, side, key):
        cache = self._cache[side]
        if key in cache:
            return cache[key]
        src = self._src[side]
        vals = frozenset(src(key) if callable(src) else src[key])
        if self.check:
            self._validate(side, key, vals)
        cache[key] = vals
        return vals

    def _validate(self, side, key, vals):
        size, bound = (self.a, self.r) if side == "u" else (self.b, self.q)
        if len(key) != size:
            raise InvalidInput(f"{side} queried on {key}, expected a {size}-subset")
        if not vals:
            raise InvalidInput(f"{side}{key} is empty")
        if len(vals) > bound:
            raise InvalidInput(f"{side}{key} has {len(vals)} entries, bound is {bound}")
        for x in vals:
            if x.vars != key or any(val not in self.base.domains[y] for y, val in x.items()):
                raise InvalidInput(f"{side}{key} holds {x!r}, not an assignment of {key}")
            if not satisfies_induced(self.base, x):
                raise InvalidInput(f"{side}{key} holds {x!r}, which violates a constraint inside {key}")

    def validate(self) -> None:
        """Query and validate every list (exponential; tiny instances only)."""
        for s in self.left_sets():
            self.u(s)
        for t in self.right_sets():
            self.v(t)

    def as_tables(self) -> tuple[MultiAssignment, MultiAssignment]:
        return (
            MultiAssignment({s: self.u(s) for s in self.left_sets()}),
            MultiAssignment({t: self.v(t) for t in self.right_sets()}),
        )


# -- certificates -----------------------------------------------------------


@dataclass(frozen=True)
class InconsistentPair:
    """Lists of ``S`` and ``T`` share no assignment on ``S & T``.

    ``mode`` is ``"containment"`` (S is inside T and ``v(T)|S`` misses
    ``u(S)``) or ``"intersection"`` (restrictions to ``S & T`` are disjoint).
    """

    level: BipartiteListAssignment = field(repr=False, compare=False)
    S: tuple
    T: tuple
    mode: str

    def recheck(self) -> bool:
        if self.mode == "containment":
            if not set(self.S) <= set(self.T):
                return False
            got = {restrict(x, self.S) for x in self.level.v(self.T)}
            return not got & self.level.u(self.S)
        return not _pair_consistent(self.level, self.S, self.T)


@dataclass(frozen=True)
class BlockingCertificate:
    """No candidate on ``A`` is forced: each has a blocking b'-subset.

    For every partial satisfying assignment ``f`` of ``A`` the entry
    ``blockers[f] = T'`` means no b-subset ``T`` containing ``T' | A`` has
    ``f`` in ``v(T)|A``.
    """

    level: BipartiteListAssignment = field(repr=False, compare=False)
    A: tuple
    b_prime: int
    blockers: tuple   # ((f, T'), ...)

    def recheck(self) -> bool:
        lv = self.level
        cands = partial_satisfying_assignments(lv.base, self.A)
        if sorted(f for f, _ in self.blockers) != sorted(cands):
            return False
        for f, tp in self.blockers:
            if len(tp) != self.b_prime:
                return False
            for t in _supersets(set(tp) | set(self.A), lv.b, lv.n):
                if f in {restrict(x, self.A) for x in lv.v(t)}:
                    return False
        return True


@dataclass(frozen=True)
class ParameterViolation:
    """Decoding got stuck while these inequalities (``lhs >= rhs``) were violated."""

    violations: tuple   # ((name, lhs, rhs), ...)
    stuck_on: object = None

    def recheck(self) -> bool:
        return bool(self.violations) and all(lhs < rhs for _, lhs, rhs in self.violations)


@dataclass
class DecoderOutcome:
    assignment: Assignment | None = None
    certificate: object | None = None
    trace: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.assignment is not None


class _Stuck(Exception):
    def __init__(self, certificate=None, reason: str = ""):
        self.certificate = certificate
        self.reason = reason
        super().__init__(reason)


# -- parameters -------------------------------------------------------------


@dataclass
class DecodeParams:
    """Subset sizes for the recursion; ``None`` means the theoretical value.

    ``unit_b`` is the right size of the singleton-list stage, ``unit_b_prime``
    maps a list size r to the b' used when peeling r down to r - 1. ``k``,
    ``a_prime`` and ``b_prime`` map a right list size q to the sizes used when
    peeling q down to q - 1.
    """

    unit_b: int | None = None
    unit_b_prime: Mapping[int, int] = field(default_factory=dict)
    k: Mapping[int, int] = field(default_factory=dict)
    a_prime: Mapping[int, int] = field(default_factory=dict)
    b_prime: Mapping[int, int] = field(default_factory=dict)


def unit_shape(r: int) -> tuple[int, int]:
    return r, (2 * r) ** r


def list_shape(r: int, q: int) -> tuple[int, int]:
    return (2 * r) ** (r + 2 * q), (2 * r) ** (r + 2 * q + 2)


class _Run:
    """Per-call state: override flag, parameters, trace, recorded violations."""

    def __init__(self, override: bool, params: DecodeParams | None):
        self.override = override
        self.params = params or DecodeParams()
        self.trace: list[dict] = []
        self.violations: list[tuple] = []

    def event(self, **info):
        self.trace.append(info)

    def require(self, name: str, lhs: int, rhs: int) -> bool:
        """Check ``lhs >= rhs``; raise in strict mode, warn under override."""
        if lhs >= rhs:
            return True
        if not self.override:
            raise ParameterError(name, {"lhs": lhs, "rhs": rhs})
        entry = (name, lhs, rhs)
        if entry not in self.violations:
            self.violations.append(entry)
            warnings.warn(f"{name} violated ({lhs} < {rhs})", ParameterWarning, stacklevel=3)
            self.event(kind="parameter-warning", inequality=name, lhs=lhs, rhs=rhs)
        return False

    def require_shape(self, name: str, actual: tuple, expected: tuple):
        if not self.override and actual != expected:
            raise ParameterError(name, {"actual": actual, "expected": expected})

    def pick(self, given, default: int, cap: int) -> int:
        if given is not None:
            return given
        return default if self.override is False else min(default, cap)


# -- forced assignments -----------------------------------------------------


def forced_candidates(ba: BipartiteListAssignment, A, b_prime: int):
    """Split the partial satisfying assignments of ``A`` into forced and blocked.

    Returns ``(forced, blockers)``: ``forced`` lists, in canonical order, the
    ``f`` such that every b'-subset ``T'`` has a b-subset ``T`` containing
    ``T' | A`` with ``f`` in ``v(T)|A``; ``blockers`` maps each other ``f``
    to its first blocking ``T'``.
    """
    A = tuple(sorted(A))
    cands = partial_satisfying_assignments(ba.base, A)
    holders: dict[Assignment, list[int]] = {f: [] for f in cands}
    for t in _supersets(A, ba.b, ba.n):
        tm = _mask(t)
        for x in {restrict(y, A) for y in ba.v(t)}:
            holders.setdefault(x, []).append(tm)
    am = _mask(A)
    forced, blockers = [], {}
    needs = [_mask(tp) | am for tp in combinations(range(ba.n), b_prime)]
    tps = None
    for f in cands:
        hs = holders[f]
        for i, need in enumerate(needs):
            if not any(need & h == need for h in hs):
                if tps is None:
                    tps = list(combinations(range(ba.n), b_prime))
                blockers[f] = tps[i]
                break
        else:
            forced.append(f)
    return forced, blockers


def forced_assignment(ba: BipartiteListAssignment, A, k: int, b_prime: int, *, override: bool = False):
    """First forced assignment on ``A`` in canonical order, or a blocking certificate.

    Requires ``a >= k`` and ``b >= r * b' + a`` (``r`` is the left bound);
    under ``override`` violations only warn.
    """
    A = tuple(sorted(A))
    if len(A) != k:
        raise InvalidInput(f"A must have {k} variables, got {A}")
    run = _Run(override, None)
    run.require("a >= k", ba.a, k)
    run.require("b >= r*b' + a", ba.b, ba.r * b_prime + ba.a)
    forced, blockers = forced_candidates(ba, A, b_prime)
    if forced:
        return forced[0]
    return BlockingCertificate(ba, A, b_prime, tuple(sorted(blockers.items())))


# -- premises ---------------------------------------------------------------


def _pair_consistent(ba, s, t) -> bool:
    common = tuple(sorted(set(s) & set(t)))
    left = {restrict(x, common) for x in ba.u(s)}
    return any(restrict(y, common) in left for y in ba.v(t))


def _containment_ok(ba, s, t) -> bool:
    return bool({restrict(y, s) for y in ba.v(t)} & ba.u(s))


def find_premise_violation(ba: BipartiteListAssignment, mode: str, samples: int | None = None, seed: int = 0):
    """Search for a pair of subsets whose lists are inconsistent.

    ``mode`` is ``"containment"`` (pairs S inside T) or ``"intersection"``
    (all pairs). ``samples=None`` enumerates every pair; otherwise that many
    pairs are drawn with a seeded generator.
    """
    n, a, b = ba.n, ba.a, ba.b
    if a > n or b > n:
        return None
    check = _containment_ok if mode == "containment" else _pair_consistent
    if samples is None:
        for s in ba.left_sets():
            ts = _supersets(s, b, n) if mode == "containment" else ba.right_sets()
            for t in ts:
                if check(ba, s, t):
                    continue
                return InconsistentPair(ba, s, t, mode)
        return None
    rng = random.Random(seed)
    for _ in range(samples):
        s = tuple(sorted(rng.sample(range(n), a)))
        if mode == "containment":
            if b < a:
                return None
            rest = [x for x in range(n) if x not in s]
            t = tuple(sorted(set(s) | set(rng.sample(rest, b - a))))
        else:
            t = tuple(sorted(rng.sample(range(n), b)))
        if not check(ba, s, t):
            return InconsistentPair(ba, s, t, mode)
    return None


def _pair_count(ba, mode) -> int:
    if mode == "containment":
        return comb(ba.n, ba.a) * comb(max(ba.n - ba.a, 0), max(ba.b - ba.a, 0))
    return comb(ba.n, ba.a) * comb(ba.n, ba.b)


# -- singleton right lists --------------------------------------------------


def _unit(ba: BipartiteListAssignment, r: int, run: _Run, depth: int) -> Assignment:
    n, base = ba.n, ba.base
    sizes_ok = run.require("b <= |X|", n, ba.b) & run.require("a >= r", ba.a, r)
    if not sizes_ok:
        raise _Stuck(reason=f"subset sizes a={ba.a}, b={ba.b} unusable for r={r} on {n} variables")
    if r == 1:
        run.require("a >= 1", ba.a, 1)
        run.require("b >= 2a", ba.b, 2 * ba.a)
        reads = {}
        for x in range(n):
            s = lex_superset((x,), ba.a, n)
            (only,) = ba.u(s) if len(ba.u(s)) == 1 else _too_many(ba, s)
            reads[x] = (s, only[x])
        sigma = Assignment.total(reads[x][1] for x in range(n))
        run.event(kind="unit-base", depth=depth, a=ba.a, b=ba.b, assignment=list(sigma.values))
        if evaluate(base, sigma):
            return sigma
        for c in base.constraints:
            if (sigma[c.u], sigma[c.v]) not in c.pairs:
                su, sv = reads[c.u][0], reads[c.v][0]
                for t in _supersets(set(su) | set(sv), ba.b, n):
                    for s in (su, sv):
                        if not _containment_ok(ba, s, t):
                            raise _Stuck(InconsistentPair(ba, s, t, "containment"))
                raise _Stuck(reason=f"constraint ({c.u},{c.v}) violated at the base level")
        raise AssertionError("unreachable")

    b_prime = run.pick(run.params.unit_b_prime.get(r), (2 * (r - 1)) ** (r - 1), n)
    run.require("a >= 1", ba.a, 1)
    run.require("b >= r*b' + a", ba.b, r * b_prime + ba.a)
    run.require("b' >= a", b_prime, ba.a)

    forced = {}
    for x in range(n):
        f, blockers = forced_candidates(ba, (x,), b_prime)
        if not f:
            raise _Stuck(BlockingCertificate(ba, (x,), b_prime, tuple(sorted(blockers.items()))))
        forced[x] = f

    split = next((x for x in range(n) if len(forced[x]) >= 2), None)
    if split is None:
        return _unit_unique(ba, r, run, depth, forced, b_prime)

    x = split
    p, q = forced[x][0][x], forced[x][1][x]
    run.event(kind="unit-peel", depth=depth, r=r, a=ba.a, b=ba.b, b_prime=b_prime, var=x, keep=p, drop=q)

    def u2(s2):
        s = tuple(sorted(set(s2) | {x})) if x not in s2 else _bump(s2, n)
        kept = {restrict(y, s2) for y in ba.u(s) if y[x] == p}
        if not kept or len(kept) > r - 1:
            _diagnose_left(ba, s, "containment")
            raise _Stuck(reason=f"left list of {s} does not hold both {p} and {q} on variable {x}")
        return kept

    def v2(t2):
        t3 = t2 if x not in t2 else tuple(y for y in _bump(t2, n) if y != x)
        for t in _supersets(set(t3) | {x}, ba.b, n):
            (only,) = ba.v(t)
            if only[x] == p:
                return {restrict(only, t2)}
        raise _Stuck(reason=f"value {p} of variable {x} not forced above {t3}")

    nxt = BipartiteListAssignment(base, ba.a - 1, b_prime, u2, v2, r - 1, 1, check=False)
    return _unit(nxt, r - 1, run, depth + 1)


def _too_many(ba, s):
    raise _Stuck(reason=f"left list of {s} is not a singleton at list size 1")


def _unit_unique(ba, r, run, depth, forced, b_prime) -> Assignment:
    n, base = ba.n, ba.base
    sigma = Assignment.total(forced[x][0][x] for x in range(n))
    run.event(kind="unit-unique", depth=depth, r=r, a=ba.a, b=ba.b, assignment=list(sigma.values))
    if base.constraints:
        run.require("a >= 2", ba.a, 2)
    for c in base.constraints:
        if c.u == c.v:
            continue
        A = tuple(sorted((c.u, c.v)))
        f, blockers = forced_candidates(ba, A, b_prime)
        if not f:
            raise _Stuck(BlockingCertificate(ba, A, b_prime, tuple(sorted(blockers.items()))))
        fa = f[0]
        if fa[c.u] != sigma[c.u] or fa[c.v] != sigma[c.v]:
            raise _Stuck(reason=f"pair value {fa!r} disagrees with unique values on {A}")
    if not evaluate(base, sigma):
        raise _Stuck(reason="unique forced values violate a constraint")
    return sigma


def _diagnose_left(ba, s, mode):
    # search the right lists above s for a concrete violated pair
    for t in _supersets(s, ba.b, ba.n):
        if not _containment_ok(ba, s, t):
            raise _Stuck(InconsistentPair(ba, s, t, mode))


# -- right lists of size q --------------------------------------------------


def _restrict_to_unit(ba: BipartiteListAssignment, r: int, run: _Run):
    n = ba.n
    ub = run.pick(run.params.unit_b, unit_shape(r)[1], n)
    if not run.require("a >= r", ba.a, r) & run.require("b >= unit b", ba.b, ub):
        raise _Stuck(reason=f"cannot restrict (a, b) = ({ba.a}, {ba.b}) to ({r}, {ub})")
    if ba.a == r and ba.b == ub:
        return BipartiteListAssignment(ba.base, r, ub, ba.u, ba.v, r, 1, check=False)

    def u2(s2):
        s = lex_superset(s2, ba.a, n)
        return {restrict(y, s2) for y in ba.u(s)}

    def v2(t2):
        t = lex_superset(t2, ba.b, n)
        vals = ba.v(t)
        if len(vals) != 1:
            raise _Stuck(reason=f"right list of {t} is not a singleton")
        return {restrict(y, t2) for y in vals}

    return BipartiteListAssignment(ba.base, r, ub, u2, v2, r, 1, check=False)


def _lists(ba: BipartiteListAssignment, r: int, q: int, run: _Run, depth: int) -> Assignment:
    n = ba.n
    if not run.require("b <= |X|", n, ba.b) & run.require("|X| >= a", n, ba.a):
        raise _Stuck(reason=f"subset sizes a={ba.a}, b={ba.b} exceed {n} variables")
    if q == 1:
        run.event(kind="list-base", depth=depth, r=r, a=ba.a, b=ba.b)
        return _unit(_restrict_to_unit(ba, r, run), r, run, depth + 1)

    default_a, default_b = list_shape(r, q - 1)
    k = run.pick(run.params.k.get(q), unit_shape(r)[1], n)
    a2 = run.pick(run.params.a_prime.get(q), default_a, n)
    b2 = run.pick(run.params.b_prime.get(q), default_b, n)
    run.require("a >= k", ba.a, k)
    run.require("b >= r*b' + a", ba.b, r * b2 + ba.a)
    run.require("a >= (r+1)*(a' + k)", ba.a, (r + 1) * (a2 + k))

    chosen = {}
    for A in combinations(range(n), k):
        found = _case_split(ba, A, a2)
        if found is None:
            return _lists_peel(ba, r, q, run, depth, A, k, a2, b2)
        chosen[A] = found

    run.event(kind="list-collapse", depth=depth, r=r, q=q, a=ba.a, b=ba.b, k=k)
    fa = {A: f for A, (f, _) in chosen.items()}

    def u2(bset):
        vals = {restrict(f, bset) for A, f in fa.items() if set(bset) <= set(A)}
        if len(vals) > r:
            raise _Stuck(reason=f"collapsed left list of {bset} exceeds {r}")
        if not vals:
            raise _Stuck(reason=f"no k-subset contains {bset}")
        return vals

    def v2(A):
        return {fa[A]}

    nxt = BipartiteListAssignment(ba.base, r, k, u2, v2, r, 1, check=False)
    return _unit(nxt, r, run, depth + 1)


def _case_split(ba, A, a2):
    """None if every value on ``A`` is avoided above every a'-subset, else ``(f, S')``.

    The returned pair is the first (canonical order) value ``f`` and a'-subset
    ``S'`` such that every a-subset containing ``S' | A`` lists ``f`` on ``A``.
    """
    n = ba.n
    above = {s: {restrict(y, A) for y in ba.u(s)} for s in _supersets(A, ba.a, n)}
    am = _mask(A)
    masks = [(_mask(s), vals) for s, vals in above.items()]
    for f in partial_satisfying_assignments(ba.base, A):
        for s2 in combinations(range(n), a2):
            need = _mask(s2) | am
            if all(f in vals for sm, vals in masks if need & sm == need):
                return f, s2
    return None


def _lists_peel(ba, r, q, run, depth, A, k, a2, b2) -> Assignment:
    n = ba.n
    f, blockers = forced_candidates(ba, A, b2)
    if not f:
        raise _Stuck(BlockingCertificate(ba, A, b2, tuple(sorted(blockers.items()))))
    fa = f[0]
    run.event(kind="list-peel", depth=depth, r=r, q=q, a=ba.a, b=ba.b, k=k, a_prime=a2, b_prime=b2,
              subset=list(A), drop=list(fa.values))

    def u2(s2):
        for s in _supersets(set(s2) | set(A), ba.a, n):
            vals = ba.u(s)
            if fa not in {restrict(y, A) for y in vals}:
                return {restrict(y, s2) for y in vals}
        raise _Stuck(reason=f"no a-subset above {s2} avoids {fa!r}")

    def v2(t2):
        for t in _supersets(set(t2) | set(A), ba.b, n):
            vals = ba.v(t)
            if fa in {restrict(y, A) for y in vals}:
                kept = {restrict(y, t2) for y in vals if restrict(y, A) != fa}
                if not kept:
                    _diagnose_pairs(ba, t)
                    raise _Stuck(reason=f"right list of {t} holds only {fa!r} on {A}")
                return kept
        raise _Stuck(reason=f"{fa!r} is not forced above {t2}")

    # validated: peeled right lists must stay nonempty and within q - 1
    nxt = BipartiteListAssignment(ba.base, a2, b2, u2, v2, r, q - 1)
    return _lists(nxt, r, q - 1, run, depth + 1)


def _diagnose_pairs(ba, t):
    for s in ba.left_sets():
        if not _pair_consistent(ba, s, t):
            raise _Stuck(InconsistentPair(ba, s, t, "intersection"))


# -- entry points -----------------------------------------------------------


def _finish(ba, mode, run: _Run, body, samples, strict_premises, seed) -> DecoderOutcome:
    out = DecoderOutcome(trace=run.trace)
    pre = find_premise_violation(ba, mode, None if strict_premises else samples, seed)
    if pre is not None:
        out.certificate = pre
        return out
    try:
        sigma = body()
    except _Stuck as stuck:
        out.warnings = list(run.violations)
        top = None
        if _pair_count(ba, mode) <= EXHAUSTIVE_LIMIT:
            top = find_premise_violation(ba, mode, None)
        if top is not None:
            out.certificate = top
        elif run.violations:
            out.certificate = ParameterViolation(tuple(run.violations), stuck.certificate or stuck.reason)
        elif stuck.certificate is not None:
            out.certificate = stuck.certificate
        else:
            raise AssertionError(f"decoder stuck with valid premises and parameters: {stuck.reason}")
        run.event(kind="stuck", reason=stuck.reason or type(stuck.certificate).__name__)
        return out
    out.warnings = list(run.violations)
    if not evaluate(ba.base, sigma):
        raise AssertionError("decoder produced an unsatisfying assignment")
    out.assignment = sigma
    return out


def decode_unit(
    ba: BipartiteListAssignment,
    r: int | None = None,
    *,
    override: bool = False,
    params: DecodeParams | None = None,
    samples: int | None = PREMISE_SAMPLES,
    strict_premises: bool = False,
    seed: int = 0,
) -> DecoderOutcome:
    """Decode singleton right lists (premise ``v(T)|S in u(S)`` for S inside T).

    Strict shape: ``a = r`` and ``b = (2r)^r``.
    """
    r = ba.r if r is None else r
    if ba.q != 1:
        raise InvalidInput("decode_unit needs singleton right lists (q = 1)")
    if ba.r > r:
        raise InvalidInput(f"left bound {ba.r} exceeds r = {r}")
    run = _Run(override, params)
    run.require_shape("(a, b) = (r, (2r)^r)", (ba.a, ba.b), unit_shape(r))
    if not override:
        run.require("b <= |X|", ba.n, ba.b)
    return _finish(ba, "containment", run, lambda: _unit(ba, r, run, 0), samples, strict_premises, seed)


def decode(
    ba: BipartiteListAssignment,
    r: int | None = None,
    q: int | None = None,
    *,
    override: bool = False,
    params: DecodeParams | None = None,
    samples: int | None = PREMISE_SAMPLES,
    strict_premises: bool = False,
    seed: int = 0,
) -> DecoderOutcome:
    """Decode list-consistent ``u`` (size r) and ``v`` (size q).

    Strict shape: ``a = (2r)^(r+2q)`` and ``b = (2r)^(r+2q+2)``.
    """
    r = ba.r if r is None else r
    q = ba.q if q is None else q
    if ba.r > r or ba.q > q:
        raise InvalidInput(f"declared bounds ({ba.r},{ba.q}) exceed (r, q) = ({r},{q})")
    run = _Run(override, params)
    run.require_shape("(a, b) = ((2r)^(r+2q), (2r)^(r+2q+2))", (ba.a, ba.b), list_shape(r, q))
    if not override:
        run.require("b <= |X|", ba.n, ba.b)
    return _finish(ba, "intersection", run, lambda: _lists(ba, r, q, run, 0), samples, strict_premises, seed)


def theorem_shape(r: int) -> tuple[int, int, int]:
    """``(a, b, t)`` used for list size r (right lists bounded by r as well)."""
    a, b = list_shape(r, r)
    return a, b, b


def decode_theorem(
    base: CspInstance,
    m: MultiAssignment,
    r: int,
    *,
    a: int | None = None,
    b: int | None = None,
    q: int | None = None,
    override: bool = False,
    params: DecodeParams | None = None,
    samples: int | None = PREMISE_SAMPLES,
    strict_premises: bool = False,
    seed: int = 0,
) -> DecoderOutcome:
    """Decode a list assignment ``m`` of the t-wise direct product of ``base``.

    The lists are restricted to a- and b-subsets and passed to :func:`decode`
    with right bound ``q`` (default ``r``).
    """
    if m.max_size > r:
        raise InvalidInput(f"multi-assignment has lists of size {m.max_size} > r = {r}")
    q = r if q is None else q
    t = len(next(iter(m)))
    sa, sb = list_shape(r, q)
    a = sa if a is None else a
    b = sb if b is None else b
    if not override and (a, b) != (sa, sb):
        raise ParameterError("(a, b) = ((2r)^(r+2q), (2r)^(r+2q+2))", {"a": a, "b": b})
    if t < b or t < a:
        raise ParameterError("t >= b", {"t": t, "a": a, "b": b})
    u, v = restrict_product_lists(m, a, b)
    ba = BipartiteListAssignment(base, a, b, dict(u.items()), dict(v.items()), r, q)
    return decode(ba, r, q, override=override, params=params, samples=samples,
                  strict_premises=strict_premises, seed=seed)
