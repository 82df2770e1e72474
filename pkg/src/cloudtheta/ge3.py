"""A deliberately weak mod-2 derivation system over 3-variable equations.

The only inference rule adds two already-derived equations and simplifies
mod 2 (repeated variables cancel).  The result is kept only when it has at
most three variables.  Deriving the empty equation 0 = 1 refutes the
system; the empty equation 0 = 0 is vacuous.

Saturation tracks the derivable structure in a reduced form: single-variable
equations become fixed values, two-variable equations merge variables into
signed classes, and three-variable equations are stored rewritten over class
representatives.  Every rewriting step is itself a legal two-equation
addition and is recorded, so refutation traces replay step by step.  The
full fixpoint (which also contains every sum of fixed-variable equations,
cubically many) is generated by this reduced set; ``derivable`` answers
membership queries against it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Mapping, Sequence

from .errors import InvalidInputError, ResourceLimitError
from .formula import Clause3, Formula, XorEquation, to_xor

# A derivation step: (left operand, right operand, simplified sum).
DerivationStep = tuple[XorEquation, XorEquation, XorEquation]

_EMPTY_TRUE = XorEquation((), 1)


def add_equations(e1: XorEquation, e2: XorEquation) -> XorEquation | None:
    """Sum two equations mod 2; None if wider than 3 variables or vacuous."""
    vs = sorted(set(e1.vars) ^ set(e2.vars))
    if len(vs) > 3:
        return None
    rhs = e1.rhs ^ e2.rhs
    if not vs and rhs == 0:
        return None
    return XorEquation(tuple(vs), rhs)


def default_equation_cap(n: int) -> int:
    """Count of all possible equations on <= 3 of n variables, plus both empties."""
    return 8 * comb(n, 3) + 4 * comb(n, 2) + 2 * n + 2


@dataclass(frozen=True)
class Ge3Closure:
    """Saturated derivable structure of a formula, or a refutation trace.

    When not refuted: ``fixed`` maps variables to forced values, the free
    variables are grouped into ``classes`` of pairwise linked variables,
    and ``equations`` holds the sources plus a reduced generating set of
    everything derivable.  Each class lists (var, sign) members; the first
    member is the representative with sign 0, and var = representative xor
    sign.  ``rep_equations`` holds the stored three-variable equations in
    class-index coordinates, for derivability queries.
    """

    n: int
    sources: frozenset[XorEquation]
    equations: frozenset[XorEquation]
    refuted: bool
    trace: tuple[DerivationStep, ...] | None
    fixed: Mapping[int, int]
    classes: tuple[tuple[tuple[int, int], ...], ...]
    var_class: Mapping[int, tuple[int, int]]
    rep_equations: frozenset[tuple[tuple[int, ...], int]] = frozenset()

    @property
    def derived(self) -> frozenset[XorEquation]:
        return self.equations - self.sources

    @property
    def free_class_count(self) -> int:
        return len(self.classes)


class _Refuted(Exception):
    """Internal signal: 0 = 1 was derived."""

    def __init__(self, eq: XorEquation) -> None:
        self.eq = eq


class _Engine:
    """Worklist saturation over the reduced equation representation."""

    def __init__(self, n: int, cap: int) -> None:
        self.n = n
        self.cap = cap
        self.parents: dict[XorEquation, tuple[XorEquation, XorEquation]] = {}
        self.source_set: set[XorEquation] = set()
        # Free-variable structure.  rep maps a free variable to its class
        # representative; link_eq[x] is the materialized equation {x, rep}=sign
        # for non-representatives; members lists each class by representative.
        self.rep: dict[int, int] = {}
        self.link_eq: dict[int, XorEquation] = {}
        self.members: dict[int, list[int]] = {}
        self.fix_eq: dict[int, XorEquation] = {}
        # Three-variable equations over distinct free representatives.
        self.store: dict[tuple[int, int, int], XorEquation] = {}
        self.by_pair: dict[tuple[int, int], set[XorEquation]] = {}
        self.queue: deque[XorEquation] = deque()

    def class_rep(self, x: int) -> int:
        return self.rep.get(x, x)

    def derive(self, a: XorEquation, b: XorEquation) -> XorEquation | None:
        r = add_equations(a, b)
        if r is None:
            return None
        if r not in self.parents and r not in self.source_set:
            if len(self.parents) + len(self.source_set) + 1 > self.cap:
                raise ResourceLimitError(
                    f"equation cap {self.cap} exceeded during saturation")
            self.parents[r] = (a, b)
        return r

    def add_source(self, e: XorEquation) -> None:
        if e not in self.source_set:
            if len(self.parents) + len(self.source_set) + 1 > self.cap:
                raise ResourceLimitError(f"equation cap {self.cap} exceeded by the inputs")
            self.source_set.add(e)
            self.queue.append(e)

    def normalize(self, e: XorEquation) -> XorEquation | None:
        """Substitute fixed values and class representatives, one legal
        addition at a time; None when the equation becomes vacuous."""
        while True:
            for x in e.vars:
                if x in self.fix_eq:
                    nxt = self.derive(e, self.fix_eq[x])
                    break
                if self.class_rep(x) != x:
                    nxt = self.derive(e, self.link_eq[x])
                    break
            else:
                return e
            if nxt is None:
                return None
            if not nxt.vars:
                if nxt.rhs == 1:
                    raise _Refuted(nxt)
                return None
            e = nxt

    def unstore(self, key: tuple[int, int, int]) -> XorEquation:
        e = self.store.pop(key)
        for p in combinations(key, 2):
            self.by_pair[p].discard(e)
        return e

    def apply_fix(self, e: XorEquation) -> None:
        """e is a normalized {r} = v over a free representative r."""
        r, v = e.vars[0], e.rhs
        group = self.members.pop(r, [r])
        for x in group:
            self.fix_eq[x] = e if x == r else self.derive(self.link_eq[x], e)
            self.rep.pop(x, None)
            self.link_eq.pop(x, None)
        # Stored equations are representative-pure, so only r can occur.
        for key in [k for k in self.store if r in k]:
            self.queue.append(self.unstore(key))

    def apply_link(self, e: XorEquation) -> None:
        """e is a normalized {r1, r2} = q over two free representatives."""
        r1, r2 = e.vars
        g1 = self.members.setdefault(r1, [r1])
        g2 = self.members.setdefault(r2, [r2])
        if len(g1) < len(g2):
            r1, r2 = r2, r1
            g1, g2 = g2, g1
        for x in g2:
            self.link_eq[x] = e if x == r2 else self.derive(self.link_eq[x], e)
            self.rep[x] = r1
        g1.extend(g2)
        del self.members[r2]
        for key in [k for k in self.store if r2 in k]:
            self.queue.append(self.unstore(key))

    def apply_store(self, e: XorEquation) -> None:
        key = e.vars
        held = self.store.get(key)
        if held is not None:
            if held.rhs != e.rhs:
                r = self.derive(e, held)
                if r is not None and not r.vars and r.rhs == 1:
                    raise _Refuted(r)
            return
        self.store[key] = e
        cands: set[XorEquation] = set()
        for p in combinations(key, 2):
            bucket = self.by_pair.setdefault(p, set())
            cands |= bucket
            bucket.add(e)
        for q in sorted(cands, key=lambda x: (x.vars, x.rhs)):
            r = self.derive(e, q)
            if r is None:
                continue
            if not r.vars:
                if r.rhs == 1:
                    raise _Refuted(r)
                continue
            self.queue.append(r)

    def run(self) -> None:
        while self.queue:
            e = self.normalize(self.queue.popleft())
            if e is None:
                continue
            if e.width == 1:
                self.apply_fix(e)
            elif e.width == 2:
                self.apply_link(e)
            else:
                self.apply_store(e)


def saturate(formula: Formula, max_equations: int | None = None) -> Ge3Closure:
    """Close the formula's parity views under pairwise addition.

    Stops immediately if 0 = 1 appears, recording a replayable derivation
    trace.  Raises ResourceLimitError when more than ``max_equations``
    distinct equations are created (default: the count of all possible
    equations, which cannot trigger).
    """
    cap = default_equation_cap(formula.n) if max_equations is None else max_equations
    engine = _Engine(formula.n, cap)
    try:
        for c in formula.clauses:
            engine.add_source(to_xor(c))
        engine.run()
    except _Refuted as hit:
        trace = _build_trace(hit.eq, engine.parents, engine.source_set)
        equations = frozenset(engine.source_set) | {r for _, _, r in trace}
        return Ge3Closure(formula.n, frozenset(engine.source_set), equations,
                          True, trace, {}, (), {})

    fixed = {x: eq.rhs for x, eq in engine.fix_eq.items()}

    classes: list[tuple[tuple[int, int], ...]] = []
    var_class: dict[int, tuple[int, int]] = {}
    internal_sign = {}
    for root, group in engine.members.items():
        for x in group:
            internal_sign[x] = 0 if x == root else engine.link_eq[x].rhs
    ordered_roots = sorted(engine.members, key=lambda r: min(engine.members[r]))
    # Singleton classes for variables never linked or fixed.
    all_grouped = set(fixed) | set(internal_sign)
    entries: list[tuple[int, list[int]]] = []
    for root in ordered_roots:
        entries.append((min(engine.members[root]), sorted(engine.members[root])))
    for v in range(1, formula.n + 1):
        if v not in all_grouped:
            entries.append((v, [v]))
            internal_sign[v] = 0
    entries.sort()
    for _, group in entries:
        idx = len(classes)
        rep_sign = internal_sign[group[0]]
        cls = tuple((x, internal_sign[x] ^ rep_sign) for x in group)
        classes.append(cls)
        for x, s in cls:
            var_class[x] = (idx, s)

    rep_level: set[tuple[tuple[int, ...], int]] = set()
    for key, eq in engine.store.items():
        idxs = []
        rhs = eq.rhs
        for v in key:
            ci, sign = var_class[v]
            idxs.append(ci)
            rhs ^= sign
        rep_level.add((tuple(sorted(idxs)), rhs))

    equations = (frozenset(engine.source_set) | set(engine.store.values())
                 | set(engine.fix_eq.values()) | set(engine.link_eq.values()))
    return Ge3Closure(formula.n, frozenset(engine.source_set), frozenset(equations),
                      False, None, fixed, tuple(classes), var_class,
                      frozenset(rep_level))


def _build_trace(goal: XorEquation,
                 parents: dict[XorEquation, tuple[XorEquation, XorEquation]],
                 sources: set[XorEquation]) -> tuple[DerivationStep, ...]:
    """Topologically ordered steps ending with the goal equation."""
    steps: list[DerivationStep] = []
    emitted: set[XorEquation] = set()
    stack: list[tuple[XorEquation, bool]] = [(goal, False)]
    while stack:
        eq, expanded = stack.pop()
        if eq in emitted or eq in sources or eq not in parents:
            continue
        a, b = parents[eq]
        if expanded:
            steps.append((a, b, eq))
            emitted.add(eq)
        else:
            stack.append((eq, True))
            stack.append((b, False))
            stack.append((a, False))
    return tuple(steps)


def class_normal_form(closure: Ge3Closure, eq: XorEquation) -> tuple[tuple[int, ...], int]:
    """Rewrite an equation over the closure's class indices, folding signs."""
    if closure.refuted:
        raise InvalidInputError("closure is refuted; normal forms are undefined")
    acc: set[int] = set()
    rhs = eq.rhs
    for v in eq.vars:
        if v > closure.n:
            raise InvalidInputError(f"variable {v} exceeds n = {closure.n}")
        forced = closure.fixed.get(v)
        if forced is not None:
            rhs ^= forced
            continue
        idx, sign = closure.var_class[v]
        rhs ^= sign
        acc ^= {idx}
    return tuple(sorted(acc)), rhs


def derivable(closure: Ge3Closure, eq: XorEquation) -> bool:
    """Whether the full (unreduced) fixpoint contains the equation."""
    key, rhs = class_normal_form(closure, eq)
    if not key:
        return rhs == 0
    if len(key) == 3:
        return (key, rhs) in closure.rep_equations
    return False


def is_legal(closure: Ge3Closure, clause: Clause3, lit_values: Sequence[int]) -> bool:
    """Whether a local assignment of a clause survives the closure's constraints.

    A local assignment is illegal when it sets a fixed variable against its
    forced value, or sets two variables of one class inconsistently with
    their signs.
    """
    if closure.refuted:
        raise InvalidInputError("closure is refuted; no assignment is meaningful")
    pinned: dict[int, int] = {}
    for lit, lv in zip(clause.lits, lit_values):
        val = lv ^ int(lit.negated)
        forced = closure.fixed.get(lit.var)
        if forced is not None:
            if forced != val:
                return False
            continue
        idx, sign = closure.var_class[lit.var]
        rep_val = val ^ sign
        prev = pinned.get(idx)
        if prev is None:
            pinned[idx] = rep_val
        elif prev != rep_val:
            return False
    return True


def closure_to_json(closure: Ge3Closure) -> dict:
    """JSON-ready summary: equations, verdict, trace, fixed values, classes."""
    def enc(e: XorEquation) -> dict:
        return {"vars": list(e.vars), "rhs": e.rhs}

    out: dict = {
        "n": closure.n,
        "refuted": closure.refuted,
        "source_count": len(closure.sources),
        "equation_count": len(closure.equations),
        "equations": [enc(e) for e in sorted(closure.equations,
                                             key=lambda x: (x.width, x.vars, x.rhs))],
    }
    if closure.refuted:
        out["trace"] = [
            {"left": enc(a), "right": enc(b), "result": enc(r)}
            for a, b, r in closure.trace
        ]
    else:
        out["fixed"] = {str(v): val for v, val in sorted(closure.fixed.items())}
        out["classes"] = [
            [{"var": v, "sign": s} for v, s in cls] for cls in closure.classes
        ]
    return out
