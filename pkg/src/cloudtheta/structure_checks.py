"""Finite-scale structural probes for small formulas and subformulas.

These are desk-scale tools: a matching-based satisfiability check for
small subformulas, counters for variables private to one clause, an
exhaustive minimal-implying-subformula search, and a finder for the
smallest four-clause shape whose parity views add up to 0 = 1.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import InvalidInputError, ResourceLimitError
from .formula import Clause3, Formula, Literal, XorEquation, to_xor


def hall_satisfiable(clauses: Sequence[Clause3]) -> bool:
    """True when each clause can be matched to its own private variable.

    A system of distinct representatives lets every clause be satisfied by
    setting its matched variable, so a perfect matching on the clause side
    implies CNF satisfiability of the subformula.
    """
    clause_vars = [list(c.variables) for c in clauses]
    variables = sorted({v for vs in clause_vars for v in vs})
    if len(clauses) > len(variables):
        return False
    owner: dict[int, int] = {}

    def augment(ci: int, visited: set[int]) -> bool:
        for v in clause_vars[ci]:
            if v in visited:
                continue
            visited.add(v)
            if v not in owner or augment(owner[v], visited):
                owner[v] = ci
                return True
        return False

    for ci in range(len(clauses)):
        if not augment(ci, set()):
            return False
    return True


def special_variables(clauses: Sequence[Clause3]) -> set[int]:
    """Variables that occur in exactly one clause of the subformula."""
    counts: dict[int, int] = {}
    for c in clauses:
        for v in c.variables:
            counts[v] = counts.get(v, 0) + 1
    return {v for v, k in counts.items() if k == 1}


def _var_masks(n: int) -> list[int]:
    """masks[i] has assignment-bit a set iff variable i+1 is true under a."""
    full_bits = 1 << n
    masks = []
    for i in range(n):
        width = 1 << (i + 1)
        pattern = ((1 << (1 << i)) - 1) << (1 << i)
        repunit = ((1 << full_bits) - 1) // ((1 << width) - 1)
        masks.append(pattern * repunit)
    return masks


def _equation_mask(eq: XorEquation, masks: list[int], full: int) -> int:
    parity = 0
    for v in eq.vars:
        parity ^= masks[v - 1]
    return parity if eq.rhs == 1 else ~parity & full


BRUTE_FORCE_LIMIT = 20


def xor_satisfiable(formula: Formula) -> bool:
    """Brute-force check that some assignment odd-satisfies every clause."""
    if formula.n > BRUTE_FORCE_LIMIT:
        raise ResourceLimitError(
            f"brute force is limited to n <= {BRUTE_FORCE_LIMIT}, got n = {formula.n}")
    masks = _var_masks(formula.n)
    full = (1 << (1 << formula.n)) - 1
    sat = full
    for c in formula.clauses:
        sat &= _equation_mask(to_xor(c), masks, full)
        if sat == 0:
            return False
    return bool(sat)


def mu(formula: Formula, target: XorEquation, limit: int | None = None) -> int | None:
    """Size of the smallest subformula whose parity views imply the target.

    Implication is over all 2^n assignments (an unsatisfiable subformula
    implies everything), checked exhaustively; refuses n above the brute
    force limit.  Returns None when no subformula of size <= limit implies
    the target.
    """
    if formula.n > BRUTE_FORCE_LIMIT:
        raise ResourceLimitError(
            f"mu is exhaustive and limited to n <= {BRUTE_FORCE_LIMIT}, got n = {formula.n}")
    for v in target.vars:
        if v > formula.n:
            raise InvalidInputError(f"target variable {v} exceeds n = {formula.n}")
    masks = _var_masks(formula.n)
    full = (1 << (1 << formula.n)) - 1
    target_mask = _equation_mask(target, masks, full)
    if limit is None:
        limit = formula.m

    clause_masks = []
    seen = set()
    for c in formula.clauses:
        eq = to_xor(c)
        if eq not in seen:
            seen.add(eq)
            clause_masks.append(_equation_mask(eq, masks, full))
    if target_mask == full:
        return 0
    for size in range(1, min(limit, len(clause_masks)) + 1):
        for combo in combinations(clause_masks, size):
            acc = full
            for cm in combo:
                acc &= cm
            if acc & ~target_mask & full == 0:
                return size
    return None


@dataclass(frozen=True)
class PatternHit:
    """Four clauses whose parity views cancel to 0 = 1.

    Clauses indices[0] and indices[1] share two identical literals, as do
    indices[2] and indices[3].  The leftover third literals link the pairs:
    thirds[2] equals thirds[0] and thirds[3] is the complement of
    thirds[1].
    """

    indices: tuple[int, int, int, int]
    shared: tuple[tuple[Literal, Literal], tuple[Literal, Literal]]
    thirds: tuple[Literal, Literal, Literal, Literal]


def _matched_pairs(formula: Formula) -> list[tuple[int, int, tuple[Literal, Literal], Literal, Literal]]:
    """All (i, j, shared pair, third_i, third_j) with two identical shared literals."""
    by_lit: dict[Literal, list[int]] = {}
    for i, c in enumerate(formula.clauses):
        for lit in c.lits:
            by_lit.setdefault(lit, []).append(i)
    candidates: set[tuple[int, int]] = set()
    for owners in by_lit.values():
        for i, j in combinations(owners, 2):
            candidates.add((i, j))
    out = []
    for i, j in sorted(candidates):
        si = set(formula.clauses[i].lits)
        sj = set(formula.clauses[j].lits)
        shared = sorted(si & sj)
        if len(shared) < 2:
            continue
        for pair in combinations(shared, 2):
            third_i = next(l for l in si - set(pair))
            third_j = next(l for l in sj - set(pair))
            out.append((i, j, pair, third_i, third_j))
    return out


def matched_pair_count(formula: Formula) -> int:
    """Unordered clause pairs sharing at least two identical literals."""
    seen = {(i, j) for i, j, _, _, _ in _matched_pairs(formula)}
    return len(seen)


def find_pattern(formula: Formula) -> list[PatternHit]:
    """Find all four-clause shapes whose parity views add up to 0 = 1.

    Two matched pairs are joined when one leftover third literal repeats
    identically across the pairs and the other repeats complemented.  Each
    reported hit is verified by summing the four parity views.
    """
    pairs = _matched_pairs(formula)
    by_third: dict[Literal, list[int]] = {}
    for idx, (_, _, _, ti, tj) in enumerate(pairs):
        by_third.setdefault(ti, []).append(idx)
        by_third.setdefault(tj, []).append(idx)

    hits: list[PatternHit] = []
    emitted: set[tuple] = set()
    for p_idx, (i, j, shared_p, ti, tj) in enumerate(pairs):
        for c1_idx, c2_idx, t1, t2 in ((i, j, ti, tj), (j, i, tj, ti)):
            want_other = t2.complement()
            for q_idx in by_third.get(t1, ()):
                if q_idx == p_idx:
                    continue
                k, l, shared_q, tk, tl = pairs[q_idx]
                for c3_idx, c4_idx, t3, t4 in ((k, l, tk, tl), (l, k, tl, tk)):
                    if t3 != t1 or t4 != want_other:
                        continue
                    quad = (c1_idx, c2_idx, c3_idx, c4_idx)
                    if len(set(quad)) != 4:
                        continue
                    # Pair-swap symmetry: keep the pair holding the smallest index first.
                    if min(quad) in (c3_idx, c4_idx):
                        continue
                    key = (quad, shared_p, shared_q)
                    if key in emitted:
                        continue
                    total_vars: set[int] = set()
                    total_rhs = 0
                    for ci in quad:
                        eq = to_xor(formula.clauses[ci])
                        total_vars ^= set(eq.vars)
                        total_rhs ^= eq.rhs
                    if total_vars or total_rhs != 1:
                        continue
                    emitted.add(key)
                    hits.append(PatternHit(quad, (shared_p, shared_q), (t1, t2, t3, t4)))
    hits.sort(key=lambda h: h.indices)
    return hits


def small_subformula_size(n: int) -> int:
    """The reference subformula size max(2, ceil(ln n / (4 ln ln n)))."""
    if n < 3:
        return 2
    inner = math.log(math.log(n))
    if inner <= 0:
        return 2
    return max(2, math.ceil(math.log(n) / (4.0 * inner)))


def subformula_report(formula: Formula, sizes: Iterable[int] | None = None,
                      samples: int = 50, seed: int = 0) -> dict:
    """Monte Carlo sample of subformulas: matching failures, few-special counts.

    Informational only; tail events at small n are expected and not errors.
    """
    k = small_subformula_size(formula.n)
    if sizes is None:
        sizes = sorted({max(2, math.ceil(k / 3)), max(2, (2 * k) // 3), k})
    rng = random.Random(seed)
    report: dict = {"n": formula.n, "m": formula.m, "k": k, "sizes": {}}
    for size in sizes:
        if size > formula.m:
            continue
        hall_fail = 0
        few_special = 0
        for _ in range(samples):
            idxs = rng.sample(range(formula.m), size)
            sub = [formula.clauses[i] for i in idxs]
            if not hall_satisfiable(sub):
                hall_fail += 1
            if len(special_variables(sub)) < 4:
                few_special += 1
        report["sizes"][size] = {
            "samples": samples,
            "hall_failures": hall_fail,
            "fewer_than_4_special": few_special,
        }
    return report
