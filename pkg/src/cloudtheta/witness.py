"""Exact feasibility witnesses for the xor cloud graph's vector program.

When saturation does not refute a formula, its variables split into fixed
values plus signed equivalence classes.  Each clause then falls into one
of three shapes: three distinct free classes (4 legal local assignments),
one fixed variable and two slots of one class (2 legal), or three fixed
variables (1 legal).  Legal vertices receive vectors with entries in
{0, +-1/4, +-1/2, 1}; illegal vertices receive zero.  All arithmetic is
integer, on entries scaled by 4, so verification is exact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalInconsistencyError, InvalidInputError
from .formula import Formula
from .ge3 import Ge3Closure, is_legal
from .reduction import XOR_ORDER, CloudGraph, contradicts

SCALE = 4          # stored entry = SCALE * real entry
DOT_SCALE = 16     # stored dot = DOT_SCALE * real dot

# Slot of a classified clause: ("fixed", forced literal value) or
# ("free", class index, sign); literal value = class representative xor sign.
Slot = tuple


@dataclass(frozen=True)
class ClassClause:
    """One clause rewritten over fixed values and class representatives."""

    source: int
    slots: tuple[Slot, Slot, Slot]
    clause_type: int  # 1: three distinct classes, 2: one fixed, 3: all fixed


@dataclass(frozen=True)
class WitnessVectors:
    """Sparse vectors (coordinate -> entry*4) per xor-graph vertex.

    Coordinate 0 belongs to the anchor vector v0 = (1, 0, ...); coordinate
    j >= 1 belongs to free class j - 1.  Vector i corresponds to vertex i
    of the xor cloud graph built with the same clause order.
    """

    dim: int
    v0: dict[int, int]
    vectors: tuple[dict[int, int], ...]
    m: int


@dataclass(frozen=True)
class Violation:
    kind: str
    vertices: tuple[int, ...]
    detail: str


@dataclass(frozen=True)
class WitnessReport:
    objective: Fraction
    ok: bool
    violations: tuple[Violation, ...]
    pairs_checked: int


def classify(formula: Formula, closure: Ge3Closure) -> list[ClassClause]:
    """Rewrite each clause over the closure's fixed variables and classes.

    A consistent saturated closure leaves exactly three shapes possible;
    anything else means the closure was not saturated and is reported as an
    internal inconsistency.
    """
    if closure.refuted:
        raise InvalidInputError("closure is refuted; there is nothing to classify")
    out: list[ClassClause] = []
    for i, clause in enumerate(formula.clauses):
        slots: list[Slot] = []
        free_classes: list[int] = []
        for lit in clause.lits:
            forced = closure.fixed.get(lit.var)
            if forced is not None:
                slots.append(("fixed", forced ^ int(lit.negated)))
            else:
                idx, sign = closure.var_class[lit.var]
                slots.append(("free", idx, sign ^ int(lit.negated)))
                free_classes.append(idx)
        nfixed = 3 - len(free_classes)
        if nfixed == 0 and len(set(free_classes)) == 3:
            ctype = 1
        elif nfixed == 1 and len(set(free_classes)) == 1:
            ctype = 2
        elif nfixed == 3:
            ctype = 3
        else:
            raise InternalInconsistencyError(
                f"clause {i} has an impossible shape under a saturated closure: "
                f"{nfixed} fixed slots over classes {free_classes}")
        out.append(ClassClause(i, tuple(slots), ctype))
    return out


def build_vectors(formula: Formula, closure: Ge3Closure) -> WitnessVectors:
    """Assign a vector to every xor-graph vertex; zero to illegal vertices.

    Per cloud with k legal local assignments, each legal vertex gets
    1/k at coordinate 0 and +-1/k at each of its free class coordinates,
    the sign tracking the value forced on the class representative.
    """
    classified = classify(formula, closure)
    expected_legal = {1: 4, 2: 2, 3: 1}
    vectors: list[dict[int, int]] = []
    for cc, clause in zip(classified, formula.clauses):
        legal = [lv for lv in XOR_ORDER if is_legal(closure, clause, lv)]
        k = len(legal)
        if k != expected_legal[cc.clause_type]:
            raise InternalInconsistencyError(
                f"clause {cc.source} of type {cc.clause_type} has {k} legal "
                f"assignments, expected {expected_legal[cc.clause_type]}")
        unit = SCALE // k
        for lv in XOR_ORDER:
            if lv not in legal:
                vectors.append({})
                continue
            vec = {0: unit}
            for slot, val in zip(cc.slots, lv):
                if slot[0] != "free":
                    continue
                _, idx, sign = slot
                rep_val = val ^ sign
                coord = idx + 1
                entry = unit if rep_val == 1 else -unit
                prev = vec.get(coord)
                if prev is not None and prev != entry:
                    raise InternalInconsistencyError(
                        f"legal assignment {lv} of clause {cc.source} pins class "
                        f"{idx} both ways")
                vec[coord] = entry
            vectors.append(vec)
    return WitnessVectors(1 + closure.free_class_count, {0: SCALE},
                          tuple(vectors), formula.m)


def _dot(a: dict[int, int], b: dict[int, int]) -> int:
    if len(b) < len(a):
        a, b = b, a
    return sum(val * b.get(k, 0) for k, val in a.items())


def verify(witness: WitnessVectors, graph: CloudGraph, formula: Formula,
           exhaustive: bool | None = None, sample_pairs: int = 200,
           seed: int = 0) -> WitnessReport:
    """Check the witness against the vector program the graph defines.

    Checks, all in exact integer arithmetic: v0 is a unit vector, every
    vector's squared norm equals its inner product with v0, adjacent
    vertices have orthogonal vectors, all checked pairs have nonnegative
    inner products, and the total objective equals the cloud count.

    Pair coverage: exhaustive when the graph is small (or forced via
    ``exhaustive=True``); otherwise all same-cloud pairs, all pairs sharing
    a free class coordinate, and a seeded random sample of the rest.  Pairs
    sharing no coordinate but 0 have nonnegative products by construction.
    """
    if graph.variant != "xor":
        raise InvalidInputError(f"witness applies to the xor variant, got {graph.variant!r}")
    nv = graph.num_vertices
    if len(witness.vectors) != nv or witness.m != graph.cloud_count:
        raise InvalidInputError(
            f"witness has {len(witness.vectors)} vectors for a graph with {nv} vertices")

    violations: list[Violation] = []
    v0 = witness.v0
    if _dot(v0, v0) != DOT_SCALE:
        violations.append(Violation("v0-unit", (), f"<v0,v0> = {_dot(v0, v0)}/{DOT_SCALE}"))

    objective = 0
    for u, vec in enumerate(witness.vectors):
        sq = _dot(vec, vec)
        anchor = _dot(vec, v0)
        if sq != anchor:
            violations.append(Violation(
                "norm-link", (u,), f"<v,v> = {sq}/{DOT_SCALE} but <v,v0> = {anchor}/{DOT_SCALE}"))
        objective += anchor

    def check_pair(u: int, v: int) -> None:
        d = _dot(witness.vectors[u], witness.vectors[v])
        if d < 0:
            violations.append(Violation("nonnegativity", (u, v), f"<u,v> = {d}/{DOT_SCALE}"))
        if d != 0:
            vu, vv = graph.vertices[u], graph.vertices[v]
            if vu.clause_idx == vv.clause_idx or contradicts(formula, vu, vv):
                violations.append(Violation(
                    "edge-orthogonality", (u, v), f"<u,v> = {d}/{DOT_SCALE} on an edge"))

    if exhaustive is None:
        exhaustive = nv <= 600

    pairs = 0
    if exhaustive:
        for u in range(nv):
            for v in range(u + 1, nv):
                check_pair(u, v)
        pairs = nv * (nv - 1) // 2
    else:
        seen: set[tuple[int, int]] = set()
        for start, stop in graph.clouds:
            for u in range(start, stop):
                for v in range(u + 1, stop):
                    seen.add((u, v))
        buckets: dict[int, list[int]] = {}
        for u, vec in enumerate(witness.vectors):
            for coord in vec:
                if coord:
                    buckets.setdefault(coord, []).append(u)
        for members in buckets.values():
            for i in range(len(members)):
                for j in range(i + 1, len(members)):
                    seen.add((members[i], members[j]))
        rng = random.Random(seed)
        for _ in range(sample_pairs):
            u = rng.randrange(nv)
            v = rng.randrange(nv)
            if u != v:
                seen.add((min(u, v), max(u, v)))
        for u, v in seen:
            check_pair(u, v)
        pairs = len(seen)

    obj = Fraction(objective, DOT_SCALE)
    if obj != witness.m:
        violations.append(Violation("objective", (), f"sum <v0,v> = {obj}, expected {witness.m}"))

    # Deduplicate while keeping first-seen order.
    uniq: list[Violation] = []
    marked: set[tuple] = set()
    for viol in violations:
        key = (viol.kind, viol.vertices)
        if key not in marked:
            marked.add(key)
            uniq.append(viol)
    return WitnessReport(obj, not uniq, tuple(uniq), pairs)


def witness_to_json(witness: WitnessVectors) -> dict:
    """JSON-ready form: scaled sparse entries as [coordinate, numerator*4] pairs."""
    return {
        "dim": witness.dim,
        "scale": SCALE,
        "m": witness.m,
        "v0": [[k, v] for k, v in sorted(witness.v0.items())],
        "vectors": [
            [[k, v] for k, v in sorted(vec.items())] for vec in witness.vectors
        ],
    }
