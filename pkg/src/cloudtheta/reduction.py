"""Clause-cloud graphs: one small vertex cloud per clause, edges for conflicts.

Each clause contributes a cloud of vertices, one per satisfying local
assignment of its three literals.  The "xor" variant keeps the four
odd-weight assignments; the "full" variant keeps all seven satisfying
assignments.  Two vertices conflict when they assign a shared variable
differently; conflicting vertices and same-cloud vertices are adjacent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator

import numpy as np

from .errors import InvalidInputError, ParseError
from .formula import Formula

# Local assignments are triples of literal truth values, in clause literal
# order.  The odd-weight block comes first so the xor-variant graph is the
# per-cloud prefix of the full-variant graph.
XOR_ORDER: tuple[tuple[int, int, int], ...] = ((1, 1, 1), (0, 1, 0), (1, 0, 0), (0, 0, 1))
EVEN_TAIL: tuple[tuple[int, int, int], ...] = ((1, 1, 0), (1, 0, 1), (0, 1, 1))
FULL_ORDER: tuple[tuple[int, int, int], ...] = XOR_ORDER + EVEN_TAIL

DENSE_LIMIT_DEFAULT = 4096


@dataclass(frozen=True)
class CloudVertex:
    """One satisfying local assignment of one clause's literals."""

    clause_idx: int
    lit_values: tuple[int, int, int]


def vertex_var_value(formula: Formula, vertex: CloudVertex, var: int) -> int | None:
    """Value the vertex induces on a variable, or None if the clause skips it."""
    clause = formula.clauses[vertex.clause_idx]
    for lit, lv in zip(clause.lits, vertex.lit_values):
        if lit.var == var:
            return lv ^ int(lit.negated)
    return None


def contradicts(formula: Formula, u: CloudVertex, v: CloudVertex) -> bool:
    """True when u and v assign some shared variable opposite values."""
    cu = formula.clauses[u.clause_idx]
    vals = {lit.var: lv ^ int(lit.negated) for lit, lv in zip(cu.lits, u.lit_values)}
    cv = formula.clauses[v.clause_idx]
    for lit, lv in zip(cv.lits, v.lit_values):
        want = vals.get(lit.var)
        if want is not None and want != lv ^ int(lit.negated):
            return True
    return False


@dataclass
class CloudGraph:
    """The conflict graph over clause clouds, dense or edge-list backed."""

    variant: str
    formula_n: int
    vertices: tuple[CloudVertex, ...]
    clouds: tuple[tuple[int, int], ...]
    dense: np.ndarray | None = None
    edge_list: tuple[tuple[int, int], ...] | None = None
    _edge_set: frozenset[tuple[int, int]] | None = field(default=None, repr=False)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def cloud_count(self) -> int:
        return len(self.clouds)

    @property
    def edge_count(self) -> int:
        if self.dense is not None:
            return int(np.count_nonzero(self.dense)) // 2
        return len(self.edge_list)

    def is_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        if self.dense is not None:
            return bool(self.dense[u, v])
        if self._edge_set is None:
            self._edge_set = frozenset(self.edge_list)
        return (min(u, v), max(u, v)) in self._edge_set

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as sorted (u, v) pairs with u < v, in lexicographic order."""
        if self.dense is not None:
            for u, v in zip(*np.nonzero(np.triu(self.dense, 1))):
                yield int(u), int(v)
        else:
            yield from self.edge_list

    def adjacency_matrix(self) -> np.ndarray:
        if self.dense is not None:
            return self.dense
        adj = np.zeros((self.num_vertices, self.num_vertices), dtype=bool)
        for u, v in self.edge_list:
            adj[u, v] = adj[v, u] = True
        return adj


def build_graph(formula: Formula, variant: str = "xor",
                dense_limit: int = DENSE_LIMIT_DEFAULT) -> CloudGraph:
    """Build the cloud graph of a formula in the given variant ("xor" or "full")."""
    if variant == "xor":
        order = XOR_ORDER
    elif variant == "full":
        order = FULL_ORDER
    else:
        raise InvalidInputError(f"unknown variant {variant!r}, expected 'xor' or 'full'")

    k = len(order)
    m = formula.m
    total = k * m
    vertices: list[CloudVertex] = []
    clouds: list[tuple[int, int]] = []
    for i in range(m):
        clouds.append((k * i, k * (i + 1)))
        for lv in order:
            vertices.append(CloudVertex(i, lv))

    # Per clause: variable values per local assignment, row j = order[j].
    var_vals: list[list[tuple[int, ...]]] = []
    for c in formula.clauses:
        negs = tuple(int(l.negated) for l in c.lits)
        var_vals.append([tuple(lv[s] ^ negs[s] for s in range(3)) for lv in order])

    var_to_clauses: dict[int, list[int]] = {}
    for i, c in enumerate(formula.clauses):
        for v in c.variables:
            var_to_clauses.setdefault(v, []).append(i)

    # Clause pairs sharing at least one variable, with shared slot positions.
    pair_slots: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for var, owners in var_to_clauses.items():
        # owners is strictly increasing, so combinations yield i < j.
        for i, j in combinations(owners, 2):
            slots = pair_slots.setdefault((i, j), [])
            slots.append((formula.clauses[i].variables.index(var),
                          formula.clauses[j].variables.index(var)))

    dense = total <= dense_limit
    adj = np.zeros((total, total), dtype=bool) if dense else None
    edge_list: list[tuple[int, int]] = []

    for start, stop in clouds:
        if dense:
            adj[start:stop, start:stop] = True
        else:
            for u, v in combinations(range(start, stop), 2):
                edge_list.append((u, v))
    if dense:
        np.fill_diagonal(adj, False)

    for (i, j), slots in pair_slots.items():
        vi, vj = var_vals[i], var_vals[j]
        base_i, base_j = k * i, k * j
        for a in range(k):
            row = vi[a]
            for b in range(k):
                col = vj[b]
                for si, sj in slots:
                    if row[si] != col[sj]:
                        if dense:
                            adj[base_i + a, base_j + b] = True
                            adj[base_j + b, base_i + a] = True
                        else:
                            edge_list.append((base_i + a, base_j + b))
                        break

    if dense:
        return CloudGraph(variant, formula.n, tuple(vertices), tuple(clouds), dense=adj)
    edge_list.sort()
    return CloudGraph(variant, formula.n, tuple(vertices), tuple(clouds),
                      edge_list=tuple(edge_list))


def to_dimacs_graph(graph: CloudGraph) -> str:
    """Serialize as DIMACS 'p edge' with 1-based vertex ids."""
    lines = [f"p edge {graph.num_vertices} {graph.edge_count}"]
    for u, v in graph.edges():
        lines.append(f"e {u + 1} {v + 1}")
    return "\n".join(lines) + "\n"


def vertex_sidecar(graph: CloudGraph) -> dict:
    """JSON-ready map from graph vertices back to clauses and local assignments."""
    return {
        "variant": graph.variant,
        "n": graph.formula_n,
        "clouds": [list(c) for c in graph.clouds],
        "vertices": [
            {"clause": v.clause_idx, "lit_values": list(v.lit_values)}
            for v in graph.vertices
        ],
    }


def parse_dimacs_graph(text: str) -> tuple[int, list[tuple[int, int]]]:
    """Parse DIMACS 'p edge' into (vertex count, sorted 0-based edge pairs)."""
    num = None
    edges: list[tuple[int, int]] = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        parts = stripped.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "edge":
                raise ParseError(f"expected 'p edge N E' header, got {stripped!r}")
            num = int(parts[2])
        elif parts[0] == "e":
            if num is None:
                raise ParseError("edge line before 'p edge' header")
            if len(parts) != 3:
                raise ParseError(f"malformed edge line {stripped!r}")
            u, v = int(parts[1]) - 1, int(parts[2]) - 1
            if not (0 <= u < num and 0 <= v < num) or u == v:
                raise ParseError(f"edge endpoints out of range: {stripped!r}")
            edges.append((min(u, v), max(u, v)))
        else:
            raise ParseError(f"unrecognized line {stripped!r}")
    if num is None:
        raise ParseError("missing 'p edge N E' header")
    return num, sorted(set(edges))
