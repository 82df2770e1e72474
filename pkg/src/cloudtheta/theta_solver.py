"""A small dense solver for the vector-program bound on cloud graphs.

The program, over a Gram matrix M of vectors (v0, v1, ..., vN):
maximize sum_i M[0,i] subject to M[0,0] = 1, M[i,i] = M[0,i] for every
vertex i, M[i,j] = 0 on edges, every entry nonnegative, and M positive
semidefinite.  On graphs that split into cloud cliques this value is at
most the cloud count, one per clique.

The solver alternates projections onto the affine-and-nonnegative set
(closed form, the constrained entries form disjoint groups) and the PSD
cone (eigendecomposition), with over-relaxation and a self-balancing
penalty.  The reported matrix is re-projected onto the affine set, so the
equality and negativity residuals are exactly zero and only the PSD
residual is approximate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, ResourceLimitError
from .reduction import CloudGraph

DENSE_LIMIT_DEFAULT = 512


@dataclass(frozen=True)
class ThetaResiduals:
    psd: float
    equality: float
    negativity: float

    @property
    def max(self) -> float:
        return max(self.psd, self.equality, self.negativity)


@dataclass(frozen=True)
class ThetaSolution:
    value: float
    matrix: np.ndarray
    residuals: ThetaResiduals
    iterations: int
    converged: bool


def _as_adjacency(graph, dense_limit: int) -> np.ndarray:
    if isinstance(graph, CloudGraph):
        if graph.num_vertices > dense_limit:
            raise ResourceLimitError(
                f"{graph.num_vertices} vertices exceed the dense solver limit {dense_limit}")
        return graph.adjacency_matrix()
    if isinstance(graph, tuple) and len(graph) == 2:
        num, edges = graph
        if num > dense_limit:
            raise ResourceLimitError(f"{num} vertices exceed the dense solver limit {dense_limit}")
        adj = np.zeros((num, num), dtype=bool)
        for u, v in edges:
            if not (0 <= u < num and 0 <= v < num) or u == v:
                raise InvalidInputError(f"bad edge ({u}, {v}) for {num} vertices")
            adj[u, v] = adj[v, u] = True
        return adj
    adj = np.asarray(graph)
    if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
        raise InvalidInputError(f"adjacency must be square, got shape {adj.shape}")
    if adj.shape[0] > dense_limit:
        raise ResourceLimitError(f"{adj.shape[0]} vertices exceed the dense solver limit {dense_limit}")
    adj = adj.astype(bool)
    if (adj != adj.T).any() or adj.diagonal().any():
        raise InvalidInputError("adjacency must be symmetric with an empty diagonal")
    return adj


def solve_theta(graph, tol: float = 1e-6, max_iter: int = 200_000,
                dense_limit: int = DENSE_LIMIT_DEFAULT) -> ThetaSolution:
    """Solve the vector program on a graph; deterministic, no randomness.

    ``graph`` may be a CloudGraph, a square boolean adjacency array, or a
    ``(num_vertices, edge_list)`` pair.  Returns the best iterate even when
    the iteration budget runs out (``converged`` is False then).
    """
    adj = _as_adjacency(graph, dense_limit)
    nv = adj.shape[0]
    if nv == 0:
        return ThetaSolution(0.0, np.ones((1, 1)), ThetaResiduals(0.0, 0.0, 0.0), 0, True)

    n1 = nv + 1
    diag_idx = np.arange(1, n1)

    def affine_project(raw: np.ndarray) -> np.ndarray:
        out = 0.5 * (raw + raw.T)
        # (0,i), (i,0), (i,i) share one value t >= 0; least squares gives
        # t = (2*off + diag) / 3 before clipping.
        t = np.maximum(0.0, (2.0 * out[0, 1:] + out[diag_idx, diag_idx]) / 3.0)
        block = np.maximum(out[1:, 1:], 0.0)
        block[adj] = 0.0
        block[np.diag_indices(nv)] = t
        out[1:, 1:] = block
        out[0, 1:] = t
        out[1:, 0] = t
        out[0, 0] = 1.0
        return out

    def psd_project(raw: np.ndarray) -> np.ndarray:
        sym = 0.5 * (raw + raw.T)
        w, q = np.linalg.eigh(sym)
        if w[0] >= 0.0:
            return sym
        pos = w > 0.0
        if not pos.any():
            return np.zeros_like(sym)
        qp = q[:, pos]
        return (qp * w[pos]) @ qp.T

    def repaired(z: np.ndarray) -> tuple[np.ndarray, ThetaResiduals, float]:
        rep = affine_project(z)
        w = np.linalg.eigvalsh(rep)
        psd = max(0.0, -float(w[0]))
        eq = abs(float(rep[0, 0]) - 1.0)
        eq = max(eq, float(np.max(np.abs(rep[diag_idx, diag_idx] - rep[0, 1:]))))
        if adj.any():
            eq = max(eq, float(np.max(np.abs(rep[1:, 1:][adj]))))
        neg = max(0.0, -float(rep.min()))
        return rep, ThetaResiduals(psd, eq, neg), float(rep[0, 1:].sum())

    tilt = np.zeros((n1, n1))
    tilt[0, 1:] = 0.5
    tilt[1:, 0] = 0.5

    z = np.zeros((n1, n1))
    u = np.zeros((n1, n1))
    rho = 1.0
    alpha = 1.6
    scale = np.sqrt(float(n1 * n1))
    check_every = 25
    balance_every = 100

    best: tuple[np.ndarray, ThetaResiduals, float] | None = None
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        m = affine_project(z - u + tilt / rho)
        m_hat = alpha * m + (1.0 - alpha) * z
        z_new = psd_project(m_hat + u)
        u = u + m_hat - z_new
        r = float(np.linalg.norm(m - z_new))
        s = rho * float(np.linalg.norm(z_new - z))
        z = z_new

        if it % check_every == 0 and r <= tol * scale and s <= tol * scale:
            rep, resid, value = repaired(z)
            best = (rep, resid, value)
            if resid.max < tol:
                converged = True
                break
        if it % balance_every == 0:
            if r > 10.0 * s and rho < 1e4:
                rho *= 2.0
                u *= 0.5
            elif s > 10.0 * r and rho > 1e-3:
                rho *= 0.5
                u *= 2.0

    if best is None or not converged:
        rep, resid, value = repaired(z)
        best = (rep, resid, value)
    rep, resid, value = best
    return ThetaSolution(value, rep, resid, it, converged)


def clique_cover_upper_bound(graph: CloudGraph) -> int:
    """Bound the program's value by the number of clouds, one clique each."""
    return graph.cloud_count


def check_clique_lemma(v0, vectors, tol: float = 1e-9) -> bool:
    """Check that pairwise-orthogonal vectors with <v,v> = <v,v0> obey sum <= 1.

    Validates the hypotheses first (unit v0, orthogonality, the norm link),
    raising InvalidInputError when they fail, then returns whether
    sum_i <v0, v_i> <= 1 + tol.
    """
    v0 = np.asarray(v0, dtype=float)
    vs = [np.asarray(v, dtype=float) for v in vectors]
    if len(vs) > 4:
        raise InvalidInputError(f"at most 4 vectors are allowed, got {len(vs)}")
    if abs(float(v0 @ v0) - 1.0) > tol:
        raise InvalidInputError(f"v0 is not a unit vector: <v0,v0> = {float(v0 @ v0)!r}")
    for i, v in enumerate(vs):
        if v.shape != v0.shape:
            raise InvalidInputError(f"vector {i} has shape {v.shape}, expected {v0.shape}")
        if abs(float(v @ v) - float(v @ v0)) > tol:
            raise InvalidInputError(f"vector {i} breaks <v,v> = <v,v0>")
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            if abs(float(vs[i] @ vs[j])) > tol:
                raise InvalidInputError(f"vectors {i} and {j} are not orthogonal")
    total = sum(float(v0 @ v) for v in vs)
    return total <= 1.0 + tol
