"""Candidate edges for the hypothetical future graph.

Starting from the last observed snapshot, the hypothetical graph adds the
forecast number of new vertices and three kinds of candidate edges: every
currently existing edge, edges between existing vertices that share a
neighbour, and edges attaching each new vertex to the most popular existing
vertices.  Edges between two new vertices are deliberately not generated.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

from . import timeseries
from .graphs import Edge, Graph, GraphSeries, VertexId, edge, vertex_count_series


class Provenance(enum.Enum):
    EXISTING = "existing"
    HOMOPHILY = "homophily"
    ATTACHMENT = "attachment"


@dataclass(frozen=True)
class CandidateEdge:
    u: VertexId
    v: VertexId
    provenance: Provenance

    def __post_init__(self):
        if self.u >= self.v:
            raise ValueError("candidate endpoints must be stored as (min, max)")

    @property
    def pair(self) -> Edge:
        return (self.u, self.v)


@dataclass(frozen=True)
class HypotheticalGraph:
    """The candidate superset graph from which a prediction is selected."""

    base: Graph
    n_hat: int
    new_vertex_ids: tuple[VertexId, ...]
    candidates: tuple[CandidateEdge, ...]
    total_vertices: int

    @property
    def new_vertex_count(self) -> int:
        return len(self.new_vertex_ids)

    @property
    def vertex_order(self) -> tuple[VertexId, ...]:
        """Row layout: existing vertices by ascending id, then new vertices."""
        return tuple(sorted(self.base.vertices)) + self.new_vertex_ids


def predict_vertex_count(series: GraphSeries, h: int, gamma: float) -> tuple[int, int]:
    """Forecast the vertex count at T+h and the implied number of new vertices.

    Returns (n_hat, n_new) where n_hat is the gamma-quantile forecast rounded
    half-up and clamped at 0, and n_new = max(n_hat - n_T, 0).
    """
    if h < 1:
        raise ValueError("horizon must be >= 1")
    counts = vertex_count_series(series)
    fit = timeseries.auto_fit(counts)
    fc = timeseries.forecast(fit, counts, h)
    q = timeseries.quantile(fc, h, gamma)
    n_hat = max(int(math.floor(q + 0.5)), 0)
    n_new = max(n_hat - series.last.vertex_count, 0)
    return n_hat, n_new


@lru_cache(maxsize=16)
def _homophily_pairs(g: Graph) -> tuple[Edge, ...]:
    pairs: set[Edge] = set()
    existing = g.edges
    for w in g.vertices:
        nbrs = sorted(g.neighbors(w))
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                pair = (nbrs[i], nbrs[j])
                if pair not in existing:
                    pairs.add(pair)
    return tuple(sorted(pairs))


def homophily_candidates(g: Graph) -> list[CandidateEdge]:
    """Non-adjacent vertex pairs with at least one common neighbour."""
    return [CandidateEdge(u, v, Provenance.HOMOPHILY) for u, v in _homophily_pairs(g)]


def attachment_candidates(
    g: Graph, n_new: int, k: int, next_id: VertexId
) -> list[CandidateEdge]:
    """Pair each of n_new fresh vertices with the min(k, n) most popular vertices.

    Popularity is degree in g; degree ties break by ascending vertex id.
    """
    if k < 1:
        raise ValueError("attachment fan-out k must be >= 1")
    if n_new < 0:
        raise ValueError("n_new must be non-negative")
    if n_new == 0 or g.vertex_count == 0:
        return []
    popular = sorted(g.vertices, key=lambda v: (-g.degree(v), v))[: min(k, g.vertex_count)]
    out = []
    for idx in range(n_new):
        nv = next_id + idx
        for p in popular:
            u, v = edge(p, nv)
            out.append(CandidateEdge(u, v, Provenance.ATTACHMENT))
    return out


def build_hypothetical(
    series: GraphSeries, h: int, gamma: float, k: int
) -> HypotheticalGraph:
    """Assemble the candidate graph for predicting the snapshot at T+h."""
    g = series.last
    n_hat, n_new = predict_vertex_count(series, h, gamma)
    next_id = max(g.vertices, default=-1) + 1
    cands: list[CandidateEdge] = [
        CandidateEdge(u, v, Provenance.EXISTING) for u, v in sorted(g.edges)
    ]
    cands.extend(homophily_candidates(g))
    cands.extend(attachment_candidates(g, n_new, k, next_id))
    return HypotheticalGraph(
        base=g,
        n_hat=n_hat,
        new_vertex_ids=tuple(range(next_id, next_id + n_new)),
        candidates=tuple(cands),
        total_vertices=max(g.vertex_count, n_hat),
    )
