"""Assembly of the edge-selection constraint system.

The system bounds the degree of every vertex of the hypothetical graph from
above by a forecast quantile (existing vertices) or by the historical mean
degree of newly arriving vertices (hypothetical vertices), and bounds the
total number of selected edges by a forecast of the edge count.  The matrix
is the incidence matrix of the candidate graph with an all-ones row appended
for the total-edge constraint.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import timeseries
from .candidates import CandidateEdge, HypotheticalGraph, Provenance
from .graphs import GraphSeries, degree_series, edge_count_series, new_vertex_degree_pool


@dataclass(frozen=True)
class ConstraintSystem:
    """max objective . x  subject to  0 <= Mx <= upper_bounds, x binary.

    M has one row per vertex (two 1-entries per column) plus a final all-ones
    row; column j corresponds to candidates[j].
    """

    row_vertices: tuple[int, ...]
    endpoint_rows: np.ndarray  # (cols, 2) row indices of each candidate's endpoints
    upper_bounds: np.ndarray  # (rows,) with rows = len(row_vertices) + 1
    objective: np.ndarray  # (cols,)
    candidates: tuple[CandidateEdge, ...]

    @property
    def n_rows(self) -> int:
        return len(self.upper_bounds)

    @property
    def n_cols(self) -> int:
        return len(self.candidates)

    def matrix_dense(self) -> np.ndarray:
        dense = np.zeros((self.n_rows, self.n_cols))
        for j in range(self.n_cols):
            dense[self.endpoint_rows[j, 0], j] = 1.0
            dense[self.endpoint_rows[j, 1], j] = 1.0
        dense[-1, :] = 1.0
        return dense

    def validate(self) -> None:
        rows, cols = self.n_rows, self.n_cols
        if rows != len(self.row_vertices) + 1:
            raise ValueError("row count must be vertex rows plus the total-edge row")
        if self.endpoint_rows.shape != (cols, 2):
            raise ValueError("endpoint_rows shape mismatch")
        if cols and (self.endpoint_rows.min() < 0 or self.endpoint_rows.max() >= rows - 1):
            raise ValueError("endpoint rows must index vertex rows only")
        if cols and (self.endpoint_rows[:, 0] == self.endpoint_rows[:, 1]).any():
            raise ValueError("a column must touch two distinct vertex rows")
        if len(self.objective) != cols:
            raise ValueError("objective length mismatch")
        if cols and self.objective.min() < 0:
            raise ValueError("objective coefficients must be non-negative")
        if self.upper_bounds.min() < 0:
            raise ValueError("upper bounds must be non-negative")


def _bound_from_series(s: timeseries.Series, h: int, u: float) -> float:
    fc = timeseries.forecast_with_fallback(s, h)
    return max(timeseries.quantile(fc, h, u), 0.0)


def degree_bounds(
    series: GraphSeries, H: HypotheticalGraph, h: int, u: float
) -> np.ndarray:
    """Per-vertex degree upper bounds, ordered to match the row layout.

    Existing vertices get the u-quantile of their h-step degree forecast
    (clamped at 0); hypothetical vertices get the mean arrival degree of
    past new vertices.
    """
    if not 0.0 < u < 1.0:
        raise ValueError("quantile level u must lie strictly between 0 and 1")
    bounds = []
    for v in sorted(H.base.vertices):
        bounds.append(_bound_from_series(degree_series(series, v), h, u))
    if H.new_vertex_count:
        if len(series) >= 2:
            _, pool_mean = new_vertex_degree_pool(series, len(series))
        else:
            pool_mean = 0.0
        bounds.extend([pool_mean] * H.new_vertex_count)
    return np.array(bounds, dtype=float)


def total_edge_bound(series: GraphSeries, h: int, u: float) -> float:
    """u-quantile forecast of the total edge count at T+h, clamped at 0."""
    if not 0.0 < u < 1.0:
        raise ValueError("quantile level u must lie strictly between 0 and 1")
    counts = edge_count_series(series)
    fit = timeseries.auto_fit(counts)
    fc = timeseries.forecast(fit, counts, h)
    return max(timeseries.quantile(fc, h, u), 0.0)


def objective_coeffs(H: HypotheticalGraph, alpha: float) -> np.ndarray:
    """Weight 1 for edges already present, alpha for candidate new edges."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie strictly between 0 and 1")
    return np.array(
        [1.0 if c.provenance is Provenance.EXISTING else alpha for c in H.candidates]
    )


def assemble(
    series: GraphSeries, H: HypotheticalGraph, h: int, u: float, alpha: float
) -> ConstraintSystem:
    """Build the full constraint system for the hypothetical graph."""
    order = H.vertex_order
    row_of = {v: r for r, v in enumerate(order)}
    endpoint_rows = np.array(
        [[row_of[c.u], row_of[c.v]] for c in H.candidates], dtype=np.int64
    ).reshape(len(H.candidates), 2)
    upper = np.concatenate(
        [degree_bounds(series, H, h, u), [total_edge_bound(series, h, u)]]
    )
    cs = ConstraintSystem(
        row_vertices=order,
        endpoint_rows=endpoint_rows,
        upper_bounds=upper,
        objective=objective_coeffs(H, alpha),
        candidates=H.candidates,
    )
    cs.validate()
    return cs
