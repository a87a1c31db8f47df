import pytest

from graphforecast import constraints
from graphforecast.candidates import build_hypothetical
from graphforecast.datagen import PaConfig, pa_sequence, uniform_band_schedule
from graphforecast.graphs import Graph, GraphSeries
from graphforecast.predictor import PredictParams, predict, predict_distribution
from graphforecast.solver import brute_force


def small_pa_series(seed, length=9, base=8, step=2, width=2, s=2, s0=5):
    cfg = PaConfig(
        s=s, s0=s0, length=length,
        schedule=uniform_band_schedule(base, step, width), seed=seed,
    )
    return pa_sequence(cfg)


class TestPredictParams:
    def test_defaults(self):
        p = PredictParams()
        assert (p.gamma, p.u, p.alpha, p.k, p.h) == (0.5, 0.8, 1e-3, 10, 1)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"gamma": 0.0},
            {"gamma": 1.0},
            {"u": 1.5},
            {"alpha": 0.0},
            {"alpha": 1.0},
            {"k": 0},
            {"h": 0},
        ],
    )
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            PredictParams(**kwargs)


class TestPredict:
    def test_stable_triangle_predicts_itself(self):
        g = Graph([0, 1, 2], [(0, 1), (0, 2), (1, 2)])
        series = GraphSeries([g] * 6)
        result = predict(series, PredictParams())
        assert result.graph == g
        assert result.horizon_origin == 6

    def test_decreasing_degree_can_drop_an_edge(self):
        # vertex 9's degree falls one edge per snapshot toward zero; the
        # selection stays inside the candidate set and matches brute force
        snaps = []
        for t in range(6):
            hub_edges = [(9, j) for j in range(5 - t)]
            frame = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]
            snaps.append(Graph(range(10), frame + hub_edges))
        series = GraphSeries(snaps)
        params = PredictParams(u=0.5)
        result = predict(series, params)
        H = build_hypothetical(series, params.h, params.gamma, params.k)
        cand_pairs = {c.pair for c in H.candidates}
        assert result.graph.edges <= cand_pairs
        cs = constraints.assemble(series, H, params.h, params.u, params.alpha)
        if cs.n_cols <= 25:
            oracle = brute_force(cs)
            assert result.diagnostics["ilp_objective"] == oracle.objective

    def test_no_growth_means_no_attachment_edges(self):
        g = Graph.from_edges([(0, 1), (1, 2), (2, 3)])
        series = GraphSeries([g] * 7)
        result = predict(series, PredictParams())
        assert result.graph.vertex_count == g.vertex_count
        assert result.diagnostics["n_hat"] <= g.vertex_count

    def test_requires_four_snapshots(self):
        g = Graph([0, 1], [(0, 1)])
        with pytest.raises(ValueError):
            predict(GraphSeries([g] * 3), PredictParams())

    def test_draining_edges_can_predict_none(self):
        # edges drain fast enough that the total bound forecasts to zero;
        # the vertices survive as an edgeless prediction
        all_edges = [(u, v) for u in range(12) for v in range(u + 1, 12)][:40]
        snaps = [Graph(range(12), all_edges[: 40 - 6 * t]) for t in range(7)]
        series = GraphSeries(snaps)
        result = predict(series, PredictParams(u=0.5, h=5))
        assert result.graph.vertex_count == 12
        assert result.graph.edge_count == 0

    def test_contract_on_pa_series(self):
        for seed in range(4):
            series = small_pa_series(seed)
            train = series.window(1, 7)
            params = PredictParams(h=2)
            result = predict(train, params)
            H = build_hypothetical(train, 2, params.gamma, params.k)
            # never invents an edge outside the hypothetical graph
            assert result.graph.edges <= {c.pair for c in H.candidates}
            # vertex count equals max(n_T, n_hat) exactly
            assert result.graph.vertex_count == max(
                train.last.vertex_count, result.diagnostics["n_hat"]
            )
            # all bounds hold
            cs = constraints.assemble(train, H, 2, params.u, params.alpha)
            order = H.vertex_order
            for i, v in enumerate(order):
                deg = (
                    result.graph.degree(v) if v in result.graph.vertices else 0
                )
                assert deg <= cs.upper_bounds[i] + 1e-6
            assert result.graph.edge_count <= cs.upper_bounds[-1] + 1e-6
            # LP relaxation dominates the integer objective
            assert (
                result.diagnostics["lp_objective"]
                >= result.diagnostics["ilp_objective"] - 1e-9
            )

    def test_deterministic(self):
        series = small_pa_series(3).window(1, 7)
        a = predict(series, PredictParams(h=2))
        b = predict(series, PredictParams(h=2))
        assert a.graph == b.graph
        assert a.diagnostics == b.diagnostics


class TestPredictDistribution:
    def test_single_cell_matches_predict(self):
        series = small_pa_series(1).window(1, 7)
        lone = predict_distribution(series, [0.5], [0.8])
        direct = predict(series, PredictParams(gamma=0.5, u=0.8))
        assert len(lone) == 1
        assert lone[0].graph == direct.graph

    def test_row_major_order(self):
        series = small_pa_series(2).window(1, 7)
        grid = predict_distribution(series, [0.3, 0.7], [0.4, 0.6, 0.8])
        assert len(grid) == 6
        expected = [(g, u) for g in (0.3, 0.7) for u in (0.4, 0.6, 0.8)]
        assert [(p.params.gamma, p.params.u) for p in grid] == expected

    def test_edge_count_weakly_grows_in_u(self):
        for seed in range(10):
            series = small_pa_series(seed).window(1, 7)
            grid = predict_distribution(series, [0.5], [0.3, 0.5, 0.7, 0.9], h=2)
            counts = [p.graph.edge_count for p in grid]
            assert counts == sorted(counts)

    def test_empty_grid_rejected(self):
        series = small_pa_series(0).window(1, 7)
        with pytest.raises(ValueError):
            predict_distribution(series, [], [0.5])
