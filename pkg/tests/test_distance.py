import math

import numpy as np
import pytest

from fixtures import PQ, PQ_EXPECTED, PQ_SYMBOLS, grid_model, picture_set
from oracle import chamfer_distances, euclidean_distances

from imgql import formula as F
from imgql.checker import check
from imgql.distance import chamfer_dt, distance_field, edt, eval_dist, flt
from imgql.space import Adjacency, GridSpace


def test_edt_full_and_empty_seed():
    s = GridSpace((4, 3))
    assert np.all(edt(s, s.full()).values == 0)
    assert np.all(np.isinf(edt(s, s.empty()).values))
    assert np.all(np.isinf(chamfer_dt(s, s.empty()).values))
    assert np.all(chamfer_dt(s, s.full()).values == 0)


@pytest.mark.parametrize("adjacency", list(Adjacency))
def test_one_dimensional_distances(adjacency):
    s = GridSpace((1, 5), adjacency=adjacency)
    seed = s.from_points([(0, 0)])
    assert edt(s, seed).values.tolist() == [[0, 1, 2, 3, 4]]
    expected = [[0, 1, 2, 3, 4]]
    assert chamfer_dt(s, seed).values.tolist() == expected


def test_edt_matches_brute_force_anisotropic():
    rng = np.random.default_rng(5)
    for dims in [(32, 32), (9, 17), (6, 7, 5)]:
        spacing = tuple(rng.uniform(0.3, 3.0, size=len(dims)))
        s = GridSpace(dims, spacing)
        mask = rng.random(dims) < 0.08
        mask.flat[0] = True
        got = edt(s, s.pointset(mask)).values
        pts = np.argwhere(mask) * np.array(spacing)
        grid = np.stack(np.meshgrid(*[np.arange(n) for n in dims], indexing="ij"), -1) * np.array(spacing)
        want = np.sqrt(((grid[..., None, :] - pts) ** 2).sum(-1)).min(-1)
        np.testing.assert_allclose(got, want, rtol=1e-9, atol=1e-12)


@pytest.mark.parametrize("adjacency", list(Adjacency))
def test_chamfer_matches_shortest_paths(adjacency):
    rng = np.random.default_rng(2)
    s = GridSpace((6, 7), (1.0, 1.7), adjacency)
    mask = rng.random(s.dims) < 0.1
    mask[0, 0] = True
    want = chamfer_distances(s.dims, s.spacing, set(map(tuple, np.argwhere(mask))), adjacency)
    got = chamfer_dt(s, s.pointset(mask)).values
    for p, d in want.items():
        assert got[p] == pytest.approx(d, abs=1e-12)


def test_chamfer_adjacency_override():
    s = GridSpace((5, 5), adjacency=Adjacency.ORTHOGONAL)
    seed = s.from_points([(0, 0)])
    assert chamfer_dt(s, seed).values[4, 4] == 8
    assert chamfer_dt(s, seed, Adjacency.ORTHODIAGONAL).values[4, 4] == pytest.approx(4 * math.sqrt(2))


def test_chamfer_relaxation_fixpoint():
    rng = np.random.default_rng(8)
    s = GridSpace((12, 10), (1.0, 0.6))
    mask = rng.random(s.dims) < 0.05
    mask[3, 3] = True
    d = chamfer_dt(s, s.pointset(mask)).values
    for p in map(tuple, np.argwhere(~mask)):
        best = min(d[q] + w for q, w in s.neighbors(p))
        assert d[p] == pytest.approx(best)


def test_eval_dist_intervals():
    s = GridSpace((1, 5))
    df = edt(s, s.from_points([(0, 0)]))
    assert eval_dist(df, F.Interval(0, math.inf, True, False)) == s.full()
    assert eval_dist(df, F.Interval(0, 0, True, True)).points() == [(0, 0)]
    assert eval_dist(df, F.Interval(1, 3, False, True)).points() == [(0, 2), (0, 3)]
    empty = edt(s, s.empty())
    assert eval_dist(empty, F.Interval(2, math.inf, True, False)) == s.full()
    assert eval_dist(empty, F.Interval(0, 100, True, True)).is_empty()


def test_distance_matches_existential_reading():
    rng = np.random.default_rng(4)
    s = GridSpace((7, 6), (1.3, 0.8), Adjacency.ORTHODIAGONAL)
    mask = rng.random(s.dims) < 0.15
    seed = set(map(tuple, np.argwhere(mask)))
    for metric, c in [(F.EUCLIDEAN, 2.0), (F.CHAMFER, 2.6)]:
        if metric == F.EUCLIDEAN:
            d = euclidean_distances(s.dims, s.spacing, seed)
        else:
            d = chamfer_distances(s.dims, s.spacing, seed, s.adjacency)
        got = eval_dist(distance_field(s, s.pointset(mask), metric), F.Interval(0, c, True, False))
        assert set(got.points()) == {p for p, v in d.items() if v < c}


def test_flt_removes_isolated_point():
    s = GridSpace((5, 5))
    assert flt(2, s.from_points([(2, 2)])).is_empty()


def test_flt_on_rectangle_matches_desugared_formula():
    s = GridSpace((12, 12), adjacency=Adjacency.ORTHOGONAL)
    mask = np.zeros(s.dims, dtype=bool)
    mask[2:10, 3:11] = True
    from imgql.model import Model

    m = Model(s, {"v": mask.astype(float)})
    desugared = check(m, F.flt(1, F.atom("v", "=", 1)))
    assert flt(1, s.pointset(mask)) == desugared
    assert desugared == s.pointset(mask)


@pytest.mark.parametrize("name", ["dist_gt2_p", "flt3_q", "flt2_q", "q_S22_p", "q_S23_p"])
def test_pq_distance_fixtures(name):
    m = grid_model(PQ, PQ_SYMBOLS)
    p, q = F.atom("p", "=", 1), F.atom("q", "=", 1)
    f = {
        "dist_gt2_p": F.dist(F.CHAMFER, ">", 2, p),
        "flt3_q": F.flt(3, q),
        "flt2_q": F.flt(2, q),
        "q_S22_p": F.bounded_surrounded(q, p, F.Interval(2, 2, True, True)),
        "q_S23_p": F.bounded_surrounded(q, p, F.Interval(2, 3, True, True)),
    }[name]
    assert set(check(m, f).points()) == picture_set(PQ_EXPECTED[name])
    direct = {
        "flt3_q": lambda: flt(3, check(m, q)),
        "flt2_q": lambda: flt(2, check(m, q)),
    }.get(name)
    if direct:
        assert direct() == check(m, f)
