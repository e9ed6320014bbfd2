import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rips_critical.metric_core import (
    MetricError,
    MetricKind,
    ball,
    circle_sample,
    cluster_sample,
    from_matrix,
    from_points,
    ladder_space,
    read_matrix_csv,
    read_points_csv,
    witness_triangle,
    write_matrix_csv,
    write_points_csv,
)


@pytest.mark.parametrize(
    "points, kind, expected",
    [
        ([(0, 0), (1, 0)], "euclidean", 1.0),
        ([(0, 0), (3, 4)], "euclidean", 5.0),
        ([(0, 0), (3, 4)], "manhattan", 7.0),
    ],
)
def test_from_points_distance(points, kind, expected):
    X = from_points(points, kind)
    assert X.n == 2
    assert X.dist[0, 1] == expected


def test_from_points_errors():
    with pytest.raises(MetricError):
        from_points([])
    with pytest.raises(MetricError):
        from_points([(0, 0), (1, 2, 3)])
    with pytest.raises(MetricError):
        from_points([(0, 0)], MetricKind.EXPLICIT)


def test_from_matrix():
    assert from_matrix([[0, 1], [1, 0]]).n == 2
    assert from_matrix([[0, 5], [5, 0]], validate_triangle=True).n == 2
    with pytest.raises(MetricError, match="asymmetric"):
        from_matrix([[0, 1], [2, 0]])
    with pytest.raises(MetricError, match="negative"):
        from_matrix([[0, -1], [-1, 0]])
    with pytest.raises(MetricError, match="diagonal"):
        from_matrix([[1, 1], [1, 0]])
    with pytest.raises(MetricError, match="square"):
        from_matrix([[0, 1, 2], [1, 0, 3]])


def test_triangle_validation_is_opt_in():
    m = [[0, 1, 5], [1, 0, 1], [5, 1, 0]]
    assert from_matrix(m).n == 3
    with pytest.raises(MetricError, match="triangle"):
        from_matrix(m, validate_triangle=True)
    # rounding below the 1e-9 tolerance passes
    from_matrix([[0, 1, 2 + 1e-12], [1, 0, 1], [2 + 1e-12, 1, 0]], validate_triangle=True)


def test_ball_open_closed(two_points):
    assert ball(two_points, 0, 1) == {0}
    assert ball(two_points, 0, 1, closed=True) == {0, 1}
    assert ball(circle_sample(4, 1), 0, 1.5) == {0, 1, 3}
    with pytest.raises(IndexError):
        ball(two_points, 2, 1)


def test_circle_sample():
    X = circle_sample(4, 1)
    assert X.dist[0, 2] == 2.0
    assert X.dist[0, 1] == pytest.approx(math.sqrt(2), rel=1e-15)
    X12 = circle_sample(12, 1)
    assert X12.dist[0, 1] == pytest.approx(0.5176380902050415, rel=1e-12)
    with pytest.raises(MetricError):
        circle_sample(2, 1)


@pytest.mark.parametrize("n", [3, 7, 12, 50])
def test_circle_chords_match_coordinates(n):
    X = circle_sample(n, 2.5)
    k = np.arange(n)
    for i in range(n):
        chords = 2 * 2.5 * np.sin(np.pi * np.minimum(abs(k - i), n - abs(k - i)) / n)
        assert np.allclose(X.dist[i], chords, rtol=1e-12, atol=0)
        from_coords = np.linalg.norm(X.coords - X.coords[i], axis=1)
        assert np.allclose(X.dist[i], from_coords, rtol=0, atol=1e-12)


def test_ladder_space():
    L2 = ladder_space(2, 0.04, 1)
    assert L2.dist[0, 2] == 1.0
    assert L2.dist[0, 3] == pytest.approx(1.04, abs=1e-15)
    L6 = ladder_space(6, 0.04, 1)
    assert L6.diameter(range(6)) == pytest.approx(0.2, abs=1e-15)
    cross = L6.dist[:6, 6:]
    assert int((cross < 1.02).sum()) == 6
    assert np.all(np.diag(cross) == 1.0)
    with pytest.raises(MetricError):
        ladder_space(6, 0.3, 1)
    with pytest.raises(MetricError):
        ladder_space(1, 0.04, 1)


def test_witness_triangle():
    X = witness_triangle(1, 0.3)
    assert X.dist[0, 1] == 1.0
    assert X.dist[0, 2] == pytest.approx(math.sqrt(0.34), rel=1e-15)
    assert X.dist[1, 2] == pytest.approx(math.sqrt(0.34), rel=1e-15)
    assert witness_triangle(1, 0.5).dist[0, 2] == pytest.approx(math.sqrt(0.5))
    with pytest.raises(MetricError):
        witness_triangle(1, 0.9)


def test_cluster_sample_deterministic():
    specs = [((0, 0), 4, 0.1), ((2, 0), 3, 0.2)]
    a = cluster_sample(specs, seed=11)
    b = cluster_sample(specs, seed=11)
    assert np.array_equal(a.dist, b.dist)
    assert not np.array_equal(a.dist, cluster_sample(specs, seed=12).dist)
    singles = cluster_sample([((0, 0), 1, 0.0), ((1, 0), 1, 0.0)], seed=0)
    assert singles.dist[0, 1] == 1.0
    assert np.all(np.linalg.norm(a.coords[:4], axis=1) <= 0.1)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(-10, 10), st.floats(-10, 10), st.floats(-10, 10)), min_size=1, max_size=12),
       st.sampled_from(["euclidean", "manhattan"]))
def test_generated_spaces_are_metrics(pts, kind):
    X = from_points(pts, kind)
    D = X.dist
    assert np.all(np.diag(D) == 0)
    assert np.array_equal(D, D.T)
    assert np.all(D >= 0)
    assert X.triangle_violations() == []


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 20), st.integers(0, 19), st.floats(0, 3), st.floats(1e-9, 1))
def test_ball_nesting(n, i, r, bump):
    X = circle_sample(n, 1)
    i %= n
    assert ball(X, i, r) <= ball(X, i, r, closed=True) <= ball(X, i, r + bump)


def test_csv_roundtrip(tmp_path):
    X = ladder_space(4, 0.04, 1)
    write_points_csv(X, tmp_path / "p.csv")
    Y = read_points_csv(tmp_path / "p.csv", "manhattan")
    assert np.array_equal(X.dist, Y.dist)
    write_matrix_csv(X, tmp_path / "m.csv")
    assert np.array_equal(read_matrix_csv(tmp_path / "m.csv").dist, X.dist)
    write_matrix_csv(X, tmp_path / "l.csv", lower=True)
    rows = (tmp_path / "l.csv").read_text().splitlines()
    assert [len(r.split(",")) for r in rows] == list(range(1, 9))
    assert np.array_equal(read_matrix_csv(tmp_path / "l.csv").dist, X.dist)


def test_csv_17_digits(tmp_path):
    X = from_points([(0, 0), (1, 1)])
    write_matrix_csv(X, tmp_path / "m.csv")
    assert "1.4142135623730951" in (tmp_path / "m.csv").read_text()


def test_csv_errors(tmp_path):
    (tmp_path / "e.csv").write_text("")
    with pytest.raises(MetricError):
        read_points_csv(tmp_path / "e.csv")
    (tmp_path / "bad.csv").write_text("0,1\n1\n2,3,4\n")
    with pytest.raises(MetricError):
        read_matrix_csv(tmp_path / "bad.csv")
    (tmp_path / "h.csv").write_text("x,y\n0,0\n3,4\n")
    assert read_points_csv(tmp_path / "h.csv").dist[0, 1] == 5.0
