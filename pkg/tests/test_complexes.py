import numpy as np
import pytest

from critopt.complexes import (
    GridField,
    build_filtration,
    freudenthal_complex,
    lower_star_1d,
    lower_star_3d,
    lower_star_filtration,
    read_raw_field,
    read_signal,
    upper_star_3d,
    write_raw_field,
    write_signal,
)
from critopt.errors import (
    ClosureError,
    EmptyInputError,
    InvalidFieldError,
    MonotonicityError,
    NotFoundError,
)
from critopt.oracle import random_filtration


def test_equal_values_order_vertices_before_edges():
    filt = build_filtration(
        [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)], [0, 0, 0, 0, 0, 0]
    )
    assert list(filt.order) == [0, 1, 2, 3, 4, 5]


def test_path_order_hand_sorted():
    # vertices (0, 2, 1), edges both 2: v0, v2, v1, e01, e12
    filt = build_filtration([(0,), (1,), (2,), (0, 1), (1, 2)], [0, 2, 1, 2, 2])
    assert list(filt.order) == [0, 2, 1, 3, 4]


def test_missing_face_raises_closure_error():
    with pytest.raises(ClosureError):
        build_filtration([(0,), (0, 1)], [0, 1])


def test_face_value_violation_raises():
    with pytest.raises(MonotonicityError):
        build_filtration([(0,), (1,), (0, 1)], [0, 2, 1])


def test_duplicate_simplex_rejected():
    with pytest.raises(ValueError):
        build_filtration([(0,), (0,)], [0, 0])


@pytest.mark.parametrize(
    "signal,edge_values",
    [([0, 2, 1], [2, 2]), ([0, 3, 1, 2], [3, 3, 2])],
)
def test_lower_star_1d_edge_values(signal, edge_values):
    filt = lower_star_1d(signal)
    n = len(signal)
    got = [filt.value(n + i) for i in range(n - 1)]
    assert got == edge_values


def test_lower_star_1d_single_vertex():
    filt = lower_star_1d([5])
    assert filt.n == 1
    assert filt.value(0) == 5


def test_lower_star_1d_empty_raises():
    with pytest.raises(EmptyInputError):
        lower_star_1d([])


def test_grid_2x1x1_degenerates_to_edge():
    filt = lower_star_3d(GridField((2, 1, 1), np.array([0.0, 1.0])))
    dims = [filt.simplex_dim(i) for i in range(filt.n)]
    assert dims == [0, 0, 1]
    assert filt.value(2) == 1.0


def test_grid_2x2x1_square_counts_and_values():
    filt = lower_star_3d(GridField((2, 2, 1), np.array([0.0, 1.0, 2.0, 3.0])))
    counts = [len(filt.dim_ids[p]) for p in range(filt.dim + 1)]
    assert counts == [4, 5, 2]
    for sid in map(int, filt.dim_ids[2]):
        verts = filt.simplex(sid).vertices
        assert filt.value(sid) == max(filt.values[list(verts)])


def test_grid_2x2x2_counts_and_euler_characteristic():
    filt = lower_star_3d(GridField((2, 2, 2), np.zeros(8)))
    counts = [len(filt.dim_ids[p]) for p in range(filt.dim + 1)]
    assert counts == [8, 19, 18, 6]
    assert counts[0] - counts[1] + counts[2] - counts[3] == 1
    assert np.all(filt.values == 0)


def test_non_finite_field_rejected():
    with pytest.raises(InvalidFieldError):
        GridField((2, 1, 1), np.array([0.0, np.nan]))


def test_faces_of_triangle(triangle_filtration):
    filt = triangle_filtration
    assert filt.faces(6) == frozenset({0, 1, 2, 3, 4, 5})


def test_cofaces_of_vertex(triangle_filtration):
    filt = triangle_filtration
    assert filt.cofaces(0) == frozenset({3, 4, 6})


def test_cofaces_of_top_simplex_empty(triangle_filtration):
    assert triangle_filtration.cofaces(6) == frozenset()


def test_unknown_id_raises(triangle_filtration):
    with pytest.raises(NotFoundError):
        triangle_filtration.faces(99)


@pytest.mark.parametrize("seed", range(5))
def test_faces_precede_cofaces_in_order(seed):
    filt = random_filtration(seed, n_vertices=7, max_dim=3)
    for sid in range(filt.n):
        for f in filt.complex.facets[sid]:
            assert filt.position[f] < filt.position[sid]


def test_lower_star_values_roundtrip():
    rng = np.random.default_rng(3)
    field = GridField((3, 3, 2), rng.uniform(0, 1, 18))
    filt = lower_star_3d(field)
    for sid in range(filt.n):
        verts = filt.simplex(sid).vertices
        assert filt.value(sid) == max(field.values[list(verts)])
        am = int(filt.argmax_vertex[sid])
        assert field.values[am] == filt.value(sid)


def test_order_deterministic():
    rng = np.random.default_rng(4)
    vals = rng.uniform(0, 1, 12)
    f1 = lower_star_1d(vals)
    f2 = lower_star_1d(vals)
    assert np.array_equal(f1.order, f2.order)


def test_upper_star_is_negated_lower_star():
    rng = np.random.default_rng(5)
    field = GridField((2, 2, 2), rng.uniform(0, 1, 8))
    up = upper_star_3d(field)
    down = lower_star_3d(GridField((2, 2, 2), -field.values))
    assert np.array_equal(up.values, down.values)


def test_refiltration_keeps_ids_stable():
    cx = freudenthal_complex((2, 2, 1))
    rng = np.random.default_rng(6)
    f1 = lower_star_filtration(cx, rng.uniform(0, 1, 4))
    f2 = lower_star_filtration(cx, rng.uniform(0, 1, 4))
    assert f1.simplex(5).vertices == f2.simplex(5).vertices


def test_raw_field_roundtrip(tmp_path):
    rng = np.random.default_rng(7)
    vals = rng.uniform(-1, 1, 24).astype(np.float32).astype(np.float64)
    path = tmp_path / "field.raw"
    write_raw_field(path, vals)
    field = read_raw_field(path, (2, 3, 4))
    assert np.array_equal(field.values, vals)
    with pytest.raises(InvalidFieldError):
        read_raw_field(path, (2, 3, 5))


def test_signal_roundtrip(tmp_path):
    path = tmp_path / "sig.txt"
    write_signal(path, np.array([0.25, -1.5, 3.0]))
    assert np.array_equal(read_signal(path), [0.25, -1.5, 3.0])
