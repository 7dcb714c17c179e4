import itertools

import pytest

from basiclab.arrays import (
    ALL_DISTINCT,
    CONSECUTIVE_DISTINCT,
    PlaneBolt,
    SternfeldArray,
    bolt_problem,
    detect_grid_array,
    detect_plane_bolt,
    gen_hypercube,
    gen_plane_zigzag,
    gen_product,
    validate_array,
)
from basiclab.core import GridShape, PointSet
from basiclab.decompose import e_iterate
from basiclab.errors import BudgetExceeded, DegenerateInput, InvalidInput

from oracles import long_bolt_exists

ZIGZAG4 = [(1, 1), (1, 2), (2, 2), (2, 3)]


def test_validate_zigzag_by_hand():
    # (1)->(2): xi=1 shares x; (2)->(3): xi=2 shares y; (3)->(4): xi=1 shares x
    assert ZIGZAG4[0][0] == ZIGZAG4[1][0]
    assert ZIGZAG4[1][1] == ZIGZAG4[2][1]
    assert ZIGZAG4[2][0] == ZIGZAG4[3][0]
    assert validate_array(GridShape(1, 4), ZIGZAG4).ok


def test_validate_reports_single_mismatch():
    bad = ZIGZAG4[:3] + [(3, 3)]
    report = validate_array(GridShape(1, 4), bad)
    assert not report.ok
    (v,) = report.violations
    assert (v.kind, v.voxels, v.axis, v.coordinate, v.values) == ("mismatch", ((3,), (4,)), 1, 1, (2.0, 3.0))


def test_validate_reports_duplicates():
    pts = [(1, 1), (1, 2), (1, 2), (1, 1)]
    report = validate_array(GridShape(1, 4), pts)
    dups = [v.voxels for v in report.violations if v.kind == "duplicate"]
    assert sorted(dups) == [((1,), (4,)), ((2,), (3,))]


def test_validate_wrong_sizes():
    with pytest.raises(InvalidInput):
        validate_array(GridShape(1, 4), ZIGZAG4[:3])
    with pytest.raises(InvalidInput):
        validate_array(GridShape(1, 4), [(1, 1, 1)] * 4)


def test_validate_tolerance():
    pts = [(1, 1), (1 + 1e-12, 2), (2, 2), (2, 3)]
    assert not validate_array(GridShape(1, 4), pts).ok
    assert validate_array(GridShape(1, 4), pts, tolerance=1e-9).ok


def test_zigzag_examples():
    assert gen_plane_zigzag(4).points == tuple((float(a), float(b)) for a, b in ZIGZAG4)
    assert gen_plane_zigzag(2).points == ((1.0, 1.0), (1.0, 2.0))
    z = gen_plane_zigzag(10)
    # equal coordinates alternate 1, 2, 1, 2, ...
    shared = [1 if a[0] == b[0] else 2 for a, b in zip(z.points, z.points[1:])]
    assert shared == [1, 2] * 4 + [1]
    with pytest.raises(InvalidInput):
        gen_plane_zigzag(1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_hypercube(n):
    arr = gen_hypercube(n)
    assert validate_array(arr.shape, arr.points).ok
    assert len(set(arr.points)) == 4**n
    assert set(arr.points) == set(itertools.product((0.0, 1.0), repeat=2 * n))


def test_hypercube_n1_order():
    assert gen_hypercube(1).points == ((0, 0), (0, 1), (1, 1), (1, 0))


def test_product_examples():
    z = gen_plane_zigzag(4)
    arr = gen_product([z, z], [(0, 0), (10, 10)])
    assert arr.shape == GridShape(2, 4)
    assert validate_array(arr.shape, arr.points).ok
    assert gen_product([gen_plane_zigzag(6)]).points == gen_plane_zigzag(6).points
    z2 = gen_plane_zigzag(2)
    prod = gen_product([z2, z2])
    assert set(prod.points) == {(1, 1, 1, 1), (1, 1, 1, 2), (1, 2, 1, 1), (1, 2, 1, 2)}


def test_product_rejects_mixed_sizes():
    with pytest.raises(InvalidInput):
        gen_product([gen_plane_zigzag(4), gen_plane_zigzag(6)])


@pytest.mark.parametrize("n, m", [(n, m) for n in (1, 2, 3) for m in range(2, 7)])
def test_generators_validate(n, m):
    z = gen_plane_zigzag(m)
    offsets = [(5 * t, 5 * t) for t in range(n)]
    arr = gen_product([z] * n, offsets)
    assert validate_array(arr.shape, arr.points).ok


def test_array_type_rejects_invalid():
    with pytest.raises(DegenerateInput):
        SternfeldArray(GridShape(1, 4), ZIGZAG4[:3] + [(3, 3)])


def test_array_json_roundtrip():
    arr = gen_hypercube(2)
    assert SternfeldArray.from_json(arr.to_json()) == arr


# --- bolts ------------------------------------------------------------------


def test_bolt_invariants():
    assert bolt_problem(ZIGZAG4) is None
    assert bolt_problem([(0, 0), (1, 0)]) == "segment 1 is not vertical"
    assert bolt_problem([(0, 0), (1, 0)], first_move="any") is None
    assert bolt_problem([(0, 0), (0, 1), (0, 0)], CONSECUTIVE_DISTINCT) is not None  # second move not horizontal
    cyc = [(0, 0), (0, 1), (1, 1), (1, 0), (0, 0)]
    assert bolt_problem(cyc, ALL_DISTINCT) == "points are not pairwise distinct"
    assert bolt_problem(cyc, CONSECUTIVE_DISTINCT) is None


def test_detect_finds_embedded_zigzag():
    z = gen_plane_zigzag(10)
    bolt = detect_plane_bolt(z.image(), 10, ALL_DISTINCT)
    assert bolt.points == z.points


@pytest.mark.parametrize("m", range(2, 13))
def test_detect_zigzag_lengths(m):
    bolt = detect_plane_bolt(gen_plane_zigzag(m).image(), m, ALL_DISTINCT)
    assert bolt is not None and len(bolt) == m
    assert bolt_problem(bolt.points, bolt.mode) is None


def test_detect_cycle_consecutive(cycle4):
    bolt = detect_plane_bolt(cycle4, 9, CONSECUTIVE_DISTINCT)
    assert bolt is not None and len(bolt) == 9
    assert bolt_problem(bolt.points, CONSECUTIVE_DISTINCT) is None
    assert detect_plane_bolt(cycle4, 5, ALL_DISTINCT) is None


def test_detect_tree_none(tree3):
    assert detect_plane_bolt(tree3, 4, ALL_DISTINCT) is None


def test_detect_budget(cycle4):
    with pytest.raises(BudgetExceeded):
        detect_plane_bolt(cycle4, 50, CONSECUTIVE_DISTINCT, budget=10)


def test_detect_first_move_any():
    X = PointSet(2, ((0, 0), (1, 0)))
    assert detect_plane_bolt(X, 2, ALL_DISTINCT) is None
    bolt = detect_plane_bolt(X, 2, ALL_DISTINCT, first_move="any")
    assert bolt.points == ((0, 0), (1, 0))


def test_detect_tolerance():
    X = PointSet(2, ((0, 0), (1e-12, 1), (1, 1)), tolerance=1e-9)
    assert detect_plane_bolt(X, 3, ALL_DISTINCT) is not None


def _subsets_3x3(max_size=8):
    cells = list(itertools.product(range(3), repeat=2))
    for k in range(1, max_size + 1):
        yield from itertools.combinations(cells, k)


def test_consecutive_bolts_match_state_graph_oracle():
    for pts in _subsets_3x3():
        X = PointSet(2, pts)
        found = detect_plane_bolt(X, 2 * len(pts) + 1, CONSECUTIVE_DISTINCT) is not None
        assert found == long_bolt_exists(pts), pts
        assert found == (not e_iterate(X).empties), pts


# --- grid arrays --------------------------------------------------------------


def test_detect_grid_in_cube_plus_outlier():
    X = PointSet(4, tuple(itertools.product((0, 1), repeat=4)) + ((5, 5, 5, 5),))
    arr = detect_grid_array(X, GridShape(2, 4))
    assert arr is not None
    assert validate_array(arr.shape, arr.points).ok
    assert set(arr.points) <= set(X.points)


def test_detect_grid_too_few_points():
    X = PointSet(2, ((0.3, 1.7), (2.2, -0.4), (5.1, 9.9)))
    assert detect_grid_array(X, GridShape(1, 4)) is None


def test_detect_grid_recovers_zigzag():
    z = gen_plane_zigzag(6)
    arr = detect_grid_array(z.image(), GridShape(1, 6))
    assert arr is not None and validate_array(arr.shape, arr.points).ok


def test_detect_grid_budget():
    X = PointSet(4, tuple(itertools.product((0, 1), repeat=4)))
    with pytest.raises(BudgetExceeded):
        detect_grid_array(X, GridShape(2, 4), budget=3)


def test_detect_grid_dimension_check():
    with pytest.raises(InvalidInput):
        detect_grid_array(PointSet(3, ((0, 0, 0),)), GridShape(1, 2))


def test_detect_grid_with_tolerance():
    pts = [(1, 1), (1 + 1e-12, 2), (2, 2), (2, 3)]
    assert detect_grid_array(PointSet(2, pts), GridShape(1, 4)) is None
    arr = detect_grid_array(PointSet(2, pts, tolerance=1e-9), GridShape(1, 4))
    assert arr is not None and validate_array(arr.shape, arr.points, tolerance=1e-9).ok


def test_bolt_json_roundtrip():
    b = PlaneBolt(((0, 0), (0, 1)), CONSECUTIVE_DISTINCT)
    assert PlaneBolt.from_json(b.to_json()) == b
