"""The eight acceptance criteria, each timed against its budget."""

import itertools
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from basiclab.arrays import (
    CONSECUTIVE_DISTINCT,
    detect_plane_bolt,
    gen_hypercube,
    gen_plane_zigzag,
    gen_product,
    validate_array,
)
from basiclab.combinatorics import LemmaInstance, abc_partition, check_conditions, lemma_witness
from basiclab.core import GridShape, PointSet
from basiclab.decompose import e_iterate, is_forest, min_supnorm, solve_exact
from basiclab.nonbasic import blowup_experiment

from oracles import brute_max, lemma_rows, random_grid_set


@contextmanager
def within(seconds):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.3f}s, budget {seconds}s"


def test_criterion_1_partition_identity():
    with within(1.0):
        for n in (1, 2, 3):
            for m in (2, 4, 6, 8):
                shape = GridShape(n, m)
                part = abc_partition(shape)
                universe = {(i, k) for i in shape.voxels() for k in range(1, 2 * n + 1)}
                assert len(part.A) + len(part.B) + len(part.C) == len(universe)
                assert part.A | part.B | part.C == universe
                assert len(part.C) == 2 * n * m ** (n - 1)


def test_criterion_2_lemma_bound():
    rng = random.Random(2)
    cases = [(n, m) for n in (1, 2) for m in (2, 4, 6, 8)]
    count = 0
    with within(5.0):
        for n, m in cases:
            shape = GridShape(n, m)
            for _ in range(15):
                rows = lemma_rows(n, m, rng)
                inst = LemmaInstance(shape, tuple(rows))
                assert check_conditions(inst, tau=0.0).ok
                cert = lemma_witness(inst, tau=0.0)
                _, _, best = brute_max(rows)
                assert best > Fraction(m, 4 * n)
                assert cert.witness[2] == float(best)
                count += 1
    assert count >= 100


@pytest.mark.parametrize("m, expected", [(4, 2.0), (8, 4.0)])
def test_criterion_3_zigzag_minimax(m, expected):
    z = gen_plane_zigzag(m)
    f = [(-1) ** r for r in range(1, m + 1)]
    with within(1.0):
        out = min_supnorm(z.image(), f)
    assert out.value == pytest.approx(expected, abs=1e-6)
    assert out.value > m / 4
    assert out.family.residual(z.image(), f) <= 1e-7


def test_criterion_4_cycle_obstruction():
    X = PointSet(2, ((0, 0), (0, 1), (1, 1), (1, 0)))
    f = [1, -1, 1, -1]
    with within(0.1):
        exact = solve_exact(X, f)
        mm = min_supnorm(X, f)
    assert exact is None
    assert mm.status == "infeasible"


def test_criterion_5_plane_triangle():
    rng = random.Random(5)
    discrepancies = []
    with within(10.0):
        for _ in range(500):
            pts = random_grid_set(rng, 8, 4)
            X = PointSet(2, pts)
            empties = e_iterate(X).empties
            forest = is_forest(X)
            basis = all(
                solve_exact(X, [1.0 if r == j else 0.0 for r in range(len(pts))]) is not None
                for j in range(len(pts))
            )
            if not (empties == forest == basis):
                discrepancies.append(pts)
    assert discrepancies == []


def test_criterion_6_array_examples():
    with within(1.0):
        for n in (1, 2, 3):
            arr = gen_hypercube(n)
            assert validate_array(arr.shape, arr.points).ok
            assert set(arr.points) == set(itertools.product((0.0, 1.0), repeat=2 * n))
        z = gen_plane_zigzag(4)
        prod = gen_product([z, z], [(0, 0), (10, 10)])
        assert validate_array(GridShape(2, 4), prod.points).ok


def test_criterion_7_blowup():
    with within(30.0):
        one = blowup_experiment(1, 1)
        two = blowup_experiment(1, 2)
    assert one.stages[1].outcome.value == 4.0
    assert two.verdict == "NORM_EXCEEDS_S"
    assert all(st.outcome.optimal for st in two.stages)
    for st, nxt in zip(two.stages, two.stages[1:]):
        cert = st.certificate
        assert cert.conditions.adjacency_zero and cert.conditions.half_far
        assert st.diff_norm > nxt.m / st.m
    assert two.schedule.tail_audit(2) < 0.5
    assert two.stages[2].outcome.value > 2


def test_criterion_8_bolt_e_equivalence():
    cells = list(itertools.product(range(3), repeat=2))
    checked = 0
    with within(60.0):
        for k in range(1, 9):
            for pts in itertools.combinations(cells, k):
                X = PointSet(2, pts)
                long_bolt = detect_plane_bolt(X, 2 * len(pts) + 1, CONSECUTIVE_DISTINCT) is not None
                assert long_bolt == (not e_iterate(X).empties), pts
                checked += 1
    assert checked == 2**9 - 2
