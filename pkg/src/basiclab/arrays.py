"""Sternfeld arrays: validation, generators and detection.

An array of size ``m`` in R^{2n} is indexed by voxels of ``[m]^n``; for the
step ``i -> i + e_t`` the two points must agree in coordinate ``xi(t, i_t)``.
In the plane (``n = 1``) this is a lightning bolt whose first segment is
vertical.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

from .core import (
    GridShape,
    Point,
    PointSet,
    Voxel,
    adjacent_pairs,
    canonical_point,
    lex_rank,
    xi,
)
from .errors import BudgetExceeded, DegenerateInput, InvalidInput

ALL_DISTINCT = "all-distinct"
CONSECUTIVE_DISTINCT = "consecutive-distinct"
BOLT_MODES = (ALL_DISTINCT, CONSECUTIVE_DISTINCT)


@dataclass(frozen=True)
class Violation:
    kind: str  # "duplicate" | "mismatch"
    voxels: tuple[Voxel, Voxel]
    axis: int | None = None
    coordinate: int | None = None
    values: tuple[float, float] | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind, "voxels": [list(v) for v in self.voxels]}
        if self.kind == "mismatch":
            out.update(axis=self.axis, coordinate=self.coordinate, values=list(self.values))
        return out


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations]}


def _check_candidate(shape: GridShape, points: Sequence) -> tuple[Point, ...]:
    if len(points) != shape.size:
        raise InvalidInput(f"expected {shape.size} points for n={shape.n}, m={shape.m}, got {len(points)}")
    return tuple(canonical_point(p, shape.ambient_dim) for p in points)


def validate_array(shape: GridShape, points: Sequence, tolerance: float | None = None) -> ValidationReport:
    """Check the defining equalities and distinctness of a candidate array.

    ``points`` are given in lex order of voxels.  Duplicate detection is
    always exact; ``tolerance`` only relaxes the coordinate equalities.
    """
    pts = _check_candidate(shape, points)
    voxels = list(shape.voxels())
    violations = []

    seen = defaultdict(list)
    for r, p in enumerate(pts):
        seen[p].append(r)
    for r, p in enumerate(pts):
        for q in seen[p]:
            if q > r:
                violations.append(Violation("duplicate", (voxels[r], voxels[q])))

    for i, j, t in adjacent_pairs(shape):
        k = xi(t, i[t - 1])
        a = pts[lex_rank(i, shape)][k - 1]
        b = pts[lex_rank(j, shape)][k - 1]
        equal = a == b if tolerance is None else abs(a - b) <= tolerance
        if not equal:
            violations.append(Violation("mismatch", (i, j), t, k, (a, b)))
    return ValidationReport(tuple(violations))


@dataclass(frozen=True)
class SternfeldArray:
    shape: GridShape
    points: tuple[Point, ...]

    def __post_init__(self):
        report = validate_array(self.shape, self.points)
        if not report.ok:
            first = report.violations[0]
            raise DegenerateInput(f"not a Sternfeld array: {first.kind} at voxels {first.voxels}")
        object.__setattr__(self, "points", _check_candidate(self.shape, self.points))

    @property
    def n(self) -> int:
        return self.shape.n

    @property
    def m(self) -> int:
        return self.shape.m

    def __getitem__(self, voxel: Sequence[int]) -> Point:
        return self.points[lex_rank(voxel, self.shape)]

    def items(self):
        return zip(self.shape.voxels(), self.points)

    def image(self) -> PointSet:
        return PointSet(self.shape.ambient_dim, self.points)

    def translated(self, offset: Sequence[float]) -> "SternfeldArray":
        if len(offset) != self.shape.ambient_dim:
            raise InvalidInput("offset dimension mismatch")
        return SternfeldArray(self.shape, tuple(tuple(c + o for c, o in zip(p, offset)) for p in self.points))

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "points_lex": [list(p) for p in self.points]}

    @classmethod
    def from_json(cls, obj) -> "SternfeldArray":
        shape, points = array_candidate_from_json(obj)
        return cls(shape, points)


def array_candidate_from_json(obj) -> tuple[GridShape, list]:
    """Parse array JSON without insisting it is valid (for ``validate_array``)."""
    if not isinstance(obj, dict) or not {"n", "m", "points_lex"} <= obj.keys():
        raise InvalidInput('array JSON needs "n", "m" and "points_lex"')
    n, m = obj["n"], obj["m"]
    if isinstance(n, bool) or isinstance(m, bool) or not isinstance(n, int) or not isinstance(m, int):
        raise InvalidInput('"n" and "m" must be integers')
    if not isinstance(obj["points_lex"], list):
        raise InvalidInput('"points_lex" must be a list')
    return GridShape(n, m), obj["points_lex"]


# --- generators -----------------------------------------------------------


def gen_plane_zigzag(m: int) -> SternfeldArray:
    """Integer staircase bolt (1,1), (1,2), (2,2), (2,3), ... of ``m`` points."""
    if not isinstance(m, int) or m < 2:
        raise InvalidInput(f"zigzag needs m >= 2, got {m!r}")
    pts = []
    for r in range(1, m + 1):
        j = (r + 1) // 2
        pts.append((j, j + 1) if r % 2 == 0 else (j, j))
    return SternfeldArray(GridShape(1, m), tuple(pts))


_CUBE_CYCLE = {1: (0, 0), 2: (0, 1), 3: (1, 1), 4: (1, 0)}


def gen_hypercube(n: int) -> SternfeldArray:
    """Size-4 array whose image is the vertex set {0,1}^{2n}."""
    shape = GridShape(n, 4)
    pts = tuple(sum((_CUBE_CYCLE[c] for c in i), ()) for i in shape.voxels())
    return SternfeldArray(shape, pts)


def gen_product(factors: Sequence[SternfeldArray], offsets: Sequence[Sequence[float]] | None = None) -> SternfeldArray:
    """Product of ``n`` plane arrays of a common size.

    Coordinates ``(2t-1, 2t)`` of the point at voxel ``i`` are the ``i_t``-th
    point of factor ``t`` shifted by ``offsets[t]``.
    """
    if not factors:
        raise InvalidInput("need at least one factor")
    m = factors[0].m
    for f in factors:
        if f.n != 1 or f.m != m:
            raise InvalidInput("factors must be plane arrays of a common size")
    if offsets is None:
        offsets = [(0.0, 0.0)] * len(factors)
    if len(offsets) != len(factors) or any(len(o) != 2 for o in offsets):
        raise InvalidInput("need one 2-vector offset per factor")
    shifted = [[(p[0] + o[0], p[1] + o[1]) for p in f.points] for f, o in zip(factors, offsets)]
    shape = GridShape(len(factors), m)
    pts = tuple(sum((shifted[t][c - 1] for t, c in enumerate(i)), ()) for i in shape.voxels())
    if len(set(pts)) != len(pts):
        raise DegenerateInput("product points collide; adjust the offsets")
    return SternfeldArray(shape, pts)


# --- plane bolts ----------------------------------------------------------


@dataclass(frozen=True)
class PlaneBolt:
    points: tuple[Point, ...]
    mode: str = ALL_DISTINCT
    first_move: str = "vertical"
    tolerance: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(canonical_point(p, 2) for p in self.points))
        problem = bolt_problem(self.points, self.mode, self.first_move, self.tolerance)
        if problem:
            raise DegenerateInput(problem)

    def __len__(self) -> int:
        return len(self.points)

    def to_json(self) -> dict:
        return {"mode": self.mode, "points": [list(p) for p in self.points]}

    @classmethod
    def from_json(cls, obj) -> "PlaneBolt":
        if not isinstance(obj, dict) or "points" not in obj:
            raise InvalidInput('bolt JSON needs "points"')
        return cls(tuple(obj["points"]), obj.get("mode", ALL_DISTINCT))


def bolt_problem(points: Sequence[Point], mode: str = ALL_DISTINCT, first_move: str = "vertical",
                 tolerance: float | None = None) -> str | None:
    """Describe the first broken bolt invariant, or None when the sequence is a bolt.

    ``tolerance`` relaxes only the shared-coordinate equalities; distinctness stays exact.
    """

    def same(a, b):
        return a == b if tolerance is None else abs(a - b) <= tolerance

    if mode not in BOLT_MODES:
        raise InvalidInput(f"unknown bolt mode {mode!r}")
    if first_move not in ("vertical", "any"):
        raise InvalidInput(f"unknown first_move {first_move!r}")
    if mode == ALL_DISTINCT and len(set(points)) != len(points):
        return "points are not pairwise distinct"
    vertical_first = True
    if first_move == "any" and len(points) >= 2 and same(points[0][1], points[1][1]):
        vertical_first = False
    for r in range(len(points) - 1):
        a, b = points[r], points[r + 1]
        if a == b:
            return f"consecutive points {r + 1} and {r + 2} coincide"
        vertical = (r % 2 == 0) == vertical_first
        axis = 0 if vertical else 1
        if not same(a[axis], b[axis]):
            kind = "vertical" if vertical else "horizontal"
            return f"segment {r + 1} is not {kind}"
    return None


def _fibers(X: PointSet, axis: int) -> list[list[int]]:
    """For each point, the other points sharing its coordinate on ``axis`` (input order)."""
    pts = X.points
    out = []
    for a, p in enumerate(pts):
        out.append([b for b, q in enumerate(pts) if b != a and X.same(p[axis], q[axis])])
    return out


def detect_plane_bolt(
    X: PointSet,
    target_len: int,
    mode: str = ALL_DISTINCT,
    budget: int = 10**6,
    first_move: str = "vertical",
) -> PlaneBolt | None:
    """Depth-first search for a bolt of ``target_len`` points inside ``X``.

    Moves alternate between points sharing the first coordinate (vertical)
    and points sharing the second (horizontal).  Returns None only after an
    exhaustive search; raises BudgetExceeded if ``budget`` nodes run out first.
    """
    if X.dim != 2:
        raise InvalidInput("bolt detection needs a plane point set")
    if target_len < 2:
        raise InvalidInput("target length must be >= 2")
    if mode not in BOLT_MODES:
        raise InvalidInput(f"unknown bolt mode {mode!r}")
    if first_move not in ("vertical", "any"):
        raise InvalidInput(f"unknown first_move {first_move!r}")

    moves = (_fibers(X, 0), _fibers(X, 1))  # 0: vertical, 1: horizontal
    distinct = mode == ALL_DISTINCT
    nodes = 0
    # In consecutive mode a walk's future depends only on (point, next move, points still needed).
    dead: set[tuple[int, int, int]] = set()

    starts = (0,) if first_move == "vertical" else (0, 1)
    for start in range(len(X)):
        for first in starts:
            path = [start]
            stack = [(first, iter(moves[first][start]))]
            nodes += 1
            while stack:
                if len(path) >= target_len:
                    return PlaneBolt(tuple(X.points[a] for a in path), mode, first_move, X.tolerance)
                move, it = stack[-1]
                key = (path[-1], move, target_len - len(path))
                nxt = None
                if distinct or key not in dead:
                    for b in it:
                        if not (distinct and b in path):
                            nxt = b
                            break
                if nxt is None:
                    if not distinct:
                        dead.add(key)
                    stack.pop()
                    path.pop()
                    continue
                nodes += 1
                if nodes > budget:
                    raise BudgetExceeded(f"bolt search exceeded {budget} nodes", nodes)
                path.append(nxt)
                stack.append((1 - move, iter(moves[1 - move][nxt])))
    return None


# --- grid arrays ----------------------------------------------------------


def detect_grid_array(X: PointSet, shape: GridShape, budget: int = 10**6) -> SternfeldArray | None:
    """Backtracking search for a Sternfeld array of ``shape`` inside ``X``.

    Voxels are assigned in lex order; each must match its already-placed
    predecessors ``i - e_t`` in coordinate ``xi``.  Best effort: returns None
    after an exhaustive search, raises BudgetExceeded otherwise.
    """
    if X.dim != shape.ambient_dim:
        raise InvalidInput(f"point set dimension {X.dim} != 2n = {shape.ambient_dim}")
    pts = X.points
    # drop duplicate points; an array needs distinct images
    uniq = []
    seen = set()
    for a, p in enumerate(pts):
        if p not in seen:
            seen.add(p)
            uniq.append(a)
    if len(uniq) < shape.size:
        return None

    by_value: list[dict[float, list[int]]] = []
    for k in range(shape.ambient_dim):
        d = defaultdict(list)
        for a in uniq:
            d[pts[a][k]].append(a)
        by_value.append(d)

    voxels = list(shape.voxels())
    # predecessor constraints per voxel: (rank of i - e_t, coordinate index)
    preds = []
    for i in voxels:
        cons = []
        for t in range(1, shape.n + 1):
            if i[t - 1] > 1:
                prev = i[: t - 1] + (i[t - 1] - 1,) + i[t:]
                cons.append((lex_rank(prev, shape), xi(t, i[t - 1] - 1) - 1))
        preds.append(cons)

    assign: list[int] = []
    used: set[int] = set()
    nodes = 0

    def candidates(r: int) -> list[int]:
        cons = preds[r]
        if not cons:
            return [a for a in uniq if a not in used]
        if X.tolerance is None:
            r0, k0 = cons[0]
            pool = by_value[k0].get(pts[assign[r0]][k0], [])
        else:
            pool = uniq
        out = []
        for a in pool:
            if a in used:
                continue
            if all(X.same(pts[a][k], pts[assign[q]][k]) for q, k in cons):
                out.append(a)
        return out

    def place(r: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"array search exceeded {budget} nodes", nodes)
        if r == len(voxels):
            return True
        for a in candidates(r):
            assign.append(a)
            used.add(a)
            if place(r + 1):
                return True
            assign.pop()
            used.discard(a)
        return False

    if place(0):
        witness = tuple(pts[a] for a in assign)
        if X.tolerance is None:
            return SternfeldArray(shape, witness)
        # tolerance witnesses may not satisfy the exact equalities; report them as found
        report = validate_array(shape, witness, X.tolerance)
        assert report.ok
        return _trusted_array(shape, witness)
    return None


def _trusted_array(shape: GridShape, points: tuple[Point, ...]) -> SternfeldArray:
    arr = object.__new__(SternfeldArray)
    object.__setattr__(arr, "shape", shape)
    object.__setattr__(arr, "points", points)
    return arr
