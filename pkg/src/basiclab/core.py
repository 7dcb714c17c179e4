"""Grid combinatorics and finite point-set primitives.

Voxels are 1-based integer tuples in ``[m]^n``; the parity of a voxel
coordinate decides which ambient coordinate two adjacent voxels share, so the
1-based convention is load bearing.  Points are tuples of floats parsed once
from their input numerals; all comparisons happen on those parsed values.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import DegenerateInput, InvalidInput

Voxel = tuple[int, ...]
Point = tuple[float, ...]


@dataclass(frozen=True)
class GridShape:
    n: int
    m: int

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 1):
            raise InvalidInput(f"array dimension n must be a positive integer, got {self.n!r}")
        if not (isinstance(self.m, int) and self.m >= 1):
            raise InvalidInput(f"array size m must be a positive integer, got {self.m!r}")

    @property
    def size(self) -> int:
        return self.m**self.n

    @property
    def ambient_dim(self) -> int:
        return 2 * self.n

    def voxels(self) -> Iterator[Voxel]:
        """All voxels in lex order (last axis fastest)."""
        return itertools.product(range(1, self.m + 1), repeat=self.n)

    def check(self, i: Sequence[int]) -> Voxel:
        i = tuple(i)
        if len(i) != self.n:
            raise InvalidInput(f"voxel {i} has {len(i)} coordinates, expected {self.n}")
        for c in i:
            if not 1 <= c <= self.m:
                raise InvalidInput(f"voxel {i} out of range [1, {self.m}]")
        return i


def voxel_adjacency(i: Sequence[int], j: Sequence[int], shape: GridShape) -> int | None:
    """Return the axis ``t`` (1-based) along which ``i`` and ``j`` are adjacent, else None."""
    i, j = shape.check(i), shape.check(j)
    diff = [t for t in range(shape.n) if i[t] != j[t]]
    if len(diff) == 1 and abs(i[diff[0]] - j[diff[0]]) == 1:
        return diff[0] + 1
    return None


def xi(t: int, i_t: int) -> int:
    """Shared ambient coordinate for the step ``i_t -> i_t + 1`` along axis ``t``.

    Odd ``i_t`` gives ``2t - 1``, even gives ``2t``.
    """
    if t < 1 or i_t < 1:
        raise InvalidInput(f"xi needs t >= 1 and i_t >= 1, got t={t}, i_t={i_t}")
    return 2 * t - (i_t % 2)


def parity_sign(i: Sequence[int]) -> int:
    return -1 if sum(i) % 2 else 1


def lex_rank(i: Sequence[int], shape: GridShape) -> int:
    i = shape.check(i)
    r = 0
    for c in i:
        r = r * shape.m + (c - 1)
    return r


def lex_unrank(r: int, shape: GridShape) -> Voxel:
    if not 0 <= r < shape.size:
        raise InvalidInput(f"rank {r} out of range [0, {shape.size})")
    out = []
    for _ in range(shape.n):
        r, c = divmod(r, shape.m)
        out.append(c + 1)
    return tuple(reversed(out))


def adjacent_pairs(shape: GridShape) -> Iterator[tuple[Voxel, Voxel, int]]:
    """Yield ``(i, i + e_t, t)`` for every adjacent pair, in lex order of ``i`` then ``t``."""
    for i in shape.voxels():
        for t in range(1, shape.n + 1):
            if i[t - 1] < shape.m:
                j = i[: t - 1] + (i[t - 1] + 1,) + i[t:]
                yield i, j, t


def canonical_point(coords: Sequence, dim: int | None = None) -> Point:
    try:
        p = tuple(float(c) + 0.0 for c in coords)  # + 0.0 folds -0.0 into 0.0
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"non-numeric coordinate in {coords!r}") from exc
    if dim is not None and len(p) != dim:
        raise InvalidInput(f"point {coords!r} has {len(p)} coordinates, expected {dim}")
    if not all(math.isfinite(c) for c in p):
        raise InvalidInput(f"point {coords!r} has a non-finite coordinate")
    return p


@dataclass(frozen=True)
class PointSet:
    """Ordered finite point set in R^dim.

    ``tolerance`` is None for exact coordinate equality, or an absolute
    epsilon used only where a routine explicitly compares coordinates
    (detection).  Projections and distances always use the parsed values.
    """

    dim: int
    points: tuple[Point, ...] = field(default_factory=tuple)
    tolerance: float | None = None

    def __post_init__(self):
        if not (isinstance(self.dim, int) and self.dim >= 1):
            raise InvalidInput(f"dim must be a positive integer, got {self.dim!r}")
        pts = tuple(canonical_point(p, self.dim) for p in self.points)
        object.__setattr__(self, "points", pts)
        if self.tolerance is not None and not self.tolerance >= 0:
            raise InvalidInput("tolerance must be >= 0")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, idx):
        return self.points[idx]

    def same(self, a: float, b: float) -> bool:
        if self.tolerance is None:
            return a == b
        return abs(a - b) <= self.tolerance

    def subset(self, indices: Sequence[int]) -> "PointSet":
        return PointSet(self.dim, tuple(self.points[i] for i in indices), self.tolerance)

    def has_duplicates(self) -> bool:
        return len(set(self.points)) != len(self.points)

    @classmethod
    def from_json(cls, obj) -> "PointSet":
        if not isinstance(obj, dict) or "dim" not in obj or "points" not in obj:
            raise InvalidInput('point set JSON needs "dim" and "points"')
        dim = obj["dim"]
        if isinstance(dim, bool) or not isinstance(dim, int):
            raise InvalidInput(f'"dim" must be an integer, got {dim!r}')
        if not isinstance(obj["points"], list):
            raise InvalidInput('"points" must be a list')
        return cls(dim, tuple(obj["points"]))

    def to_json(self) -> dict:
        return {"dim": self.dim, "points": [list(p) for p in self.points]}


def project(X: PointSet, k: int) -> list[float]:
    """Distinct ``k``-th coordinates (1-based axis) of ``X`` in ascending order."""
    if not 1 <= k <= X.dim:
        raise InvalidInput(f"axis {k} out of range [1, {X.dim}]")
    return sorted({p[k - 1] for p in X.points})


def min_pairwise_distance(X: PointSet) -> float:
    if len(X) < 2:
        raise InvalidInput("need at least two points")
    if X.has_duplicates():
        raise DegenerateInput("point set contains duplicate points")
    best = math.inf
    pts = X.points
    for a, b in itertools.combinations(pts, 2):
        best = min(best, math.dist(a, b))
    return best
