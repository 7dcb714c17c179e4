"""The A/B/C counting argument for arrays of reals over ``[m]^n x [2n]``.

If adjacent voxels cancel in their shared coordinate and every voxel's
coordinate sum exceeds 1/2, the total mass ``> m^n / 2`` must sit on the
``2n m^(n-1)`` boundary pairs in C, so some entry exceeds ``m / (4n)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import GridShape, Voxel, adjacent_pairs, lex_rank, xi
from .errors import InvalidInput, PreconditionFailed, UnsupportedOddSize

Pair = tuple[Voxel, int]

DEFAULT_TAU = 1e-9


def _require_even(shape: GridShape) -> None:
    if shape.m % 2:
        raise UnsupportedOddSize(
            f"m={shape.m} is odd; only even sizes are supported (the odd-size variant is not implemented)"
        )


@dataclass(frozen=True)
class LemmaInstance:
    shape: GridShape
    c: tuple[tuple[float, ...], ...]  # lex order of voxels, 2n reals each

    def __post_init__(self):
        _require_even(self.shape)
        if len(self.c) != self.shape.size:
            raise InvalidInput(f"expected {self.shape.size} rows, got {len(self.c)}")
        rows = []
        for row in self.c:
            if len(row) != self.shape.ambient_dim:
                raise InvalidInput(f"each row needs {self.shape.ambient_dim} entries")
            if not all(math.isfinite(v) for v in row):
                raise InvalidInput("instance values must be finite")
            rows.append(tuple(row))
        object.__setattr__(self, "c", tuple(rows))

    def value(self, i: Voxel, k: int):
        return self.c[lex_rank(i, self.shape)][k - 1]

    def scaled(self, factor) -> "LemmaInstance":
        return LemmaInstance(self.shape, tuple(tuple(v * factor for v in row) for row in self.c))

    def to_json(self) -> dict:
        return {"n": self.shape.n, "m": self.shape.m, "c_lex": [[float(v) for v in row] for row in self.c]}

    @classmethod
    def from_json(cls, obj) -> "LemmaInstance":
        if not isinstance(obj, dict) or not {"n", "m", "c_lex"} <= obj.keys():
            raise InvalidInput('lemma instance JSON needs "n", "m" and "c_lex"')
        n, m = obj["n"], obj["m"]
        if isinstance(n, bool) or isinstance(m, bool) or not isinstance(n, int) or not isinstance(m, int):
            raise InvalidInput('"n" and "m" must be integers')
        try:
            rows = tuple(tuple(float(v) for v in row) for row in obj["c_lex"])
        except (TypeError, ValueError) as exc:
            raise InvalidInput("c_lex must be a list of numeric rows") from exc
        return cls(GridShape(n, m), rows)


@dataclass(frozen=True)
class IndexPartition:
    A: frozenset[Pair]
    B: frozenset[Pair]
    C: frozenset[Pair]


def abc_partition(shape: GridShape) -> IndexPartition:
    _require_even(shape)
    A, B, C = set(), set(), set()
    for i in shape.voxels():
        for t in range(1, shape.n + 1):
            it = i[t - 1]
            up = i[: t - 1] + (it + 1,) + i[t:]
            if it % 2 == 1:
                A.add((i, 2 * t - 1))
                A.add((up, 2 * t - 1))
            elif it < shape.m:
                B.add((i, 2 * t))
                B.add((up, 2 * t))
            if it in (1, shape.m):
                C.add((i, 2 * t))
    return IndexPartition(frozenset(A), frozenset(B), frozenset(C))


@dataclass(frozen=True)
class ConditionCheck:
    adjacency_zero: bool
    half_far: bool
    first_violation: dict | None = None

    @property
    def ok(self) -> bool:
        return self.adjacency_zero and self.half_far


def check_conditions(inst: LemmaInstance, tau: float = DEFAULT_TAU) -> ConditionCheck:
    """Check adjacent cancellation (within ``tau``) and the strict per-voxel sum > 1/2."""
    shape = inst.shape
    first = None
    adjacency_zero = True
    for i, j, t in adjacent_pairs(shape):
        k = xi(t, i[t - 1])
        total = inst.value(i, k) + inst.value(j, k)
        if abs(total) > tau:
            adjacency_zero = False
            first = {"condition": "adjacency_zero", "voxels": [list(i), list(j)], "axis": t,
                     "coordinate": k, "sum": float(total)}
            break
    half_far = True
    for i, row in zip(shape.voxels(), inst.c):
        total = sum(row)
        if not total > Fraction(1, 2):
            half_far = False
            if first is None:
                first = {"condition": "half_far", "voxel": list(i), "sum": float(total)}
            break
    return ConditionCheck(adjacency_zero, half_far, first)


@dataclass(frozen=True)
class LemmaCertificate:
    conditions: ConditionCheck
    witness: tuple[Voxel, int, float] | None
    bound: float
    sum_A: float
    sum_B: float
    sum_C: float

    def to_json(self) -> dict:
        out = {
            "conditions_ok": {
                "adjacency_zero": self.conditions.adjacency_zero,
                "half_far": self.conditions.half_far,
            },
            "bound": self.bound,
            "audit": {"sum_A": self.sum_A, "sum_B": self.sum_B, "sum_C": self.sum_C},
            "witness": None,
        }
        if self.witness is not None:
            i, k, v = self.witness
            out["witness"] = {"voxel": list(i), "k": k, "value": v}
        return out


def lemma_witness(inst: LemmaInstance, tau: float = DEFAULT_TAU) -> LemmaCertificate:
    """Return the maximising entry of a conditions-passing instance with audit sums.

    Ties go to the first pair in (lex voxel, k) order.
    """
    check = check_conditions(inst, tau)
    if not check.ok:
        raise PreconditionFailed("lemma conditions do not hold", check.first_violation)
    shape = inst.shape
    part = abc_partition(shape)
    sums = {}
    for name, pairs in (("A", part.A), ("B", part.B), ("C", part.C)):
        sums[name] = math.fsum(float(inst.value(i, k)) for i, k in pairs)

    best = None
    for i, row in zip(shape.voxels(), inst.c):
        for k, v in enumerate(row, start=1):
            if best is None or v > best[2]:
                best = (i, k, v)
    bound = shape.m / (4 * shape.n)
    if not best[2] > bound:
        # unreachable for exact data; floating slack in adjacency_zero could in principle break it
        raise PreconditionFailed(f"maximum {best[2]} does not exceed m/(4n) = {bound}; tolerance too loose")
    return LemmaCertificate(check, (best[0], best[1], float(best[2])), bound, sums["A"], sums["B"], sums["C"])

