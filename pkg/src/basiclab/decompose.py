"""Decompositions ``f(x) = sum_k phi_k(x_k)`` over finite point sets.

Unknowns are one value per (axis, distinct coordinate).  Each point gives one
equation with exactly ``dim`` ones, so the system carries a gauge freedom per
connected component (constants can move between axes); nothing here fixes it.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import PointSet, project
from .errors import InvalidInput, SolverError
from .simplex import solve_standard_form

TAU_EQ = 1e-7
RANK_TOL = 1e-9


@dataclass(frozen=True)
class CoordinateFunctionFamily:
    """One finite table ``coordinate -> value`` per axis.

    Off-table queries use nearest-key extension (see :func:`extend`), which
    never increases an axis sup-norm.
    """

    tables: tuple[dict[float, float], ...]

    @property
    def dim(self) -> int:
        return len(self.tables)

    def axis_norm(self, k: int) -> float:
        table = self.tables[k - 1]
        return max((abs(v) for v in table.values()), default=0.0)

    def norm(self) -> float:
        return max((self.axis_norm(k) for k in range(1, self.dim + 1)), default=0.0)

    def __call__(self, point: Sequence[float]) -> float:
        return math.fsum(extend(self, k, point[k - 1]) for k in range(1, self.dim + 1))

    def residual(self, X: PointSet, f: Sequence[float]) -> float:
        return max((abs(self(p) - v) for p, v in zip(X.points, f)), default=0.0)

    def minus(self, other: "CoordinateFunctionFamily") -> "CoordinateFunctionFamily":
        """Pointwise difference on this family's keys; ``other`` is zero off its own keys."""
        return CoordinateFunctionFamily(
            tuple({v: phi - o.get(v, 0.0) for v, phi in t.items()} for t, o in zip(self.tables, other.tables))
        )

    def to_json(self) -> dict:
        return {
            "axes": [
                {"k": k, "table": [[v, phi] for v, phi in sorted(t.items())]}
                for k, t in enumerate(self.tables, start=1)
            ],
            "norm": self.norm(),
        }

    @classmethod
    def zero(cls, dim: int) -> "CoordinateFunctionFamily":
        return cls(tuple({} for _ in range(dim)))


def extend(family: CoordinateFunctionFamily, k: int, v: float) -> float:
    """Value of axis ``k`` at ``v``: the table value at the nearest key, smaller key on ties."""
    table = family.tables[k - 1]
    if not table:
        raise InvalidInput(f"axis {k} has an empty table")
    if v in table:
        return table[v]
    keys = sorted(table)
    pos = bisect.bisect_left(keys, v)
    if pos == 0:
        return table[keys[0]]
    if pos == len(keys):
        return table[keys[-1]]
    lo, hi = keys[pos - 1], keys[pos]
    return table[lo] if v - lo <= hi - v else table[hi]


@dataclass(frozen=True)
class IncidenceSystem:
    matrix: np.ndarray  # |X| x ncols, 0/1
    rhs: np.ndarray
    columns: tuple[tuple[int, float], ...]  # (axis k, coordinate value), axis-major, values ascending

    def family(self, x: Sequence[float], dim: int) -> CoordinateFunctionFamily:
        tables = [dict() for _ in range(dim)]
        for (k, v), val in zip(self.columns, x):
            tables[k - 1][v] = float(val)
        return CoordinateFunctionFamily(tuple(tables))


def build_incidence(X: PointSet, f: Sequence[float]) -> IncidenceSystem:
    if len(f) != len(X):
        raise InvalidInput(f"{len(f)} values for {len(X)} points")
    columns = []
    index = {}
    for k in range(1, X.dim + 1):
        for v in project(X, k):
            index[(k, v)] = len(columns)
            columns.append((k, v))
    M = np.zeros((len(X), len(columns)))
    for r, p in enumerate(X.points):
        for k in range(1, X.dim + 1):
            M[r, index[(k, p[k - 1])]] = 1.0
    rhs = np.array([float(v) for v in f], dtype=float)
    if not np.all(np.isfinite(rhs)):
        raise InvalidInput("function values must be finite")
    return IncidenceSystem(M, rhs, tuple(columns))


def elimination_ranks(A: np.ndarray, b: np.ndarray, tol: float = RANK_TOL) -> tuple[int, int]:
    """Ranks of ``A`` and ``[A | b]`` by Gaussian elimination with partial pivoting.

    A pivot counts when it exceeds ``tol`` times the largest pivot seen so far
    (or the largest entry of the input, for the first one).
    """
    M = np.column_stack([A, b]).astype(float)
    rows, cols = M.shape
    scale = float(np.abs(M).max()) if M.size else 0.0
    if scale == 0.0:
        return 0, 0
    largest = scale
    r = 0
    rank_a = None
    for j in range(cols):
        if j == cols - 1:
            rank_a = r
        if r == rows:
            break
        p = r + int(np.argmax(np.abs(M[r:, j])))
        if abs(M[p, j]) <= tol * largest:
            continue
        M[[r, p]] = M[[p, r]]
        largest = max(largest, abs(M[r, j]))
        below = M[r + 1 :, j] / M[r, j]
        M[r + 1 :] -= np.outer(below, M[r])
        r += 1
    if rank_a is None:
        rank_a = r
    return rank_a, r


def solve_exact(X: PointSet, f: Sequence[float], tau_res: float = TAU_EQ) -> CoordinateFunctionFamily | None:
    """Minimal-Euclidean-norm decomposition of ``f`` on ``X``, or None if none exists."""
    system = build_incidence(X, f)
    if len(X) == 0:
        return CoordinateFunctionFamily.zero(X.dim)
    rank_a, rank_ab = elimination_ranks(system.matrix, system.rhs)
    if rank_ab > rank_a:
        return None
    x, *_ = np.linalg.lstsq(system.matrix, system.rhs, rcond=None)
    family = system.family(x, X.dim)
    if family.residual(X, f) > tau_res * max(1.0, float(np.abs(system.rhs).max())):
        return None
    return family


@dataclass(frozen=True)
class MinimaxOutcome:
    status: str  # "optimal" | "infeasible"
    value: float | None = None
    family: CoordinateFunctionFamily | None = None
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"

    def to_json(self) -> dict:
        out = {"status": self.status, "value": self.value}
        if self.family is not None:
            out.update(self.family.to_json())
            out["norm"] = self.value
        return out


def min_supnorm(X: PointSet, f: Sequence[float]) -> MinimaxOutcome:
    """Smallest ``max_k sup |phi_k|`` over all exact decompositions of ``f`` on ``X``.

    The LP is posed with ``phi = u - t`` and ``0 <= u <= 2t`` so every variable
    is nonnegative:  ``A u - dim * t = f``,  ``u_j - 2t + s_j = 0``,  minimise ``t``.
    """
    system = build_incidence(X, f)
    if len(X) == 0:
        return MinimaxOutcome("optimal", 0.0, CoordinateFunctionFamily.zero(X.dim))
    npts, ncol = system.matrix.shape
    d = X.dim
    # variable layout: u (ncol) | t | s (ncol)
    nvar = 2 * ncol + 1
    A = np.zeros((npts + ncol, nvar))
    A[:npts, :ncol] = system.matrix
    A[:npts, ncol] = -d
    A[npts:, :ncol] = np.eye(ncol)
    A[npts:, ncol] = -2.0
    A[npts:, ncol + 1 :] = np.eye(ncol)
    b = np.concatenate([system.rhs, np.zeros(ncol)])
    c = np.zeros(nvar)
    c[ncol] = 1.0

    res = solve_standard_form(c, A, b)
    if res.status == "infeasible":
        return MinimaxOutcome("infeasible", iterations=res.iterations)
    if res.status != "optimal":
        raise SolverError(f"unexpected LP status {res.status}", {"iterations": res.iterations})
    t = float(res.x[ncol])
    phi = res.x[:ncol] - t
    family = system.family(phi, d)
    resid = family.residual(X, f)
    if resid > TAU_EQ * max(1.0, float(np.abs(system.rhs).max())):
        raise SolverError("LP solution does not reproduce f", {"residual": resid, "iterations": res.iterations})
    return MinimaxOutcome("optimal", t, family, res.iterations)


# --- E-operator -----------------------------------------------------------


def _e_keep(X: PointSet, alive: Sequence[int]) -> list[int]:
    keep = []
    for a in alive:
        p = X.points[a]
        if all(sum(1 for b in alive if X.points[b][k] == p[k]) >= 2 for k in range(X.dim)):
            keep.append(a)
    return keep


def e_step(Y: PointSet) -> PointSet:
    """Keep the points whose every axis-fiber inside ``Y`` holds at least two points."""
    return Y.subset(_e_keep(Y, range(len(Y))))


@dataclass(frozen=True)
class ETrace:
    stages: tuple[tuple[int, ...], ...]  # point indices into the input, Y_0 = X first

    @property
    def terminal(self) -> tuple[int, ...]:
        return self.stages[-1]

    @property
    def empties(self) -> bool:
        return not self.terminal

    @property
    def l(self) -> int:
        return len(self.stages) - 1

    def to_json(self) -> dict:
        return {"stages": [list(s) for s in self.stages], "empties": self.empties, "l": self.l}


def e_iterate(X: PointSet) -> ETrace:
    """Iterate the E-operator to its fixpoint; an empty fixpoint certifies that ``X`` is basic."""
    stages = [tuple(range(len(X)))]
    while True:
        nxt = tuple(_e_keep(X, stages[-1]))
        if nxt == stages[-1]:
            return ETrace(tuple(stages))
        stages.append(nxt)


def is_forest(X: PointSet) -> bool:
    """Whether the bipartite multigraph (x-values, y-values; one edge per point) is acyclic."""
    if X.dim != 2:
        raise InvalidInput("is_forest needs a plane point set")
    parent: dict = {}

    def find(a):
        while parent.setdefault(a, a) != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x, y in X.points:
        rx, ry = find((0, x)), find((1, y))
        if rx == ry:
            return False
        parent[rx] = ry
    return True
