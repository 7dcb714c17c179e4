"""Dense two-phase primal simplex with Bland's anti-cycling rule.

Solves ``min c.x  s.t.  A x = b, x >= 0`` on a full tableau.  Meant for the
small, dense, highly degenerate systems produced by the decomposition LP;
Bland's rule trades speed for guaranteed termination.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverError

TAU_LP = 1e-9  # reduced-cost / pivot tolerance
TAU_FEAS = 1e-7  # phase-1 residual above which the system is declared infeasible
MAX_ITER = 10**6


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None = None
    value: float | None = None
    iterations: int = 0


def _pivot(T: np.ndarray, r: int, j: int) -> None:
    T[r] /= T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    rows = np.flatnonzero(col)
    if rows.size:
        T[rows] -= np.outer(col[rows], T[r])
    # pin the pivot column to an exact unit vector
    T[rows, j] = 0.0
    T[r, j] = 1.0


def _run(T: np.ndarray, basis: list[int], allowed: np.ndarray, iters: int, max_iter: int) -> tuple[str, int]:
    """Iterate on tableau ``T`` whose last row is the reduced-cost row.

    Columns with ``allowed == False`` never enter.  Returns ("optimal" |
    "unbounded", iterations used so far).
    """
    m = T.shape[0] - 1
    while True:
        if iters >= max_iter:
            raise SolverError("simplex iteration cap reached", {"iterations": iters, "rows": m})
        cost = T[-1, :-1]
        candidates = np.flatnonzero((cost < -TAU_LP) & allowed)
        if candidates.size == 0:
            return "optimal", iters
        j = int(candidates[0])  # Bland: lowest index enters
        col = T[:m, j]
        pos = col > TAU_LP
        if not pos.any():
            return "unbounded", iters
        ratios = np.full(m, np.inf)
        ratios[pos] = T[:m, -1][pos] / col[pos]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + TAU_LP * max(1.0, abs(best)))
        # Bland: among tied rows, the one whose basic variable has lowest index leaves
        r = int(min(ties, key=lambda i: basis[i]))
        _pivot(T, r, j)
        basis[r] = j
        iters += 1


def solve_standard_form(c, A, b, max_iter: int = MAX_ITER) -> LPResult:
    c = np.asarray(c, dtype=float)
    A = np.array(A, dtype=float, copy=True)
    b = np.array(b, dtype=float, copy=True)
    m, n = A.shape
    if m == 0:
        if (c < -TAU_LP).any():
            return LPResult("unbounded")
        return LPResult("optimal", np.zeros(n), 0.0, 0)

    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    # reuse existing unit columns as the starting basis; add artificials elsewhere
    basis = [-1] * m
    for j in range(n):
        col = A[:, j]
        nz = np.flatnonzero(col)
        if nz.size == 1 and col[nz[0]] == 1.0 and basis[nz[0]] == -1:
            basis[nz[0]] = j
    art_rows = [r for r in range(m) if basis[r] == -1]
    n_art = len(art_rows)

    T = np.zeros((m + 1, n + n_art + 1))
    T[:m, :n] = A
    T[:m, -1] = b
    for a, r in enumerate(art_rows):
        T[r, n + a] = 1.0
        basis[r] = n + a

    iters = 0
    if n_art:
        # phase 1: minimise the sum of artificials
        T[-1, :] = 0.0
        T[-1, n : n + n_art] = 1.0
        for r in art_rows:
            T[-1] -= T[r]
        _, iters = _run(T, basis, np.ones(n + n_art, dtype=bool), iters, max_iter)
        if -T[-1, -1] > TAU_FEAS * max(1.0, float(np.abs(b).max())):
            return LPResult("infeasible", iterations=iters)
        # drive zero-level artificials out of the basis; drop rows that are redundant
        keep = []
        for r in range(m):
            if basis[r] >= n:
                row = T[r, :n]
                js = np.flatnonzero(np.abs(row) > TAU_LP)
                if js.size == 0:
                    continue
                _pivot(T, r, int(js[0]))
                basis[r] = int(js[0])
            keep.append(r)
        T = np.vstack([T[keep][:, list(range(n)) + [n + n_art]], np.zeros((1, n + 1))])
        basis = [basis[r] for r in keep]
        m = len(keep)

    # phase 2 cost row: c - c_B B^-1 A, expressed on the current tableau
    T[-1, :] = 0.0
    T[-1, :n] = c
    for r, j in enumerate(basis):
        if c[j] != 0.0:
            T[-1] -= c[j] * T[r]
    status, iters = _run(T, basis, np.ones(n, dtype=bool), iters, max_iter)
    if status == "unbounded":
        return LPResult("unbounded", iterations=iters)
    x = np.zeros(n)
    for r, j in enumerate(basis):
        x[j] = T[r, -1]
    return LPResult("optimal", x, float(c @ x), iters)
