"""Finite truncation of the non-basic function construction.

Stage ``s`` places a Sternfeld array of size ``4n m_s`` far from every
earlier stage and adds ``bump / m_{s-1}`` to the running function.  Because
stages have disjoint supports and disjoint coordinate projections, every
decomposition of the final partial sum ``F_S`` is forced to grow:
``max_k ||phi_k - phi^s_k|| > m_{s+1} / m_s`` for each stage, hence the
minimal sup-norm of ``F_S`` exceeds ``S``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .arrays import SternfeldArray, gen_plane_zigzag, gen_product
from .combinatorics import LemmaCertificate, LemmaInstance, check_conditions, lemma_witness
from .core import PointSet, min_pairwise_distance, parity_sign
from .decompose import CoordinateFunctionFamily, MinimaxOutcome, min_supnorm
from .errors import BudgetExceeded, InvalidInput, NonDecomposableAt, ScheduleInvariantViolated

DEFAULT_MAX_POINTS = 500


@dataclass(frozen=True)
class BumpFunction:
    """Signed cone bumps of radius ``min_dist / 3`` around the array points."""

    centers: np.ndarray
    signs: np.ndarray
    radius: float

    def __call__(self, x: Sequence[float]) -> float:
        return float(self.evaluate(np.asarray([x], dtype=float))[0])

    def evaluate(self, pts: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        out = np.zeros(len(pts))
        for r, p in enumerate(pts):
            d = np.sqrt(((self.centers - p) ** 2).sum(axis=1))
            a = int(np.argmin(d))
            if d[a] < self.radius:
                out[r] = self.signs[a] * (1.0 - d[a] / self.radius)
        return out


def bump(array: SternfeldArray) -> BumpFunction:
    image = array.image()
    radius = min_pairwise_distance(image) / 3.0  # raises on < 2 points or duplicates
    signs = np.array([parity_sign(i) for i, _ in array.items()], dtype=float)
    return BumpFunction(np.array(array.points, dtype=float), signs, radius)


def choose_next_m(m_s: int, norm: float, s: int) -> int:
    """Smallest integer strictly above ``m_s * (norm + s + 1)``, compared exactly."""
    if m_s < 1 or norm < 0 or s < 0:
        raise InvalidInput("need m_s >= 1, norm >= 0, s >= 0")
    return math.floor(Fraction(m_s) * (Fraction(norm) + s + 1)) + 1


def tail_audit(ms: Sequence[int], s: int, upto: int | None = None) -> float:
    """``sum_{l=s+1}^{upto-1} m_s / m_l`` with growth checks.

    ``upto`` defaults to ``len(ms)``.  Raises ScheduleInvariantViolated if some
    ratio ``m_l / m_{l-1}`` is not above ``l``, or if the tail reaches 1/2 for
    ``s >= 2``.
    """
    upto = len(ms) if upto is None else upto
    if not 0 <= s < len(ms) or upto > len(ms):
        raise InvalidInput(f"stage {s} outside schedule of length {len(ms)}")
    if ms[0] != 1:
        raise ScheduleInvariantViolated(f"m_0 must be 1, got {ms[0]}")
    for l in range(1, len(ms)):
        if not Fraction(ms[l], ms[l - 1]) > l:
            raise ScheduleInvariantViolated(f"m_{l}/m_{l - 1} = {ms[l]}/{ms[l - 1]} is not > {l}")
    tail = sum((Fraction(ms[s], ms[l]) for l in range(s + 1, upto)), Fraction(0))
    if s >= 2 and not tail < Fraction(1, 2):
        raise ScheduleInvariantViolated(f"tail at stage {s} is {float(tail)} >= 1/2")
    return float(tail)


@dataclass
class Stage:
    s: int
    m: int
    array: SternfeldArray | None  # None for stage 0
    offset: float
    outcome: MinimaxOutcome
    certificate: LemmaCertificate | None = None
    diff_norm: float | None = None  # max_k ||phi_k - phi^s_k|| against the final decomposition

    @property
    def array_size(self) -> int:
        return 0 if self.array is None else self.array.m


@dataclass
class BlowupSchedule:
    n: int
    stages: list[Stage] = field(default_factory=list)
    points: list[tuple[float, ...]] = field(default_factory=list)
    values: list[float] = field(default_factory=list)
    seed: int | None = None
    max_points: int | None = DEFAULT_MAX_POINTS

    @property
    def ms(self) -> list[int]:
        return [st.m for st in self.stages]

    def ground_set(self) -> PointSet:
        return PointSet(2 * self.n, tuple(self.points))

    def tail_audit(self, s: int) -> float:
        """Tail of the truncated series for ``F_S`` seen from stage ``s``."""
        S = len(self.stages) - 1
        return tail_audit(self.ms, s, upto=S)


def stage_array(n: int, size: int) -> SternfeldArray:
    """Integer-grid array of ``size`` per axis: a zigzag, or a product of zigzags."""
    z = gen_plane_zigzag(size)
    return z if n == 1 else gen_product([z] * n)


def _diameter(array: SternfeldArray) -> float:
    pts = np.array(array.points)
    return float(np.sqrt(((pts.max(axis=0) - pts.min(axis=0)) ** 2).sum()))


def start_schedule(n: int, seed: int | None = None, max_points: int | None = DEFAULT_MAX_POINTS) -> BlowupSchedule:
    if not isinstance(n, int) or n < 1:
        raise InvalidInput(f"n must be a positive integer, got {n!r}")
    zero = MinimaxOutcome("optimal", 0.0, CoordinateFunctionFamily.zero(2 * n))
    sched = BlowupSchedule(n, seed=seed, max_points=max_points)
    sched.stages.append(Stage(0, 1, None, 0.0, zero))
    return sched


def build_stage(schedule: BlowupSchedule, s: int) -> Stage:
    """Append stage ``s`` (which must be the next one) and decompose ``F_s``.

    Raises NonDecomposableAt(s - 1) when ``F_{s-1}`` had no decomposition.
    """
    if s != len(schedule.stages) or s < 1:
        raise InvalidInput(f"stage {s} cannot follow {len(schedule.stages) - 1}")
    prev = schedule.stages[-1]
    if not prev.outcome.optimal:
        raise NonDecomposableAt(s - 1)
    n = schedule.n
    m_s = choose_next_m(prev.m, prev.outcome.family.norm(), s - 1)
    size = 4 * n * m_s
    if schedule.max_points is not None and len(schedule.points) + size**n > schedule.max_points:
        raise BudgetExceeded(
            f"stage {s} needs {size ** n} more points (cap {schedule.max_points}); rerun with the slow option",
            len(schedule.points) + size**n,
        )

    base = stage_array(n, size)
    # shift on every axis so projections of different stages never meet
    if prev.array is None:
        offset = 0.0
    else:
        offset = prev.offset + 10.0 * (_diameter(prev.array) + 1.0)
        if schedule.seed is not None:
            offset += random.Random(schedule.seed * 7919 + s).randint(0, 9)
    placed = base.translated([offset] * (2 * n))

    f = bump(placed)
    old = np.array(schedule.points, dtype=float).reshape(-1, 2 * n)
    if len(old) and np.any(f.evaluate(old) != 0.0):
        raise ScheduleInvariantViolated(f"stage {s} bump reaches earlier stages")
    new_vals = f.evaluate(np.array(placed.points)) / prev.m
    expected = np.array([parity_sign(i) / prev.m for i, _ in placed.items()])
    if not np.array_equal(new_vals, expected):
        raise ScheduleInvariantViolated(f"stage {s} bump does not hit +-1/m at the centers")
    schedule.points.extend(placed.points)
    schedule.values.extend(float(v) for v in new_vals)

    outcome = min_supnorm(schedule.ground_set(), schedule.values)
    stage = Stage(s, m_s, placed, offset, outcome)
    schedule.stages.append(stage)
    return stage


def certify(schedule: BlowupSchedule) -> None:
    """Attach a lemma certificate to every stage against the final decomposition.

    For stage ``s`` the instance lives on the array of stage ``s+1``:
    ``c_{i,k} = (-1)^{|i|} m_s (phi_k - phi^s_k)((a_i)_k)``.  All data are
    exact enough that the checks run with zero tolerance.
    """
    final = schedule.stages[-1].outcome
    if not final.optimal:
        raise NonDecomposableAt(len(schedule.stages) - 1)
    phi = final.family
    for st, nxt in zip(schedule.stages, schedule.stages[1:]):
        diff = phi.minus(st.outcome.family)  # phi^s is zero off its own keys
        st.diff_norm = diff.norm()
        arr = nxt.array
        rows = []
        for i, p in arr.items():
            scale = parity_sign(i) * st.m
            rows.append(tuple(scale * diff.tables[k][p[k]] for k in range(2 * schedule.n)))
        inst = LemmaInstance(arr.shape, tuple(rows))
        check = check_conditions(inst, tau=0.0)
        if not check.ok:
            raise ScheduleInvariantViolated(f"stage {st.s} certificate fails: {check.first_violation}")
        st.certificate = lemma_witness(inst, tau=0.0)


@dataclass
class BlowupReport:
    schedule: BlowupSchedule
    verdict: str
    tail_audits: list[float]

    @property
    def n(self) -> int:
        return self.schedule.n

    @property
    def stages(self) -> list[Stage]:
        return self.schedule.stages

    def to_json(self) -> dict:
        stages = []
        for st in self.stages:
            entry = {
                "s": st.s,
                "m_s": st.m,
                "array_size": st.array_size,
                "offset": st.offset,
                "lp": {"status": st.outcome.status, "value": st.outcome.value},
                "certificate": None,
            }
            if st.certificate is not None:
                nxt = self.stages[st.s + 1]
                ratio = nxt.m / st.m
                entry["certificate"] = dict(
                    st.certificate.to_json(),
                    diff_norm=st.diff_norm,
                    ratio=ratio,
                    diff_exceeds_ratio=st.diff_norm > ratio,
                )
            stages.append(entry)
        return {"n": self.n, "stages": stages, "tail_audits": self.tail_audits, "verdict": self.verdict}


def blowup_experiment(n: int, S: int, seed: int | None = None,
                      max_points: int | None = DEFAULT_MAX_POINTS) -> BlowupReport:
    """Run stages ``0..S`` and certify the norm blow-up.

    The verdict is ``NORM_EXCEEDS_S`` when every partial sum decomposes, or
    ``NON_DECOMPOSABLE_AT s`` when ``F_s`` has no decomposition at all.
    """
    if not isinstance(S, int) or S < 1:
        raise InvalidInput(f"need at least one stage, got {S!r}")
    sched = start_schedule(n, seed, max_points)
    for s in range(1, S + 1):
        stage = build_stage(sched, s)
        if not stage.outcome.optimal:
            return BlowupReport(sched, f"NON_DECOMPOSABLE_AT {s}", [])
    certify(sched)
    final = sched.stages[-1].outcome.value
    if not final > S:
        raise ScheduleInvariantViolated(f"minimal norm of F_{S} is {final}, not above {S}")
    for st, nxt in zip(sched.stages, sched.stages[1:]):
        if not st.diff_norm > nxt.m / st.m:
            raise ScheduleInvariantViolated(f"stage {st.s}: ||phi - phi^s|| = {st.diff_norm} <= m_(s+1)/m_s")
    tails = [sched.tail_audit(s) for s in range(S + 1)]
    return BlowupReport(sched, "NORM_EXCEEDS_S", tails)
