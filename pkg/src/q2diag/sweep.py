"""Exhaustive sweeps over phase tables on a grid of 2-power roots of unity.

Candidates are enumerated lexicographically over residue-indexed grid
positions (residue 0 most significant), so survivor lists are stable.  In
coboundary mode the sweep enumerates ``(z, d')`` instead, with ``d'(0) = 1``,
and tests ``d = z d' phi(d')*``.
"""

from __future__ import annotations

import itertools
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cantor import check_level
from .diagonal import DiagonalUnitary
from .extend import Extendible, coboundary, decide_extendible
from .phases import Phase

DEFAULT_BUDGET = int(os.environ.get("Q2DIAG_SWEEP_BUDGET", str(1 << 22)))


class BudgetExceeded(ValueError):
    pass


def parse_grid(text: str) -> int:
    """``"roots:8"`` or ``"roots:2^3"`` -> 8, the order of the root grid (a power of two)."""
    m = re.fullmatch(r"roots:(?:2\^(\d+)|(\d+))", text.strip())
    if not m:
        raise ValueError(f"bad grid {text!r}; expected roots:2^j or roots:<power of two>")
    order = 1 << int(m.group(1)) if m.group(1) is not None else int(m.group(2))
    if order < 1 or order & (order - 1):
        raise ValueError(f"grid order {order} is not a power of two")
    return order


# -- predicates ------------------------------------------------------------------


@dataclass(frozen=True)
class Predicate:
    name: str

    def pinned(self, level: int) -> set[int]:
        """Residues forced to 1 by the predicate (never enumerated)."""
        if self.name == "S2FIXED":
            return {r for r in range(1 << level) if r % 2 == 0}
        if self.name == "S2_AND_S1SQ_FIXED":
            if level < 2:
                # d(m) = 1 for m = 3 mod 4 pins every odd residue too
                return set(range(1 << level))
            return {r for r in range(1 << level) if r % 2 == 0 or r % 4 == 3}
        return set()

    def accepts(self, d: DiagonalUnitary, check: DiagonalUnitary) -> bool:
        if self.name == "FIXEDPOINT":
            return check == d
        if self.name == "S2FIXED":
            return all(d.eval_at(m).is_one() for m in range(0, 1 << d.level, 2))
        if self.name == "S2_AND_S1SQ_FIXED":
            size = max(1 << d.level, 4)
            return all(d.eval_at(m).is_one() for m in range(size) if m % 2 == 0 or m % 4 == 3)
        raise ValueError(self.name)


PREDICATES = {name: Predicate(name) for name in ("FIXEDPOINT", "S2FIXED", "S2_AND_S1SQ_FIXED")}


def get_predicate(name: str) -> Predicate:
    try:
        return PREDICATES[name.upper()]
    except KeyError:
        raise ValueError(f"unknown predicate {name!r}; choose from {sorted(PREDICATES)}") from None


# -- enumeration -------------------------------------------------------------------


@dataclass(frozen=True)
class SweepPlan:
    level: int
    order: int
    predicate: Predicate
    coboundary: bool
    free: tuple[int, ...]  # residues enumerated over the grid

    @property
    def total(self) -> int:
        n = self.order ** len(self.free)
        return n * self.order if self.coboundary else n

    def _digits(self, index: int) -> list[int]:
        digits = []
        for _ in range(len(self.free) + (1 if self.coboundary else 0)):
            index, rem = divmod(index, self.order)
            digits.append(rem)
        return digits[::-1]

    def _table(self, digits) -> DiagonalUnitary:
        nums = np.zeros(1 << self.level, dtype=np.int64)
        if self.free:
            nums[list(self.free)] = digits
        return DiagonalUnitary(self.level, nums, self.order)

    def coboundary_parts(self, index: int) -> tuple[Phase, DiagonalUnitary]:
        digits = self._digits(index)
        return Phase(Fraction(digits[0], self.order)), self._table(digits[1:])

    def candidate(self, index: int) -> DiagonalUnitary:
        """The ``index``-th candidate in lexicographic order."""
        if self.coboundary:
            z, inner = self.coboundary_parts(index)
            return coboundary(inner, z)
        return self._table(self._digits(index))


def make_plan(level: int, order: int, predicate: Predicate, coboundary_mode: bool = False) -> SweepPlan:
    check_level(level + (1 if coboundary_mode else 0))
    if coboundary_mode:
        # inner d' with d'(0) = 1; all other residues free
        free = tuple(range(1, 1 << level))
    else:
        pinned = predicate.pinned(level)
        free = tuple(r for r in range(1 << level) if r not in pinned)
    return SweepPlan(level, order, predicate, coboundary_mode, free)


@dataclass
class SweepResult:
    level: int
    order: int
    predicate: str
    coboundary: bool
    candidates: int
    extendible: int
    survivors: list[DiagonalUnitary] = field(default_factory=list)


def _scan(plan: SweepPlan, start: int, stop: int):
    extendible, hits = 0, []
    for idx in range(start, stop):
        d = plan.candidate(idx)
        res = decide_extendible(d)
        if isinstance(res, Extendible):
            extendible += 1
            if plan.predicate.accepts(d, res.certificate.check):
                hits.append(d)
    return extendible, hits


def run_sweep(
    level: int,
    order: int,
    predicate: str | Predicate,
    coboundary_mode: bool = False,
    budget: int | None = None,
    workers: int = 1,
    chunk: int = 4096,
) -> SweepResult:
    """Enumerate candidates, keep the extendible ones that satisfy ``predicate``.

    Tables at level ``k`` include every lower level after canonicalization, so a
    sweep at ``level`` covers all levels up to it.  Survivors are deduplicated
    in first-seen order.
    """
    pred = get_predicate(predicate) if isinstance(predicate, str) else predicate
    plan = make_plan(level, order, pred, coboundary_mode)
    budget = DEFAULT_BUDGET if budget is None else budget
    if plan.total > budget:
        raise BudgetExceeded(f"{plan.total} candidates exceed the budget of {budget}")
    ranges = [(s, min(s + chunk, plan.total)) for s in range(0, plan.total, chunk)]
    if workers > 1 and len(ranges) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan, itertools.repeat(plan), *zip(*ranges)))
    else:
        parts = [_scan(plan, s, e) for s, e in ranges]
    result = SweepResult(level, order, pred.name, coboundary_mode, plan.total, 0)
    seen = set()
    for ext, hits in parts:
        result.extendible += ext
        for d in hits:
            if d not in seen:
                seen.add(d)
                result.survivors.append(d)
    return result


def enumerate_coboundaries(inner_level: int, order: int):
    """Yield ``(z, d', d)`` for every gauge ``z`` and normalized ``d'`` on the grid."""
    plan = make_plan(inner_level, order, PREDICATES["FIXEDPOINT"], coboundary_mode=True)
    for idx in range(plan.total):
        z, inner = plan.coboundary_parts(idx)
        yield z, inner, coboundary(inner, z)
