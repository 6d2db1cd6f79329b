"""Deciding extendibility of localized ``lambda_d`` from ``O_2`` to ``Q_2``.

For ``d`` in ``U(D_2^k)`` the automorphism ``lambda_d`` (``S_i -> d S_i``)
extends iff ``d = z * d' phi(d')*`` for a phase ``z`` and some ``d'`` in
``U(D_2^(k-1))``: a gauge automorphism composed with ``Ad(d')``.  The engine
finds ``z`` and ``d'`` by solving a cocycle equation on a de Bruijn-type graph
and returns either a certificate or an explicit obstruction.

The image of ``U`` under the extension is ``check(d) U``; here
``check(d)(m) = d'(m) conj(d'(m - 1))``, and it is recomputed independently
from the compression product formula every time a certificate is issued.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterable, Union

import numpy as np

from .diagonal import (
    DiagonalUnitary,
    ad_u,
    canonicalize,
    compress,
    dmul,
    phi,
    uz_phi_build,
)
from .phases import (
    NonExactPhase,
    NotTwoPowerRoot,
    Phase,
    classify_two_power_root,
)


class PreconditionViolated(ValueError):
    pass


class CheckMapDisagreement(RuntimeError):
    """The two independent computations of the check map disagree (an internal bug)."""


def _require_exact(d: DiagonalUnitary, what: str = "unitary") -> None:
    if not d.is_exact:
        raise NonExactPhase(f"{what} must have exact phases")


# -- results ----------------------------------------------------------------


@dataclass(frozen=True)
class ExtensionCertificate:
    """``source = gauge * inner * phi(inner)*`` with ``inner(0) = 1``, and ``check`` its check map."""

    gauge: Phase
    inner: DiagonalUnitary
    check: DiagonalUnitary
    source: DiagonalUnitary

    @property
    def jcheck(self) -> DiagonalUnitary:
        """The unitary ``j`` with ``extension(U) = U j``, i.e. ``U* check U``."""
        return ad_u(self.check, -1)

    def reconstruct(self) -> DiagonalUnitary:
        return dmul(self.inner, phi(self.inner), conjugate_b=True).scale(self.gauge)

    def invariant_violations(self) -> list[str]:
        problems = []
        if self.reconstruct() != self.source:
            problems.append("source != gauge * inner * phi(inner)*")
        if self.check != dmul(self.inner, ad_u(self.inner, 1), conjugate_b=True):
            problems.append("check != inner * (U inner U*)*")
        if not self.inner.eval_at(0).is_one():
            problems.append("inner(0) != 1")
        if self.check.level > max(self.source.level - 1, 0):
            problems.append("level(check) > level(source) - 1")
        return problems


@dataclass(frozen=True)
class PointSpectrumMismatch:
    """``d(0) != d(-1)``: ``d S2`` and ``d S1`` have different eigenvalues."""

    d0: Phase
    dm1: Phase


@dataclass(frozen=True)
class CocycleObstruction:
    """A closed walk of constraints (by residue) whose phase product is not 1."""

    cycle: tuple[int, ...]
    product: Phase


Obstruction = Union[PointSpectrumMismatch, CocycleObstruction]


@dataclass(frozen=True)
class Extendible:
    certificate: ExtensionCertificate

    @property
    def extendible(self) -> bool:
        return True


@dataclass(frozen=True)
class NotExtendible:
    obstruction: Obstruction
    source: DiagonalUnitary

    @property
    def extendible(self) -> bool:
        return False


Decision = Union[Extendible, NotExtendible]


@dataclass(frozen=True)
class Solution:
    dprime: DiagonalUnitary


@dataclass(frozen=True)
class Inconsistent:
    cycle: tuple[int, ...]
    product: Phase


# -- cocycle solver -----------------------------------------------------------


def _tree_path(v: int) -> list[int]:
    """Tree constraints from vertex 0 down to ``v``: constraint ``w`` joins ``w >> 1`` to ``w``."""
    path = []
    while v:
        path.append(v)
        v >>= 1
    return path[::-1]


def solve_cocycle(e: DiagonalUnitary) -> Solution | Inconsistent:
    """Solve ``e(m) = d'(m) conj(d'(floor(m/2)))`` for ``d'`` with ``d'(0) = 1``.

    Vertices are residues mod ``2**(k-1)``; residue ``r`` mod ``2**k`` gives the
    constraint ``d'[r mod 2**(k-1)] = e[r] d'[r >> 1]``.  Constraints
    ``r < 2**(k-1)`` form a spanning tree rooted at 0 (``r >> 1`` is the parent
    of ``r``); the remaining ones are checked against the propagated values and
    the first violation becomes the witness cycle.
    """
    _require_exact(e, "e")
    if not e.eval_at(0).is_one():
        raise PreconditionViolated(f"solve_cocycle needs e(0) = 1, got {e.eval_at(0)}")
    k = e.level
    if k == 0:
        return Solution(DiagonalUnitary.identity())
    den = e.den
    nums = e.nums.astype(np.int64)
    half = 1 << (k - 1)
    x = np.zeros(half, dtype=np.int64)
    for b in range(1, k):
        vs = np.arange(1 << (b - 1), 1 << b)
        x[vs] = (nums[vs] + x[vs >> 1]) % den
    rs = np.arange(half, 1 << k)
    gap = (nums[rs] + x[rs >> 1] - x[rs - half]) % den
    bad = np.flatnonzero(gap)
    if bad.size:
        r = int(rs[bad[0]])
        u, v = r >> 1, r - half
        cycle = _tree_path(u) + [r] + _tree_path(v)[::-1]
        return Inconsistent(tuple(cycle), Phase(Fraction(int(gap[bad[0]]), den)))
    return Solution(DiagonalUnitary(k - 1, x, den))


def cycle_product(e: DiagonalUnitary, cycle: Iterable[int]) -> Phase:
    """Walk ``cycle`` from vertex 0 and multiply the constraint phases along it.

    Traversing constraint ``r`` from ``r >> 1`` to ``r mod 2**(k-1)`` picks up
    ``e[r]``; the opposite direction picks up ``conj(e[r])``.  Raises if the
    residues do not form a closed walk through 0.
    """
    k = max(e.level, 1)
    mask = (1 << (k - 1)) - 1
    at, prod = 0, Phase.one()
    for r in cycle:
        tail, head = r >> 1, r & mask
        if not 0 <= r < 1 << k:
            raise ValueError(f"constraint {r} out of range for level {k}")
        if at == tail:
            at, prod = head, prod * e.eval_at(r)
        elif at == head:
            at, prod = tail, prod * e.eval_at(r).conj()
        else:
            raise ValueError(f"constraint {r} does not touch vertex {at}")
    if at != 0:
        raise ValueError("walk does not return to vertex 0")
    return prod


# -- decision -----------------------------------------------------------------


def _check_from_inner(dprime: DiagonalUnitary) -> DiagonalUnitary:
    return dmul(dprime, ad_u(dprime, 1), conjugate_b=True)


def decide_extendible(d: DiagonalUnitary, cross_check: bool = True) -> Decision:
    _require_exact(d, "d")
    d0, dm1 = d.eval_at(0), d.eval_at(-1)
    if d0 != dm1:
        return NotExtendible(PointSpectrumMismatch(d0, dm1), d)
    z = d0
    e = d.scale(z.conj())
    sol = solve_cocycle(e)
    if isinstance(sol, Inconsistent):
        return NotExtendible(CocycleObstruction(sol.cycle, sol.product), d)
    check = _check_from_inner(sol.dprime)
    if cross_check:
        other = check_product_formula(d, check.eval_at(0))
        if other != check:
            raise CheckMapDisagreement(f"check map of {d!r}: {check!r} vs {other!r}")
    return Extendible(ExtensionCertificate(z, sol.dprime, check, d))


def check_map(d: DiagonalUnitary) -> DiagonalUnitary:
    """``check(d)`` for extendible ``d``; raises :class:`PreconditionViolated` otherwise."""
    res = decide_extendible(d)
    if not isinstance(res, Extendible):
        raise PreconditionViolated(f"{d!r} is not extendible: {res.obstruction}")
    return res.certificate.check


def check_product_formula(d: DiagonalUnitary, check0: Phase) -> DiagonalUnitary:
    """``check0 * prod_{i=1}^{k-1} (S2*)^i (d* U d U*) S2^i``.

    Factors with ``i >= k`` are constants ``conj(d(0)) d(-1) = 1``, so the
    infinite product is exactly this finite one.
    """
    if d.eval_at(0) != d.eval_at(-1):
        raise PreconditionViolated("check_product_formula needs d(0) = d(-1)")
    f = dmul(ad_u(d, 1), d, conjugate_b=True)
    result = DiagonalUnitary.constant(check0)
    for i in range(1, d.level):
        result = dmul(result, compress(f, i))
    return result


# -- inverse of the check map --------------------------------------------------


@dataclass(frozen=True)
class Preimage:
    d: DiagonalUnitary
    root: Phase  # w with w^(2^k) equal to the entry product of the target


@dataclass(frozen=True)
class NotInImage:
    reason: str
    entry_product: Phase


def invert_check(c: DiagonalUnitary) -> Preimage | NotInImage:
    """Find a localized ``d`` with ``check(d) = c``, unique up to a constant phase."""
    _require_exact(c, "c")
    k = c.level
    den = c.den
    nums = c.nums.astype(np.int64)
    total = Phase(Fraction(int(nums.sum() % den), den))
    if isinstance(classify_two_power_root(total), NotTwoPowerRoot):
        return NotInImage(
            f"entry product {total} is not a root of unity of 2-power order", total
        )
    w = Phase(total.turn / (1 << k))
    # c' = conj(w) c has entry product 1 at level k; solve a_r = c'[r] a_{r-1}, a_0 = 1
    den2 = lcm(den, w.turn.denominator)
    shifted = (c.turns_at(k, den2) - int(w.turn * den2)) % den2
    alpha = np.cumsum(np.concatenate(([0], shifted[1:]))) % den2
    dtilde = DiagonalUnitary(k, alpha, den2)
    gauge_part = uz_phi_build(w).unitary
    d = dmul(gauge_part, dmul(dtilde, phi(dtilde), conjugate_b=True))
    return Preimage(d, w)


# -- structural identities ----------------------------------------------------


@dataclass
class IdentityReport:
    passed: bool
    checked: int
    window: tuple[int, int]
    violations: list[tuple[int, Phase, Phase]] = field(default_factory=list)


def verify_structural_identity(
    cert: ExtensionCertificate, window: range | tuple[int, int] | None = None
) -> IdentityReport:
    """Entrywise form of ``d = U d U* check (S1 S1* + phi(check)* S2 S2*)``.

    Odd ``m``: ``d(m) = d(m-1) check(m)``; even ``m``:
    ``d(m) = d(m-1) check(m) conj(check(m/2))``.
    """
    if window is None:
        n = 1 << (cert.source.level + 4)
        window = (-n, n)
    lo, hi = (window.start, window.stop) if isinstance(window, range) else window
    d, c = cert.source, cert.check
    report = IdentityReport(True, 0, (lo, hi))
    for m in range(lo, hi):
        rhs = d.eval_at(m - 1) * c.eval_at(m)
        if m % 2 == 0:
            rhs = rhs * c.eval_at(m // 2).conj()
        lhs = d.eval_at(m)
        report.checked += 1
        if lhs != rhs:
            report.passed = False
            report.violations.append((m, lhs, rhs))
    return report


@dataclass
class HomomorphismReport:
    passed: bool
    pairs_checked: int
    pair_failures: list[tuple[int, int, str]] = field(default_factory=list)
    phi_failures: list[int] = field(default_factory=list)


def homomorphism_check(certs: list[ExtensionCertificate]) -> HomomorphismReport:
    """``check(d1 d2) = check(d1) check(d2)`` over all pairs, and ``phi(d)`` stays extendible."""
    if len(certs) < 2:
        raise PreconditionViolated("homomorphism_check needs at least two certificates")
    report = HomomorphismReport(True, 0)
    for i, j in combinations(range(len(certs)), 2):
        a, b = certs[i], certs[j]
        report.pairs_checked += 1
        res = decide_extendible(dmul(a.source, b.source))
        if not isinstance(res, Extendible):
            report.pair_failures.append((i, j, "product not extendible"))
        elif res.certificate.check != dmul(a.check, b.check):
            report.pair_failures.append((i, j, "check(d1 d2) != check(d1) check(d2)"))
    for i, cert in enumerate(certs):
        if not isinstance(decide_extendible(phi(cert.source)), Extendible):
            report.phi_failures.append(i)
    report.passed = not report.pair_failures and not report.phi_failures
    return report


def coboundary(dprime: DiagonalUnitary, z: Phase | None = None) -> DiagonalUnitary:
    """``z * d' phi(d')*``: the generic extendible localized unitary."""
    d = dmul(dprime, phi(dprime), conjugate_b=True)
    return d if z is None else d.scale(z)


def normalize_inner(dprime: DiagonalUnitary) -> DiagonalUnitary:
    """``d' conj(d'(0))``, the representative the solver returns."""
    return canonicalize(dprime.scale(dprime.eval_at(0).conj()))
