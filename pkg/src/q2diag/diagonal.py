"""Localized diagonal unitaries ``d`` in ``U(D_2^k)``.

A level-``k`` unitary is a table of ``2**k`` phases; it acts on the basis
vector ``e_m`` of ``l2(Z)`` by the entry at residue ``m mod 2**k`` (nonnegative
representative).  Exact tables store integer turn numerators over one shared
denominator, so products are integer additions and equality is structural.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

import numpy as np

from .cantor import Word, check_level
from .phases import (
    FLOAT_TOL,
    TWO_PI,
    NonExactPhase,
    NotTwoPowerRoot,
    Phase,
    Root,
    classify_two_power_root,
)

MAX_DENOMINATOR = 1 << 62


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


class DiagonalUnitary:
    """A diagonal unitary of ``D_2^k`` given by its residue-indexed table.

    ``den`` is the common turn denominator of an exact table (``nums / den``
    turns); float tables carry ``angles`` in radians and ``den = 0``.
    """

    __slots__ = ("level", "den", "nums", "angles", "_entries")

    def __init__(self, level: int, nums=None, den: int = 1, angles=None, canonical: bool = True):
        check_level(level)
        size = 1 << level
        if angles is not None:
            arr = np.mod(np.asarray(angles, dtype=np.float64), TWO_PI)
            if arr.shape != (size,):
                raise ValueError(f"expected {size} entries, got {arr.shape}")
            num_arr, den = None, 0
        else:
            den = int(den)
            if den <= 0 or den > MAX_DENOMINATOR:
                raise OverflowError(f"turn denominator {den} out of range")
            num_arr = np.mod(np.asarray(nums, dtype=np.int64), den)
            if num_arr.shape != (size,):
                raise ValueError(f"expected {size} entries, got {num_arr.shape}")
            g = gcd(den, int(np.gcd.reduce(num_arr))) if size else den
            if g > 1:
                num_arr, den = num_arr // g, den // g
            arr = None
        if canonical:
            level, num_arr, arr = _collapse(level, num_arr, arr)
        for a in (num_arr, arr):
            if a is not None:
                a.setflags(write=False)
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "nums", num_arr)
        object.__setattr__(self, "angles", arr)
        object.__setattr__(self, "_entries", None)

    def __setattr__(self, name, value):
        raise AttributeError("DiagonalUnitary is immutable")

    def __reduce__(self):
        return (DiagonalUnitary, (self.level, self.nums, self.den, self.angles, False))

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls) -> DiagonalUnitary:
        return cls(0, [0], 1)

    @classmethod
    def constant(cls, z: Phase) -> DiagonalUnitary:
        return cls.from_phases([z])

    @classmethod
    def from_phases(cls, phases: Sequence[Phase], canonical: bool = True) -> DiagonalUnitary:
        n = len(phases)
        if n == 0 or n & (n - 1):
            raise ValueError(f"table length {n} is not a power of two")
        level = n.bit_length() - 1
        if all(p.is_exact for p in phases):
            den = 1
            for p in phases:
                den = _lcm(den, p.turn.denominator)
                if den > MAX_DENOMINATOR:
                    raise OverflowError("common turn denominator too large")
            nums = [int(p.turn * den) for p in phases]
            return cls(level, nums, den, canonical=canonical)
        return cls(level, angles=[p.radians for p in phases], canonical=canonical)

    @classmethod
    def from_turns(cls, turns: Iterable[Fraction | int], den: int = 1, canonical: bool = True) -> DiagonalUnitary:
        """Table from integer numerators over ``den`` (or from Fractions with ``den=1``)."""
        turns = [Fraction(t) / den for t in turns]
        return cls.from_phases([Phase(t) for t in turns], canonical=canonical)

    @classmethod
    def from_cylinders(cls, cylinders: dict[Word, Phase], canonical: bool = True) -> DiagonalUnitary:
        """Table from a cylinder-keyed map; every word of one common length must appear."""
        lengths = {w.length for w in cylinders}
        if len(lengths) != 1:
            raise ValueError("cylinder words must all have the same length")
        k = lengths.pop()
        check_level(k)
        if len(cylinders) != 1 << k:
            raise ValueError(f"expected {1 << k} cylinders at level {k}, got {len(cylinders)}")
        table = [None] * (1 << k)
        for w, z in cylinders.items():
            table[w.bits] = z
        return cls.from_phases(table, canonical=canonical)

    # -- accessors --------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.angles is None

    @property
    def size(self) -> int:
        return 1 << self.level

    @property
    def table(self) -> tuple[Phase, ...]:
        return tuple(self.entry(r) for r in range(self.size))

    def entry(self, r: int) -> Phase:
        if self._entries is None:
            if self.angles is not None:
                entries = tuple(Phase.angle(float(a)) for a in self.angles)
            else:
                entries = tuple(Phase(Fraction(int(v), self.den)) for v in self.nums)
            object.__setattr__(self, "_entries", entries)
        return self._entries[r]

    def eval_at(self, m: int) -> Phase:
        return self.entry(m % self.size)

    def turns_at(self, level: int, den: int) -> np.ndarray:
        """Exact numerators over ``den`` (a multiple of ``self.den``) embedded at ``level``."""
        if self.angles is not None:
            raise NonExactPhase("float table has no exact turns")
        if level < self.level or den % self.den:
            raise ValueError("cannot embed to a coarser level or denominator")
        arr = self.nums * (den // self.den)
        return np.tile(arr, 1 << (level - self.level))

    def angles_at(self, level: int) -> np.ndarray:
        if self.angles is not None:
            arr = self.angles
        else:
            arr = self.nums.astype(np.float64) / self.den * TWO_PI
        return np.tile(arr, 1 << (level - self.level))

    def complex_at(self, level: int) -> np.ndarray:
        """Entries as complex numbers embedded at ``level`` (float oracle view)."""
        if self.angles is None:
            vals = np.array([complex(self.entry(r)) for r in range(self.size)])
            return np.tile(vals, 1 << (level - self.level))
        return np.exp(1j * self.angles_at(level))

    # -- algebra ----------------------------------------------------------

    def __mul__(self, other: DiagonalUnitary) -> DiagonalUnitary:
        if not isinstance(other, DiagonalUnitary):
            return NotImplemented
        return dmul(self, other)

    def conj(self) -> DiagonalUnitary:
        if self.angles is not None:
            return DiagonalUnitary(self.level, angles=-self.angles, canonical=False)
        return DiagonalUnitary(self.level, -self.nums, self.den, canonical=False)

    def scale(self, z: Phase) -> DiagonalUnitary:
        """``z * d``."""
        return dmul(self, DiagonalUnitary.constant(z))

    def is_identity(self) -> bool:
        d = canonicalize(self)
        if not d.is_exact:
            return all(p.is_one() for p in d.table)
        return d.level == 0 and int(d.nums[0]) == 0

    def is_constant(self) -> bool:
        return canonicalize(self).level == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiagonalUnitary):
            return NotImplemented
        if self.is_exact and other.is_exact:
            return (
                self.level == other.level
                and self.den == other.den
                and np.array_equal(self.nums, other.nums)
            )
        return sup_distance(self, other) < FLOAT_TOL

    def __hash__(self) -> int:
        if self.is_exact:
            return hash((self.level, self.den, self.nums.tobytes()))
        return hash(self.level)

    def __repr__(self) -> str:
        entries = ", ".join(str(p) for p in self.table[:16])
        more = ", ..." if self.size > 16 else ""
        return f"DiagonalUnitary(level={self.level}, [{entries}{more}])"


def _collapse(level, nums, angles):
    arr = nums if nums is not None else angles
    while level > 0:
        half = 1 << (level - 1)
        lo, hi = arr[:half], arr[half:]
        if nums is not None:
            same = np.array_equal(lo, hi)
        else:
            same = bool(np.all(np.abs(np.exp(1j * lo) - np.exp(1j * hi)) < FLOAT_TOL))
        if not same:
            break
        arr = lo.copy()
        level -= 1
    if nums is not None:
        return level, arr, None
    return level, None, arr


def canonicalize(d: DiagonalUnitary) -> DiagonalUnitary:
    if d.is_exact:
        return DiagonalUnitary(d.level, d.nums, d.den)
    return DiagonalUnitary(d.level, angles=d.angles)


def eval_at(d: DiagonalUnitary, m: int) -> Phase:
    return d.eval_at(m)


def dmul(a: DiagonalUnitary, b: DiagonalUnitary, conjugate_b: bool = False) -> DiagonalUnitary:
    """Entrywise product ``a * b`` (or ``a * b*``) at the common level, canonicalized."""
    k = max(a.level, b.level)
    sign = -1 if conjugate_b else 1
    if a.is_exact and b.is_exact:
        den = _lcm(a.den, b.den)
        if den > MAX_DENOMINATOR:
            raise OverflowError("common turn denominator too large")
        nums = (a.turns_at(k, den) + sign * b.turns_at(k, den)) % den
        return DiagonalUnitary(k, nums, den)
    return DiagonalUnitary(k, angles=a.angles_at(k) + sign * b.angles_at(k))


def phi(d: DiagonalUnitary) -> DiagonalUnitary:
    """Canonical endomorphism ``S1 d S1* + S2 d S2*``: ``phi(d)(m) = d(floor(m/2))``."""
    check_level(d.level + 1)
    if d.is_exact:
        return DiagonalUnitary(d.level + 1, np.repeat(d.nums, 2), d.den)
    return DiagonalUnitary(d.level + 1, angles=np.repeat(d.angles, 2))


def phi_power(d: DiagonalUnitary, n: int) -> DiagonalUnitary:
    for _ in range(n):
        d = phi(d)
    return d


def ad_u(d: DiagonalUnitary, j: int) -> DiagonalUnitary:
    """``U^j d U^-j``: ``ad_u(d, j)(m) = d(m - j)``."""
    if d.is_exact:
        return DiagonalUnitary(d.level, np.roll(d.nums, j), d.den)
    return DiagonalUnitary(d.level, angles=np.roll(d.angles, j))


def compress(d: DiagonalUnitary, i: int) -> DiagonalUnitary:
    """``(S2*)^i d S2^i``: ``compress(d, i)(m) = d(2**i * m)``.

    Exactly the constant ``d(0)`` once ``i >= level``.
    """
    if i < 0:
        raise ValueError("compression depth must be nonnegative")
    k = d.level
    step = 1 << min(i, k)
    new_level = max(k - i, 0)
    if d.is_exact:
        return DiagonalUnitary(new_level, d.nums[::step], d.den)
    return DiagonalUnitary(new_level, angles=d.angles[::step])


def sup_distance(a: DiagonalUnitary, b: DiagonalUnitary) -> float:
    """Operator-norm distance ``max_m |a(m) - b(m)|``."""
    if a.is_exact and b.is_exact and a == b:
        return 0.0
    k = max(a.level, b.level)
    return float(np.max(np.abs(a.complex_at(k) - b.complex_at(k))))


# -- U_z phi(U_z)* -----------------------------------------------------------


@dataclass(frozen=True)
class Localized:
    unitary: DiagonalUnitary


@dataclass(frozen=True)
class NotLocalized:
    """Evidence that ``m -> z^ceil(m/2)`` is not in ``D_2^L`` for any tested ``L``.

    At level ``L`` the entries at ``m = 0`` and ``m = 2**L`` share the residue
    class ``0 mod 2**L`` but differ: ``1`` versus ``z^(2**(L-1))``.
    """

    z: Phase
    tested_level: int
    residue: int
    indices: tuple[int, int]
    values: tuple[Phase, Phase]


UzPhiResult = Union[Localized, NotLocalized]


def _ceil_half(m: int) -> int:
    return -((-m) // 2)


def uz_phi_build(z: Phase, max_level: int = 20) -> UzPhiResult:
    """``U_z phi(U_z)*`` with ``U_z e_m = z^m e_m``; its entries are ``z^ceil(m/2)``."""
    if not z.is_exact:
        raise NonExactPhase(f"uz_phi_build needs an exact phase, got {z!r}")
    cls = classify_two_power_root(z)
    if isinstance(cls, Root):
        level = check_level(cls.order_exponent + 1)
        table = [z ** _ceil_half(r) for r in range(1 << level)]
        return Localized(DiagonalUnitary.from_phases(table))
    assert isinstance(cls, NotTwoPowerRoot)
    if max_level < 1:
        raise ValueError("max_level must be positive")
    # z has an odd order part (or infinite order), so z^(2^(l-1)) != 1 at every level l
    for level in range(1, max_level + 1):
        far = 1 << level
        values = (z ** _ceil_half(0), z ** _ceil_half(far))
        if values[0] == values[1]:  # pragma: no cover - impossible for non-2-power roots
            raise AssertionError(f"{z!r} collapsed at level {level}")
    return NotLocalized(z, max_level, 0, (0, far), values)
