"""Finite Cantor-set combinatorics.

Words over ``{1, 2}`` are the depth-``k`` cylinders of the Cantor set.  In the
canonical representation ``S2 e_m = e_{2m}`` and ``S1 = U S2``, so
``S1 e_m = e_{2m+1}``; reading a word from its first letter, letter ``1``
contributes a binary digit 1 and letter ``2`` a digit 0, first letter least
significant.  Hence ``S_w e_0 = e_r`` with ``r = word_to_residue(w).value``.

Under this dictionary the odometer (first ``1`` becomes ``2``, the ``2``'s before
it become ``1``'s) is subtraction of one on residues, which is how ``Ad(U)``
moves table entries: ``(U d U*)(m) = d(m - 1)``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction


def _default_level_cap() -> int:
    try:
        return int(os.environ.get("Q2DIAG_LEVEL_CAP", "30"))
    except ValueError:
        return 30


LEVEL_CAP = _default_level_cap()


class EmptyWord(ValueError):
    """``shift_word`` on the empty word."""


class LevelCapExceeded(ValueError):
    """A table or word would exceed the configured level cap."""


def set_level_cap(cap: int) -> None:
    global LEVEL_CAP
    if cap < 0:
        raise ValueError("level cap must be nonnegative")
    LEVEL_CAP = cap


def check_level(k: int, cap: int | None = None) -> int:
    cap = LEVEL_CAP if cap is None else cap
    if k < 0:
        raise ValueError(f"negative level {k}")
    if k > cap:
        raise LevelCapExceeded(f"level {k} exceeds cap {cap}")
    return k


@dataclass(frozen=True)
class Word:
    """A word over ``{1, 2}`` packed LSB-first: bit ``j`` set iff letter ``j+1`` is ``1``."""

    bits: int
    length: int

    def __post_init__(self):
        if self.length < 0 or self.bits < 0 or self.bits >> self.length:
            raise ValueError(f"bits {self.bits} do not fit a word of length {self.length}")

    @classmethod
    def from_letters(cls, letters) -> Word:
        bits = 0
        letters = list(letters)
        for j, a in enumerate(letters):
            a = int(a)
            if a == 1:
                bits |= 1 << j
            elif a != 2:
                raise ValueError(f"letter {a!r} not in {{1, 2}}")
        return cls(bits, len(letters))

    @classmethod
    def parse(cls, text: str) -> Word:
        """``"1121"`` -> ``Word((1, 1, 2, 1))``."""
        text = text.strip()
        if any(ch not in "12" for ch in text):
            raise ValueError(f"bad word literal {text!r}")
        return cls.from_letters(int(ch) for ch in text)

    @property
    def letters(self) -> tuple[int, ...]:
        return tuple(1 if self.bits >> j & 1 else 2 for j in range(self.length))

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        return "".join(str(a) for a in self.letters)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"


@dataclass(frozen=True)
class Residue:
    value: int
    level: int

    def __post_init__(self):
        if self.level < 0 or not 0 <= self.value < 1 << self.level:
            raise ValueError(f"residue {self.value} out of range for level {self.level}")

    @classmethod
    def of(cls, m: int, level: int) -> Residue:
        """Nonnegative representative of ``m`` mod ``2**level`` (so ``-1`` is the all-1 word)."""
        return cls(m % (1 << level), level)


def word_to_residue(w: Word) -> Residue:
    return Residue(w.bits, w.length)


def residue_to_word(r: Residue) -> Word:
    return Word(r.value, r.level)


def odometer_step(w: Word) -> Word:
    k = w.length
    if w.bits == 0:
        return Word((1 << k) - 1, k)
    # lowest set bit j0 (first letter 1): clear it and set every bit below it
    low = w.bits & -w.bits
    return Word((w.bits ^ low) | (low - 1), k)


def shift_word(w: Word) -> Word:
    if w.length == 0:
        raise EmptyWord("cannot shift the empty word")
    return Word(w.bits >> 1, w.length - 1)


def all_words(k: int):
    """Every word of length ``k``, in residue order."""
    for r in range(1 << k):
        yield Word(r, k)


def is_prefix(prefix: Word, w: Word) -> bool:
    """Whether ``w`` lies in the cylinder of ``prefix``."""
    if prefix.length > w.length:
        return False
    return w.bits & ((1 << prefix.length) - 1) == prefix.bits


def odometer_orbit(k: int, start: Word | None = None, max_steps: int | None = None) -> list[Word]:
    """Iterate :func:`odometer_step` until the start word recurs (or ``max_steps``)."""
    check_level(k)
    w0 = Word(0, k) if start is None else start
    orbit = [w0]
    w = odometer_step(w0)
    limit = (1 << k) if max_steps is None else max_steps
    while w != w0 and len(orbit) < limit:
        orbit.append(w)
        w = odometer_step(w)
    return orbit


def orbit_period(k: int, start: Word | None = None) -> int:
    # walks the orbit; does not assume the residue form r -> r - 1
    w0 = Word(0, k) if start is None else start
    check_level(k)
    n, w = 1, odometer_step(w0)
    while w != w0:
        w = odometer_step(w)
        n += 1
    return n


def birkhoff_average(k: int, cylinder: Word, steps: int | None = None) -> Fraction:
    """Time average of the indicator of ``cylinder`` along the odometer orbit of ``22...2``.

    ``steps`` defaults to one full period ``2**k``.
    """
    if cylinder.length > k:
        raise ValueError(f"cylinder of length {cylinder.length} deeper than level {k}")
    check_level(k)
    n = (1 << k) if steps is None else steps
    if n <= 0:
        raise ValueError("steps must be positive")
    w, hits = Word(0, k), 0
    for _ in range(n):
        hits += is_prefix(cylinder, w)
        w = odometer_step(w)
    return Fraction(hits, n)
