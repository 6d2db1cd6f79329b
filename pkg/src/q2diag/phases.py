"""Exact arithmetic on the unit circle.

A :class:`Phase` is stored as a *turn*: the number ``t`` with value
``exp(2*pi*i*t)``.  Exact phases keep ``t`` as a reduced :class:`~fractions.Fraction`
in ``[0, 1)``; phases whose denominator is a power of two form the *dyadic*
tier, every other exact phase is in the *rational* tier.  A third, float tier
holds an angle in radians and only exists so that numerical oracles can be
compared with exact results.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

TWO_PI = 2.0 * math.pi
FLOAT_TOL = 1e-12

DYADIC = "dyadic"
RATIONAL = "rational"
FLOAT = "float"


class PhaseError(ValueError):
    """Malformed phase literal or a value off the unit circle."""


class NonUnitPhase(PhaseError):
    """A value that does not lie on the unit circle."""


class NonExactPhase(PhaseError):
    """An exact-tier phase was required but a float-tier one was given."""


def is_power_of_two(q: int) -> bool:
    return q > 0 and q & (q - 1) == 0


class Phase:
    """A point of the unit circle.

    Construct with :meth:`dyadic`, :meth:`rational`, :meth:`from_turn` or
    :meth:`angle`.  Instances are immutable and hashable; exact phases compare
    structurally, and a float phase compares equal to any phase within
    ``FLOAT_TOL`` of it (so float phases deliberately do not define a hash
    consistent with exact ones).
    """

    __slots__ = ("_turn", "_radians")

    def __init__(self, turn: Fraction | None = None, radians: float | None = None):
        if (turn is None) == (radians is None):
            raise PhaseError("exactly one of turn/radians must be given")
        if turn is not None:
            turn = Fraction(turn) % 1
            object.__setattr__(self, "_turn", turn)
            object.__setattr__(self, "_radians", None)
        else:
            r = float(radians) % TWO_PI
            if not math.isfinite(r):
                raise PhaseError(f"non-finite angle {radians!r}")
            object.__setattr__(self, "_turn", None)
            object.__setattr__(self, "_radians", r)

    def __setattr__(self, name, value):
        raise AttributeError("Phase is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def one(cls) -> Phase:
        return ONE

    @classmethod
    def dyadic(cls, h: int, n: int) -> Phase:
        """``exp(2*pi*i*h / 2**n)``."""
        if n < 0:
            raise PhaseError(f"negative dyadic exponent {n}")
        return cls(Fraction(int(h), 1 << int(n)))

    @classmethod
    def rational(cls, p: int, q: int) -> Phase:
        """``exp(2*pi*i*p/q)``; lands in the dyadic tier when ``q`` reduces to a power of 2."""
        if q == 0:
            raise PhaseError("zero denominator")
        return cls(Fraction(int(p), int(q)))

    @classmethod
    def from_turn(cls, t: Fraction | int | str) -> Phase:
        return cls(Fraction(t))

    @classmethod
    def angle(cls, radians: float) -> Phase:
        return cls(radians=radians)

    @classmethod
    def root_of_unity(cls, k: int, order: int) -> Phase:
        """The ``k``-th power of the primitive root ``exp(2*pi*i/order)``."""
        return cls(Fraction(k, order))

    @classmethod
    def from_complex(cls, w: complex, tol: float = 1e-9) -> Phase:
        if abs(abs(w) - 1.0) > tol:
            raise NonUnitPhase(f"{w!r} is not on the unit circle")
        return cls(radians=cmath.phase(w))

    # -- accessors --------------------------------------------------------

    @property
    def tier(self) -> str:
        if self._turn is None:
            return FLOAT
        return DYADIC if is_power_of_two(self._turn.denominator) else RATIONAL

    @property
    def is_exact(self) -> bool:
        return self._turn is not None

    @property
    def turn(self) -> Fraction:
        if self._turn is None:
            raise NonExactPhase("float phase has no exact turn")
        return self._turn

    @property
    def radians(self) -> float:
        if self._turn is None:
            return self._radians
        return float(self._turn) * TWO_PI

    @property
    def dyadic_parts(self) -> tuple[int, int]:
        """``(h, n)`` with value ``exp(2*pi*i*h/2**n)``; only for the dyadic tier."""
        if self.tier != DYADIC:
            raise PhaseError(f"{self!r} is not a dyadic phase")
        return self._turn.numerator, self._turn.denominator.bit_length() - 1

    def __complex__(self) -> complex:
        if self._turn is not None:
            # exact quadrant values avoid cos(pi/2) ~ 6e-17 noise
            t = self._turn
            if 4 % t.denominator == 0:
                return {0: 1 + 0j, 1: 1j, 2: -1 + 0j, 3: -1j}[int(t * 4)]
        return cmath.exp(1j * self.radians)

    # -- arithmetic -------------------------------------------------------

    @classmethod
    def _exact(cls, turn: Fraction) -> Phase:
        # turn is already a Fraction; skips re-validation on the hot path
        p = object.__new__(cls)
        object.__setattr__(p, "_turn", turn % 1 if not 0 <= turn < 1 else turn)
        object.__setattr__(p, "_radians", None)
        return p

    def __mul__(self, other: Phase) -> Phase:
        if not isinstance(other, Phase):
            return NotImplemented
        if self._turn is not None and other._turn is not None:
            if not other._turn:
                return self
            if not self._turn:
                return other
            return Phase._exact(self._turn + other._turn)
        return Phase(radians=self.radians + other.radians)

    def conj(self) -> Phase:
        if self._turn is not None:
            return Phase._exact(-self._turn) if self._turn else self
        return Phase(radians=-self._radians)

    def __truediv__(self, other: Phase) -> Phase:
        if not isinstance(other, Phase):
            return NotImplemented
        return self * other.conj()

    def __pow__(self, e: int) -> Phase:
        # binary exponentiation on the angle: exact turns just scale
        if self._turn is not None:
            return Phase(self._turn * int(e))
        result, base, k = ONE_FLOAT, self, abs(int(e))
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result if e >= 0 else result.conj()

    def is_one(self) -> bool:
        return self == ONE

    # -- comparison -------------------------------------------------------

    def distance(self, other: Phase) -> float:
        return abs(complex(self) - complex(other))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Phase):
            return NotImplemented
        if self._turn is not None and other._turn is not None:
            return self._turn == other._turn
        return self.distance(other) < FLOAT_TOL

    def __hash__(self) -> int:
        if self._turn is None:
            return hash((FLOAT, round(self._radians, 9)))
        return hash(self._turn)

    def __repr__(self) -> str:
        if self._turn is None:
            return f"Phase.angle({self._radians!r})"
        if self.tier == DYADIC:
            h, n = self.dyadic_parts
            return f"Phase.dyadic({h}, {n})"
        return f"Phase.rational({self._turn.numerator}, {self._turn.denominator})"

    def __str__(self) -> str:
        if self._turn is None:
            return f"e^(i*{self._radians:.12g})"
        if self._turn == 0:
            return "1"
        return f"e^(2pi*i*{self._turn})"

    def __reduce__(self):
        if self._turn is None:
            return (Phase, (None, self._radians))
        return (Phase, (self._turn,))


ONE = Phase(Fraction(0))
ONE_FLOAT = Phase(radians=0.0)
MINUS_ONE = Phase.dyadic(1, 1)
I = Phase.dyadic(1, 2)


def mul(a: Phase, b: Phase) -> Phase:
    return a * b


def conj(a: Phase) -> Phase:
    return a.conj()


# -- 2-power root classification ------------------------------------------


@dataclass(frozen=True)
class Root:
    """``a`` is a primitive root of unity of order ``2**order_exponent``."""

    order_exponent: int


@dataclass(frozen=True)
class NotTwoPowerRoot:
    pass


@dataclass(frozen=True)
class Indeterminate:
    pass


RootClass = Union[Root, NotTwoPowerRoot, Indeterminate]


def classify_two_power_root(a: Phase) -> RootClass:
    if not a.is_exact:
        return Indeterminate()
    q = a.turn.denominator
    if is_power_of_two(q):
        return Root(q.bit_length() - 1)
    return NotTwoPowerRoot()


def require_exact(a: Phase) -> Phase:
    if not a.is_exact:
        raise NonExactPhase(f"exact phase required, got {a!r}")
    return a


# -- JSON -----------------------------------------------------------------


def phase_to_json(a: Phase) -> dict:
    if a.tier == FLOAT:
        return {"angle": a.radians}
    if a.tier == DYADIC:
        h, n = a.dyadic_parts
        return {"dyadic": [h, n]}
    return {"rational": [a.turn.numerator, a.turn.denominator]}


def phase_from_json(obj) -> Phase:
    """Inverse of :func:`phase_to_json`.

    Also accepts the bare numbers ``1`` and ``-1`` and complex-looking
    ``{"re": x, "im": y}`` pairs, which must lie on the unit circle.
    """
    if isinstance(obj, bool):
        raise PhaseError(f"bad phase literal {obj!r}")
    if isinstance(obj, int):
        if obj == 1:
            return ONE
        if obj == -1:
            return MINUS_ONE
        raise NonUnitPhase(f"{obj} is not on the unit circle")
    if not isinstance(obj, dict) or len(obj) != 1 and set(obj) != {"re", "im"}:
        raise PhaseError(f"bad phase literal {obj!r}")
    if "dyadic" in obj:
        h, n = _int_pair(obj["dyadic"])
        if n < 0:
            raise PhaseError(f"negative dyadic exponent in {obj!r}")
        return Phase.dyadic(h, n)
    if "rational" in obj:
        p, q = _int_pair(obj["rational"])
        if q <= 0:
            raise PhaseError(f"bad denominator in {obj!r}")
        return Phase.rational(p, q)
    if "angle" in obj:
        val = obj["angle"]
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            raise PhaseError(f"bad angle in {obj!r}")
        return Phase.angle(float(val))
    if set(obj) == {"re", "im"}:
        return Phase.from_complex(complex(obj["re"], obj["im"]))
    raise PhaseError(f"bad phase literal {obj!r}")


def _int_pair(val) -> tuple[int, int]:
    if (
        not isinstance(val, (list, tuple))
        or len(val) != 2
        or not all(isinstance(x, int) and not isinstance(x, bool) for x in val)
    ):
        raise PhaseError(f"expected a pair of integers, got {val!r}")
    return int(val[0]), int(val[1])


def parse_phase_literal(text: str) -> Phase:
    """Parse the compact text form used on the command line.

    ``"p/q"`` or ``"p"`` is an exact turn (``"1/4"`` is ``i``); ``"rad:x"`` is a
    float angle in radians.  ``"1"``, ``"-1"``, ``"i"`` and ``"-i"`` are also accepted.
    """
    text = text.strip()
    named = {"1": ONE, "-1": MINUS_ONE, "i": I, "-i": I.conj()}
    if text in named:
        return named[text]
    if text.startswith("rad:"):
        try:
            return Phase.angle(float(text[4:]))
        except ValueError as exc:
            raise PhaseError(f"bad angle literal {text!r}") from exc
    try:
        return Phase.from_turn(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise PhaseError(f"bad phase literal {text!r}") from exc
