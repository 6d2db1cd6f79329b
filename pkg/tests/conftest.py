import random

import pytest
from hypothesis import strategies as st

from q2diag.diagonal import DiagonalUnitary
from q2diag.phases import Phase


def dyadic_phases(max_exp=6):
    return st.builds(
        lambda n, h: Phase.dyadic(h, n), st.integers(0, max_exp), st.integers(0, 1 << max_exp)
    )


def exact_phases():
    return st.one_of(
        dyadic_phases(),
        st.builds(Phase.rational, st.integers(-50, 50), st.integers(1, 30)),
    )


def float_phases():
    return st.builds(Phase.angle, st.floats(-20, 20, allow_nan=False))


def unitaries(max_level=4, den=16):
    """Random exact tables over ``den``-th roots of unity."""

    @st.composite
    def build(draw):
        k = draw(st.integers(0, max_level))
        nums = draw(st.lists(st.integers(0, den - 1), min_size=1 << k, max_size=1 << k))
        return DiagonalUnitary(k, nums, den)

    return build()


def random_table(rng: random.Random, level: int, den: int = 16) -> DiagonalUnitary:
    return DiagonalUnitary(level, [rng.randrange(den) for _ in range(1 << level)], den)


def table(*phases) -> DiagonalUnitary:
    """Shorthand: ``table(1, "i", -1, "-i")`` or turns as Fractions/strings."""
    named = {1: Phase.dyadic(0, 0), -1: Phase.dyadic(1, 1), "i": Phase.dyadic(1, 2), "-i": Phase.dyadic(3, 2)}
    out = [p if isinstance(p, Phase) else named.get(p) or Phase.from_turn(p) for p in phases]
    return DiagonalUnitary.from_phases(out)


@pytest.fixture
def rng():
    return random.Random(20261015)


# -- acceptance report ------------------------------------------------------------

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """``acceptance(n, ok, detail)`` records the PASS/FAIL line for criterion ``n``."""

    def record(n: int, ok: bool, detail: str) -> bool:
        ACCEPTANCE_LINES[n] = f"{'PASS' if ok else 'FAIL'} criterion {n:2d}: {detail}"
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
